#include "krflow/metricspace.hpp"
#include "krflow/calabi.hpp"
#include "krflow/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <queue>
#include <thread>

namespace krflow::metricspace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBaseRadius = 0.28209479177387814; // unit-area sphere, 1/(2 sqrt(pi))

struct Move {
    int di;
    int dj;
    bool near;
};

const std::array<Move, 16> kStencil = {{
    {-1, -1, true}, {-1, 0, true}, {-1, 1, true}, {0, -1, true},
    {0, 1, true},   {1, -1, true}, {1, 0, true},  {1, 1, true},
    {-1, -2, false}, {-1, 2, false}, {1, -2, false}, {1, 2, false},
    {-2, -1, false}, {-2, 1, false}, {2, -1, false}, {2, 1, false},
}};

// ---------------------------------------------------------------------------
// Base factor: lat-long grid on the unit-area round sphere plus both poles.

struct BaseFactor {
    int R = 0;
    int count = 0;
    int north = 0, south = 0;
    std::vector<std::array<double, 3>> unit;

    struct Edge {
        int to;
        double gamma; // central angle
        bool near;
    };
    std::vector<std::vector<Edge>> edges;

    explicit BaseFactor(int resolution) : R(resolution) {
        count = R * R + 2;
        north = R * R;
        south = R * R + 1;
        unit.resize(static_cast<std::size_t>(count));
        for (int i = 0; i < R; ++i) {
            const double colat = (static_cast<double>(i) + 0.5) * M_PI / static_cast<double>(R);
            for (int j = 0; j < R; ++j) {
                const double lon = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(R);
                unit[static_cast<std::size_t>(id(i, j))] = {std::sin(colat) * std::cos(lon),
                                                            std::sin(colat) * std::sin(lon),
                                                            std::cos(colat)};
            }
        }
        unit[static_cast<std::size_t>(north)] = {0.0, 0.0, 1.0};
        unit[static_cast<std::size_t>(south)] = {0.0, 0.0, -1.0};

        edges.resize(static_cast<std::size_t>(count));
        for (int i = 0; i < R; ++i) {
            for (int j = 0; j < R; ++j) {
                const int from = id(i, j);
                for (const auto& mv : kStencil) {
                    const int ii = i + mv.di;
                    const int jj = j + mv.dj;
                    int to;
                    if (ii < 0) {
                        if (!mv.near) continue;
                        to = north;
                    } else if (ii >= R) {
                        if (!mv.near) continue;
                        to = south;
                    } else {
                        to = id(ii, jj);
                    }
                    add_edge(from, to, mv.near);
                }
            }
        }
        for (int j = 0; j < R; ++j) {
            add_edge(north, id(0, j), true);
            add_edge(south, id(R - 1, j), true);
        }
    }

    int id(int i, int j) const { return i * R + ((j % R) + R) % R; }

    double angle(int a, int b) const {
        const auto& u = unit[static_cast<std::size_t>(a)];
        const auto& v = unit[static_cast<std::size_t>(b)];
        const double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
        return std::acos(std::clamp(dot, -1.0, 1.0));
    }

    void add_edge(int from, int to, bool near) {
        if (from == to) return;
        auto& list = edges[static_cast<std::size_t>(from)];
        for (const auto& e : list) {
            if (e.to == to) return;
        }
        list.push_back(Edge{to, angle(from, to), near});
    }
};

// ---------------------------------------------------------------------------
// Fiber factor: rings in the compactified coordinate x plus both fiber poles,
// parametrized by tau = asin(sqrt x) so the radial metric density is smooth.

struct FiberFactor {
    int R = 0;
    int count = 0;
    int pole0 = 0, pole1 = 0;
    std::vector<double> x;     // per node (poles: 0 and 1)
    std::vector<double> tau;   // asin(sqrt x)
    std::vector<double> theta; // angle (poles: 0)

    struct Edge {
        int to;
        double dtau;
        double dtheta;
        bool near;
    };
    std::vector<std::vector<Edge>> edges;

    explicit FiberFactor(int resolution) : R(resolution) {
        count = R * R + 2;
        pole0 = R * R;
        pole1 = R * R + 1;
        x.resize(static_cast<std::size_t>(count));
        tau.resize(static_cast<std::size_t>(count));
        theta.resize(static_cast<std::size_t>(count));
        for (int j = 0; j < R; ++j) {
            const double xj = (static_cast<double>(j) + 0.5) / static_cast<double>(R);
            for (int m = 0; m < R; ++m) {
                const int n = id(j, m);
                x[static_cast<std::size_t>(n)] = xj;
                tau[static_cast<std::size_t>(n)] = std::asin(std::sqrt(xj));
                theta[static_cast<std::size_t>(n)] =
                    2.0 * M_PI * static_cast<double>(m) / static_cast<double>(R);
            }
        }
        x[static_cast<std::size_t>(pole0)] = 0.0;
        tau[static_cast<std::size_t>(pole0)] = 0.0;
        x[static_cast<std::size_t>(pole1)] = 1.0;
        tau[static_cast<std::size_t>(pole1)] = 0.5 * M_PI;

        edges.resize(static_cast<std::size_t>(count));
        for (int j = 0; j < R; ++j) {
            for (int m = 0; m < R; ++m) {
                const int from = id(j, m);
                for (const auto& mv : kStencil) {
                    const int jj = j + mv.di;
                    int to;
                    if (jj < 0) {
                        if (!mv.near) continue;
                        to = pole0;
                    } else if (jj >= R) {
                        if (!mv.near) continue;
                        to = pole1;
                    } else {
                        to = id(jj, m + mv.dj);
                    }
                    add_edge(from, to, mv.near);
                }
            }
        }
        for (int m = 0; m < R; ++m) {
            add_edge(pole0, id(0, m), true);
            add_edge(pole1, id(R - 1, m), true);
        }
    }

    int id(int j, int m) const { return j * R + ((m % R) + R) % R; }

    void add_edge(int from, int to, bool near) {
        if (from == to) return;
        auto& list = edges[static_cast<std::size_t>(from)];
        for (const auto& e : list) {
            if (e.to == to) return;
        }
        const std::size_t f = static_cast<std::size_t>(from);
        const std::size_t t = static_cast<std::size_t>(to);
        double dth = 0.0;
        if (from != pole0 && from != pole1 && to != pole0 && to != pole1) {
            dth = std::remainder(theta[t] - theta[f], 2.0 * M_PI);
        }
        list.push_back(Edge{to, tau[t] - tau[f], dth, near});
    }
};

// ---------------------------------------------------------------------------

struct Graph {
    int nodes = 0;
    std::vector<std::size_t> offset;
    std::vector<int> to;
    std::vector<double> weight;
};

void dijkstra(const Graph& g, int source, std::vector<double>& dist) {
    dist.assign(static_cast<std::size_t>(g.nodes), kInf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[static_cast<std::size_t>(source)] = 0.0;
    pq.emplace(0.0, source);
    while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[static_cast<std::size_t>(u)]) continue;
        const std::size_t lo = g.offset[static_cast<std::size_t>(u)];
        const std::size_t hi = g.offset[static_cast<std::size_t>(u) + 1];
        for (std::size_t e = lo; e < hi; ++e) {
            const int v = g.to[e];
            const double nd = d + g.weight[e];
            if (nd < dist[static_cast<std::size_t>(v)]) {
                dist[static_cast<std::size_t>(v)] = nd;
                pq.emplace(nd, v);
            }
        }
    }
}

} // namespace

int FiniteMetricSpace::sample_index(int base_index, int fiber_kind) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i].base_index == base_index && labels[i].fiber_kind == fiber_kind) {
            return static_cast<int>(i);
        }
    }
    throw SampleMismatch("sample_index: no such sample");
}

double FiniteMetricSpace::triangle_defect() const {
    const std::size_t n = dist.size();
    double defect = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        defect = std::max(defect, std::abs(dist[i][i]));
        for (std::size_t j = 0; j < n; ++j) {
            defect = std::max(defect, std::abs(dist[i][j] - dist[j][i]));
            for (std::size_t k = 0; k < n; ++k) {
                defect = std::max(defect, dist[i][k] - dist[i][j] - dist[j][k]);
            }
        }
    }
    return defect;
}

FiniteMetricSpace build_space(const flow::Snapshot& snap, const geometry::BundleGeometry& geom,
                              const SpaceOptions& options) {
    if (options.resolution < 8) throw ValidationError("build_space: resolution must be >= 8");
    const int R = options.resolution;
    const auto& p = snap.profile;
    const int gn = p.grid.size();

    // Smooth vertical density V = v / (x(1-x)) and horizontal h at grid nodes.
    std::vector<double> vdens(static_cast<std::size_t>(gn)),
        hval(static_cast<std::size_t>(gn));
    const double k = static_cast<double>(geom.k);
    for (int i = 0; i < gn; ++i) {
        const std::size_t j = static_cast<std::size_t>(i);
        const double xw = p.grid.x_at(i) * (1.0 - p.grid.x_at(i));
        vdens[j] = p.ddu[j] / xw;
        hval[j] = p.s + k * p.du[j];
        if (!(vdens[j] > 0.0) || !(hval[j] > 0.0)) {
            throw PositivityLoss("build_space: degenerate metric sample");
        }
    }

    BaseFactor base(R);
    FiberFactor fiber(R);
    const int NB = base.count;
    const int NF = fiber.count;
    const int nodes = NB * NF;

    // Per fiber node: V, v, h and their square roots.
    std::vector<double> Vf(static_cast<std::size_t>(NF)), vf(static_cast<std::size_t>(NF)),
        hf(static_cast<std::size_t>(NF));
    for (int f = 0; f < NF; ++f) {
        const std::size_t j = static_cast<std::size_t>(f);
        const double xf = fiber.x[j];
        Vf[j] = calabi::interp_node_values(p.grid, vdens, xf);
        vf[j] = Vf[j] * xf * (1.0 - xf);
        hf[j] = calabi::interp_node_values(p.grid, hval, xf);
    }

    // Fiber factor edge lengths (independent of the base point).
    struct FiberEdge {
        int to;
        double len;
        bool near;
    };
    std::vector<std::vector<FiberEdge>> fedges(static_cast<std::size_t>(NF));
    for (int f = 0; f < NF; ++f) {
        const std::size_t jf = static_cast<std::size_t>(f);
        for (const auto& e : fiber.edges[jf]) {
            const std::size_t jt = static_cast<std::size_t>(e.to);
            const double Vb = 0.5 * (Vf[jf] + Vf[jt]);
            const double vb = 0.5 * (vf[jf] + vf[jt]);
            const double len =
                std::sqrt((Vb * e.dtau * e.dtau + vb * e.dtheta * e.dtheta) / M_PI);
            fedges[jf].push_back(FiberEdge{e.to, len, e.near});
        }
    }

    // Assemble the product graph in CSR form.
    Graph g;
    g.nodes = nodes;
    g.offset.assign(static_cast<std::size_t>(nodes) + 1, 0);
    auto node_id = [&](int b, int f) { return b * NF + f; };

    for (int b = 0; b < NB; ++b) {
        const auto& bedges = base.edges[static_cast<std::size_t>(b)];
        for (int f = 0; f < NF; ++f) {
            std::size_t cnt = bedges.size() + fedges[static_cast<std::size_t>(f)].size();
            std::size_t mixed = 0;
            for (const auto& be : bedges) {
                if (!be.near) continue;
                for (const auto& fe : fedges[static_cast<std::size_t>(f)]) {
                    if (fe.near) ++mixed;
                }
            }
            g.offset[static_cast<std::size_t>(node_id(b, f)) + 1] = cnt + mixed;
        }
    }
    for (std::size_t i = 0; i < static_cast<std::size_t>(nodes); ++i) {
        g.offset[i + 1] += g.offset[i];
    }
    g.to.resize(g.offset.back());
    g.weight.resize(g.offset.back());

    for (int b = 0; b < NB; ++b) {
        const auto& bedges = base.edges[static_cast<std::size_t>(b)];
        for (int f = 0; f < NF; ++f) {
            const std::size_t jf = static_cast<std::size_t>(f);
            std::size_t w = g.offset[static_cast<std::size_t>(node_id(b, f))];
            const double sqrt_hf = std::sqrt(hf[jf]);
            for (const auto& fe : fedges[jf]) {
                g.to[w] = node_id(b, fe.to);
                g.weight[w] = fe.len;
                ++w;
            }
            for (const auto& be : bedges) {
                g.to[w] = node_id(be.to, f);
                g.weight[w] = sqrt_hf * kBaseRadius * be.gamma;
                ++w;
            }
            for (const auto& be : bedges) {
                if (!be.near) continue;
                for (const auto& fe : fedges[jf]) {
                    if (!fe.near) continue;
                    const double hb = 0.5 * (hf[jf] + hf[static_cast<std::size_t>(fe.to)]);
                    const double blen = kBaseRadius * be.gamma;
                    g.to[w] = node_id(be.to, fe.to);
                    g.weight[w] = std::sqrt(hb * blen * blen + fe.len * fe.len);
                    ++w;
                }
            }
        }
    }

    // Designated sample subset: 8 spread base points x 4 fiber kinds.
    FiniteMetricSpace space;
    space.time = snap.t;
    space.resolution = R;
    const int eq = R / 2;
    const int q1 = R / 4;
    space.base_node_of = {base.north,
                          base.south,
                          base.id(eq, 0),
                          base.id(eq, q1),
                          base.id(eq, 2 * q1),
                          base.id(eq, 3 * q1),
                          base.id(q1, 0),
                          base.id(3 * q1, 2 * q1)};
    space.n_base_samples = static_cast<int>(space.base_node_of.size());
    space.n_fiber_kinds = kFiberKinds;
    const int eq_ring = (R - 1) / 2;
    const std::array<int, kFiberKinds> fiber_kind_node = {
        fiber.pole0, fiber.pole1, fiber.id(eq_ring, 0), fiber.id(eq_ring, (R - 1) / 2)};

    for (int bi = 0; bi < space.n_base_samples; ++bi) {
        for (int fk = 0; fk < kFiberKinds; ++fk) {
            space.labels.push_back(SampleLabel{bi, fk, false});
            space.sample_nodes.push_back(node_id(space.base_node_of[static_cast<std::size_t>(bi)],
                                                 fiber_kind_node[static_cast<std::size_t>(fk)]));
        }
        std::vector<int> fnodes;
        fnodes.reserve(static_cast<std::size_t>(NF));
        for (int f = 0; f < NF; ++f) {
            fnodes.push_back(node_id(space.base_node_of[static_cast<std::size_t>(bi)], f));
        }
        space.fiber_nodes.push_back(std::move(fnodes));
    }

    // Shortest paths from every sample, concurrently over sources.
    const int ns = static_cast<int>(space.sample_nodes.size());
    space.rows.assign(static_cast<std::size_t>(ns), {});
    int threads = options.threads > 0 ? options.threads
                                      : static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    std::atomic<int> next{0};
    auto worker = [&]() {
        while (true) {
            const int i = next.fetch_add(1);
            if (i >= ns) break;
            dijkstra(g, space.sample_nodes[static_cast<std::size_t>(i)],
                     space.rows[static_cast<std::size_t>(i)]);
        }
    };
    {
        std::vector<std::thread> pool;
        for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();
    }

    space.dist.assign(static_cast<std::size_t>(ns),
                      std::vector<double>(static_cast<std::size_t>(ns), 0.0));
    for (int i = 0; i < ns; ++i) {
        for (int j = 0; j < ns; ++j) {
            space.dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                space.rows[static_cast<std::size_t>(i)]
                          [static_cast<std::size_t>(space.sample_nodes[static_cast<std::size_t>(j)])];
        }
    }
    // Symmetrize the roundoff-level asymmetry of independent runs.
    for (int i = 0; i < ns; ++i) {
        for (int j = i + 1; j < ns; ++j) {
            const double m = 0.5 * (space.dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
                                    space.dist[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
            space.dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m;
            space.dist[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = m;
        }
    }
    return space;
}

double fiber_diameter_graph(const FiniteMetricSpace& space, int base_index) {
    if (base_index < 0 || base_index >= space.n_base_samples) {
        throw UnknownBasePoint("fiber_diameter_graph: base sample out of range");
    }
    double diam = 0.0;
    for (int fk = 0; fk < space.n_fiber_kinds; ++fk) {
        const int s = space.sample_index(base_index, fk);
        const auto& row = space.rows[static_cast<std::size_t>(s)];
        for (int node : space.fiber_nodes[static_cast<std::size_t>(base_index)]) {
            diam = std::max(diam, row[static_cast<std::size_t>(node)]);
        }
    }
    return diam;
}

std::vector<std::vector<double>> lifted_base_matrix(const FiniteMetricSpace& space) {
    const int nb = space.n_base_samples;
    std::vector<std::vector<double>> m(static_cast<std::size_t>(nb),
                                       std::vector<double>(static_cast<std::size_t>(nb), 0.0));
    for (int p = 0; p < nb; ++p) {
        const int sp = space.sample_index(p, kLiftFiberKind);
        for (int q = 0; q < nb; ++q) {
            const int sq = space.sample_index(q, kLiftFiberKind);
            m[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] =
                space.dist[static_cast<std::size_t>(sp)][static_cast<std::size_t>(sq)];
        }
    }
    return m;
}

std::vector<std::vector<double>> base_fs_matrix(const FiniteMetricSpace& space, double cB) {
    if (!(cB > 0.0)) throw ValidationError("base_fs_matrix: cB must be positive");
    BaseFactor base(space.resolution);
    const int nb = space.n_base_samples;
    std::vector<std::vector<double>> m(static_cast<std::size_t>(nb),
                                       std::vector<double>(static_cast<std::size_t>(nb), 0.0));
    for (int p = 0; p < nb; ++p) {
        for (int q = 0; q < nb; ++q) {
            const double gamma = base.angle(space.base_node_of[static_cast<std::size_t>(p)],
                                            space.base_node_of[static_cast<std::size_t>(q)]);
            m[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] =
                std::sqrt(cB) * kBaseRadius * gamma;
        }
    }
    return m;
}

LimitDistanceReport limit_distance(const std::vector<FiniteMetricSpace>& spaces) {
    if (spaces.size() < 3) {
        throw InsufficientSnapshots("limit_distance: need >= 3 snapshot spaces");
    }
    const std::size_t ns = spaces.front().dist.size();
    for (const auto& s : spaces) {
        if (s.dist.size() != ns) throw SampleMismatch("limit_distance: sample sets differ");
    }
    LimitDistanceReport report;
    report.d_inf = spaces.back().dist;
    report.dB_inf = lifted_base_matrix(spaces.back());
    for (std::size_t k = 0; k + 1 < spaces.size(); ++k) {
        double sup = 0.0;
        for (std::size_t i = 0; i < ns; ++i) {
            for (std::size_t j = 0; j < ns; ++j) {
                sup = std::max(sup, std::abs(spaces[k].dist[i][j] - spaces[k + 1].dist[i][j]));
            }
        }
        report.cauchy_sup.push_back(sup);
    }
    // Lift independence: spread of d_inf over the choice of fiber lifts.
    const auto& last = spaces.back();
    const int nb = last.n_base_samples;
    double spread = 0.0;
    for (int p = 0; p < nb; ++p) {
        for (int q = p + 1; q < nb; ++q) {
            double lo = kInf, hi = 0.0;
            for (int fp = 0; fp < last.n_fiber_kinds; ++fp) {
                for (int fq = 0; fq < last.n_fiber_kinds; ++fq) {
                    const double d =
                        last.dist[static_cast<std::size_t>(last.sample_index(p, fp))]
                                 [static_cast<std::size_t>(last.sample_index(q, fq))];
                    lo = std::min(lo, d);
                    hi = std::max(hi, d);
                }
            }
            spread = std::max(spread, hi - lo);
        }
    }
    report.lift_spread = spread;
    return report;
}

SandwichResult sandwich_check(const std::vector<std::vector<double>>& d_inf_base,
                              const std::vector<std::vector<double>>& d_base) {
    const std::size_t n = d_inf_base.size();
    if (d_base.size() != n) throw SampleMismatch("sandwich_check: matrix sizes differ");
    SandwichResult r;
    r.sqrt_c = kInf;
    r.C2 = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            if (!(d_base[p][q] > 0.0)) continue;
            const double ratio = d_inf_base[p][q] / d_base[p][q];
            r.sqrt_c = std::min(r.sqrt_c, ratio);
            r.C2 = std::max(r.C2, ratio);
        }
    }
    r.pass = std::isfinite(r.C2) && r.C2 > 0.0 && std::isfinite(r.sqrt_c) && r.sqrt_c > 0.0;
    return r;
}

Correspondence canonical_correspondence(const FiniteMetricSpace& space) {
    Correspondence corr;
    corr.forward.resize(space.labels.size());
    corr.backward.resize(static_cast<std::size_t>(space.n_base_samples));
    for (std::size_t i = 0; i < space.labels.size(); ++i) {
        corr.forward[i] = space.labels[i].base_index;
    }
    for (int p = 0; p < space.n_base_samples; ++p) {
        corr.backward[static_cast<std::size_t>(p)] = space.sample_index(p, kLiftFiberKind);
    }
    return corr;
}

GhResult gh_epsilon(const FiniteMetricSpace& space_x,
                    const std::vector<std::vector<double>>& d_base, const Correspondence& corr) {
    const std::size_t ns = space_x.dist.size();
    const std::size_t nb = d_base.size();
    if (corr.forward.size() != ns || corr.backward.size() != nb) {
        throw SampleMismatch("gh_epsilon: correspondence sizes differ");
    }
    for (std::size_t p = 0; p < nb; ++p) {
        const int s = corr.backward[p];
        if (corr.forward[static_cast<std::size_t>(s)] != static_cast<int>(p)) {
            throw SampleMismatch("gh_epsilon: F(G(p)) != p");
        }
    }
    GhResult r;
    for (std::size_t i = 0; i < ns; ++i) {
        for (std::size_t j = 0; j < ns; ++j) {
            const double d =
                std::abs(space_x.dist[i][j] -
                         d_base[static_cast<std::size_t>(corr.forward[i])]
                               [static_cast<std::size_t>(corr.forward[j])]);
            r.distortion_x = std::max(r.distortion_x, d);
        }
        const int back = corr.backward[static_cast<std::size_t>(corr.forward[i])];
        r.displacement_x =
            std::max(r.displacement_x, space_x.dist[i][static_cast<std::size_t>(back)]);
    }
    for (std::size_t p = 0; p < nb; ++p) {
        for (std::size_t q = 0; q < nb; ++q) {
            const double d = std::abs(
                d_base[p][q] - space_x.dist[static_cast<std::size_t>(corr.backward[p])]
                                           [static_cast<std::size_t>(corr.backward[q])]);
            r.distortion_b = std::max(r.distortion_b, d);
        }
    }
    r.epsilon = std::max({r.distortion_x, r.displacement_x, r.distortion_b});
    return r;
}

double sphere_graph_diameter(int resolution, double area) {
    if (!(area > 0.0)) throw ValidationError("sphere_graph_diameter: area must be positive");
    BaseFactor base(resolution);
    Graph g;
    g.nodes = base.count;
    g.offset.assign(static_cast<std::size_t>(g.nodes) + 1, 0);
    for (int b = 0; b < base.count; ++b) {
        g.offset[static_cast<std::size_t>(b) + 1] = base.edges[static_cast<std::size_t>(b)].size();
    }
    for (std::size_t i = 0; i < static_cast<std::size_t>(g.nodes); ++i) g.offset[i + 1] += g.offset[i];
    g.to.resize(g.offset.back());
    g.weight.resize(g.offset.back());
    const double scale = std::sqrt(area) * kBaseRadius;
    for (int b = 0; b < base.count; ++b) {
        std::size_t w = g.offset[static_cast<std::size_t>(b)];
        for (const auto& e : base.edges[static_cast<std::size_t>(b)]) {
            g.to[w] = e.to;
            g.weight[w] = scale * e.gamma;
            ++w;
        }
    }
    std::vector<int> sources = {base.north, base.id(resolution / 2, 0)};
    double diam = 0.0;
    std::vector<double> dist;
    for (int s : sources) {
        dijkstra(g, s, dist);
        for (double d : dist) diam = std::max(diam, d);
    }
    return diam;
}

} // namespace krflow::metricspace

#include "krflow/verify.hpp"
#include "krflow/csvio.hpp"
#include "krflow/errors.hpp"
#include "krflow/fsgeom.hpp"
#include "krflow/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace krflow::verify {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string num(double v) { return csvio::format_shortest(v); }

struct Check {
    bool pass = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            pass = false;
            detail << "FAILED: " << what << "; ";
        }
    }
};

} // namespace

Context::Context(int threads) : threads_(threads) {}

const Context::PresetData& Context::preset_run(const std::string& name) {
    auto it = runs_.find(name);
    if (it != runs_.end()) return *it->second;

    auto data = std::make_unique<PresetData>();
    data->s = scenario::preset(name);
    flow::FlowProblem problem = scenario::make_problem(data->s);
    flow::RunConfig config;
    config.record_times = scenario::monitor_times(data->s, 64);
    for (double f : data->s.t_stops) config.record_times.push_back(f * data->s.T);
    config.t_end = data->s.t_end();
    config.cfl = data->s.cfl;
    const auto start = Clock::now();
    data->run = problem.run(config);
    data->run_seconds = seconds_since(start);

    const geometry::BundleGeometry geom(data->s.k);
    auto sing = estimates::SingularComparison::with_defaults(
        geom, data->s.cB, estimates::default_split_bundle(data->s.k));
    data->monitors = estimates::sweep_monitors(data->run.snapshots, geom, data->s.cB, sing);

    auto [pos, inserted] = runs_.emplace(name, std::move(data));
    (void)inserted;
    return *pos->second;
}

const Context::SpaceSet& Context::preset_spaces(const std::string& name, int resolution) {
    const std::string key = name + "@" + std::to_string(resolution);
    auto it = spaces_.find(key);
    if (it != spaces_.end()) return *it->second;

    const PresetData& data = preset_run(name);
    const geometry::BundleGeometry geom(data.s.k);
    auto set = std::make_unique<SpaceSet>();
    metricspace::SpaceOptions sopt;
    sopt.resolution = resolution;
    sopt.threads = threads_;
    for (double f : data.s.t_stops) {
        const double t = f * data.s.T;
        for (const auto& snap : data.run.snapshots) {
            if (std::abs(snap.t - t) <= 1e-12 * data.s.T) {
                const auto start = Clock::now();
                set->spaces.push_back(metricspace::build_space(snap, geom, sopt));
                set->build_seconds.push_back(seconds_since(start));
                break;
            }
        }
    }
    auto [pos, inserted] = spaces_.emplace(key, std::move(set));
    (void)inserted;
    return *pos->second;
}

namespace {

// --- criterion 1: product exact-solution oracle --------------------------

CriterionResult check_product_oracle(Context& ctx) {
    Check c;
    scenario::Scenario s = scenario::preset("product");
    s.delta = 0.05; // run exactly to 0.95 T
    scenario::validate(s);
    flow::FlowProblem problem = scenario::make_problem(s);
    flow::RunConfig config;
    config.record_times = scenario::monitor_times(s, 48);
    config.t_end = s.t_end();
    config.cfl = s.cfl;
    const auto start = Clock::now();
    const auto run = problem.run(config);
    const double elapsed = seconds_since(start);

    c.require(run.status == flow::RunStatus::Completed, "run completed");
    double max_rel_area = 0.0;
    double max_du_err = 0.0;
    for (const auto& snap : run.snapshots) {
        const double f_exact = 2.0 - 2.0 * snap.t;
        max_rel_area = std::max(max_rel_area,
                                std::abs(calabi::fiber_area(snap.profile) - f_exact) / f_exact);
        const auto& grid = snap.profile.grid;
        for (int i = 0; i < grid.size(); ++i) {
            const double exact = f_exact * grid.x_at(i);
            max_du_err = std::max(max_du_err,
                                  std::abs(snap.profile.du[static_cast<std::size_t>(i)] - exact));
        }
    }
    c.require(max_rel_area <= 1e-3, "fiber area matches 2-2t to 1e-3 relative");
    c.require(max_du_err <= 1e-3, "u' sup-norm error <= 1e-3 against the closed form");
    c.require(elapsed < 60.0, "runtime < 60 s at N = 1024");
    (void)ctx;
    c.detail << "max fiber-area rel err " << num(max_rel_area) << ", u' sup err "
             << num(max_du_err) << ", solve " << num(elapsed) << " s, steps "
             << run.total_steps;
    return CriterionResult{1, c.pass, c.detail.str(), elapsed};
}

// --- criterion 2: class conservation --------------------------------------

CriterionResult check_class_conservation(Context& ctx) {
    Check c;
    const auto& data = ctx.preset_run("hirzebruch1");
    flow::FlowProblem problem = scenario::make_problem(data.s);
    double max_area = 0.0, max_vol = 0.0;
    for (const auto& snap : data.run.snapshots) {
        if (snap.t > 0.95 * data.s.T + 1e-12) continue;
        const auto res = problem.class_consistency(snap);
        max_area = std::max(max_area, res.fiber);
        max_vol = std::max(max_vol, res.volume_rel);
    }
    c.require(max_area <= 2e-3, "|fiber_area - (2-2t)| <= 2e-3 for t <= 0.95T");
    c.require(max_vol <= 1e-3, "volume matches the class polynomial to 1e-3 relative");
    c.detail << "max |fiber_area - f(t)| " << num(max_area) << ", max volume rel err "
             << num(max_vol);
    return CriterionResult{2, c.pass, c.detail.str(), data.run_seconds};
}

// --- criterion 3: Schwarz-type lower bound ---------------------------------

CriterionResult check_schwarz(Context& ctx) {
    Check c;
    for (const auto& name : scenario::preset_names()) {
        const auto& data = ctx.preset_run(name);
        double minimum = std::numeric_limits<double>::infinity();
        for (double v : data.monitors.schwarz_inf) minimum = std::min(minimum, v);
        const double first = data.monitors.schwarz_inf.front();
        c.require(minimum > 0.0, name + ": schwarz_inf positive at all recorded times");
        c.require(minimum >= 0.05 * first, name + ": min schwarz_inf >= 0.05x its t=0 value");
        c.detail << name << " min/first " << num(minimum) << "/" << num(first) << "; ";
    }
    return CriterionResult{3, c.pass, c.detail.str(), 0.0};
}

// --- criterion 4: trace upper bound ----------------------------------------

CriterionResult check_trace(Context& ctx) {
    Check c;
    for (const auto& name : scenario::preset_names()) {
        const auto& data = ctx.preset_run(name);
        double maximum = 0.0;
        for (double v : data.monitors.trace_sup) maximum = std::max(maximum, v);
        const double first = data.monitors.trace_sup.front();
        c.require(maximum <= 10.0 * first, name + ": trace_sup <= 10x its t=0 value");
        c.detail << name << " max/first " << num(maximum) << "/" << num(first) << "; ";
    }
    return CriterionResult{4, c.pass, c.detail.str(), 0.0};
}

// --- criterion 5: diameter decay exponent ----------------------------------

CriterionResult check_decay(Context& ctx) {
    Check c;
    for (const auto& name : scenario::preset_names()) {
        const auto& data = ctx.preset_run(name);
        const auto fit = estimates::decay_exponent(data.monitors.t, data.monitors.fiber_diam,
                                                   data.s.T, 0.9 * data.s.T, data.s.t_end());
        c.require(fit.exponent >= 1.0 / 3.0 - 0.02,
                  name + ": fitted exponent >= 1/3 - 0.02");
        if (name == "product") {
            c.require(std::abs(fit.exponent - 0.5) <= 0.03, "product: exponent = 0.5 +- 0.03");
        }
        c.detail << name << " exponent " << num(fit.exponent) << " (residual "
                 << num(fit.residual) << "); ";
    }
    return CriterionResult{5, c.pass, c.detail.str(), 0.0};
}

// --- criterion 6: weighted singular-trace monitor --------------------------

CriterionResult check_h_monitor(Context& ctx) {
    Check c;
    const auto& data = ctx.preset_run("hirzebruch1");
    double maximum = -std::numeric_limits<double>::infinity();
    for (double v : data.monitors.h_sup) maximum = std::max(maximum, v);
    const double first = data.monitors.h_sup.front();
    c.require(maximum <= first + 10.0, "max_t H_sup <= H_sup(0) + 10 on hirzebruch1");
    c.detail << "H_sup(0) " << num(first) << ", max " << num(maximum);
    return CriterionResult{6, c.pass, c.detail.str(), 0.0};
}

// --- criterion 7: projective pullback property suite ------------------------

CriterionResult check_fs_lemma(Context& ctx) {
    (void)ctx;
    Check c;
    const auto start = Clock::now();
    const std::uint64_t master = 20240513ULL;
    double global_min = std::numeric_limits<double>::infinity();
    int tested = 0;
    for (int r = 2; r <= 5; ++r) {
        for (int i = 0; i < 50; ++i) {
            const std::uint64_t seed =
                fsgeom::derive_seed(master, static_cast<std::uint64_t>(r * 1000 + i));
            fsgeom::LinearMap a(fsgeom::random_invertible(r, seed));
            const auto check = fsgeom::verify_lemma(a, 1000, seed);
            global_min = std::min(global_min, check.min_ratio);
            ++tested;
        }
    }
    c.require(tested == 200, "200 random maps tested");
    c.require(global_min >= 1.0 - 1e-9, "min pullback/bound ratio >= 1 - 1e-9");

    double unitary_dev = 0.0;
    for (int r = 2; r <= 5; ++r) {
        fsgeom::LinearMap u(fsgeom::random_unitary(r, fsgeom::derive_seed(master, 77 + r)));
        for (int i = 0; i < 100; ++i) {
            const std::uint64_t seed = fsgeom::derive_seed(master, 900 + i + 100 * r);
            const auto x = fsgeom::random_point(r, seed);
            const auto xi = fsgeom::random_tangent(r, seed);
            unitary_dev = std::max(unitary_dev, std::abs(fsgeom::pullback_norm(u, x, xi) - 1.0));
        }
    }
    c.require(unitary_dev <= 1e-10, "unitary maps give ratio 1 +- 1e-10");

    fsgeom::Matrix diag = fsgeom::Matrix::Zero(2, 2);
    diag(0, 0) = 1.0;
    diag(1, 1) = 2.0;
    fsgeom::LinearMap d12(diag);
    fsgeom::Vector z(2), zd(2);
    z << 1.0, 0.0;
    zd << 0.0, 1.0;
    const double minor_value = fsgeom::pullback_norm(
        d12, fsgeom::ProjectivePoint::from_homogeneous(z), fsgeom::TangentVector{zd});
    c.require(std::abs(minor_value - 4.0) <= 1e-12, "minor formula value 4 at [1:0]");
    const double elapsed = seconds_since(start);
    c.require(elapsed < 30.0, "runtime < 30 s");
    c.detail << "min ratio " << num(global_min) << ", unitary dev " << num(unitary_dev)
             << ", minor value " << num(minor_value) << ", " << num(elapsed) << " s";
    return CriterionResult{7, c.pass, c.detail.str(), elapsed};
}

// --- criterion 8: collapse in the sampled Gromov-Hausdorff sense ------------

CriterionResult check_gh(Context& ctx) {
    Check c;
    double total = 0.0;

    {
        const auto& set = ctx.preset_spaces("hirzebruch1");
        c.require(set.spaces.size() == 4, "hirzebruch1: spaces at t/T in {0.5,0.8,0.95,0.99}");
        const auto limit = metricspace::limit_distance(set.spaces);
        double base_diam = 0.0;
        for (const auto& row : limit.dB_inf) {
            for (double v : row) base_diam = std::max(base_diam, v);
        }
        double prev = std::numeric_limits<double>::infinity();
        double final_eps = 0.0;
        for (std::size_t i = 0; i < set.spaces.size(); ++i) {
            const auto corr = metricspace::canonical_correspondence(set.spaces[i]);
            const auto gh = metricspace::gh_epsilon(set.spaces[i], limit.dB_inf, corr);
            c.require(gh.epsilon <= prev * 1.05, "hirzebruch1: epsilon non-increasing (5% slack)");
            prev = gh.epsilon;
            final_eps = gh.epsilon;
            c.detail << "h1 t=" << num(set.spaces[i].time) << " eps " << num(gh.epsilon) << "; ";
        }
        c.require(final_eps <= 0.05 * base_diam,
                  "hirzebruch1: final epsilon <= 0.05x measured base diameter");
        c.detail << "base diam " << num(base_diam) << "; ";
        for (double sec : set.build_seconds) {
            total += sec;
            c.require(sec < 120.0, "space build < 120 s per time");
        }
    }

    {
        const auto& data = ctx.preset_run("product");
        const auto& set = ctx.preset_spaces("product");
        const auto limit = metricspace::limit_distance(set.spaces);
        const double cB = data.s.cB;
        const double unit_diam = 0.5 * std::sqrt(M_PI); // unit-area round sphere
        for (const auto& space : set.spaces) {
            const auto corr = metricspace::canonical_correspondence(space);
            const auto gh = metricspace::gh_epsilon(space, limit.dB_inf, corr);
            const double f = 2.0 - 2.0 * space.time;
            const double cc = 6.0 - 2.0 * space.time;
            const double bound =
                0.5 * std::sqrt(M_PI * f) + (std::sqrt(cc) - std::sqrt(cB)) * unit_diam;
            const double ratio = gh.epsilon / bound;
            c.require(std::abs(ratio - 1.0) <= 0.15,
                      "product: epsilon within 15% of the closed-form bound at t=" +
                          num(space.time));
            c.detail << "prod t=" << num(space.time) << " eps/bound " << num(ratio) << "; ";
        }
        for (double sec : set.build_seconds) total += sec;
    }

    return CriterionResult{8, c.pass, c.detail.str(), total};
}

// --- criterion 9: sandwich constants ----------------------------------------

CriterionResult check_sandwich(Context& ctx) {
    Check c;
    for (const auto& name : scenario::preset_names()) {
        const auto& data = ctx.preset_run(name);
        const auto& set = ctx.preset_spaces(name);
        const auto limit = metricspace::limit_distance(set.spaces);
        const auto d_base = metricspace::base_fs_matrix(set.spaces.back(), data.s.cB);
        const auto sw = metricspace::sandwich_check(limit.dB_inf, d_base);
        c.require(sw.pass && sw.sqrt_c > 0.0 && std::isfinite(sw.C2),
                  name + ": 0 < sqrt(c) <= C2 < inf");
        c.require(sw.sqrt_c <= sw.C2 + 1e-12, name + ": sqrt(c) <= C2");
        if (name == "product") {
            c.require(sw.C2 / sw.sqrt_c <= 1.10, "product: sqrt(c) and C2 agree within 10%");
        }
        c.detail << name << " sqrt_c " << num(sw.sqrt_c) << " C2 " << num(sw.C2) << "; ";
    }
    return CriterionResult{9, c.pass, c.detail.str(), 0.0};
}

// --- criterion 10: numerical hygiene ----------------------------------------

double du_sup_difference(const flow::Snapshot& coarse, const flow::Snapshot& fine) {
    double sup = 0.0;
    const auto& grid = coarse.profile.grid;
    for (int i = 0; i < grid.size(); ++i) {
        const double x = grid.x_at(i);
        const double fine_du = calabi::interp_node_values(fine.profile.grid, fine.profile.du, x);
        sup = std::max(sup, std::abs(coarse.profile.du[static_cast<std::size_t>(i)] - fine_du));
    }
    return sup;
}

flow::Snapshot run_h1_at(int n, double target_frac) {
    scenario::Scenario s = scenario::preset("hirzebruch1");
    s.grid_n = n;
    s.delta = 1.0 - target_frac;
    s.t_stops = {target_frac};
    scenario::validate(s);
    flow::FlowProblem problem = scenario::make_problem(s);
    flow::RunConfig config;
    config.record_times = {target_frac * s.T};
    config.t_end = target_frac * s.T;
    config.cfl = s.cfl;
    const auto run = problem.run(config);
    return run.snapshots.back();
}

bool same_bytes(const std::filesystem::path& a, const std::filesystem::path& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    if (!fa || !fb) return false;
    std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    return sa == sb;
}

CriterionResult check_hygiene(Context& ctx) {
    Check c;
    const auto start = Clock::now();

    // Self-convergence of u' under simultaneous grid/step refinement.
    const auto s256 = run_h1_at(256, 0.5);
    const auto s512 = run_h1_at(512, 0.5);
    const auto s1024 = run_h1_at(1024, 0.5);
    const double d_coarse = du_sup_difference(s256, s512);
    const double d_fine = du_sup_difference(s512, s1024);
    const double factor = d_coarse / d_fine;
    c.require(factor >= 3.5, "refinement reduces u' sup-difference by >= 3.5 (order >= 1.9)");
    c.detail << "refinement factor " << num(factor) << " (order " << num(std::log2(factor))
             << "); ";

    // Triangle audit over every produced distance matrix.
    double worst_defect = 0.0;
    for (const auto& name : scenario::preset_names()) {
        for (const auto& space : ctx.preset_spaces(name).spaces) {
            worst_defect = std::max(worst_defect, space.triangle_defect());
        }
    }
    c.require(worst_defect <= 1e-9, "triangle-inequality audit at 1e-9 slack");
    c.detail << "max triangle defect " << num(worst_defect) << "; ";

    // Byte-identical reruns under a fixed seed.
    scenario::Scenario small = scenario::preset("hirzebruch1");
    small.grid_n = 128;
    small.delta = 0.1;
    small.t_stops = {0.5, 0.9};
    scenario::validate(small);
    runner::RunOptions opts;
    opts.with_gh = false;
    opts.write_plots = false;
    opts.monitor_count = 16;
    const auto tmp = std::filesystem::temp_directory_path() / "krflow_verify_repro";
    std::filesystem::remove_all(tmp);
    runner::run_scenario(small, tmp / "a", opts);
    runner::run_scenario(small, tmp / "b", opts);
    bool identical = true;
    for (const auto& entry : std::filesystem::directory_iterator(tmp / "a")) {
        const auto other = tmp / "b" / entry.path().filename();
        if (!same_bytes(entry.path(), other)) identical = false;
    }
    c.require(identical, "byte-identical reruns under fixed seeds");
    std::filesystem::remove_all(tmp);

    return CriterionResult{10, c.pass, c.detail.str(), seconds_since(start)};
}

} // namespace

CriterionResult run_criterion(Context& ctx, int id) {
    switch (id) {
        case 1: return check_product_oracle(ctx);
        case 2: return check_class_conservation(ctx);
        case 3: return check_schwarz(ctx);
        case 4: return check_trace(ctx);
        case 5: return check_decay(ctx);
        case 6: return check_h_monitor(ctx);
        case 7: return check_fs_lemma(ctx);
        case 8: return check_gh(ctx);
        case 9: return check_sandwich(ctx);
        case 10: return check_hygiene(ctx);
        default: throw ValidationError("unknown criterion id " + std::to_string(id));
    }
}

std::vector<CriterionResult> run_all(Context& ctx) {
    std::vector<CriterionResult> results;
    for (int id = 1; id <= kCriterionCount; ++id) {
        results.push_back(run_criterion(ctx, id));
    }
    return results;
}

} // namespace krflow::verify

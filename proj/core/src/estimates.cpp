#include "krflow/estimates.hpp"
#include "krflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace krflow::estimates {

std::complex<double> SplitBundleData::p_eval(std::complex<double> z) const {
    std::complex<double> acc(0.0, 0.0);
    for (auto it = p_coeffs.rbegin(); it != p_coeffs.rend(); ++it) {
        acc = acc * z + *it;
    }
    return acc;
}

double SplitBundleData::weight_sq(std::complex<double> z) const {
    return std::norm(p_eval(z)) / std::pow(1.0 + std::norm(z), static_cast<double>(k));
}

SplitBundleData default_split_bundle(int k, int n_radii, int n_angles, double r_min, double r_max) {
    if (k < 0) throw ValidationError("split bundle: k must be >= 0");
    SplitBundleData data;
    data.k = k;
    data.p_coeffs.assign(static_cast<std::size_t>(k) + 1, std::complex<double>(0.0, 0.0));
    data.p_coeffs.front() = 1.0;
    data.p_coeffs.back() = 1.0; // p(z) = z^k + 1 (p = 1 for k = 0)

    if (n_radii < 2 || n_angles < 1) throw ValidationError("split bundle: sample grid too small");
    const double llo = std::log(r_min);
    const double lhi = std::log(r_max);
    for (int i = 0; i < n_radii; ++i) {
        const double r = std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                                            static_cast<double>(n_radii - 1));
        for (int j = 0; j < n_angles; ++j) {
            const double th = 2.0 * M_PI * (static_cast<double>(j) + 0.5) /
                              static_cast<double>(n_angles);
            data.base_samples.emplace_back(r * std::cos(th), r * std::sin(th));
        }
    }
    for (const auto& z : data.base_samples) {
        if (data.weight_sq(z) <= 0.0) {
            throw SampleAtZero("split bundle: default sample grid hits a root of p");
        }
    }
    return data;
}

namespace {

double interp(const calabi::Grid& grid, const std::vector<double>& values, double x) {
    return calabi::interp_node_values(grid, values, x);
}

} // namespace

double schwarz_infimum(const flow::Snapshot& snap, const geometry::BundleGeometry& geom,
                       double cB) {
    if (!(cB > 0.0)) throw ValidationError("schwarz_infimum: cB must be positive");
    const auto& p = snap.profile;
    const double k = static_cast<double>(geom.k);
    double inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.du.size(); ++i) {
        inf = std::min(inf, (p.s + k * p.du[i]) / cB);
    }
    return inf;
}

double trace_supremum(const flow::Snapshot& snap, const flow::Snapshot& snap0,
                      const geometry::BundleGeometry& geom) {
    const auto& p = snap.profile;
    const auto& p0 = snap0.profile;
    if (p.du.size() != p0.du.size()) throw SampleMismatch("trace_supremum: grid mismatch");
    const double k = static_cast<double>(geom.k);
    double sup = 0.0;
    for (std::size_t i = 0; i < p.du.size(); ++i) {
        const double h = p.s + k * p.du[i];
        const double h0 = p0.s + k * p0.du[i];
        const double ratio = h / h0 + p.ddu[i] / p0.ddu[i];
        sup = std::max(sup, ratio);
    }
    return sup;
}

DecayFit decay_exponent(const std::vector<double>& times, const std::vector<double>& diams,
                        double T, double t_lo, double t_hi) {
    if (times.size() != diams.size()) throw SampleMismatch("decay_exponent: size mismatch");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (t < t_lo || t > t_hi) continue;
        if (!(diams[i] > 0.0) || !(T - t > 0.0)) continue;
        lx.push_back(std::log(T - t));
        ly.push_back(std::log(diams[i]));
    }
    const std::size_t n = lx.size();
    if (n < 8) throw InsufficientSamples("decay_exponent: need >= 8 samples in the window");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    DecayFit fit;
    fit.exponent = sxy / sxx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pred = my + fit.exponent * (lx[i] - mx);
        ss += (ly[i] - pred) * (ly[i] - pred);
    }
    fit.residual = std::sqrt(ss / static_cast<double>(n));
    fit.window_lo = t_lo;
    fit.window_hi = t_hi;
    fit.samples = static_cast<int>(n);
    return fit;
}

SingularComparison::SingularComparison(const geometry::BundleGeometry& geom, double cB,
                                       SplitBundleData data, std::vector<double> fiber_rhos)
    : geom_(geom), cB_(cB), data_(std::move(data)), fiber_rhos_(std::move(fiber_rhos)) {
    if (!(cB_ > 0.0)) throw ValidationError("singular comparison: cB must be positive");
    if (fiber_rhos_.empty()) throw InsufficientSamples("singular comparison: no fiber samples");
}

SingularComparison SingularComparison::with_defaults(const geometry::BundleGeometry& geom,
                                                     double cB, const SplitBundleData& data) {
    std::vector<double> rhos;
    for (int i = 0; i <= 32; ++i) {
        rhos.push_back(-8.0 + 0.5 * static_cast<double>(i));
    }
    return SingularComparison(geom, cB, data, std::move(rhos));
}

double SingularComparison::trace_at(const flow::Snapshot& snap, std::complex<double> q,
                                    double rho) const {
    const auto& p = snap.profile;
    const double x = 1.0 / (1.0 + std::exp(-rho));
    const double v = interp(p.grid, p.ddu, x);
    const double h = p.s + static_cast<double>(geom_.k) * interp(p.grid, p.du, x);

    const fsgeom::LinearMap a = fsgeom::frame_map(q, data_);
    const double zeta = std::exp(0.5 * rho);
    fsgeom::Vector z(2), zdot(2);
    z << 1.0, zeta;
    zdot << 0.0, 1.0;
    const auto point = fsgeom::ProjectivePoint::from_homogeneous(z);
    const double pb = fsgeom::pullback_norm(a, point, fsgeom::TangentVector{zdot});

    const double xi = zeta * zeta; // |zeta|^2 = e^rho
    const double fiber_over_fs = v * (1.0 + xi) * (1.0 + xi) / xi;
    return h / cB_ + fiber_over_fs / pb;
}

double SingularComparison::singular_trace_check(const flow::Snapshot& snap0) const {
    double sup = 0.0;
    for (const auto& q : data_.base_samples) {
        const double w2 = data_.weight_sq(q);
        if (!(w2 > 0.0)) throw SampleAtZero("singular_trace_check: sample at a root of p");
        for (double rho : fiber_rhos_) {
            sup = std::max(sup, w2 * trace_at(snap0, q, rho));
        }
    }
    return sup;
}

double SingularComparison::h_monitor(const flow::Snapshot& snap) const {
    double sup = -std::numeric_limits<double>::infinity();
    for (const auto& q : data_.base_samples) {
        const double w2 = data_.weight_sq(q);
        if (!(w2 > 0.0)) throw SampleAtZero("h_monitor: sample at a root of p");
        for (double rho : fiber_rhos_) {
            const double h = 1.5 * std::log(w2) + std::log(trace_at(snap, q, rho));
            sup = std::max(sup, h);
        }
    }
    return sup;
}

MonitorSeries sweep_monitors(const std::vector<flow::Snapshot>& snapshots,
                             const geometry::BundleGeometry& geom, double cB,
                             const std::optional<SingularComparison>& sing) {
    if (snapshots.empty()) throw InsufficientSnapshots("sweep_monitors: no snapshots");
    if (snapshots.front().t != 0.0) {
        throw ValidationError("sweep_monitors: first snapshot must be at t = 0");
    }
    MonitorSeries series;
    const auto& snap0 = snapshots.front();
    for (const auto& snap : snapshots) {
        series.t.push_back(snap.t);
        series.schwarz_inf.push_back(schwarz_infimum(snap, geom, cB));
        series.trace_sup.push_back(trace_supremum(snap, snap0, geom));
        series.fiber_diam.push_back(calabi::fiber_diameter(snap.profile));
        series.h_sup.push_back(sing ? sing->h_monitor(snap)
                                    : std::numeric_limits<double>::quiet_NaN());
        series.phi_max.push_back(snap.max_phi);
    }
    return series;
}

} // namespace krflow::estimates

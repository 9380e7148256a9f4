#include "krflow/flow.hpp"
#include "krflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace krflow::flow {

VolumeDensity build_volume_density(const calabi::Grid& grid, double a0, double b0, double T,
                                   double omega_scale) {
    if (!(T > 0.0)) throw ValidationError("volume density: T must be positive");
    const int n = grid.size();
    VolumeDensity d;
    d.omega.resize(static_cast<std::size_t>(n));
    d.log_reduced.resize(static_cast<std::size_t>(n));

    auto raw_log = [&](double x, double rho) {
        // log Omega_raw = rho + (a0 rho - u0(rho))/T with the model potential
        // u0 = a0 rho + (b0-a0) log(1+e^rho); the a0 rho parts cancel.
        const double log1pe = -std::log1p(-x);
        return rho - (b0 - a0) * log1pe / T;
    };

    for (int i = 0; i < n; ++i) {
        const std::size_t j = static_cast<std::size_t>(i);
        d.omega[j] = std::exp(raw_log(grid.x_at(i), grid.rho_at(i)));
    }
    const double z = grid.integrate_drho(d.omega);
    if (!(z > 0.0) || !std::isfinite(z)) throw ValidationError("volume density: bad normalization");
    d.normalization = z / omega_scale;
    for (int i = 0; i < n; ++i) {
        const std::size_t j = static_cast<std::size_t>(i);
        d.omega[j] /= d.normalization;
        const double x = grid.x_at(i);
        d.log_reduced[j] = raw_log(x, grid.rho_at(i)) - std::log(d.normalization) -
                           std::log(x * (1.0 - x));
        if (!(d.omega[j] > 0.0)) throw ValidationError("volume density: nonpositive sample");
    }

    // Refinement defect of the unit-integral quadrature; the compactified
    // grid carries the full mass, so this measures quadrature error only.
    if (n >= 16) {
        calabi::Grid half(n / 2);
        std::vector<double> coarse(static_cast<std::size_t>(half.size()));
        for (int i = 0; i < half.size(); ++i) {
            coarse[static_cast<std::size_t>(i)] = std::exp(raw_log(half.x_at(i), half.rho_at(i)));
        }
        const double zh = half.integrate_drho(coarse);
        d.tail_defect = std::abs(zh / z - 1.0);
    }
    return d;
}

FlowProblem::FlowProblem(const geometry::BundleGeometry& geom, const geometry::KahlerClassPath& path,
                         double a0, double b0, const calabi::Grid& grid, double omega_scale)
    : geom_(geom), path_(path), grid_(grid), a0_(a0), b0_(b0) {
    const auto collapse = geometry::is_base_collapse(path, geom);
    if (!collapse.base_collapse) {
        throw ValidationError("flow: initial class does not collapse to the base");
    }
    T_ = geometry::singular_time(path, geom).T;
    cB_ = collapse.cB;
    if (std::abs((b0 - a0) - path.f0) > 1e-12 * std::max(1.0, path.f0)) {
        throw ValidationError("flow: fiber area b0-a0 must equal the fiber period f0");
    }
    s0_ = path.c0 - static_cast<double>(geom.k) * a0;
    if (!(s0_ > 0.0) && geom.k == 0) throw ValidationError("flow: k=0 requires s0 > 0");
    if (s0_ < 0.0) throw ValidationError("flow: negative base coefficient s0");
    density_ = build_volume_density(grid, a0, b0, T_, omega_scale);

    const int n = grid.size();
    u0_.resize(static_cast<std::size_t>(n));
    u0p_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::size_t j = static_cast<std::size_t>(i);
        const double x = grid.x_at(i);
        u0_[j] = a0 * grid.rho_at(i) - (b0 - a0) * std::log1p(-x);
        u0p_[j] = a0 + (b0 - a0) * x;
    }
}

double FlowProblem::reference_base_coefficient(double t) const {
    return ((T_ - t) * s0_ + t * cB_) / T_;
}

calabi::Profile FlowProblem::reference_profile(double t) const {
    if (t < 0.0 || t > T_) throw OutOfWindow("reference_profile: t outside [0, T]");
    const double fac = (T_ - t) / T_;
    calabi::Profile p;
    p.grid = grid_;
    p.s = reference_base_coefficient(t);
    p.a = fac * a0_;
    p.b = fac * b0_;
    const int n = grid_.size();
    p.u.resize(static_cast<std::size_t>(n));
    p.du.resize(static_cast<std::size_t>(n));
    p.ddu.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::size_t j = static_cast<std::size_t>(i);
        const double x = grid_.x_at(i);
        p.u[j] = fac * u0_[j];
        p.du[j] = fac * u0p_[j];
        p.ddu[j] = fac * (b0_ - a0_) * x * (1.0 - x);
    }
    return p;
}

double FlowProblem::rhs_into(double t, const std::vector<double>& phi, std::vector<double>& dphi,
                             std::vector<double>* v_out) const {
    const int n = grid_.size();
    const double dx = grid_.dx();
    const double inv2dx = 0.5 / dx;
    const double invdx2 = 1.0 / (dx * dx);
    const double fac = (T_ - t) / T_;
    const double st = reference_base_coefficient(t);
    const double vref = fac * (b0_ - a0_);
    const double k = static_cast<double>(geom_.k);
    const auto& xs = grid_.x();

    dphi.resize(static_cast<std::size_t>(n));
    if (v_out) v_out->resize(static_cast<std::size_t>(n));

    double stab = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const std::size_t j = static_cast<std::size_t>(i);
        double px, pxx;
        if (i == 0) {
            px = (-3.0 * phi[0] + 4.0 * phi[1] - phi[2]) * inv2dx;
            pxx = (phi[0] - 2.0 * phi[1] + phi[2]) * invdx2;
        } else if (i == n - 1) {
            px = (3.0 * phi[j] - 4.0 * phi[j - 1] + phi[j - 2]) * inv2dx;
            pxx = (phi[j] - 2.0 * phi[j - 1] + phi[j - 2]) * invdx2;
        } else {
            px = (phi[j + 1] - phi[j - 1]) * inv2dx;
            pxx = (phi[j + 1] - 2.0 * phi[j] + phi[j - 1]) * invdx2;
        }
        const double x = xs[j];
        const double w = x * (1.0 - x);
        const double vd = vref + (1.0 - 2.0 * x) * px + w * pxx; // v / (x(1-x))
        const double h = st + k * (fac * u0p_[j] + w * px);
        if (!(vd > 0.0) || !(h > 0.0)) {
            throw PositivityLoss("flow: metric positivity lost at t=" + std::to_string(t) +
                                 ", node " + std::to_string(i));
        }
        const double cand = vd * dx * dx / w; // = v * (local drho)^2
        if (cand < stab) stab = cand;
        dphi[j] = 2.0 * h * vd;
        if (v_out) (*v_out)[j] = vd * w;
    }
    for (int i = 0; i < n; ++i) {
        const std::size_t j = static_cast<std::size_t>(i);
        dphi[j] = std::log(dphi[j]) - density_.log_reduced[j];
    }
    return stab;
}

std::vector<double> FlowProblem::rhs(const FlowState& state) const {
    std::vector<double> out;
    rhs_into(state.t, state.phi, out, nullptr);
    return out;
}

FlowState FlowProblem::initial_state() const {
    FlowState s;
    s.t = 0.0;
    s.phi.assign(static_cast<std::size_t>(grid_.size()), 0.0);
    return s;
}

namespace {
struct Rk4Buffers {
    std::vector<double> k1, k2, k3, k4, tmp;
};

void axpy(const std::vector<double>& base, double c, const std::vector<double>& dir,
          std::vector<double>& out) {
    out.resize(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) out[i] = base[i] + c * dir[i];
}
} // namespace

FlowState FlowProblem::step(const FlowState& state, double dt) const {
    if (!(dt > 0.0)) throw ValidationError("flow step: dt must be positive");
    Rk4Buffers b;
    rhs_into(state.t, state.phi, b.k1, nullptr);
    axpy(state.phi, 0.5 * dt, b.k1, b.tmp);
    rhs_into(state.t + 0.5 * dt, b.tmp, b.k2, nullptr);
    axpy(state.phi, 0.5 * dt, b.k2, b.tmp);
    rhs_into(state.t + 0.5 * dt, b.tmp, b.k3, nullptr);
    axpy(state.phi, dt, b.k3, b.tmp);
    rhs_into(state.t + dt, b.tmp, b.k4, nullptr);

    FlowState next;
    next.t = state.t + dt;
    next.phi.resize(state.phi.size());
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < state.phi.size(); ++i) {
        next.phi[i] = state.phi[i] + w * (b.k1[i] + 2.0 * b.k2[i] + 2.0 * b.k3[i] + b.k4[i]);
    }
    next.last_dt = dt;
    next.steps = state.steps + 1;
    return next;
}

Snapshot FlowProblem::materialize(const FlowState& state) const {
    const int n = grid_.size();
    const double dx = grid_.dx();
    const double inv2dx = 0.5 / dx;
    const double invdx2 = 1.0 / (dx * dx);
    const double fac = (T_ - state.t) / T_;
    const auto& phi = state.phi;

    Snapshot snap;
    snap.t = state.t;
    snap.dt_last = state.last_dt;
    snap.steps = state.steps;
    calabi::Profile& p = snap.profile;
    p.grid = grid_;
    p.s = reference_base_coefficient(state.t);
    p.u.resize(static_cast<std::size_t>(n));
    p.du.resize(static_cast<std::size_t>(n));
    p.ddu.resize(static_cast<std::size_t>(n));

    double min_v = std::numeric_limits<double>::infinity();
    double max_phi = 0.0;
    const double vref = fac * (b0_ - a0_);
    for (int i = 0; i < n; ++i) {
        const std::size_t j = static_cast<std::size_t>(i);
        double px, pxx;
        if (i == 0) {
            px = (-3.0 * phi[0] + 4.0 * phi[1] - phi[2]) * inv2dx;
            pxx = (phi[0] - 2.0 * phi[1] + phi[2]) * invdx2;
        } else if (i == n - 1) {
            px = (3.0 * phi[j] - 4.0 * phi[j - 1] + phi[j - 2]) * inv2dx;
            pxx = (phi[j] - 2.0 * phi[j - 1] + phi[j - 2]) * invdx2;
        } else {
            px = (phi[j + 1] - phi[j - 1]) * inv2dx;
            pxx = (phi[j + 1] - 2.0 * phi[j] + phi[j - 1]) * invdx2;
        }
        const double x = grid_.x_at(i);
        const double w = x * (1.0 - x);
        p.u[j] = fac * u0_[j] + phi[j];
        p.du[j] = fac * u0p_[j] + w * px;
        p.ddu[j] = (vref + (1.0 - 2.0 * x) * px + w * pxx) * w;
        min_v = std::min(min_v, p.ddu[j]);
        max_phi = std::max(max_phi, std::abs(phi[j]));
    }
    const auto [a, b] = calabi::fit_slopes(grid_, p.du);
    p.a = a;
    p.b = b;
    snap.min_v = min_v;
    snap.max_phi = max_phi;
    return snap;
}

ClassResiduals FlowProblem::class_consistency(const Snapshot& snap) const {
    const geometry::KahlerClass cls =
        geometry::class_at(path_, geom_, std::min(snap.t, T_));
    ClassResiduals r;
    r.fiber = std::abs(calabi::fiber_area(snap.profile) - cls.f);
    r.section = std::abs(calabi::section_area(snap.profile, geom_) - cls.c);
    const double vol_class = geometry::class_volume(cls, geom_);
    const double vol = calabi::total_volume(snap.profile, geom_);
    r.volume_rel = std::abs(vol - vol_class) / std::max(vol_class, 1e-300);
    return r;
}

RunResult FlowProblem::run(const RunConfig& config) const {
    if (!(config.t_end > 0.0) || config.t_end >= T_) {
        throw ValidationError("flow run: t_end must lie in (0, T)");
    }
    std::vector<double> records = config.record_times;
    std::sort(records.begin(), records.end());
    records.erase(std::unique(records.begin(), records.end()), records.end());
    for (double tr : records) {
        if (tr < 0.0 || tr > config.t_end + 1e-15) {
            throw ValidationError("flow run: record time outside [0, t_end]");
        }
    }
    if (records.empty() || records.back() < config.t_end) records.push_back(config.t_end);

    RunResult result;
    FlowState state = initial_state();
    Rk4Buffers b;
    std::size_t next_record = 0;
    const double eps = 1e-14 * T_;

    while (true) {
        while (next_record < records.size() && state.t >= records[next_record] - eps) {
            result.snapshots.push_back(materialize(state));
            result.snapshots.back().t = records[next_record];
            ++next_record;
        }
        if (next_record >= records.size() || state.t >= config.t_end - eps) break;

        const double stab = rhs_into(state.t, state.phi, b.k1, nullptr);
        double dt = config.cfl * stab;
        if (dt < config.step_floor) {
            result.status = RunStatus::StepFloorHit;
            result.snapshots.push_back(materialize(state)); // last valid state
            break;
        }
        bool hit_record = false;
        if (state.t + dt >= records[next_record] - eps) {
            dt = records[next_record] - state.t;
            hit_record = true;
        }

        axpy(state.phi, 0.5 * dt, b.k1, b.tmp);
        rhs_into(state.t + 0.5 * dt, b.tmp, b.k2, nullptr);
        axpy(state.phi, 0.5 * dt, b.k2, b.tmp);
        rhs_into(state.t + 0.5 * dt, b.tmp, b.k3, nullptr);
        axpy(state.phi, dt, b.k3, b.tmp);
        rhs_into(state.t + dt, b.tmp, b.k4, nullptr);
        const double w = dt / 6.0;
        for (std::size_t i = 0; i < state.phi.size(); ++i) {
            state.phi[i] += w * (b.k1[i] + 2.0 * b.k2[i] + 2.0 * b.k3[i] + b.k4[i]);
        }
        state.t = hit_record ? records[next_record] : state.t + dt;
        state.last_dt = dt;
        ++state.steps;
    }

    result.total_steps = state.steps;
    result.final_time = state.t;
    return result;
}

} // namespace krflow::flow

#ifndef KRFLOW_FLOW_HPP
#define KRFLOW_FLOW_HPP

#include "krflow/calabi.hpp"
#include "krflow/geometry.hpp"

#include <cstdint>
#include <vector>

namespace krflow::flow {

/// Reduced volume density Omega_red(rho) with unit integral d(rho). It solves
/// the potential equation for the class velocity: in reduced form
/// log Omega_red = rho + (a0 rho - u0(rho))/T + const, with the linear term
/// pinned by decay at both grid ends (for model initial data this collapses
/// to Omega_red = x(1-x) exactly).
struct VolumeDensity {
    std::vector<double> omega;       // Omega_red at nodes
    std::vector<double> log_reduced; // log(Omega_red / (x(1-x))), the smooth part
    double normalization = 1.0;      // divisor applied to the raw density
    double tail_defect = 0.0;        // refinement defect of the unit-integral quadrature
};

/// Gauge potential state along the run. The assembled profile is
/// u = u_hat_t + phi with the reference u_hat_t = ((T-t)/T) u0.
struct FlowState {
    double t = 0.0;
    std::vector<double> phi;
    double last_dt = 0.0;
    std::uint64_t steps = 0;
};

struct Snapshot {
    double t = 0.0;
    calabi::Profile profile;
    double min_v = 0.0;
    double max_phi = 0.0;
    double dt_last = 0.0;
    std::uint64_t steps = 0;
};

enum class RunStatus { Completed, StepFloorHit };

struct RunResult {
    std::vector<Snapshot> snapshots;
    RunStatus status = RunStatus::Completed;
    std::uint64_t total_steps = 0;
    double final_time = 0.0;
};

struct RunConfig {
    std::vector<double> record_times; // sorted, within [0, t_end]
    double t_end = 0.0;
    double cfl = 0.45;
    double step_floor = 1e-12;
};

struct ClassResiduals {
    double fiber = 0.0;       // |fiber_area - f(t)|
    double section = 0.0;     // |section_area - c(t)|
    double volume_rel = 0.0;  // relative volume defect against the class polynomial
};

/// The gauge-fixed flow on a Hirzebruch surface in the fiber-collapse regime:
/// dphi/dt = log(2 h v / Omega_red) with (h, v) assembled from the reference
/// interpolation plus phi. Initial data is the logistic model profile.
class FlowProblem {
public:
    FlowProblem(const geometry::BundleGeometry& geom, const geometry::KahlerClassPath& path,
                double a0, double b0, const calabi::Grid& grid, double omega_scale = 1.0);

    const geometry::BundleGeometry& geom() const { return geom_; }
    const geometry::KahlerClassPath& path() const { return path_; }
    const calabi::Grid& grid() const { return grid_; }
    double singular_time() const { return T_; }
    double base_period() const { return cB_; }
    double s0() const { return s0_; }
    double a0() const { return a0_; }
    double b0() const { return b0_; }
    const VolumeDensity& volume_density() const { return density_; }

    /// Reference interpolation at time t in [0, T]: the profile of
    /// ((T-t) w0 + t pi* wB)/T. Fiber-degenerate at t = T.
    calabi::Profile reference_profile(double t) const;
    double reference_base_coefficient(double t) const;

    std::vector<double> rhs(const FlowState& state) const;
    FlowState step(const FlowState& state, double dt) const;
    FlowState initial_state() const;

    RunResult run(const RunConfig& config) const;

    Snapshot materialize(const FlowState& state) const;
    ClassResiduals class_consistency(const Snapshot& snap) const;

private:
    struct StageScratch;

    // Fills dphi and returns the stability functional min_i v_i * drho_i^2.
    double rhs_into(double t, const std::vector<double>& phi, std::vector<double>& dphi,
                    std::vector<double>* v_out) const;

    geometry::BundleGeometry geom_;
    geometry::KahlerClassPath path_;
    calabi::Grid grid_;
    double T_ = 0.0;
    double cB_ = 0.0;
    double a0_ = 0.0, b0_ = 0.0, s0_ = 0.0;
    VolumeDensity density_;
    std::vector<double> u0_;   // model potential at nodes
    std::vector<double> u0p_;  // its rho-derivative a0 + (b0-a0) x
};

/// Builds the reduced density for given initial slopes; omega_scale != 1
/// deliberately mis-normalizes (gauge experiments).
VolumeDensity build_volume_density(const calabi::Grid& grid, double a0, double b0, double T,
                                   double omega_scale = 1.0);

} // namespace krflow::flow

#endif

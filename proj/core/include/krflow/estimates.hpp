#ifndef KRFLOW_ESTIMATES_HPP
#define KRFLOW_ESTIMATES_HPP

#include "krflow/calabi.hpp"
#include "krflow/flow.hpp"
#include "krflow/fsgeom.hpp"
#include "krflow/geometry.hpp"
#include "krflow/splitbundle.hpp"

#include <optional>
#include <vector>

namespace krflow::estimates {

/// Time-indexed scalar diagnostics along a run.
struct MonitorSeries {
    std::vector<double> t;
    std::vector<double> schwarz_inf; // inf h(t)/cB
    std::vector<double> trace_sup;   // sup h/h0 + v/v0
    std::vector<double> fiber_diam;
    std::vector<double> h_sup;       // sup over samples of log(|f|^3 tr_{sing} w(t))
    std::vector<double> phi_max;
};

struct DecayFit {
    double exponent = 0.0;
    double residual = 0.0;
    double window_lo = 0.0; // t-window bounds of the fitted samples
    double window_hi = 0.0;
    int samples = 0;
};

/// Infimum over the grid of the horizontal component of the metric divided
/// by the base period cB; a positive, t-uniform lower bound is the monitored
/// Schwarz-lemma statement.
double schwarz_infimum(const flow::Snapshot& snap, const geometry::BundleGeometry& geom,
                       double cB);

/// Supremum over the grid of h(t)/h(0) + v(t)/v(0), the symmetric-reduction
/// trace of the evolving metric against the initial one.
double trace_supremum(const flow::Snapshot& snap, const flow::Snapshot& snap0,
                      const geometry::BundleGeometry& geom);

/// Least-squares slope of log(fiber_diam) against log(T - t) over samples
/// with t in [t_lo, t_hi]. Throws InsufficientSamples below 8 points.
DecayFit decay_exponent(const std::vector<double>& times, const std::vector<double>& diams,
                        double T, double t_lo, double t_hi);

/// Monitors evaluated through the split-bundle frame maps: the singular
/// comparison metric is the product metric pulled back through the global
/// sections, with its fiber part evaluated via the projective pullback
/// machinery.
class SingularComparison {
public:
    SingularComparison(const geometry::BundleGeometry& geom, double cB, SplitBundleData data,
                       std::vector<double> fiber_rhos);

    /// Default fiber sampling, log-radius values well inside the grid range.
    static SingularComparison with_defaults(const geometry::BundleGeometry& geom, double cB,
                                            const SplitBundleData& data);

    const SplitBundleData& data() const { return data_; }

    /// trace of the snapshot metric against the singular product metric at
    /// one (base, fiber) sample.
    double trace_at(const flow::Snapshot& snap, std::complex<double> q, double rho) const;

    /// sup over samples of |f|^2_h * tr_{sing} w0; the smallest constant
    /// certifying the weighted trace bound on the sample set.
    double singular_trace_check(const flow::Snapshot& snap0) const;

    /// sup over samples of H = log(|f|^3_h * tr_{sing} w(t)).
    double h_monitor(const flow::Snapshot& snap) const;

private:
    geometry::BundleGeometry geom_;
    double cB_ = 0.0;
    SplitBundleData data_;
    std::vector<double> fiber_rhos_;
};

/// Full monitor sweep over run snapshots. snapshots[0] must be the t=0 state.
MonitorSeries sweep_monitors(const std::vector<flow::Snapshot>& snapshots,
                             const geometry::BundleGeometry& geom, double cB,
                             const std::optional<SingularComparison>& sing);

} // namespace krflow::estimates

#endif

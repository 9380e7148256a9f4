#ifndef KRFLOW_METRICSPACE_HPP
#define KRFLOW_METRICSPACE_HPP

#include "krflow/flow.hpp"
#include "krflow/geometry.hpp"

#include <string>
#include <vector>

namespace krflow::metricspace {

/// Sampling controls for the product grid graph over base-sphere x fiber
/// nodes. resolution is per factor (>= 8); each factor carries resolution^2
/// grid nodes plus its two poles.
struct SpaceOptions {
    int resolution = 15;
    int threads = 0; // 0 = hardware concurrency
};

/// Label of a sampled node: its base sample index, and either a fiber sample
/// kind or "fiber-collapsed" for pure base-space nodes.
struct SampleLabel {
    int base_index = 0;
    int fiber_kind = 0; // 0 pole x=0, 1 pole x=1, 2 equator theta=0, 3 equator far
    bool fiber_collapsed = false;
};

/// Sampled metric geometry of one snapshot: shortest-path distances among a
/// designated sample subset of the graph, plus the full distance rows from
/// every sample (for fiber diameters and displacement bounds).
class FiniteMetricSpace {
public:
    double time = 0.0;
    int resolution = 0;
    int n_base_samples = 0;
    int n_fiber_kinds = 0;
    std::vector<SampleLabel> labels;            // per sample
    std::vector<int> sample_nodes;              // graph node index per sample
    std::vector<std::vector<double>> dist;      // sample x sample
    std::vector<std::vector<double>> rows;      // sample x all-graph-nodes
    std::vector<std::vector<int>> fiber_nodes;  // per base sample: node ids of its fiber
    std::vector<int> base_node_of;              // per base sample: base grid id

    int sample_index(int base_index, int fiber_kind) const;

    /// max deviation from symmetry/zero-diagonal/triangle inequality over the
    /// sample matrix.
    double triangle_defect() const;
};

/// Fixed fiber sample kinds: both poles, the equator-section point (the
/// backward-map lift), and a far equator point.
constexpr int kFiberKinds = 4;
constexpr int kLiftFiberKind = 2;

/// Builds the weighted grid graph of the snapshot metric and runs shortest
/// paths from every sample node. Base samples are the two base poles plus six
/// spread grid points (8 total).
FiniteMetricSpace build_space(const flow::Snapshot& snap, const geometry::BundleGeometry& geom,
                              const SpaceOptions& options);

/// Diameter of the fiber over base sample b measured inside the full graph:
/// max over fiber nodes of the distance to the in-fiber sample sources.
double fiber_diameter_graph(const FiniteMetricSpace& space, int base_index);

/// Distances between base samples in the collapsed limit: distances of the
/// canonical (equator-section) lifts.
std::vector<std::vector<double>> lifted_base_matrix(const FiniteMetricSpace& space);

/// Closed-form comparison matrix: great-circle distances of the base samples
/// under the metric cB * (unit-area Fubini-Study).
std::vector<std::vector<double>> base_fs_matrix(const FiniteMetricSpace& space, double cB);

struct LimitDistanceReport {
    std::vector<std::vector<double>> d_inf;   // sample x sample, latest snapshot
    std::vector<std::vector<double>> dB_inf;  // base x base via canonical lifts
    std::vector<double> cauchy_sup;           // sup |d_{t_i} - d_{t_{i+1}}| per pair
    double lift_spread = 0.0;                 // max over base pairs of lift dependence
};

/// Uniform-limit estimate from >= 3 snapshots increasing toward the collapse
/// time, with the Cauchy record of consecutive sup-differences.
LimitDistanceReport limit_distance(const std::vector<FiniteMetricSpace>& spaces);

struct SandwichResult {
    double sqrt_c = 0.0;
    double C2 = 0.0;
    bool pass = false;
};

/// Best sandwich constants sqrt(c), C2 with
/// sqrt(c) d_B <= d_inf <= C2 d_B over matched base pairs.
SandwichResult sandwich_check(const std::vector<std::vector<double>>& d_inf_base,
                              const std::vector<std::vector<double>>& d_base);

struct Correspondence {
    std::vector<int> forward;  // sample -> base index (the projection)
    std::vector<int> backward; // base index -> sample (the section lift)
};

Correspondence canonical_correspondence(const FiniteMetricSpace& space);

struct GhResult {
    double epsilon = 0.0;
    double distortion_x = 0.0;    // sup |d_X - d_B(F.,F.)|
    double displacement_x = 0.0;  // sup d_X(x, G F x)
    double distortion_b = 0.0;    // sup |d_B - d_X(G.,G.)|
};

/// Correspondence quality between the sampled space and a base-sample metric:
/// the smallest epsilon certified by the projection/section pair.
GhResult gh_epsilon(const FiniteMetricSpace& space_x,
                    const std::vector<std::vector<double>>& d_base, const Correspondence& corr);

/// Graph diameter of the round sphere of the given area, at the same
/// discretization as the base factor (oracle/diagnostic).
double sphere_graph_diameter(int resolution, double area);

} // namespace krflow::metricspace

#endif

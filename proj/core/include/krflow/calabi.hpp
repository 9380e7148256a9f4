#ifndef KRFLOW_CALABI_HPP
#define KRFLOW_CALABI_HPP

#include "krflow/geometry.hpp"

#include <filesystem>
#include <vector>

namespace krflow::calabi {

/// Compactified fiber-coordinate grid: x = e^rho / (1 + e^rho) in (0,1),
/// sampled at cell midpoints x_i = (i + 1/2)/n so both poles are excluded by
/// half a cell. Midpoint sums in x are the native quadrature for integrals
/// d(rho) = dx / (x(1-x)).
class Grid {
public:
    explicit Grid(int n = kDefaultSize);

    int size() const { return static_cast<int>(x_.size()); }
    double dx() const { return dx_; }
    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& rho() const { return rho_; }
    double x_at(int i) const { return x_[static_cast<std::size_t>(i)]; }
    double rho_at(int i) const { return rho_[static_cast<std::size_t>(i)]; }

    /// Midpoint quadrature of integrand(rho) given node values g_i:
    /// integral g d(rho) ~ dx * sum g_i / (x_i (1-x_i)).
    double integrate_drho(const std::vector<double>& g) const;

    /// Quadrature of integral g(x) / sqrt(x(1-x)) dx with the weight
    /// integrated exactly per cell (2 asin(sqrt x) antiderivative). Exact for
    /// constant g including the end cells, which carry the x^{-1/2} tails.
    double integrate_inv_sqrt_weight(const std::vector<double>& g) const;

    static constexpr int kDefaultSize = 1024;

private:
    std::vector<double> x_;
    std::vector<double> rho_;
    double dx_ = 0.0;
};

/// Symmetric metric state: base coefficient s plus a convex potential u(rho)
/// sampled on the grid. The endpoint slopes a = u'(-inf), b = u'(+inf) carry
/// the class periods: fiber area b-a, section area s+ka.
struct Profile {
    double s = 0.0;
    Grid grid;
    std::vector<double> u;
    std::vector<double> du;  // u'(rho) at nodes
    std::vector<double> ddu; // u''(rho) at nodes
    double a = 0.0;
    double b = 0.0;

    Profile() = default;
};

/// Per-node metric components of the assembled Kahler form: horizontal
/// h = s + k u' against the unit-area base form, vertical v = u'' in the
/// (rho, theta) fiber coordinates.
struct MetricComponents {
    std::vector<double> h;
    std::vector<double> v;
};

/// Derivative data recovered from raw potential samples.
struct SlopeFit {
    std::vector<double> du;
    std::vector<double> ddu;
    double a = 0.0;
    double b = 0.0;
};

/// Recovers u'(rho), u''(rho) and the endpoint slopes from bare samples.
/// The pole behaviour u ~ a log x - b log(1-x) is split off first (fitted on
/// the outermost nodes), finite differences act on the smooth remainder, and
/// the slopes are read back from u' against the e^{+-rho} decay model.
SlopeFit fit_derivatives(const Grid& grid, const std::vector<double>& u);

/// Endpoint slopes (a, b) extrapolated from u' samples: linear in x to the
/// poles, which is the leading order of the e^{+-rho} decay model and exact
/// on the logistic family.
std::pair<double, double> fit_slopes(const Grid& grid, const std::vector<double>& du);

/// The logistic model profile u = a rho + (b-a) log(1 + e^rho), the symmetric
/// potential of a round fiber of area b-a. Carries analytic derivatives.
Profile fs_model_profile(const Grid& grid, double a, double b, double s);

/// Builds a profile from raw samples via fit_derivatives.
Profile profile_from_samples(const Grid& grid, double s, const std::vector<double>& u);

/// Metric components h = s + k u', v = u''. Throws PositivityLoss when the
/// assembled form leaves the Kahler cone on the grid.
MetricComponents assemble_metric(const Profile& p, const geometry::BundleGeometry& geom);

double fiber_area(const Profile& p);
double section_area(const Profile& p, const geometry::BundleGeometry& geom);

/// Quadrature of integral (s + k u') u'' d(rho); an independent route to the
/// class volume (k f^2 + 2 f c)/2.
double total_volume(const Profile& p, const geometry::BundleGeometry& geom);

/// Pole-to-pole radial geodesic length kappa * integral sqrt(u'') d(rho) with
/// kappa = 1/(2 sqrt(pi)), calibrated so a round fiber of area A has diameter
/// sqrt(pi A)/2.
double fiber_diameter(const Profile& p);

/// Linear interpolation of per-node values at an off-grid x, clamped to the
/// edge cells.
double interp_node_values(const Grid& grid, const std::vector<double>& values, double x);

/// CSV serialization: header x,u,du,ddu at 17 significant digits.
void write_profile_csv(const std::filesystem::path& path, const Profile& p);
Profile read_profile_csv(const std::filesystem::path& path, double s);

constexpr double kRadialLengthConstant = 0.28209479177387814; // 1/(2 sqrt(pi))

} // namespace krflow::calabi

#endif

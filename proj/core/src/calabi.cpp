#include "krflow/calabi.hpp"
#include "krflow/csvio.hpp"
#include "krflow/errors.hpp"

#include <algorithm>
#include <cmath>

namespace krflow::calabi {

Grid::Grid(int n) {
    if (n < 8) throw ValidationError("grid size must be >= 8");
    x_.resize(static_cast<std::size_t>(n));
    rho_.resize(static_cast<std::size_t>(n));
    dx_ = 1.0 / static_cast<double>(n);
    for (int i = 0; i < n; ++i) {
        const double x = (static_cast<double>(i) + 0.5) * dx_;
        x_[static_cast<std::size_t>(i)] = x;
        rho_[static_cast<std::size_t>(i)] = std::log(x) - std::log1p(-x);
    }
}

double Grid::integrate_drho(const std::vector<double>& g) const {
    if (g.size() != x_.size()) throw SampleMismatch("integrate_drho: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        acc += g[i] / (x_[i] * (1.0 - x_[i]));
    }
    return acc * dx_;
}

double Grid::integrate_inv_sqrt_weight(const std::vector<double>& g) const {
    if (g.size() != x_.size()) throw SampleMismatch("integrate_inv_sqrt_weight: size mismatch");
    const int n = size();
    double acc = 0.0;
    double left = 0.0; // 2 asin(sqrt(0))
    for (int i = 0; i < n; ++i) {
        const double edge = static_cast<double>(i + 1) * dx_;
        const double right = 2.0 * std::asin(std::sqrt(std::min(edge, 1.0)));
        acc += g[static_cast<std::size_t>(i)] * (right - left);
        left = right;
    }
    return acc;
}

namespace {

// Fits u ~ alpha + slope * log(s) + gamma * s on three nodes with s-values
// (0.5, 1.5, 2.5) * dx and returns the log-coefficient. Exact for the model
// pole behaviour up to the quadratic remainder of the opposite-pole term.
double pole_log_coefficient(double d1, double d2) {
    // d1 = u(s1)-u(s0), d2 = u(s2)-u(s0); s-steps are uniform, so the linear
    // term drops out of 2*d1 - d2.
    static const double denom = 2.0 * std::log(3.0) - std::log(5.0);
    return (2.0 * d1 - d2) / denom;
}

// One-sided second-order first derivative at the ends, centered inside.
void differentiate_uniform(const std::vector<double>& f, double dx, std::vector<double>& out) {
    const std::size_t n = f.size();
    out.resize(n);
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        out[i] = (f[i + 1] - f[i - 1]) / (2.0 * dx);
    }
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx);
}

} // namespace

std::pair<double, double> fit_slopes(const Grid& grid, const std::vector<double>& du) {
    if (du.size() != static_cast<std::size_t>(grid.size()) || du.size() < 3) {
        throw SampleMismatch("fit_slopes: size mismatch");
    }
    const std::size_t m = du.size() - 1;
    const double x0 = grid.x_at(0);
    const double x1 = grid.x_at(1);
    const double a = (du[0] * x1 - du[1] * x0) / (x1 - x0);
    const double xl = grid.x_at(static_cast<int>(m));
    const double xp = grid.x_at(static_cast<int>(m) - 1);
    const double b = du[m] + (1.0 - xl) * (du[m] - du[m - 1]) / (xl - xp);
    return {a, b};
}

SlopeFit fit_derivatives(const Grid& grid, const std::vector<double>& u) {
    const int n = grid.size();
    if (static_cast<int>(u.size()) != n) throw SampleMismatch("fit_derivatives: size mismatch");
    const auto& x = grid.x();

    // Pole coefficients of u ~ a log x - b log(1-x).
    const double a0 = pole_log_coefficient(u[1] - u[0], u[2] - u[0]);
    const std::size_t m = static_cast<std::size_t>(n) - 1;
    const double b0 = -pole_log_coefficient(u[m - 1] - u[m], u[m - 2] - u[m]);

    // Smooth remainder and its x-derivative.
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::size_t j = static_cast<std::size_t>(i);
        w[j] = u[j] - a0 * std::log(x[j]) + b0 * std::log1p(-x[j]);
    }
    std::vector<double> wx;
    differentiate_uniform(w, grid.dx(), wx);

    SlopeFit fit;
    fit.du.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::size_t j = static_cast<std::size_t>(i);
        fit.du[j] = a0 * (1.0 - x[j]) + b0 * x[j] + x[j] * (1.0 - x[j]) * wx[j];
    }

    const auto [a_fit, b_fit] = fit_slopes(grid, fit.du);
    fit.a = a_fit;
    fit.b = b_fit;

    std::vector<double> dux;
    differentiate_uniform(fit.du, grid.dx(), dux);
    fit.ddu.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::size_t j = static_cast<std::size_t>(i);
        fit.ddu[j] = x[j] * (1.0 - x[j]) * dux[j];
    }
    return fit;
}

Profile fs_model_profile(const Grid& grid, double a, double b, double s) {
    if (!(a >= 0.0) || !(a < b)) throw InvalidProfile("fs_model_profile: need 0 <= a < b");
    Profile p;
    p.s = s;
    p.grid = grid;
    p.a = a;
    p.b = b;
    const int n = grid.size();
    p.u.resize(static_cast<std::size_t>(n));
    p.du.resize(static_cast<std::size_t>(n));
    p.ddu.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::size_t j = static_cast<std::size_t>(i);
        const double x = grid.x_at(i);
        const double rho = grid.rho_at(i);
        // log(1 + e^rho) = -log(1-x) on the compactified grid.
        p.u[j] = a * rho - (b - a) * std::log1p(-x);
        p.du[j] = a + (b - a) * x;
        p.ddu[j] = (b - a) * x * (1.0 - x);
    }
    return p;
}

Profile profile_from_samples(const Grid& grid, double s, const std::vector<double>& u) {
    Profile p;
    p.s = s;
    p.grid = grid;
    p.u = u;
    SlopeFit fit = fit_derivatives(grid, u);
    p.du = std::move(fit.du);
    p.ddu = std::move(fit.ddu);
    p.a = fit.a;
    p.b = fit.b;
    return p;
}

MetricComponents assemble_metric(const Profile& p, const geometry::BundleGeometry& geom) {
    const int n = p.grid.size();
    MetricComponents mc;
    mc.h.resize(static_cast<std::size_t>(n));
    mc.v.resize(static_cast<std::size_t>(n));
    const double k = static_cast<double>(geom.k);
    for (int i = 0; i < n; ++i) {
        const std::size_t j = static_cast<std::size_t>(i);
        mc.h[j] = p.s + k * p.du[j];
        mc.v[j] = p.ddu[j];
        if (!(mc.h[j] > 0.0) || !(mc.v[j] > 0.0)) {
            throw PositivityLoss("assemble_metric: metric degenerate at node " + std::to_string(i));
        }
    }
    return mc;
}

double fiber_area(const Profile& p) { return p.b - p.a; }

double section_area(const Profile& p, const geometry::BundleGeometry& geom) {
    return p.s + static_cast<double>(geom.k) * p.a;
}

double total_volume(const Profile& p, const geometry::BundleGeometry& geom) {
    const int n = p.grid.size();
    const double k = static_cast<double>(geom.k);
    std::vector<double> integrand(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::size_t j = static_cast<std::size_t>(i);
        integrand[j] = (p.s + k * p.du[j]) * p.ddu[j];
    }
    return p.grid.integrate_drho(integrand);
}

double fiber_diameter(const Profile& p) {
    const int n = p.grid.size();
    std::vector<double> q(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::size_t j = static_cast<std::size_t>(i);
        const double x = p.grid.x_at(i);
        const double density = std::max(p.ddu[j], 0.0) / (x * (1.0 - x));
        q[j] = std::sqrt(density);
    }
    return kRadialLengthConstant * p.grid.integrate_inv_sqrt_weight(q);
}

double interp_node_values(const Grid& grid, const std::vector<double>& values, double x) {
    const int n = grid.size();
    const double pos = x / grid.dx() - 0.5;
    if (pos <= 0.0) return values.front();
    if (pos >= static_cast<double>(n - 1)) return values.back();
    const int i = static_cast<int>(pos);
    const double frac = pos - static_cast<double>(i);
    const std::size_t j = static_cast<std::size_t>(i);
    return values[j] * (1.0 - frac) + values[j + 1] * frac;
}

void write_profile_csv(const std::filesystem::path& path, const Profile& p) {
    std::vector<std::vector<double>> rows;
    rows.reserve(p.u.size());
    for (std::size_t i = 0; i < p.u.size(); ++i) {
        rows.push_back({p.grid.x()[i], p.u[i], p.du[i], p.ddu[i]});
    }
    csvio::write(path, {"x", "u", "du", "ddu"}, rows, /*sig17=*/true);
}

Profile read_profile_csv(const std::filesystem::path& path, double s) {
    csvio::Table table = csvio::read(path);
    if (table.header != std::vector<std::string>{"x", "u", "du", "ddu"}) {
        throw ParseError(path.string() + ": expected header x,u,du,ddu");
    }
    const int n = static_cast<int>(table.rows.size());
    Grid grid(n);
    Profile p;
    p.s = s;
    p.grid = grid;
    p.u.resize(static_cast<std::size_t>(n));
    p.du.resize(static_cast<std::size_t>(n));
    p.ddu.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::size_t j = static_cast<std::size_t>(i);
        const auto& row = table.rows[j];
        if (std::abs(row[0] - grid.x_at(i)) > 1e-12) {
            throw ParseError(path.string() + ": node " + std::to_string(i) +
                             " is not on the half-cell grid");
        }
        p.u[j] = row[1];
        p.du[j] = row[2];
        p.ddu[j] = row[3];
    }
    const auto [a, b] = fit_slopes(grid, p.du);
    p.a = a;
    p.b = b;
    return p;
}

} // namespace krflow::calabi

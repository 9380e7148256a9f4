#include "krflow/geometry.hpp"
#include "krflow/errors.hpp"

#include <limits>

namespace krflow::geometry {

BundleGeometry::BundleGeometry(int twist) : k(twist) {
    if (twist < 0) throw ValidationError("bundle twist k must be >= 0");
}

double BundleGeometry::intersect(double a1, double b1, double a2, double b2) const {
    // (a1 C0 + b1 F).(a2 C0 + b2 F) with C0.C0 = -k, C0.F = 1, F.F = 0.
    return -static_cast<double>(k) * a1 * a2 + a1 * b2 + a2 * b1;
}

double BundleGeometry::canonical_dot_fiber() const { return -2.0; }

double BundleGeometry::canonical_dot_section() const { return static_cast<double>(k) - 2.0; }

KahlerClass class_at(const KahlerClassPath& path, const BundleGeometry& geom, double t) {
    if (t < 0.0) throw InvalidTime("class_at: t < 0");
    const SingularTime st = singular_time(path, geom);
    if (t > st.T) throw OutOfWindow("class_at: t beyond singular time");
    return KahlerClass{path.f0 - 2.0 * t, path.c0 + (static_cast<double>(geom.k) - 2.0) * t};
}

SingularTime singular_time(const KahlerClassPath& path, const BundleGeometry& geom) {
    if (path.f0 <= 0.0 || path.c0 <= 0.0) {
        return SingularTime{0.0, path.f0 <= 0.0
                                     ? (path.c0 <= 0.0 ? VanishingPeriod::Both : VanishingPeriod::Fiber)
                                     : VanishingPeriod::Section};
    }
    const double t_fiber = path.f0 / 2.0;
    const double dc = static_cast<double>(geom.k) - 2.0;
    double t_section = std::numeric_limits<double>::infinity();
    if (dc < 0.0) t_section = path.c0 / (-dc);

    if (t_fiber < t_section) return SingularTime{t_fiber, VanishingPeriod::Fiber};
    if (t_section < t_fiber) return SingularTime{t_section, VanishingPeriod::Section};
    return SingularTime{t_fiber, VanishingPeriod::Both};
}

CollapseInfo is_base_collapse(const KahlerClassPath& path, const BundleGeometry& geom) {
    const SingularTime st = singular_time(path, geom);
    if (st.vanishing != VanishingPeriod::Fiber) return CollapseInfo{false, 0.0};
    const double cB = path.c0 + (static_cast<double>(geom.k) - 2.0) * st.T;
    if (!(cB > 0.0)) return CollapseInfo{false, 0.0};
    return CollapseInfo{true, cB};
}

double class_volume(const KahlerClass& cls, const BundleGeometry& geom) {
    if (cls.f < 0.0 || cls.c < 0.0) throw ValidationError("class_volume: negative period");
    // [w] = f*C0 + (c + k f)*F, so [w]^2/2 = (k f^2 + 2 f c)/2.
    const double kf = static_cast<double>(geom.k) * cls.f;
    return 0.5 * (kf * cls.f + 2.0 * cls.f * cls.c);
}

std::string to_string(VanishingPeriod v) {
    switch (v) {
        case VanishingPeriod::None: return "none";
        case VanishingPeriod::Fiber: return "fiber";
        case VanishingPeriod::Section: return "section";
        case VanishingPeriod::Both: return "both";
    }
    return "unknown";
}

} // namespace krflow::geometry

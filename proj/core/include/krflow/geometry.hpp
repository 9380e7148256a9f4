#ifndef KRFLOW_GEOMETRY_HPP
#define KRFLOW_GEOMETRY_HPP

#include <string>

namespace krflow::geometry {

/// The Hirzebruch surface F_k = P(O + O(-k)) over P^1, described through its
/// curve basis (C0, F): C0.C0 = -k, F.F = 0, C0.F = 1. The canonical class is
/// K = -2*C0 - (k+2)*F. Periods of classes are measured in first-Chern-class
/// units, i.e. the hyperplane class of P^1 has period 1.
struct BundleGeometry {
    int k = 0;

    explicit BundleGeometry(int twist);

    // Intersection pairing of a1*C0 + b1*F with a2*C0 + b2*F.
    double intersect(double a1, double b1, double a2, double b2) const;

    // Pairings of the canonical class with the generators.
    double canonical_dot_fiber() const;   // K.F = -2 for every k
    double canonical_dot_section() const; // K.C0 = k - 2
};

/// A Kahler class on F_k recorded by its periods: f against the fiber F and
/// c against the section C0. Along the flow both are affine in t with slopes
/// df/dt = -2 and dc/dt = k-2.
struct KahlerClass {
    double f = 0.0;
    double c = 0.0;
};

/// The straight-line trajectory of Kahler classes induced by the flow,
/// together with its exit data from the Kahler cone.
struct KahlerClassPath {
    double f0 = 0.0;
    double c0 = 0.0;
};

enum class VanishingPeriod { None, Fiber, Section, Both };

struct SingularTime {
    double T = 0.0;
    VanishingPeriod vanishing = VanishingPeriod::None;
};

struct CollapseInfo {
    bool base_collapse = false;
    double cB = 0.0; // base period of the limit class when base_collapse
};

/// Class periods at time t. Throws InvalidTime for t < 0 and OutOfWindow for
/// t beyond the singular time.
KahlerClass class_at(const KahlerClassPath& path, const BundleGeometry& geom, double t);

/// First exit time of the trajectory from the Kahler cone, and which period
/// vanishes there. Degenerate initial data (f0 <= 0 or c0 <= 0) gives T = 0.
SingularTime singular_time(const KahlerClassPath& path, const BundleGeometry& geom);

/// True when the limit class is a positive multiple of the base pullback,
/// i.e. f(T) = 0 while c(T) > 0. Records cB = c(T) in that case.
CollapseInfo is_base_collapse(const KahlerClassPath& path, const BundleGeometry& geom);

/// Volume of the class with periods (f, c): expand in the (C0, F) basis and
/// square against the intersection form; equals (k f^2 + 2 f c) / 2.
double class_volume(const KahlerClass& cls, const BundleGeometry& geom);

std::string to_string(VanishingPeriod v);

} // namespace krflow::geometry

#endif

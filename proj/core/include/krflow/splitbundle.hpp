#ifndef KRFLOW_SPLITBUNDLE_HPP
#define KRFLOW_SPLITBUNDLE_HPP

#include <complex>
#include <vector>

namespace krflow::estimates {

/// Global-section data on the split bundle over P^1 whose projectivization is
/// F_k: s1 the constant section of O, s2 a degree-k polynomial section p of
/// O(k). The wedge f = s1 ^ s2 has |f|^2_h(z) = |p(z)|^2 / (1+|z|^2)^k for the
/// standard metric h.
struct SplitBundleData {
    int k = 0;
    std::vector<std::complex<double>> p_coeffs; // p(z) = sum c_j z^j, ascending
    std::vector<std::complex<double>> base_samples;

    std::complex<double> p_eval(std::complex<double> z) const;
    double weight_sq(std::complex<double> z) const; // |f|^2_h(z)
};

/// Default data: p(z) = z^k + 1 (roots on the unit circle) with an annulus
/// sample grid in log-radius, angles offset by half a spacing so no sample
/// hits a root.
SplitBundleData default_split_bundle(int k, int n_radii = 24, int n_angles = 24,
                                     double r_min = 1e-2, double r_max = 1e2);

} // namespace krflow::estimates

#endif

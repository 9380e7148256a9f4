#ifndef KRFLOW_FSGEOM_HPP
#define KRFLOW_FSGEOM_HPP

#include "krflow/splitbundle.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace krflow::fsgeom {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// An invertible linear map of C^r together with the spectrum of A*A, sorted
/// ascending. Throws SingularMap when the smallest eigenvalue is not
/// positive.
class LinearMap {
public:
    explicit LinearMap(Matrix a);

    int rank_dim() const { return static_cast<int>(a_.rows()); }
    const Matrix& matrix() const { return a_; }
    const Matrix& gram() const { return gram_; } // A*A
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

private:
    Matrix a_;
    Matrix gram_;
    Eigen::VectorXd eigenvalues_;
};

/// A point of P^{r-1} stored as a unit-normalized homogeneous representative;
/// the chart index maximizes |Z_i| for conditioning.
struct ProjectivePoint {
    Vector z;
    int chart = 0;

    static ProjectivePoint from_homogeneous(const Vector& z);
};

/// Ambient representative of a (1,0) tangent vector at a projective point;
/// the value of any metric on it is invariant under zdot -> zdot + mu * z.
struct TangentVector {
    Vector zdot;
};

/// Fubini-Study norm squared of the tangent vector at x (the M = identity
/// case of the pullback formula).
double fs_norm_sq(const ProjectivePoint& x, const TangentVector& xi);

/// Norm squared of xi in the pullback of the Fubini-Study metric under the
/// projective map induced by A, normalized so |xi|_FS = 1. Computed from the
/// vertical-projected second derivative of log(Z* A*A Z).
double pullback_norm(const LinearMap& a, const ProjectivePoint& x, const TangentVector& xi);

/// The spectral lower-bound coefficient lambda_1 lambda_2 / lambda_r^2 of the
/// pullback against the Fubini-Study metric.
double eigenvalue_bound(const LinearMap& a);

struct LemmaCheck {
    double min_ratio = 0.0;
    double bound = 0.0;
    std::uint64_t seed = 0;
    int samples = 0;
};

/// Seeded randomized certification: samples (x, xi) pairs and returns the
/// minimum of pullback_norm / eigenvalue_bound. The inequality predicts a
/// value >= 1.
LemmaCheck verify_lemma(const LinearMap& a, int sample_count, std::uint64_t seed);

/// Matrix of the global sections (s1, s2) against an h-orthonormal frame of
/// the bundle fiber at q; det(A*A) equals the wedge weight |f|^2_h(q).
LinearMap frame_map(std::complex<double> q, const estimates::SplitBundleData& data);

/// Seeded random invertible map with independent complex-gaussian entries
/// (resampled in the rare near-singular case).
Matrix random_invertible(int r, std::uint64_t seed);

/// Haar-ish random unitary (QR of a gaussian matrix).
Matrix random_unitary(int r, std::uint64_t seed);

ProjectivePoint random_point(int r, std::uint64_t seed);
TangentVector random_tangent(int r, std::uint64_t seed);

/// Stream-splitting for per-task generators derived from one master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

} // namespace krflow::fsgeom

#endif

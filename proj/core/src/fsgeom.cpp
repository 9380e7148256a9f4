#include "krflow/fsgeom.hpp"
#include "krflow/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <random>

namespace krflow::fsgeom {

LinearMap::LinearMap(Matrix a) : a_(std::move(a)) {
    if (a_.rows() != a_.cols() || a_.rows() < 2) {
        throw ValidationError("LinearMap: need a square matrix of dimension >= 2");
    }
    gram_ = a_.adjoint() * a_;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram_);
    if (solver.info() != Eigen::Success) throw SingularMap("LinearMap: eigensolver failed");
    eigenvalues_ = solver.eigenvalues(); // ascending
    if (!(eigenvalues_(0) > 0.0)) throw SingularMap("LinearMap: A*A has a nonpositive eigenvalue");
}

ProjectivePoint ProjectivePoint::from_homogeneous(const Vector& z) {
    const double norm = z.norm();
    if (!(norm > 0.0)) throw ValidationError("ProjectivePoint: zero vector");
    ProjectivePoint p;
    p.z = z / norm;
    int chart = 0;
    double best = 0.0;
    for (int i = 0; i < z.size(); ++i) {
        const double m = std::abs(p.z(i));
        if (m > best) {
            best = m;
            chart = i;
        }
    }
    p.chart = chart;
    return p;
}

namespace {

// Hermitian second derivative of log(Z* M Z) evaluated on the ambient
// tangent representative: [ (Zd* M Zd)(Z* M Z) - |Z* M Zd|^2 ] / (Z* M Z)^2.
// Invariant under Zd -> Zd + mu Z and under rescaling Z.
double log_hessian_value(const Matrix& m, const Vector& z, const Vector& zdot) {
    const std::complex<double> zmz = (z.adjoint() * m * z)(0);
    const std::complex<double> dmd = (zdot.adjoint() * m * zdot)(0);
    const std::complex<double> zmd = (z.adjoint() * m * zdot)(0);
    const double denom = zmz.real();
    if (!(denom > 0.0)) throw SingularMap("pullback: degenerate Hermitian form");
    return (dmd.real() * denom - std::norm(zmd)) / (denom * denom);
}

} // namespace

double fs_norm_sq(const ProjectivePoint& x, const TangentVector& xi) {
    const Matrix id = Matrix::Identity(x.z.size(), x.z.size());
    return log_hessian_value(id, x.z, xi.zdot);
}

double pullback_norm(const LinearMap& a, const ProjectivePoint& x, const TangentVector& xi) {
    if (x.z.size() != a.rank_dim() || xi.zdot.size() != a.rank_dim()) {
        throw SampleMismatch("pullback_norm: dimension mismatch");
    }
    const double fs = fs_norm_sq(x, xi);
    if (!(fs > 0.0)) throw ValidationError("pullback_norm: tangent vector vanishes at x");
    return log_hessian_value(a.gram(), x.z, xi.zdot) / fs;
}

double eigenvalue_bound(const LinearMap& a) {
    const auto& ev = a.eigenvalues();
    const int r = static_cast<int>(ev.size());
    return ev(0) * ev(1) / (ev(r - 1) * ev(r - 1));
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    // splitmix64 step over master + odd stride * index
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

Vector gaussian_vector(int r, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(r);
    for (int i = 0; i < r; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        v(i) = std::complex<double>(re, im);
    }
    return v;
}

Matrix gaussian_matrix(int r, std::mt19937_64& rng) {
    Matrix m(r, r);
    for (int j = 0; j < r; ++j) {
        m.col(j) = gaussian_vector(r, rng);
    }
    return m;
}

} // namespace

Matrix random_invertible(int r, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 64; ++attempt) {
        Matrix m = gaussian_matrix(r, rng);
        Eigen::JacobiSVD<Matrix> svd(m);
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) > 1e-6 * sv(0)) return m;
    }
    throw SingularMap("random_invertible: persistent near-singular draws");
}

Matrix random_unitary(int r, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Matrix m = gaussian_matrix(r, rng);
    Eigen::HouseholderQR<Matrix> qr(m);
    Matrix q = qr.householderQ();
    // Fix the phase ambiguity so the result is a deterministic function of m.
    Matrix rmat = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < r; ++i) {
        const std::complex<double> d = rmat(i, i);
        const double mag = std::abs(d);
        if (mag > 0.0) q.col(i) *= d / mag;
    }
    return q;
}

ProjectivePoint random_point(int r, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return ProjectivePoint::from_homogeneous(gaussian_vector(r, rng));
}

TangentVector random_tangent(int r, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0xA5A5A5A55A5A5A5AULL);
    return TangentVector{gaussian_vector(r, rng)};
}

LemmaCheck verify_lemma(const LinearMap& a, int sample_count, std::uint64_t seed) {
    if (sample_count < 1) throw InsufficientSamples("verify_lemma: sample_count >= 1 required");
    const int r = a.rank_dim();
    const double bound = eigenvalue_bound(a);
    double min_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < sample_count; ++i) {
        const std::uint64_t si = derive_seed(seed, static_cast<std::uint64_t>(i));
        const ProjectivePoint x = random_point(r, si);
        const TangentVector xi = random_tangent(r, si);
        const double value = pullback_norm(a, x, xi);
        const double ratio = value / bound;
        if (ratio < min_ratio) min_ratio = ratio;
    }
    return LemmaCheck{min_ratio, bound, seed, sample_count};
}

LinearMap frame_map(std::complex<double> q, const estimates::SplitBundleData& data) {
    const std::complex<double> pq = data.p_eval(q);
    if (std::norm(pq) == 0.0) throw SampleAtZero("frame_map: base point is a root of p");
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = pq / std::pow(1.0 + std::norm(q), 0.5 * static_cast<double>(data.k));
    return LinearMap(a);
}

} // namespace krflow::fsgeom

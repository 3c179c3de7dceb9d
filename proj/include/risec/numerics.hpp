#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "risec/random.hpp"

// Dense Hermitian linear-algebra kernel shared by the beamforming solvers.
// Free functions accept arbitrary Eigen expressions; results are concrete
// dynamic matrices of the expression's scalar type. Matrices here are small
// (at most ~70x70), so every routine goes through a full self-adjoint
// eigendecomposition rather than anything asymptotically clever.

namespace risec::numerics {

template <typename Derived>
using MatrixOf = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Derived>
using VectorOf = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>;
template <typename Derived>
using RealVectorOf = Eigen::Matrix<typename Eigen::NumTraits<typename Derived::Scalar>::Real, Eigen::Dynamic, 1>;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
    return a.allFinite();
}

/// Max-norm Hermitian symmetry defect, |A - A^H|_max.
template <typename Derived>
double hermitian_defect(const Eigen::MatrixBase<Derived>& a) {
    return (a.derived() - a.derived().adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a, double tol = 1e-12) {
    return a.rows() == a.cols() && hermitian_defect(a) <= tol;
}

/// Nearest Hermitian matrix, (A + A^H)/2.
template <typename Derived>
MatrixOf<Derived> hermitize(const Eigen::MatrixBase<Derived>& a) {
    return 0.5 * (a.derived() + a.derived().adjoint());
}

template <typename Derived>
struct HermitianEig {
    RealVectorOf<Derived> eigenvalues; // sorted descending
    MatrixOf<Derived> eigenvectors;    // columns match eigenvalues
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
template <typename Derived>
HermitianEig<Derived> hermitian_eig(const Eigen::MatrixBase<Derived>& a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("hermitian_eig: matrix must be square");
    if (!all_finite(a))
        throw std::invalid_argument("hermitian_eig: non-finite entries in input");
    Eigen::SelfAdjointEigenSolver<MatrixOf<Derived>> solver(a.derived());
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("hermitian_eig: eigensolver did not converge");
    // Eigen sorts ascending; flip to descending.
    const auto n = a.rows();
    HermitianEig<Derived> out;
    out.eigenvalues = solver.eigenvalues().reverse();
    out.eigenvectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        out.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    return out;
}

/// Frobenius-nearest positive semidefinite matrix: eigenvalues clipped at 0.
template <typename Derived>
MatrixOf<Derived> psd_project(const Eigen::MatrixBase<Derived>& a) {
    auto eig = hermitian_eig(hermitize(a));
    auto clipped = eig.eigenvalues.cwiseMax(0.0);
    return eig.eigenvectors * clipped.asDiagonal() * eig.eigenvectors.adjoint();
}

/// Solve A x = b for Hermitian positive definite A.
/// Throws if A is indefinite or its condition estimate exceeds 1e14.
template <typename DerivedA, typename DerivedB>
VectorOf<DerivedB> solve_hermitian(const Eigen::MatrixBase<DerivedA>& a,
                                   const Eigen::MatrixBase<DerivedB>& b) {
    if (a.rows() != a.cols() || a.rows() != b.rows())
        throw std::invalid_argument("solve_hermitian: dimension mismatch");
    auto eig = hermitian_eig(a);
    const double lambda_max = eig.eigenvalues(0);
    const double lambda_min = eig.eigenvalues(eig.eigenvalues.size() - 1);
    if (!(lambda_min > 0.0) || lambda_max / lambda_min > 1e14)
        throw std::domain_error("solve_hermitian: matrix is numerically singular (condition beyond 1e14)");
    VectorOf<DerivedB> y = eig.eigenvectors.adjoint() * b.derived();
    y.array() /= eig.eigenvalues.array();
    return eig.eigenvectors * y;
}

/// Inverse of a Hermitian positive definite matrix, same guard as
/// solve_hermitian.
template <typename Derived>
MatrixOf<Derived> inverse_hermitian(const Eigen::MatrixBase<Derived>& a) {
    auto eig = hermitian_eig(a);
    const double lambda_max = eig.eigenvalues(0);
    const double lambda_min = eig.eigenvalues(eig.eigenvalues.size() - 1);
    if (!(lambda_min > 0.0) || lambda_max / lambda_min > 1e14)
        throw std::domain_error("inverse_hermitian: matrix is numerically singular (condition beyond 1e14)");
    return eig.eigenvectors * eig.eigenvalues.cwiseInverse().asDiagonal() * eig.eigenvectors.adjoint();
}

/// log(det(A)) for Hermitian positive definite A, computed from eigenvalues.
template <typename Derived>
double log_det_hermitian(const Eigen::MatrixBase<Derived>& a) {
    auto eig = hermitian_eig(a);
    if (!(eig.eigenvalues(eig.eigenvalues.size() - 1) > 0.0))
        throw std::domain_error("log_det_hermitian: matrix is not positive definite");
    return eig.eigenvalues.array().log().sum();
}

/// Draw one CN(0, cov) vector. cov must be PSD up to a small relative slack;
/// tiny negative eigenvalues are clipped.
template <typename Derived>
Eigen::VectorXcd sample_complex_gaussian(const Eigen::MatrixBase<Derived>& cov, RandomStream& rng) {
    auto eig = hermitian_eig(cov);
    const double trace = eig.eigenvalues.sum();
    const double floor = -1e-8 * std::abs(trace);
    if (eig.eigenvalues(eig.eigenvalues.size() - 1) < floor)
        throw std::domain_error("sample_complex_gaussian: covariance is not PSD");
    const auto n = cov.rows();
    Eigen::VectorXcd z(n);
    for (Eigen::Index i = 0; i < n; ++i)
        z(i) = std::sqrt(std::max(eig.eigenvalues(i), 0.0)) * rng.complex_normal();
    return eig.eigenvectors * z;
}

/// Re(Tr(A B)) for Hermitian A, B of equal dimension.
template <typename DerivedA, typename DerivedB>
double trace_product(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("trace_product: dimension mismatch");
    // Tr(AB) = sum_ij conj(A_ij) B_ij when A is Hermitian.
    return Eigen::numext::real(a.derived().conjugate().cwiseProduct(b.derived()).sum());
}

} // namespace risec::numerics

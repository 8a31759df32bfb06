#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qroot {

/// Raised when an operation's precondition fails. Carries the measured
/// quantity that violated it (norm, asymmetry, singular value, ...).
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what, double measured = 0.0)
        : std::invalid_argument(what), measured_(measured) {}
    double measured() const noexcept { return measured_; }

private:
    double measured_;
};

using Index = Eigen::Index;

template <typename Scalar> using Complex = std::complex<Scalar>;
template <typename Scalar>
using CMatrixT = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar> using CVectorT = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using RMatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar> using RVectorT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using CMatrix = CMatrixT<double>;
using CVector = CVectorT<double>;
using RMatrix = RMatrixT<double>;
using RVector = RVectorT<double>;

inline bool is_power_of_two(Index n) {
    return n >= 1 && std::has_single_bit(static_cast<unsigned long long>(n));
}

/// log2 of a power of two; throws otherwise.
inline int log2_exact(Index n) {
    if (!is_power_of_two(n))
        throw PreconditionError("dimension " + std::to_string(n) + " is not a power of two",
                                static_cast<double>(n));
    return std::countr_zero(static_cast<unsigned long long>(n));
}

inline Index next_power_of_two(Index n) {
    return n <= 1 ? 1 : static_cast<Index>(std::bit_ceil(static_cast<unsigned long long>(n)));
}

/// Max-entry norm.
template <typename Derived> auto max_abs(const Eigen::MatrixBase<Derived>& a) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    return a.size() == 0 ? Real(0) : a.cwiseAbs().maxCoeff();
}

template <typename Derived> bool all_finite(const Eigen::MatrixBase<Derived>& a) {
    return a.allFinite();
}

/// ‖A − A†‖_max.
template <typename Derived> auto hermitian_defect(const Eigen::MatrixBase<Derived>& a) {
    return max_abs(a - a.adjoint());
}

/// ‖A†A − I‖_max.
template <typename Derived> auto unitarity_defect(const Eigen::MatrixBase<Derived>& a) {
    using S = typename Derived::Scalar;
    const Index n = a.cols();
    return max_abs(a.adjoint() * a - Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>::Identity(n, n));
}

/// DFT matrix F_n with entries ω^{jk}/√n, ω = exp(−2πi/n).
template <typename Scalar = double> CMatrixT<Scalar> qft(Index n) {
    log2_exact(n);
    CMatrixT<Scalar> f(n, n);
    const Scalar norm = Scalar(1) / std::sqrt(static_cast<Scalar>(n));
    const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    for (Index j = 0; j < n; ++j)
        for (Index k = 0; k < n; ++k) {
            const Scalar angle = -two_pi * static_cast<Scalar>((j * k) % n) / static_cast<Scalar>(n);
            f(j, k) = std::polar(norm, angle);
        }
    return f;
}

/// H^{⊗q}: entries (−1)^{popcount(i & j)} / √(2^q).
template <typename Scalar = double> CMatrixT<Scalar> hadamard_power(int q) {
    if (q < 0) throw PreconditionError("negative qubit count", q);
    const Index n = Index(1) << q;
    const Scalar norm = Scalar(1) / std::sqrt(static_cast<Scalar>(n));
    CMatrixT<Scalar> h(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            h(i, j) = (std::popcount(static_cast<unsigned long long>(i & j)) & 1) ? -norm : norm;
    return h;
}

/// Permutation exchanging two registers of size n: |j⟩|k⟩ ↦ |k⟩|j⟩.
template <typename Scalar = double> CMatrixT<Scalar> swap_registers(Index n) {
    CMatrixT<Scalar> s = CMatrixT<Scalar>::Zero(n * n, n * n);
    for (Index j = 0; j < n; ++j)
        for (Index k = 0; k < n; ++k) s(k * n + j, j * n + k) = Scalar(1);
    return s;
}

template <typename A, typename B>
auto kron(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    using S = typename A::Scalar;
    Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> out = Eigen::kroneckerProduct(a.eval(), b.eval());
    return out;
}

template <typename Scalar> struct HermitianEigen {
    RVectorT<Scalar> values;   // descending
    CMatrixT<Scalar> vectors;  // columns match values
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
/// Rejects inputs with ‖A − A†‖_max > tol.
template <typename Derived>
HermitianEigen<typename Eigen::NumTraits<typename Derived::Scalar>::Real>
eig_hermitian(const Eigen::MatrixBase<Derived>& a, double tol = 1e-12) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    if (a.rows() != a.cols()) throw PreconditionError("eig_hermitian: matrix not square");
    const Real defect = hermitian_defect(a);
    if (defect > tol)
        throw PreconditionError("eig_hermitian: input not Hermitian, asymmetry " + std::to_string(defect),
                                static_cast<double>(defect));
    CMatrixT<Real> sym = (a + a.adjoint()).template cast<Complex<Real>>() / Real(2);
    Eigen::SelfAdjointEigenSolver<CMatrixT<Real>> solver(sym);
    const Index n = sym.rows();
    HermitianEigen<Real> out{RVectorT<Real>(n), CMatrixT<Real>(n, n)};
    for (Index i = 0; i < n; ++i) {
        out.values(i) = solver.eigenvalues()(n - 1 - i);
        out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    }
    return out;
}

template <typename Scalar> struct SingularDecomposition {
    CMatrixT<Scalar> u;
    RVectorT<Scalar> s;  // descending
    CMatrixT<Scalar> v;
};

template <typename Derived>
SingularDecomposition<typename Eigen::NumTraits<typename Derived::Scalar>::Real>
svd(const Eigen::MatrixBase<Derived>& a) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    CMatrixT<Real> m = a.template cast<Complex<Real>>();
    Eigen::JacobiSVD<CMatrixT<Real>> solver(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

template <typename Derived> auto singular_values(const Eigen::MatrixBase<Derived>& a) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    CMatrixT<Real> m = a.template cast<Complex<Real>>();
    RVectorT<Real> s = Eigen::JacobiSVD<CMatrixT<Real>>(m).singularValues();
    return s;
}

template <typename Derived> auto spectral_norm(const Eigen::MatrixBase<Derived>& a) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    if (a.size() == 0) return Real(0);
    return singular_values(a)(0);
}

/// Principal square root of a Hermitian PSD matrix; negative round-off eigenvalues clamp to zero.
template <typename Derived> auto psd_sqrt(const Eigen::MatrixBase<Derived>& a) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    auto e = eig_hermitian(a, 1e-9);
    RVectorT<Real> root = e.values.cwiseMax(Real(0)).cwiseSqrt();
    CMatrixT<Real> out = e.vectors * root.template cast<Complex<Real>>().asDiagonal() * e.vectors.adjoint();
    return out;
}

inline bool is_diagonal(const CMatrix& a, double tol = 0.0) {
    if (a.rows() != a.cols()) return false;
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            if (i != j && std::abs(a(i, j)) > tol) return false;
    return true;
}

}  // namespace qroot

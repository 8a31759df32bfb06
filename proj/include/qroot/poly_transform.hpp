#pragma once

#include "qroot/block_encoding.hpp"

#include <json.hpp>

namespace qroot {

/// Real polynomial in the Chebyshev basis with a sampled sup-norm on [-1, 1].
struct Polynomial {
    RVector cheb_coeffs;
    int degree = 0;
    double sup_bound = 0.0;
    /// The polynomial approximates scale × (its nominal target); 1 unless rescaled to meet |P| <= 1/2.
    double scale = 1.0;

    double operator()(double x) const;

    static Polynomial from_chebyshev(const RVector& coeffs);
    static Polynomial from_monomial(const RVector& coeffs);
};

/// Clenshaw evaluation of sum_k c_k T_k(x).
double chebyshev_eval(const RVector& c, double x);

/// Max |P| over a Chebyshev grid of max(10·degree, 64) points plus the endpoints.
double sampled_sup(const RVector& c);

struct InversionSpec {
    double kappa = 1.0;
    double eps = 1e-6;
};

/// Odd approximation of 1/(2κx) on [1/κ, 1] (times the returned scale), bounded by 1/2 on [-1, 1].
Polynomial inverse_polynomial(const InversionSpec& spec);

/// Degree-bound constant C in degree <= C·κ·ln(κ/eps) (with ln floored at 1).
inline constexpr double kInverseDegreeConstant = 4.0;

/// P(A/alpha) for Hermitian A; requires P.sup_bound <= 1/2.
BlockEncoding qsvt_apply(const BlockEncoding& u, const Polynomial& p);

/// Block ≈ (1/(2κ))·(A/alpha)^{-1}. With allow_null, zero singular values map to zero (pseudo-inverse).
BlockEncoding invert(const BlockEncoding& u, double kappa, double eps, bool allow_null = false);

/// Block = (A/alpha)^c / 2 for Hermitian A with spectrum of A/alpha in [1/κ, 1].
BlockEncoding fractional_power(const BlockEncoding& u, double c, double kappa, double eps);

nlohmann::json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const nlohmann::json& j);

}  // namespace qroot

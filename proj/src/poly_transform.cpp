#include "qroot/poly_transform.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace qroot {

double chebyshev_eval(const RVector& c, double x) {
    double b1 = 0.0, b2 = 0.0;
    for (Index k = c.size() - 1; k >= 1; --k) {
        const double b0 = 2.0 * x * b1 - b2 + c(k);
        b2 = b1;
        b1 = b0;
    }
    return c.size() == 0 ? 0.0 : x * b1 - b2 + c(0);
}

double Polynomial::operator()(double x) const { return chebyshev_eval(cheb_coeffs, x); }

double sampled_sup(const RVector& c) {
    // p(cos θ) on θ_j = πj/M equals Re Σ_k c_k e^{-iπkj/M}, one FFT of length 2M.
    const Index deg = std::max<Index>(c.size() - 1, 1);
    Index m = 64;
    while (m < 8 * deg) m *= 2;
    std::vector<std::complex<double>> in(static_cast<std::size_t>(2 * m), 0.0), out;
    for (Index k = 0; k < c.size(); ++k) in[static_cast<std::size_t>(k)] = c(k);
    Eigen::FFT<double> fft;
    fft.fwd(out, in);
    double top = 0.0;
    for (Index j = 0; j <= m; ++j) top = std::max(top, std::abs(out[static_cast<std::size_t>(j)].real()));
    return top;
}

Polynomial Polynomial::from_chebyshev(const RVector& coeffs) {
    Polynomial p;
    Index last = coeffs.size() - 1;
    while (last > 0 && coeffs(last) == 0.0) --last;
    p.cheb_coeffs = coeffs.head(std::max<Index>(last + 1, 1));
    if (coeffs.size() == 0) p.cheb_coeffs = RVector::Zero(1);
    p.degree = static_cast<int>(p.cheb_coeffs.size() - 1);
    p.sup_bound = sampled_sup(p.cheb_coeffs);
    return p;
}

Polynomial Polynomial::from_monomial(const RVector& a) {
    // Horner in the Chebyshev basis, using x·T_k = (T_{k+1} + T_{|k-1|})/2.
    const Index n = a.size();
    RVector p = RVector::Zero(std::max<Index>(n, 1));
    if (n == 0) return from_chebyshev(p);
    p(0) = a(n - 1);
    for (Index k = n - 2; k >= 0; --k) {
        RVector q = RVector::Zero(p.size());
        for (Index m = 0; m + 1 < p.size(); ++m) {
            if (p(m) == 0.0) continue;
            if (m == 0) {
                q(1) += p(0);
            } else {
                q(m + 1) += 0.5 * p(m);
                q(m - 1) += 0.5 * p(m);
            }
        }
        q(0) += a(k);
        p = q;
    }
    return from_chebyshev(p);
}

Polynomial inverse_polynomial(const InversionSpec& spec) {
    const double kappa = spec.kappa, eps = spec.eps;
    if (!(kappa >= 1.0)) throw PreconditionError("inverse_polynomial: kappa below 1", kappa);
    if (!(eps > 0.0 && eps < 0.5)) throw PreconditionError("inverse_polynomial: eps outside (0, 1/2)", eps);

    if (kappa == 1.0) {
        RVector c = RVector::Zero(2);
        c(1) = 0.5;
        return Polynomial::from_chebyshev(c);
    }

    // g(x) = (1 - (1 - x²)^b)/x, |g - 1/x| <= eps/2 on the band, then truncated.
    const auto b = static_cast<long>(std::ceil(kappa * kappa * std::log(2.0 * kappa / eps)));
    const long j0 = std::min(b - 1, static_cast<long>(std::ceil(std::sqrt(double(b) * std::log(8.0 * double(b) / eps)))));

    // w_i = C(2b, b+i) / 4^b, suffix sums S_j = sum_{i > j} w_i.
    const double lg2b = std::lgamma(2.0 * double(b) + 1.0), ln4b = 2.0 * double(b) * std::log(2.0);
    // Terms past i_max are below e^-60 relative to the peak.
    const long i_max = std::min(b, j0 + static_cast<long>(std::ceil(std::sqrt(60.0 * double(b)))));
    std::vector<double> suffix(static_cast<std::size_t>(i_max + 2), 0.0);
    for (long i = i_max; i >= 1; --i) {
        const double w = std::exp(lg2b - std::lgamma(double(b + i) + 1.0) - std::lgamma(double(b - i) + 1.0) - ln4b);
        suffix[static_cast<std::size_t>(i - 1)] = suffix[static_cast<std::size_t>(i)] + w;
    }

    RVector c = RVector::Zero(2 * j0 + 2);
    for (long j = 0; j <= j0; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        c(2 * j + 1) = 4.0 * sign * suffix[static_cast<std::size_t>(j)] / (2.0 * kappa);
    }
    Polynomial p = Polynomial::from_chebyshev(c);
    if (p.sup_bound > 0.5) {
        const double s = 0.5 / p.sup_bound;
        p.cheb_coeffs *= s;
        p.scale = s;
        p.sup_bound = sampled_sup(p.cheb_coeffs);
    }
    return p;
}

namespace {

CostLedger transformed_cost(const CostLedger& base, double repeats) {
    CostLedger c = base.repeated(repeats);
    c.base_unitary_uses += repeats;
    return c;
}

}  // namespace

BlockEncoding qsvt_apply(const BlockEncoding& u, const Polynomial& p) {
    if (p.sup_bound > 0.5 + 1e-12)
        throw PreconditionError("qsvt_apply: polynomial sup bound " + std::to_string(p.sup_bound) + " exceeds 1/2",
                                p.sup_bound);
    const CMatrix b = u.block();
    const double defect = hermitian_defect(b);
    if (defect > 1e-10) throw PreconditionError("qsvt_apply: encoded matrix not Hermitian", defect);
    BlockEncoding out;
    if (u.diagonal) {
        CVector d(b.rows());
        for (Index i = 0; i < b.rows(); ++i) d(i) = p(std::clamp(b(i, i).real(), -1.0, 1.0));
        out.op = d.asDiagonal();
        out.diagonal = true;
    } else {
        const auto e = eig_hermitian(b, 1e-10);
        CVector d(e.values.size());
        for (Index i = 0; i < d.size(); ++i) d(i) = p(std::clamp(e.values(i), -1.0, 1.0));
        out.op = e.vectors * d.asDiagonal() * e.vectors.adjoint();
    }
    out.alpha = 1.0;
    out.ancillas = u.ancillas + 2;
    out.eps = 4.0 * p.degree * std::sqrt(u.eps / u.alpha);
    out.cost = transformed_cost(u.cost, p.degree);
    out.cost.qsvt_degree_total += p.degree;
    return out;
}

BlockEncoding invert(const BlockEncoding& u, double kappa, double eps, bool allow_null) {
    if (u.rows() != u.cols()) throw PreconditionError("invert: encoded matrix not square");
    const CMatrix b = u.block();
    const auto dec = svd(b);
    const double null_tol = 1e-12;
    const double smax = dec.s(0);
    if (smax > 1.0 + 1e-10) throw PreconditionError("invert: singular value above 1", smax);
    double smin = smax;
    for (Index i = 0; i < dec.s.size(); ++i) {
        const double s = dec.s(i);
        if (allow_null && s <= null_tol) continue;
        smin = std::min(smin, s);
    }
    if (smin < (1.0 / kappa) * (1.0 - 1e-9))
        throw PreconditionError("invert: singular value " + std::to_string(smin) + " below 1/kappa", smin);

    const Polynomial p = inverse_polynomial({kappa, eps});
    CVector d(dec.s.size());
    for (Index i = 0; i < d.size(); ++i) d(i) = (allow_null && dec.s(i) <= null_tol) ? 0.0 : p(dec.s(i));

    BlockEncoding out;
    if (u.diagonal) {
        CVector diag(b.rows());
        for (Index i = 0; i < b.rows(); ++i) {
            const double m = std::abs(b(i, i));
            diag(i) = (m <= null_tol) ? std::complex<double>(0.0) : p(m) * std::conj(b(i, i)) / m;
        }
        out.op = diag.asDiagonal();
    } else {
        out.op = dec.v * d.asDiagonal() * dec.u.adjoint();
    }
    out.alpha = 1.0;
    out.ancillas = u.ancillas + 2;
    out.eps = 4.0 * p.degree * std::sqrt(u.eps / u.alpha) + 0.5 * p.scale * eps;
    out.cost = transformed_cost(u.cost, p.degree);
    out.cost.qsvt_degree_total += p.degree;
    out.diagonal = u.diagonal;
    if (p.scale < 1.0) out = amplify(out, 1.0 / p.scale, 0.25, eps / (2.0 * kappa));
    return out;
}

BlockEncoding fractional_power(const BlockEncoding& u, double c, double kappa, double eps) {
    if (!(c > 0.0 && c < 1.0)) throw PreconditionError("fractional_power: exponent outside (0, 1)", c);
    const CMatrix b = u.block();
    const double defect = hermitian_defect(b);
    if (defect > 1e-10) throw PreconditionError("fractional_power: encoded matrix not Hermitian", defect);
    RVector lam;
    CMatrix vecs;
    if (u.diagonal) {
        lam = b.diagonal().real();
    } else {
        auto e = eig_hermitian(b, 1e-10);
        lam = e.values;
        vecs = e.vectors;
    }
    const double lo = lam.minCoeff(), hi = lam.maxCoeff();
    if (lo < 1.0 / kappa - 1e-10) throw PreconditionError("fractional_power: eigenvalue below 1/kappa", lo);
    if (hi > 1.0 + 1e-10) throw PreconditionError("fractional_power: eigenvalue above 1", hi);
    CVector d(lam.size());
    for (Index i = 0; i < d.size(); ++i) d(i) = 0.5 * std::pow(std::clamp(lam(i), 0.0, 1.0), c);

    BlockEncoding out;
    out.op = u.diagonal ? CMatrix(d.asDiagonal()) : CMatrix(vecs * d.asDiagonal() * vecs.adjoint());
    out.diagonal = u.diagonal;
    out.alpha = 1.0;
    out.ancillas = u.ancillas + 2;
    const double lg = std::max(1.0, std::log(kappa / eps));
    const double repeats = std::ceil(kappa * lg * lg);
    out.eps = eps + 0.5 * c * std::pow(kappa, 1.0 - c) * u.eps / u.alpha;
    out.cost = transformed_cost(u.cost, repeats);
    out.cost.qsvt_degree_total += repeats;
    return out;
}

nlohmann::json to_json(const Polynomial& p) {
    return {{"cheb_coeffs", std::vector<double>(p.cheb_coeffs.data(), p.cheb_coeffs.data() + p.cheb_coeffs.size())},
            {"degree", p.degree},
            {"sup_bound", p.sup_bound},
            {"scale", p.scale}};
}

Polynomial polynomial_from_json(const nlohmann::json& j) {
    const auto v = j.at("cheb_coeffs").get<std::vector<double>>();
    Polynomial p = Polynomial::from_chebyshev(Eigen::Map<const RVector>(v.data(), static_cast<Index>(v.size())));
    p.scale = j.value("scale", 1.0);
    return p;
}

}  // namespace qroot

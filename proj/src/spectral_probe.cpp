#include "qroot/spectral_probe.hpp"

#include <random>

namespace qroot {

long probe_iterations(Index dim, double eps) {
    const double lg = dim > 1 ? std::log2(double(dim)) : 0.0;
    return std::max(1L, static_cast<long>(std::ceil((1.0 / eps) * (lg + std::log2(1.0 / eps)))));
}

namespace {

double bound_of(const BlockEncoding& u) {
    if (u.diagonal) return max_abs(u.op.diagonal()) / u.alpha;
    return spectral_norm(u.op) / u.alpha;
}

}  // namespace

SpectralEstimate max_eigenvalue(const BlockEncoding& u, double eps, std::uint64_t seed) {
    if (!(eps > 0.0 && eps < 0.5)) throw PreconditionError("max_eigenvalue: eps outside (0, 1/2)", eps);
    if (u.rows() != u.cols()) throw PreconditionError("max_eigenvalue: matrix not square");
    const CMatrix b = u.block();
    const Index n = b.rows();

    // Oracle checks: PSD within tolerance, gap of the top pair.
    RVector spectrum;
    if (u.diagonal) {
        const double asym = max_abs(b.diagonal().imag());
        if (asym > 1e-12) throw PreconditionError("max_eigenvalue: diagonal not real", asym);
        spectrum = b.diagonal().real();
        std::sort(spectrum.data(), spectrum.data() + n, std::greater<>());
    } else {
        spectrum = eig_hermitian(b, 1e-10).values;
    }
    if (spectrum(n - 1) < -1e-10)
        throw PreconditionError("max_eigenvalue: operator not PSD, eigenvalue " + std::to_string(spectrum(n - 1)),
                                spectrum(n - 1));

    SpectralEstimate est;
    est.iterations = probe_iterations(n, eps);
    est.additive_error = eps;
    est.degenerate = n > 1 && spectrum(0) - spectrum(1) < 1e-6;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    if (u.diagonal) {
        // Real diagonal: the iteration stays real.
        const RVector d = b.diagonal().real();
        RVector v(n);
        for (Index i = 0; i < n; ++i) v(i) = g(rng);
        v.normalize();
        for (long k = 0; k < est.iterations; ++k) {
            v = d.cwiseProduct(v);
            const double norm = v.norm();
            if (norm == 0.0) break;
            v /= norm;
        }
        est.value = v.dot(d.cwiseProduct(v));
    } else {
        CVector v(n);
        for (Index i = 0; i < n; ++i) v(i) = {g(rng), g(rng)};
        v.normalize();
        for (long k = 0; k < est.iterations; ++k) {
            CVector w = b * v;
            const double norm = w.norm();
            if (norm == 0.0) break;
            v = w / norm;
        }
        est.value = v.dot(b * v).real();
    }

    est.cost = u.cost.repeated(double(est.iterations));
    est.cost.base_unitary_uses += double(est.iterations);
    return est;
}

namespace {

SpectralEstimate shifted(const BlockEncoding& u, double eps, std::uint64_t seed, int sign) {
    const double top = bound_of(u);
    if (top > 0.5 + 1e-12) throw PreconditionError("shift probe: |f| exceeds 1/2", top);
    const auto half = lin_combo<double>({identity(u.rows()), u}, {+1, sign});
    SpectralEstimate est = max_eigenvalue(half, eps, seed);
    est.value = sign < 0 ? 1.0 - 2.0 * est.value : 2.0 * est.value - 1.0;
    est.additive_error = 2.0 * eps;
    return est;
}

}  // namespace

SpectralEstimate min_via_shift(const BlockEncoding& u, double eps, std::uint64_t seed) {
    return shifted(u, eps, seed, -1);
}

SpectralEstimate max_via_shift(const BlockEncoding& u, double eps, std::uint64_t seed) {
    return shifted(u, eps, seed, +1);
}

ConditionEstimate condition_number(const BlockEncoding& u, double eps, double sigma_floor) {
    if (!(eps > 0.0 && eps < 0.5)) throw PreconditionError("condition_number: eps outside (0, 1/2)", eps);
    const RVector s = u.diagonal ? RVector(u.block().diagonal().cwiseAbs()) : singular_values(u.block());
    ConditionEstimate c;
    c.sigma_max = s.maxCoeff();
    c.sigma_min = s.minCoeff();
    if (c.sigma_min < sigma_floor)
        throw PreconditionError("condition_number: smallest singular value " + std::to_string(c.sigma_min) +
                                    " below floor " + std::to_string(sigma_floor),
                                c.sigma_min);
    if (c.sigma_min <= 0.0) throw PreconditionError("condition_number: singular matrix", 0.0);
    c.kappa = c.sigma_max / c.sigma_min;
    // Two extremal probes on A†A, each using u and u† per step.
    const double iters = 2.0 * double(probe_iterations(u.rows(), eps));
    c.cost = u.cost.repeated(2.0 * iters);
    c.cost.base_unitary_uses += 2.0 * iters;
    return c;
}

}  // namespace qroot

#include "qroot/circulant_pde.hpp"

#include "qroot/poly_transform.hpp"
#include "qroot/serialize.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

namespace qroot {

void CirculantSpec::validate() const {
    if (c.size() < 1) throw PreconditionError("circulant: empty first row");
    if (!is_power_of_two(c.size())) throw PreconditionError("circulant: n must be a power of two", double(c.size()));
    if (!all_finite(c)) throw PreconditionError("circulant: non-finite entry");
}

CVector circulant_eigenvalues(const CirculantSpec& spec) {
    spec.validate();
    const Index n = spec.n();
    CVector lam = CVector::Zero(n);
    for (Index k = 0; k < n; ++k)
        for (Index j = 0; j < n; ++j)
            lam(k) += spec.c(j) * std::polar(1.0, -2.0 * std::numbers::pi * double((j * k) % n) / double(n));
    return lam;
}

CMatrix circulant_matrix(const CirculantSpec& spec) {
    spec.validate();
    const Index n = spec.n();
    CMatrix m(n, n);
    for (Index r = 0; r < n; ++r)
        for (Index s = 0; s < n; ++s) m(r, s) = spec.c((s - r + n) % n);
    return m;
}

BlockEncoding circulant_encode(const CirculantSpec& spec) {
    const CVector lam = circulant_eigenvalues(spec);
    const double norm = lam.norm();
    if (!(norm > 0.0)) throw PreconditionError("circulant_encode: all eigenvalues vanish");
    const Index n = spec.n();
    const int q = std::max(log2_exact(n), 1);
    BlockEncoding d = from_state_diag(CVector(lam / norm));
    d.alpha = norm;
    d.op = lam.asDiagonal();
    const BlockEncoding f = qft_gate(n);
    const BlockEncoding f_inv = from_unitary(CMatrix(qft(n).adjoint()), q);
    return product(product(f, d), f_inv);
}

StencilSpec fd_coefficients(int order) {
    if (order < 1) throw PreconditionError("fd_coefficients: order must be positive", order);
    StencilSpec s;
    s.half_width = order;
    s.coefficients = RVector::Zero(2 * order + 1);
    const double lf = std::lgamma(order + 1.0);
    double off = 0.0;
    for (int j = 1; j <= order; ++j) {
        const double mag = std::exp(2.0 * lf - std::lgamma(order - j + 1.0) - std::lgamma(order + j + 1.0));
        const double r = 2.0 * ((j % 2 == 1) ? 1.0 : -1.0) * mag / double(j * j);
        s.coefficients(order + j) = r;
        s.coefficients(order - j) = r;
        off += r;
    }
    s.coefficients(order) = -2.0 * off;
    return s;
}

CirculantSpec stencil_circulant(const StencilSpec& s, Index n) {
    if (n < 2 * s.half_width + 1) throw PreconditionError("stencil_circulant: ring shorter than the stencil", double(n));
    CirculantSpec c;
    c.c = CVector::Zero(n);
    c.c(0) = s.r(0);
    for (int j = 1; j <= s.half_width; ++j) {
        c.c(j) += s.r(j);
        c.c(n - j) += s.r(-j);
    }
    c.validate();
    return c;
}

namespace {

/// Reflection sending e0 to the unit vector v.
CMatrix householder_to(const CVector& v) {
    const Index n = v.size();
    CVector w = -v;
    w(0) += 1.0;
    const double wn = w.squaredNorm();
    CMatrix h = CMatrix::Identity(n, n);
    if (wn > 1e-30) h -= 2.0 * w * w.adjoint() / wn;
    return h;
}

double mean_free_kappa(const CMatrix& c, double* smin_out = nullptr) {
    const RVector s = singular_values(c);
    double smin = s(0);
    for (Index i = 0; i < s.size(); ++i)
        if (s(i) > 1e-12 * s(0)) smin = std::min(smin, s(i));
    if (smin_out) *smin_out = smin;
    return s(0) / smin;
}

}  // namespace

PoissonResult poisson_periodic_solve(const RVector& g, double dx, int order, double eps) {
    const Index n = g.size();
    if (!is_power_of_two(n)) throw PreconditionError("poisson: n must be a power of two", double(n));
    if (!(dx > 0.0)) throw PreconditionError("poisson: spacing must be positive", dx);
    const double gnorm = g.norm();
    if (std::abs(g.sum()) > 1e-10 * std::max(1.0, gnorm) * std::sqrt(double(n)))
        throw PreconditionError("poisson: right-hand side is not mean-free", g.sum());

    const CirculantSpec spec = stencil_circulant(fd_coefficients(order), n);
    const BlockEncoding c_enc = circulant_encode(spec);
    const CMatrix dense = circulant_matrix(spec);
    double smin = 0.0;
    const double kappa = mean_free_kappa(dense, &smin);
    const double block_kappa = c_enc.alpha / smin;

    BlockEncoding prep;
    if (gnorm > 0.0) {
        const CVector ghat = g.cast<Complex<double>>() / gnorm;
        prep = from_unitary(householder_to(ghat), std::max(log2_exact(n), 1));
        prep.cost.base_unitary_uses = 0;
        prep.cost.state_prep_queries = 1;
    } else {
        prep = diag_oracle(RVector(RVector::Zero(n)), 1.0);
    }

    const BlockEncoding inv = invert(c_enc, block_kappa, eps, true);
    PoissonResult out;
    out.solution = product(inv, prep);
    out.u = (dx * dx * gnorm * 2.0 * block_kappa / c_enc.alpha) * out.solution.block().col(0).real();

    const RMatrix L = dense.real() / (dx * dx);
    const RVector u_dense = dx * dx * Eigen::CompleteOrthogonalDecomposition<RMatrix>(dense.real()).solve(g);

    PoissonReport& r = out.report;
    r.n = n;
    r.order = order;
    r.kappa = kappa;
    r.block_kappa = block_kappa;
    r.residual = (L * out.u - g).cwiseAbs().maxCoeff();
    r.dense_error = (out.u - u_dense).cwiseAbs().maxCoeff();
    r.cost = out.solution.cost;
    r.modeled_prior_cost = std::pow(double(n), 3);
    r.speedup = r.modeled_prior_cost / std::max(r.cost.base_unitary_uses, 1.0);
    return out;
}

std::vector<std::pair<Index, double>> laplacian_condition_numbers(const std::vector<Index>& sizes, int order) {
    std::vector<std::pair<Index, double>> out;
    const StencilSpec s = fd_coefficients(order);
    for (Index n : sizes) out.emplace_back(n, mean_free_kappa(circulant_matrix(stencil_circulant(s, n))));
    return out;
}

CirculantSpec circulant_from_json(const nlohmann::json& j) {
    CirculantSpec s;
    if (j.contains("stencil_order")) return stencil_circulant(fd_coefficients(j.at("stencil_order").get<int>()), j.at("n").get<Index>());
    const auto re = j.at("first_row").get<std::vector<double>>();
    std::vector<double> im(re.size(), 0.0);
    if (j.contains("first_row_imag")) im = j.at("first_row_imag").get<std::vector<double>>();
    if (im.size() != re.size()) throw PreconditionError("circulant spec: imaginary part length differs");
    s.c.resize(static_cast<Index>(re.size()));
    for (std::size_t i = 0; i < re.size(); ++i) s.c(static_cast<Index>(i)) = {re[i], im[i]};
    s.validate();
    return s;
}

nlohmann::json to_json(const StencilSpec& s) {
    return {{"half_width", s.half_width},
            {"coefficients", std::vector<double>(s.coefficients.data(), s.coefficients.data() + s.coefficients.size())}};
}

nlohmann::json to_json(const PoissonReport& r) {
    return {{"n", r.n},
            {"order", r.order},
            {"kappa", r.kappa},
            {"block_kappa", r.block_kappa},
            {"residual", r.residual},
            {"dense_error", r.dense_error},
            {"cost", to_json(r.cost)},
            {"modeled_prior_cost", r.modeled_prior_cost},
            {"modeled_speedup", r.speedup}};
}

void write_poisson_csv(std::ostream& os, const std::vector<PoissonReport>& reports) {
    os << "n,order,kappa,block_kappa,residual,dense_error,base_unitary_uses,modeled_depth,modeled_prior_cost,"
          "modeled_speedup\n";
    os << std::setprecision(17);
    for (const auto& r : reports)
        os << r.n << ',' << r.order << ',' << r.kappa << ',' << r.block_kappa << ',' << r.residual << ','
           << r.dense_error << ',' << r.cost.base_unitary_uses << ',' << r.cost.modeled_depth << ','
           << r.modeled_prior_cost << ',' << r.speedup << '\n';
}

}  // namespace qroot

#include "qroot/newton_solver.hpp"

#include "qroot/poly_transform.hpp"
#include "qroot/serialize.hpp"
#include "qroot/spectral_probe.hpp"

#include <cmath>

namespace qroot {

std::string to_string(DiagFStrategy s) {
    return s == DiagFStrategy::GeneralDiagF ? "GeneralDiagF" : "SharedFormDiagF";
}

void NewtonConfig::validate(const FunctionFamily& F) const {
    F.validate();
    if (T < 0) throw PreconditionError("newton: negative iteration count", T);
    if (!(eps > 0.0 && eps < 0.5)) throw PreconditionError("newton: eps outside (0, 1/2)", eps);
    if (!(Lambda >= 1.0)) throw PreconditionError("newton: Lambda below 1", Lambda);
    if (!(delta > 0.0 && delta < 0.5)) throw PreconditionError("newton: delta outside (0, 1/2)", delta);
    if (!is_power_of_two(F.n())) throw PreconditionError("newton: variable count must be a power of two", double(F.n()));
    if (strategy == DiagFStrategy::SharedFormDiagF && !F.shared_form)
        throw PreconditionError("newton: SharedFormDiagF needs a shared-form family");
}

int default_iterations(double eps) {
    if (!(eps > 0.0 && eps < 0.5)) throw PreconditionError("default_iterations: eps outside (0, 1/2)", eps);
    return static_cast<int>(std::ceil(std::log2(std::log2(1.0 / eps)))) + 2;
}

BlockEncoding encode_initial_state(const RVector& x0) { return diag_oracle(x0, 1.0); }

namespace {

using Scaled = ScaledEncoding;

Scaled rescale_to(Scaled s, double P) {
    if (P > s.prefactor * (1.0 + 1e-14)) s.enc = scale_down(s.enc, P / s.prefactor);
    s.prefactor = P;
    return s;
}

/// Moves to prefactor P, amplifying when P is below the current one.
Scaled retarget(Scaled s, double P, double delta, double eps) {
    if (P >= s.prefactor) return rescale_to(std::move(s), P);
    s.enc = amplify(s.enc, s.prefactor / P, delta, eps);
    s.prefactor = P;
    return s;
}

Scaled zero_encoding(Index dim) { return {diag_oracle(RVector(RVector::Zero(dim)), 1.0), 1.0}; }

/// Σ w_i · value_i with prefactors equalized before the signed average.
Scaled combine(const std::vector<Scaled>& parts, const std::vector<double>& weights, Index dim) {
    std::vector<Scaled> kept;
    std::vector<int> signs;
    double P = 0.0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (weights[i] == 0.0) continue;
        Scaled s = parts[i];
        s.prefactor *= std::abs(weights[i]);
        P = std::max(P, s.prefactor);
        kept.push_back(std::move(s));
        signs.push_back(weights[i] > 0 ? 1 : -1);
    }
    if (kept.empty()) return zero_encoding(dim);
    if (kept.size() == 1 && signs[0] > 0) return kept[0];
    std::vector<BlockEncoding> encs;
    for (auto& s : kept) encs.push_back(rescale_to(s, P).enc);
    return {lin_combo(encs, signs), P * double(encs.size())};
}

Scaled multiply(const Scaled& a, const Scaled& b) { return {product(a.enc, b.enc), a.prefactor * b.prefactor}; }

Scaled power(const Scaled& a, int p, Index dim) {
    if (p == 0) return {identity(dim), 1.0};
    Scaled r = a;
    for (int i = 1; i < p; ++i) r = multiply(r, a);
    return r;
}

BlockEncoding rebase(BlockEncoding u, double alpha) {
    const double r = alpha / u.alpha;
    u.op *= r;
    u.eps *= r;
    u.alpha = alpha;
    return u;
}

std::vector<BlockEncoding> powers_of(const BlockEncoding& x, int K) {
    std::vector<BlockEncoding> p{identity(x.rows())};
    for (int i = 1; i <= K; ++i) p.push_back(i == 1 ? x : product(p.back(), x));
    return p;
}

/// Hadamard-test overlap Σ_k a_k d_k for a >= 0 and d the diagonal of an encoding; prefactor 4·Σa.
Scaled overlap_gadget(const RVector& a, const BlockEncoding& d_enc) {
    const Index n = a.size();
    const double S = a.sum();
    const CVector d = d_enc.block().diagonal();
    CVector phi1 = CVector::Zero(2 * n), phi2 = CVector::Zero(2 * n);
    for (Index k = 0; k < n; ++k) {
        const double amp = std::sqrt(a(k) / S);
        phi2(k) = amp;
        phi1(k) = d(k) * amp;
    }
    phi1(n) = std::sqrt(std::max(0.0, 1.0 - phi1.head(n).squaredNorm()));
    CVector psi(4 * n);
    for (Index i = 0; i < 2 * n; ++i) {
        psi(2 * i) = 0.5 * (phi1(i) + phi2(i));
        psi(2 * i + 1) = 0.5 * (phi1(i) - phi2(i));
    }
    CostLedger producer = d_enc.cost;
    producer.state_prep_queries += 2;
    producer.modeled_depth += log2_exact(n) + 2;
    const BlockEncoding rho = density_from_purification(psi, 2, producer);
    const BlockEncoding half = scale_down(identity(2), 2.0);
    return {restrict(lin_combo<double>({rho, half}, {+1, -1}), 1), 4.0 * S};
}

/// Σ_k a_k d_k for signed a, split into nonnegative parts.
Scaled signed_overlap(const RVector& a, const BlockEncoding& d_enc) {
    const RVector pos = a.cwiseMax(0.0), neg = (-a).cwiseMax(0.0);
    std::vector<Scaled> parts;
    std::vector<double> w;
    if (pos.sum() > 0.0) {
        parts.push_back(overlap_gadget(pos, d_enc));
        w.push_back(1.0);
    }
    if (neg.sum() > 0.0) {
        parts.push_back(overlap_gadget(neg, d_enc));
        w.push_back(-1.0);
    }
    return combine(parts, w, 1);
}

Scaled unit() { return {identity(1), 1.0}; }

struct Workspace {
    std::vector<BlockEncoding> pows;
    std::vector<std::vector<Scaled>> lins;  // [j][l] linear forms a_l(j,:)·x
};

Workspace prepare(const FunctionFamily& F, const BlockEncoding& x_enc, bool need_lins) {
    Workspace w;
    w.pows = powers_of(x_enc, F.kind == FamilyKind::SumOfPowers ? F.K() : 1);
    if (need_lins && F.kind != FamilyKind::SumOfPowers) {
        w.lins.resize(static_cast<std::size_t>(F.equations()));
        for (Index j = 0; j < F.equations(); ++j)
            for (Index l = 0; l < F.layers(); ++l)
                w.lins[j].push_back(signed_overlap(RVector(F.a[l].row(j).transpose()), w.pows[1]));
    }
    return w;
}

/// (s_l + b_l) for the product family.
Scaled affine(const Workspace& w, const FunctionFamily& F, Index j, Index l) {
    return combine({w.lins[j][l], unit()}, {1.0, F.b(l)}, 1);
}

Scaled f_scalar(const FunctionFamily& F, const Workspace& w, Index j) {
    std::vector<Scaled> parts;
    std::vector<double> weights;
    switch (F.kind) {
    case FamilyKind::SumOfPowers:
        for (Index l = 0; l < F.layers(); ++l) {
            parts.push_back(signed_overlap(RVector(F.a[l].row(j).transpose()), w.pows[F.p[l]]));
            weights.push_back(1.0);
        }
        break;
    case FamilyKind::PowerOfSums:
        for (Index l = 0; l < F.layers(); ++l) {
            parts.push_back(power(w.lins[j][l], F.p[l], 1));
            weights.push_back(F.w(j, l));
        }
        break;
    case FamilyKind::ProductOfAffinePowers: {
        Scaled prod = power(affine(w, F, j, 0), F.p[0], 1);
        for (Index l = 1; l < F.layers(); ++l) prod = multiply(prod, power(affine(w, F, j, l), F.p[l], 1));
        parts.push_back(prod);
        weights.push_back(F.w(j, 0));
        break;
    }
    }
    parts.push_back(unit());
    weights.push_back(F.c(j));
    return combine(parts, weights, 1);
}

Scaled coefficient_diag(const RVector& v) {
    const double b = v.cwiseAbs().maxCoeff();
    if (b == 0.0) return zero_encoding(v.size());
    return {diag_oracle(v, b), b};
}

/// diag ∇f_j with its natural prefactor.
Scaled gradient_scaled(const FunctionFamily& F, const Workspace& w, Index j) {
    const Index n = F.n();
    std::vector<Scaled> parts;
    std::vector<double> weights;
    for (Index l = 0; l < F.layers(); ++l) {
        const RVector row = F.a[l].row(j).transpose();
        if (row.cwiseAbs().maxCoeff() == 0.0) continue;
        const int p = F.p[l];
        switch (F.kind) {
        case FamilyKind::SumOfPowers:
            parts.push_back(multiply(coefficient_diag(double(p) * row), {w.pows[p - 1], 1.0}));
            weights.push_back(1.0);
            break;
        case FamilyKind::PowerOfSums: {
            const Scaled s = power(w.lins[j][l], p - 1, 1);
            const Scaled c = coefficient_diag(row);
            parts.push_back({tensor(s.enc, c.enc), s.prefactor * c.prefactor});
            weights.push_back(F.w(j, l) * p);
            break;
        }
        case FamilyKind::ProductOfAffinePowers: {
            Scaled s = power(affine(w, F, j, l), p - 1, 1);
            for (Index m = 0; m < F.layers(); ++m)
                if (m != l) s = multiply(s, power(affine(w, F, j, m), F.p[m], 1));
            const Scaled c = coefficient_diag(row);
            parts.push_back({tensor(s.enc, c.enc), s.prefactor * c.prefactor});
            weights.push_back(F.w(j, 0) * p);
            break;
        }
        }
    }
    return combine(parts, weights, n);
}

double true_gradient_peak(const FunctionFamily& F, const BlockEncoding& x_enc) {
    return gradient_bound(F, RVector(x_enc.block().diagonal().real()));
}

Scaled apply_gradient_bound(Scaled s, double M_grad, double peak) {
    if (M_grad <= 0.0) return s;
    if (peak > M_grad * (1.0 + 1e-12)) throw PreconditionError("gradient bound exceeded", peak);
    try {
        return retarget(std::move(s), M_grad, 0.1, 1e-12);
    } catch (const PreconditionError&) {
        throw PreconditionError("gradient bound exceeded", peak);
    }
}

bool use_shared(const FunctionFamily& F, DiagFStrategy path) {
    if (path != DiagFStrategy::SharedFormDiagF) return false;
    if (!F.shared_form || F.kind != FamilyKind::SumOfPowers)
        throw PreconditionError("shared path needs a shared-form SumOfPowers family");
    return true;
}

/// Tr over (copy, k) of the purification Σ_{j,k} √(A_jk/S)|j,k⟩ acted on by diag(d) on k.
BlockEncoding shared_density(const RMatrix& A, double S, const BlockEncoding& D) {
    const Index n = A.rows();
    const CVector d = D.block().diagonal();
    const Index kept = 2 * n;
    CVector phi = CVector::Zero(kept * n * n);
    for (Index j = 0; j < n; ++j)
        for (Index k = 0; k < n; ++k) {
            if (A(j, k) == 0.0) continue;
            const double amp = std::sqrt(A(j, k) / S);
            const Index traced = j * n + k;
            phi(traced * kept + j) = amp * d(k);
            phi(traced * kept + n + j) = amp * std::sqrt(std::max(0.0, 1.0 - std::norm(d(k))));
        }
    CostLedger producer = D.cost;
    producer.state_prep_queries += 1;
    producer.modeled_depth += 2 * log2_exact(n);
    return density_from_purification(phi, kept, producer);
}

Scaled diag_F_shared(const FunctionFamily& F, const Workspace& w, double eps) {
    const Index n = F.n();
    const BlockEncoding zero = zero_encoding(n).enc;
    std::vector<Scaled> parts;
    std::vector<double> weights;
    for (Index l = 0; l < F.layers(); ++l) {
        const RMatrix& a = F.a[l];
        if (a.cwiseAbs().maxCoeff() == 0.0) continue;
        const BlockEncoding id = identity(n);
        const BlockEncoding D = fractional_power(lin_combo<double>({id, w.pows[F.p[l]]}, {+1, +1}), 0.5, 4.0, eps);
        const BlockEncoding D0 = fractional_power(lin_combo<double>({id, zero}, {+1, +1}), 0.5, 4.0, eps);
        for (int sign : {+1, -1}) {
            const RMatrix part = (double(sign) * a).cwiseMax(0.0);
            const double S = part.sum();
            if (S == 0.0) continue;
            const BlockEncoding rx = shared_density(part, S, D), r0 = shared_density(part, S, D0);
            parts.push_back({restrict(lin_combo<double>({rx, r0}, {+1, -1}), n), 16.0 * S});
            weights.push_back(double(sign));
        }
    }
    parts.push_back(coefficient_diag(F.c));
    weights.push_back(1.0);
    return combine(parts, weights, n);
}

Scaled diag_F_general(const FunctionFamily& F, const Workspace& w) {
    const Index n = F.n();
    std::vector<Scaled> fj;
    double P = 0.0;
    for (Index j = 0; j < n; ++j) {
        fj.push_back(f_scalar(F, w, j));
        P = std::max(P, fj.back().prefactor);
    }
    std::vector<BlockEncoding> parts;
    for (auto& s : fj) parts.push_back(rebase(rescale_to(s, P).enc, 1.0));
    return {direct_sum(parts), P};
}

}  // namespace

ScaledEncoding encode_diag_gradient(const FunctionFamily& F, const BlockEncoding& x_enc, Index j, double M_grad) {
    if (j < 0 || j >= F.equations()) throw PreconditionError("encode_diag_gradient: equation index out of range");
    const Workspace w = prepare(F, x_enc, true);
    Scaled s = gradient_scaled(F, w, j);
    const RVector g = gradient(F, RVector(x_enc.block().diagonal().real()), j);
    return apply_gradient_bound(std::move(s), M_grad, g.cwiseAbs().maxCoeff());
}

ScaledEncoding encode_gradient_blocks(const FunctionFamily& F, const BlockEncoding& x_enc, DiagFStrategy path,
                                      double M_grad) {
    const Index n = F.n();
    const double peak = true_gradient_peak(F, x_enc);
    if (use_shared(F, path)) {
        const Workspace w = prepare(F, x_enc, false);
        std::vector<Scaled> parts;
        std::vector<double> weights;
        for (Index l = 0; l < F.layers(); ++l) {
            const int p = F.p[l];
            RVector coeff(n * n);
            for (Index j = 0; j < n; ++j)
                for (Index k = 0; k < n; ++k) coeff(j * n + k) = double(p) * F.a[l](j, k);
            if (coeff.cwiseAbs().maxCoeff() == 0.0) continue;
            const BlockEncoding xp = p == 1 ? identity(n * n) : tensor(identity(n), w.pows[p - 1]);
            parts.push_back(multiply(coefficient_diag(coeff), {xp, 1.0}));
            weights.push_back(1.0);
        }
        return apply_gradient_bound(combine(parts, weights, n * n), M_grad, peak);
    }
    const Workspace w = prepare(F, x_enc, true);
    std::vector<Scaled> rows;
    double P = M_grad > 0.0 ? M_grad : 0.0;
    for (Index j = 0; j < n; ++j) {
        rows.push_back(gradient_scaled(F, w, j));
        if (M_grad <= 0.0) P = std::max(P, rows.back().prefactor);
    }
    std::vector<BlockEncoding> terms;
    std::vector<int> signs(static_cast<std::size_t>(n), +1);
    for (Index j = 0; j < n; ++j) {
        const Scaled r = apply_gradient_bound(rows[j], P, peak);
        terms.push_back(tensor(projector(j, n), r.enc));
    }
    return {lin_combo(terms, signs), P * double(n)};
}

ScaledEncoding hadamard_contract(const ScaledEncoding& G, Index n) {
    const int q = log2_exact(n);
    if (G.enc.rows() != n * n || !G.enc.diagonal)
        throw PreconditionError("hadamard_contract: expected a diagonal n²×n² encoding");
    // Only the diagonal of G reaches the top-left block: entry (a, b) = G[b·n + a]/n.
    const CVector g = G.enc.op.diagonal();
    CMatrix r(n, n);
    for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b) r(a, b) = g(b * n + a) / double(n);
    ScaledEncoding out;
    out.enc.op = r.transpose();
    out.enc.alpha = G.enc.alpha;
    out.enc.eps = G.enc.eps;
    out.enc.ancillas = G.enc.ancillas + q;
    // (H⊗I) twice, SWAP once, three products.
    const CostLedger hi{3.0, 0.0, 2.0, 0.0}, swap{1.0, 0.0, 1.0, 0.0};
    out.enc.cost = G.enc.cost + hi + hi + swap;
    out.enc.cost.base_unitary_uses += 6.0;
    out.enc.diagonal = false;
    out.prefactor = G.prefactor * double(n);
    return out;
}

ScaledEncoding encode_jacobian(const FunctionFamily& F, const BlockEncoding& x_enc, DiagFStrategy path,
                               double M_grad) {
    return hadamard_contract(encode_gradient_blocks(F, x_enc, path, M_grad), F.n());
}

ScaledEncoding encode_diag_F_raw(const FunctionFamily& F, const BlockEncoding& x_enc, DiagFStrategy path) {
    if (use_shared(F, path)) return diag_F_shared(F, prepare(F, x_enc, false), 1e-6);
    return diag_F_general(F, prepare(F, x_enc, true));
}

ScaledEncoding encode_diag_F(const FunctionFamily& F, const BlockEncoding& x_enc, DiagFStrategy path, double delta,
                             double eps) {
    Scaled raw = use_shared(F, path) ? diag_F_shared(F, prepare(F, x_enc, false), eps)
                                     : diag_F_general(F, prepare(F, x_enc, true));
    if (raw.prefactor <= 1.0) return rescale_to(raw, 1.0);
    return retarget(std::move(raw), 1.0, delta, eps);
}

namespace {

/// Encoding of diag(A⁻¹c)/shortfall from A = value(Aenc) and c = first column of value(C).
BlockEncoding solve_column(const Scaled& A, const Scaled& C, const NewtonConfig& cfg, StepRecord& rec) {
    const RVector s = A.enc.diagonal ? RVector(A.enc.block().diagonal().cwiseAbs()) : singular_values(A.enc.block());
    double smin = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < s.size(); ++i)
        if (!(cfg.pseudo_inverse && s(i) <= 1e-12)) smin = std::min(smin, s(i));
    if (!(smin > 0.0) || !std::isfinite(smin)) throw PreconditionError("newton: singular Jacobian", 0.0);
    if (smin * A.prefactor < (1.0 / cfg.Lambda) * (1.0 - 1e-9))
        throw PreconditionError("newton: condition exceeds Lambda", 1.0 / (smin * A.prefactor));
    const double kappa = std::max(1.0, 1.0 / smin);
    rec.kappa = kappa;

    const BlockEncoding inv = invert(A.enc, kappa, cfg.eps, cfg.pseudo_inverse);
    const BlockEncoding prod = product(inv, C.enc);
    const CVector v = prod.block().col(0);
    BlockEncoding d = from_column_diag(v, prod.cost);
    d.eps = prod.eps / prod.alpha;

    const double gamma = 2.0 * kappa * C.prefactor / A.prefactor;
    const double top = max_abs(v);
    double applied = gamma;
    if (top * gamma > (1.0 - cfg.delta)) applied = (1.0 - cfg.delta) / top;
    rec.gamma = gamma;
    rec.shortfall = gamma / applied;
    if (applied > 1.0) d = amplify(d, applied, cfg.delta, cfg.eps);
    else if (applied < 1.0) d = scale_down(d, 1.0 / applied);
    return d;
}

StepResult finish(const BlockEncoding& x_enc, BlockEncoding delta, StepRecord rec, const NewtonConfig& cfg) {
    const BlockEncoding mid = lin_combo<double>({x_enc, delta}, {+1, -1});
    StepResult out;
    out.x_next = amplify(mid, 2.0, cfg.delta, cfg.eps);
    out.delta = std::move(delta);
    rec.alpha = out.x_next.alpha;
    rec.eps = out.x_next.eps / out.x_next.alpha;
    rec.cost = out.x_next.cost;
    out.record = rec;
    return out;
}

}  // namespace

StepResult newton_step(const FunctionFamily& F, const BlockEncoding& x_enc, const NewtonConfig& cfg) {
    cfg.validate(F);
    const Index n = F.n();
    StepRecord rec;
    const Scaled J = encode_jacobian(F, x_enc, cfg.strategy, cfg.M_grad);
    const Scaled DF = encode_diag_F(F, x_enc, cfg.strategy, cfg.delta, cfg.eps);
    rec.jacobian_prefactor = J.prefactor;
    rec.diagF_prefactor = encode_diag_F_raw(F, x_enc, cfg.strategy).prefactor;
    const Scaled C{product(DF.enc, hadamard_gate(log2_exact(n))), DF.prefactor * std::sqrt(double(n))};
    BlockEncoding delta = solve_column(J, C, cfg, rec);
    return finish(x_enc, std::move(delta), rec, cfg);
}

StepResult lm_step(const FunctionFamily& F, const BlockEncoding& x_enc, double lambda, const NewtonConfig& cfg) {
    cfg.validate(F);
    if (!(lambda >= 0.0)) throw PreconditionError("lm_step: negative damping", lambda);
    const Index n = F.n();
    StepRecord rec;
    const Scaled J = encode_jacobian(F, x_enc, cfg.strategy, cfg.M_grad);
    const Scaled DF = encode_diag_F(F, x_enc, cfg.strategy, cfg.delta, cfg.eps);
    rec.jacobian_prefactor = J.prefactor;
    rec.diagF_prefactor = encode_diag_F_raw(F, x_enc, cfg.strategy).prefactor;
    const BlockEncoding JT = transpose(J.enc);
    const Scaled normal{product(JT, J.enc), J.prefactor * J.prefactor};
    const Scaled N = combine({normal, {identity(n), 1.0}}, {1.0, lambda}, n);
    const Scaled column{product(JT, product(DF.enc, hadamard_gate(log2_exact(n)))),
                        J.prefactor * DF.prefactor * std::sqrt(double(n))};
    BlockEncoding delta = solve_column(N, column, cfg, rec);
    return finish(x_enc, std::move(delta), rec, cfg);
}

namespace {

template <typename Step> SolveReport run(const FunctionFamily& F, const RVector& x0, const NewtonConfig& cfg, Step step) {
    cfg.validate(F);
    if (x0.size() != F.n()) throw PreconditionError("solve: x0 length differs from n", double(x0.size()));
    const int T = cfg.T > 0 ? cfg.T : default_iterations(cfg.eps);
    SolveReport r;
    BlockEncoding x_enc = encode_initial_state(x0);
    r.initial_cost = x_enc.cost;
    r.iterates.push_back(x0);
    r.residuals.push_back(evaluate(F, x0).norm());
    r.domain_escape = !SystemState{x0}.in_domain();
    for (int t = 0; t < T; ++t) {
        StepResult s;
        try {
            s = step(x_enc);
        } catch (const PreconditionError& e) {
            r.halted = true;
            r.message = e.what();
            break;
        }
        x_enc = std::move(s.x_next);
        const RVector x = x_enc.block().diagonal().real();
        r.steps.push_back(s.record);
        r.iterates.push_back(x);
        r.residuals.push_back(evaluate(F, x).norm());
        if (!SystemState{x}.in_domain()) r.domain_escape = true;
        ++r.iterations;
    }
    const Index n = F.n();
    r.x = x_enc.block().diagonal().real();
    r.residual = evaluate(F, r.x).norm();
    const BlockEncoding extract = product(x_enc, hadamard_gate(log2_exact(n)));
    const CVector column = extract.block().col(0);
    r.postselect_prob = column.squaredNorm();
    const double norm = r.x.norm();
    r.state = norm > 0.0 ? RVector(r.x / norm) : RVector(RVector::Zero(n));
    r.total_cost = extract.cost;
    return r;
}

}  // namespace

SolveReport solve(const FunctionFamily& F, const RVector& x0, const NewtonConfig& cfg) {
    return run(F, x0, cfg, [&](const BlockEncoding& x) { return newton_step(F, x, cfg); });
}

SolveReport solve_lm(const FunctionFamily& F, const RVector& x0, double lambda, const NewtonConfig& cfg) {
    if (!(lambda >= 0.0)) throw PreconditionError("solve_lm: negative damping", lambda);
    return run(F, x0, cfg, [&](const BlockEncoding& x) { return lm_step(F, x, lambda, cfg); });
}

double step_cost_ratio(const SolveReport& r, std::size_t t, Index n) {
    if (t >= r.steps.size()) throw PreconditionError("step_cost_ratio: step index out of range", double(t));
    const double prev = t == 0 ? r.initial_cost.modeled_depth : r.steps[t - 1].cost.modeled_depth;
    return r.steps[t].cost.modeled_depth / (prev + std::log2(double(n)));
}

nlohmann::json to_json(const StepRecord& s) {
    return {{"alpha", s.alpha},
            {"eps", s.eps},
            {"kappa", s.kappa},
            {"jacobian_prefactor", s.jacobian_prefactor},
            {"diagF_prefactor", s.diagF_prefactor},
            {"gamma", s.gamma},
            {"shortfall", s.shortfall},
            {"cost", to_json(s.cost)}};
}

nlohmann::json to_json(const SolveReport& r) {
    auto vec = [](const RVector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : r.steps) steps.push_back(to_json(s));
    return {{"x", vec(r.x)},
            {"residual", r.residual},
            {"residuals", r.residuals},
            {"postselect_prob", r.postselect_prob},
            {"state", vec(r.state)},
            {"iterations", r.iterations},
            {"halted", r.halted},
            {"domain_escape", r.domain_escape},
            {"message", r.message},
            {"steps", steps},
            {"total_cost", to_json(r.total_cost)}};
}

NewtonConfig newton_config_from_json(const nlohmann::json& j) {
    NewtonConfig c;
    c.T = j.value("T", 0);
    c.eps = j.value("eps", c.eps);
    c.Lambda = j.value("Lambda", c.Lambda);
    c.M_grad = j.value("M_grad", 0.0);
    c.pseudo_inverse = j.value("pseudo_inverse", false);
    const auto s = j.value("strategy", std::string("SharedFormDiagF"));
    if (s == "SharedFormDiagF") c.strategy = DiagFStrategy::SharedFormDiagF;
    else if (s == "GeneralDiagF") c.strategy = DiagFStrategy::GeneralDiagF;
    else throw PreconditionError("newton config: unknown strategy '" + s + "'");
    return c;
}

}  // namespace qroot

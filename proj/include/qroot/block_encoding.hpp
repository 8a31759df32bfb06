#pragma once

#include "qroot/matrix_core.hpp"

#include <Eigen/Sparse>

#include <cmath>
#include <string>
#include <vector>

namespace qroot {

/// Additive resource counts attached to every encoding.
struct CostLedger {
    double base_unitary_uses = 0.0;
    double state_prep_queries = 0.0;
    double modeled_depth = 0.0;
    double qsvt_degree_total = 0.0;

    CostLedger& operator+=(const CostLedger& o) {
        base_unitary_uses += o.base_unitary_uses;
        state_prep_queries += o.state_prep_queries;
        modeled_depth += o.modeled_depth;
        qsvt_degree_total += o.qsvt_degree_total;
        return *this;
    }
    friend CostLedger operator+(CostLedger a, const CostLedger& b) { return a += b; }
    friend bool operator==(const CostLedger&, const CostLedger&) = default;

    /// Every field multiplied by k (k repetitions of the same circuit).
    CostLedger repeated(double k) const {
        return {base_unitary_uses * k, state_prep_queries * k, modeled_depth * k, qsvt_degree_total * k};
    }
};

/// Matrix-level block encoding: the unitary holds op/alpha in its top-left block.
template <typename Scalar> struct BlockEncodingT {
    CMatrixT<Scalar> op;
    Scalar alpha = 1;
    int ancillas = 0;
    Scalar eps = 0;
    CostLedger cost;
    bool diagonal = false;

    Index rows() const { return op.rows(); }
    Index cols() const { return op.cols(); }
    /// The effective matrix op/alpha.
    CMatrixT<Scalar> block() const { return op / alpha; }
};

using BlockEncoding = BlockEncodingT<double>;

namespace detail {

inline int ceil_log2(Index m) { return m <= 1 ? 0 : log2_exact(next_power_of_two(m)); }

template <typename Scalar> Index count_nonzeros(const CMatrixT<Scalar>& a) {
    Index nz = 0;
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i) nz += (a(i, j) != Complex<Scalar>(0));
    return nz;
}

template <typename Scalar>
Eigen::SparseMatrix<Complex<Scalar>> to_sparse(const CMatrixT<Scalar>& a) {
    return a.sparseView();
}

/// Dense product with fast paths for diagonal and sparse operands.
template <typename Scalar>
CMatrixT<Scalar> multiply(const CMatrixT<Scalar>& a, bool a_diag, const CMatrixT<Scalar>& b, bool b_diag) {
    if (a_diag) return a.diagonal().asDiagonal() * b;
    if (b_diag) return a * b.diagonal().asDiagonal();
    if (a.size() >= 4096) {
        const Index threshold = a.size() / 8;
        if (count_nonzeros(a) < threshold) return to_sparse(a) * b;
        if (count_nonzeros(b) < b.size() / 8) return a * to_sparse(b);
    }
    return a * b;
}

template <typename Scalar> Scalar block_norm(const BlockEncodingT<Scalar>& u) {
    if (u.diagonal) return max_abs(u.op.diagonal()) / u.alpha;
    return spectral_norm(u.op) / u.alpha;
}

}  // namespace detail

/// Exact encoding of diag(psi) from a state-preparation unitary.
template <typename Scalar> BlockEncodingT<Scalar> from_state_diag(const CVectorT<Scalar>& psi) {
    const int q = log2_exact(psi.size());
    const Scalar norm = psi.norm();
    if (std::abs(norm - Scalar(1)) > Scalar(1e-10))
        throw PreconditionError("from_state_diag: state norm " + std::to_string(norm) + " is not 1", norm);
    BlockEncodingT<Scalar> u;
    u.op = psi.asDiagonal();
    u.alpha = 1;
    u.ancillas = q + 3;
    u.cost.modeled_depth = q;
    u.cost.state_prep_queries = 1;
    u.diagonal = true;
    return u;
}

/// diag(values)/bound loaded by a data oracle; requires max|v| <= bound.
template <typename Scalar>
BlockEncodingT<Scalar> diag_oracle(const CVectorT<Scalar>& values, Scalar bound) {
    const int q = log2_exact(values.size());
    const Scalar peak = max_abs(values);
    if (!(bound > 0) || peak > bound * (1 + Scalar(1e-12)))
        throw PreconditionError("diag_oracle: entry magnitude " + std::to_string(peak) + " exceeds bound", peak);
    BlockEncodingT<Scalar> u;
    u.op = values.asDiagonal();
    u.alpha = bound;
    u.ancillas = q + 1;
    u.cost.modeled_depth = std::max(q, 1);
    u.cost.state_prep_queries = 1;
    u.diagonal = true;
    return u;
}

template <typename Scalar>
BlockEncodingT<Scalar> diag_oracle(const RVectorT<Scalar>& values, Scalar bound) {
    return diag_oracle<Scalar>(CVectorT<Scalar>(values.template cast<Complex<Scalar>>()), bound);
}

/// diag(v) where v (norm <= 1) is the first column of a circuit with the given ledger.
template <typename Scalar>
BlockEncodingT<Scalar> from_column_diag(const CVectorT<Scalar>& v, const CostLedger& producer) {
    const int q = log2_exact(v.size());
    const Scalar norm = v.norm();
    if (norm > 1 + Scalar(1e-10))
        throw PreconditionError("from_column_diag: column norm " + std::to_string(norm) + " exceeds 1", norm);
    BlockEncodingT<Scalar> u;
    u.op = v.asDiagonal();
    u.alpha = 1;
    u.ancillas = q + 4;
    u.cost = producer;
    u.cost.modeled_depth += q + 1;
    u.cost.state_prep_queries += 1;
    u.diagonal = true;
    return u;
}

/// A known unitary used as its own encoding.
template <typename Scalar>
BlockEncodingT<Scalar> from_unitary(const CMatrixT<Scalar>& unitary, double depth) {
    if (unitary.rows() != unitary.cols()) throw PreconditionError("from_unitary: matrix not square");
    log2_exact(unitary.rows());
    if (unitary.rows() <= 256) {
        const Scalar defect = unitarity_defect(unitary);
        if (defect > Scalar(1e-9))
            throw PreconditionError("from_unitary: unitarity defect " + std::to_string(defect), defect);
    }
    BlockEncodingT<Scalar> u;
    u.op = unitary;
    u.cost.modeled_depth = depth;
    u.cost.base_unitary_uses = 1;
    u.diagonal = is_diagonal(unitary);
    return u;
}

template <typename Scalar = double> BlockEncodingT<Scalar> identity(Index dim) {
    BlockEncodingT<Scalar> u;
    log2_exact(dim);
    u.op = CMatrixT<Scalar>::Identity(dim, dim);
    u.diagonal = true;
    return u;
}

template <typename Scalar = double> BlockEncodingT<Scalar> hadamard_gate(int q) {
    return from_unitary<Scalar>(hadamard_power<Scalar>(q), 1.0);
}

template <typename Scalar = double> BlockEncodingT<Scalar> swap_gate(Index n) {
    return from_unitary<Scalar>(swap_registers<Scalar>(n), 1.0);
}

template <typename Scalar = double> BlockEncodingT<Scalar> qft_gate(Index n) {
    return from_unitary<Scalar>(qft<Scalar>(n), std::max(log2_exact(n), 1));
}

template <typename Scalar>
BlockEncodingT<Scalar> product(const BlockEncodingT<Scalar>& u1, const BlockEncodingT<Scalar>& u2) {
    if (u1.cols() != u2.rows())
        throw PreconditionError("product: inner dimensions " + std::to_string(u1.cols()) + " and " +
                                std::to_string(u2.rows()) + " differ");
    BlockEncodingT<Scalar> u;
    u.op = detail::multiply(u1.op, u1.diagonal, u2.op, u2.diagonal);
    u.alpha = u1.alpha * u2.alpha;
    u.eps = u1.alpha * u2.eps + u2.alpha * u1.eps;
    u.ancillas = u1.ancillas + u2.ancillas;
    u.cost = u1.cost + u2.cost;
    u.cost.base_unitary_uses += 2;
    u.diagonal = u1.diagonal && u2.diagonal;
    return u;
}

/// Signed average of effective matrices: block = sum_i s_i block_i / m.
template <typename Scalar>
BlockEncodingT<Scalar> lin_combo(const std::vector<BlockEncodingT<Scalar>>& terms, const std::vector<int>& signs) {
    if (terms.empty()) throw PreconditionError("lin_combo: empty term list");
    if (signs.size() != terms.size()) throw PreconditionError("lin_combo: sign count mismatch");
    const Index r = terms.front().rows(), c = terms.front().cols();
    Scalar alpha_out = 0, rel_eps = 0;
    for (const auto& t : terms) {
        if (t.rows() != r || t.cols() != c) throw PreconditionError("lin_combo: dimension mismatch");
        alpha_out = std::max(alpha_out, t.alpha);
        rel_eps = std::max(rel_eps, t.eps / t.alpha);
    }
    const auto m = static_cast<Index>(terms.size());
    BlockEncodingT<Scalar> u;
    u.op = CMatrixT<Scalar>::Zero(r, c);
    u.diagonal = true;
    int anc = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const Scalar w = Scalar(signs[i] >= 0 ? 1 : -1) * alpha_out / (terms[i].alpha * Scalar(m));
        u.op += w * terms[i].op;
        u.cost += terms[i].cost;
        u.diagonal = u.diagonal && terms[i].diagonal;
        anc = std::max(anc, terms[i].ancillas);
    }
    u.alpha = alpha_out;
    u.eps = alpha_out * rel_eps;
    u.ancillas = anc + detail::ceil_log2(m);
    u.cost.base_unitary_uses += static_cast<double>(m);
    u.cost.modeled_depth += 2.0 * detail::ceil_log2(m);
    return u;
}

template <typename Scalar>
BlockEncodingT<Scalar> tensor(const BlockEncodingT<Scalar>& u1, const BlockEncodingT<Scalar>& u2) {
    BlockEncodingT<Scalar> u;
    u.op = kron(u1.op, u2.op);
    u.alpha = u1.alpha * u2.alpha;
    u.eps = u1.alpha * u2.eps + u2.alpha * u1.eps;
    u.ancillas = u1.ancillas + u2.ancillas;
    u.cost = u1.cost + u2.cost;
    u.cost.modeled_depth = std::max(u1.cost.modeled_depth, u2.cost.modeled_depth) + 1;
    u.cost.base_unitary_uses += 2;
    u.diagonal = u1.diagonal && u2.diagonal;
    return u;
}

/// Effective matrix divided by p > 1.
template <typename Scalar> BlockEncodingT<Scalar> scale_down(BlockEncodingT<Scalar> u, Scalar p) {
    if (!(p > 1)) throw PreconditionError("scale_down: factor " + std::to_string(p) + " must exceed 1", p);
    u.alpha *= p;
    u.ancillas += 1;
    u.cost.modeled_depth += 1;
    return u;
}

/// Number of base-unitary uses charged by amplify.
inline double amplification_rounds(double gamma, double delta, double eps_target) {
    return std::ceil((gamma / delta) * std::log(gamma / eps_target));
}

/// Effective matrix multiplied by gamma > 1; singular values must sit below (1 - delta)/gamma.
template <typename Scalar>
BlockEncodingT<Scalar> amplify(BlockEncodingT<Scalar> u, Scalar gamma, Scalar delta, Scalar eps_target) {
    if (!(gamma > 1)) throw PreconditionError("amplify: gamma must exceed 1", gamma);
    if (!(delta > 0 && delta < Scalar(0.5))) throw PreconditionError("amplify: delta outside (0, 1/2)", delta);
    if (!(eps_target > 0)) throw PreconditionError("amplify: eps_target must be positive", eps_target);
    const Scalar top = detail::block_norm(u);
    const Scalar limit = (1 - delta) / gamma;
    if (top > limit * (1 + Scalar(1e-12)))
        throw PreconditionError("amplify: singular value " + std::to_string(top) + " exceeds margin " +
                                    std::to_string(limit),
                                top);
    const double m = amplification_rounds(gamma, delta, eps_target);
    u.cost = u.cost.repeated(m);
    u.cost.base_unitary_uses += m;
    u.alpha /= gamma;
    u.eps += u.alpha * eps_target;
    u.ancillas += 1;
    return u;
}

/// |j><j| on a register of size dim.
template <typename Scalar = double> BlockEncodingT<Scalar> projector(Index j, Index dim) {
    const int q = log2_exact(dim);
    if (j < 0 || j >= dim) throw PreconditionError("projector: index out of range", static_cast<double>(j));
    BlockEncodingT<Scalar> u;
    u.op = CMatrixT<Scalar>::Zero(dim, dim);
    u.op(j, j) = 1;
    u.ancillas = 1;
    u.cost.modeled_depth = std::max(q, 1);
    u.cost.state_prep_queries = 2;
    u.diagonal = true;
    return u;
}

/// Tr_A |Phi><Phi| for Phi on A (high index) ⊗ B (low index, size dimB).
template <typename Scalar>
BlockEncodingT<Scalar> density_from_purification(const CVectorT<Scalar>& phi, Index dimB,
                                                 const CostLedger& producer = {}) {
    const Scalar norm = phi.norm();
    if (std::abs(norm - Scalar(1)) > Scalar(1e-10))
        throw PreconditionError("density_from_purification: state norm " + std::to_string(norm), norm);
    if (dimB < 1 || phi.size() % dimB != 0)
        throw PreconditionError("density_from_purification: dimB does not divide state dimension");
    const int q = log2_exact(phi.size());
    log2_exact(dimB);
    const Index dimA = phi.size() / dimB;
    Eigen::Map<const CMatrixT<Scalar>> m(phi.data(), dimB, dimA);
    BlockEncodingT<Scalar> u;
    u.op = m * m.adjoint();
    u.ancillas = q - log2_exact(dimB) + 1;
    u.cost = producer.repeated(2);
    u.cost.state_prep_queries += 2;
    u.cost.modeled_depth += 2.0 * q;
    u.diagonal = is_diagonal(u.op);
    return u;
}

/// Unitary completion [[B, (I-BB†)^½], [(I-B†B)^½, -B†]] of the effective matrix B.
template <typename Scalar> CMatrixT<Scalar> dilate(const BlockEncodingT<Scalar>& u) {
    if (u.rows() != u.cols()) throw PreconditionError("dilate: encoded matrix not square");
    const CMatrixT<Scalar> b = u.block();
    const Scalar top = spectral_norm(b);
    if (top > 1 + Scalar(1e-10))
        throw PreconditionError("dilate: effective norm " + std::to_string(top) + " exceeds 1", top);
    const Index n = b.rows();
    // defect roots on the singular vectors of b
    const auto d = svd(b);
    const RVectorT<Scalar> c = (RVectorT<Scalar>::Ones(n) - d.s.cwiseMin(Scalar(1)).cwiseAbs2()).cwiseSqrt();
    const auto cd = c.template cast<Complex<Scalar>>().asDiagonal();
    CMatrixT<Scalar> w(2 * n, 2 * n);
    w.topLeftCorner(n, n) = b;
    w.topRightCorner(n, n) = d.u * cd * d.u.adjoint();
    w.bottomLeftCorner(n, n) = d.v * cd * d.v.adjoint();
    w.bottomRightCorner(n, n) = -b.adjoint();
    return w;
}

/// Block-diagonal select over encodings that share one alpha.
template <typename Scalar> BlockEncodingT<Scalar> direct_sum(const std::vector<BlockEncodingT<Scalar>>& parts) {
    if (parts.empty()) throw PreconditionError("direct_sum: empty list");
    const Scalar alpha = parts.front().alpha;
    Index total = 0;
    for (const auto& p : parts) {
        if (p.rows() != p.cols()) throw PreconditionError("direct_sum: non-square part");
        if (std::abs(p.alpha - alpha) > Scalar(1e-12) * alpha)
            throw PreconditionError("direct_sum: parts carry different alphas", p.alpha);
        total += p.rows();
    }
    log2_exact(total);
    BlockEncodingT<Scalar> u;
    u.op = CMatrixT<Scalar>::Zero(total, total);
    u.alpha = alpha;
    u.diagonal = true;
    Index at = 0;
    int anc = 0;
    for (const auto& p : parts) {
        u.op.block(at, at, p.rows(), p.rows()) = p.op;
        at += p.rows();
        u.eps = std::max(u.eps, p.eps);
        u.cost += p.cost;
        u.diagonal = u.diagonal && p.diagonal;
        anc = std::max(anc, p.ancillas);
    }
    u.ancillas = anc;
    u.cost.base_unitary_uses += static_cast<double>(parts.size());
    u.cost.modeled_depth += detail::ceil_log2(static_cast<Index>(parts.size()));
    return u;
}

template <typename Scalar> BlockEncodingT<Scalar> transpose(BlockEncodingT<Scalar> u) {
    u.op = u.op.transpose().eval();
    return u;
}

/// Top-left k×k block, obtained by post-selecting the leading register on |0>.
template <typename Scalar> BlockEncodingT<Scalar> restrict(BlockEncodingT<Scalar> u, Index k) {
    if (k < 1 || k > u.rows() || k > u.cols()) throw PreconditionError("restrict: size out of range");
    const int extra = log2_exact(u.rows()) - log2_exact(k);
    u.op = u.op.topLeftCorner(k, k).eval();
    u.ancillas += extra;
    if (k == 1) u.diagonal = true;
    return u;
}

}  // namespace qroot

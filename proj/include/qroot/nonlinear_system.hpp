#pragma once

#include "qroot/matrix_core.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qroot {

enum class FamilyKind { SumOfPowers, PowerOfSums, ProductOfAffinePowers };

std::string to_string(FamilyKind k);

/// A square system of n equations in n unknowns built from coefficient layers.
///   SumOfPowers:   f_j = c_j + Σ_l Σ_k a_l(j,k) x_k^{p_l}
///   PowerOfSums:   f_j = c_j + Σ_l w(j,l) (a_l(j,:)·x)^{p_l}
///   ProductOfAffinePowers: f_j = c_j + w(j,0) Π_l (a_l(j,:)·x + b_l)^{p_l}
struct FunctionFamily {
    FamilyKind kind = FamilyKind::SumOfPowers;
    std::vector<RMatrix> a;
    std::vector<int> p;
    RMatrix w;
    RVector b;
    RVector c;
    bool shared_form = false;

    Index n() const { return a.empty() ? 0 : a.front().cols(); }
    Index equations() const { return a.empty() ? 0 : a.front().rows(); }
    Index layers() const { return static_cast<Index>(a.size()); }
    int K() const;
    void validate() const;
};

/// SumOfPowers with layer i carrying power i+1.
FunctionFamily sum_of_powers(const std::vector<RMatrix>& layers, const RVector& c, bool shared_form = true);
/// F(x) = A x - rhs.
FunctionFamily linear_system(const RMatrix& A, const RVector& rhs);

struct SystemState {
    RVector x;
    bool in_domain() const { return x.size() == 0 || x.cwiseAbs().maxCoeff() <= 0.5 + 1e-12; }
};

struct JacobianBound {
    double M_grad = 1.0;
    double Lambda = 1.0;
};

/// Raw evaluation with no domain or value checks.
RVector evaluate(const FunctionFamily& F, const RVector& x);
/// Checked evaluation: state inside [-1/2, 1/2]^n and |f_j| <= 1/2.
RVector eval(const FunctionFamily& F, const SystemState& s);

RVector gradient(const FunctionFamily& F, const RVector& x, Index j);
RMatrix jacobian(const FunctionFamily& F, const RVector& x);

/// max_j ‖∇f_j(x)‖_∞.
double gradient_bound(const FunctionFamily& F, const RVector& x);

/// Uniform on [-0.4, 0.4]^n from the seed.
RVector default_initial_state(Index n, std::uint64_t seed);

struct IterateTrace {
    std::vector<RVector> iterates;
    std::vector<double> residuals;
    bool halted = false;
    int halt_iteration = -1;
    bool domain_escape = false;
};

/// x_{t+1} = x_t - J(x_t)^{-1} F(x_t); halts on a singular Jacobian.
IterateTrace classical_newton(const FunctionFamily& F, const RVector& x0, int T);

/// (JᵀJ + λI) Δ = -JᵀF, x_{t+1} = x_t + Δ.
IterateTrace classical_lm(const FunctionFamily& F, const RVector& x0, double lambda, int T);

FunctionFamily family_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FunctionFamily& F);
/// Columns: iteration, x_0..x_{n-1}, residual.
void write_iterates_csv(std::ostream& os, const IterateTrace& trace);

}  // namespace qroot

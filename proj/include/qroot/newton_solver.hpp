#pragma once

#include "qroot/block_encoding.hpp"
#include "qroot/nonlinear_system.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace qroot {

enum class DiagFStrategy { GeneralDiagF, SharedFormDiagF };

std::string to_string(DiagFStrategy s);

/// An encoding together with the factor that maps its block back to the target: target = block · prefactor.
struct ScaledEncoding {
    BlockEncoding enc;
    double prefactor = 1.0;

    CMatrix value() const { return enc.block() * prefactor; }
};

struct NewtonConfig {
    int T = 0;  // 0 selects default_iterations(eps)
    double eps = 1e-6;
    double Lambda = 1e3;  // cap on 1/σ_min(J)
    double M_grad = 0.0;  // 0 derives the bound from the coefficients
    DiagFStrategy strategy = DiagFStrategy::SharedFormDiagF;
    bool pseudo_inverse = false;  // invert on the complement of the kernel
    double delta = 0.1;

    void validate(const FunctionFamily& F) const;
};

/// ceil(log2 log2(1/eps)) + 2.
int default_iterations(double eps);

/// Initial diag(x0) encoding from a bounded data oracle.
BlockEncoding encode_initial_state(const RVector& x0);

/// (1/M)·diag ∇f_j(x); prefactor M.
ScaledEncoding encode_diag_gradient(const FunctionFamily& F, const BlockEncoding& x_enc, Index j, double M_grad = 0.0);

/// (1/M)·⊕_j diag ∇f_j(x) on an n² register (index j·n + k); the general path carries an extra 1/n.
ScaledEncoding encode_gradient_blocks(const FunctionFamily& F, const BlockEncoding& x_enc, DiagFStrategy path,
                                      double M_grad = 0.0);

/// Top-left n×n block of (H⊗I)·G·SWAP·(H⊗I), transposed: maps ⊕ diag ∇f_j/M to J/(M·n).
ScaledEncoding hadamard_contract(const ScaledEncoding& G, Index n);

/// J(x)/prefactor: prefactor M·n on the shared path, M·n² on the general path.
ScaledEncoding encode_jacobian(const FunctionFamily& F, const BlockEncoding& x_enc, DiagFStrategy path,
                               double M_grad = 0.0);

/// diag F(x)/prefactor before amplification.
ScaledEncoding encode_diag_F_raw(const FunctionFamily& F, const BlockEncoding& x_enc, DiagFStrategy path);

/// diag F(x) with the prefactor removed by amplification.
ScaledEncoding encode_diag_F(const FunctionFamily& F, const BlockEncoding& x_enc, DiagFStrategy path,
                             double delta = 0.1, double eps = 1e-6);

struct StepRecord {
    double alpha = 1.0;
    double eps = 0.0;
    CostLedger cost;
    double kappa = 0.0;           // 1/σ_min of the inverted block
    double jacobian_prefactor = 0.0;
    double diagF_prefactor = 0.0;  // before amplification
    double gamma = 0.0;           // requested Δ amplification
    double shortfall = 1.0;       // requested / applied gamma
};

struct StepResult {
    BlockEncoding x_next;
    BlockEncoding delta;
    StepRecord record;
};

/// diag(x) ↦ diag(x − J⁻¹F).
StepResult newton_step(const FunctionFamily& F, const BlockEncoding& x_enc, const NewtonConfig& cfg);

/// diag(x) ↦ diag(x − (JᵀJ + λI)⁻¹JᵀF).
StepResult lm_step(const FunctionFamily& F, const BlockEncoding& x_enc, double lambda, const NewtonConfig& cfg);

struct SolveReport {
    std::vector<StepRecord> steps;
    std::vector<RVector> iterates;
    std::vector<double> residuals;
    RVector x;
    double residual = 0.0;
    double postselect_prob = 0.0;
    RVector state;
    CostLedger initial_cost;
    CostLedger total_cost;
    int iterations = 0;
    bool halted = false;
    bool domain_escape = false;
    std::string message;
};

SolveReport solve(const FunctionFamily& F, const RVector& x0, const NewtonConfig& cfg);
SolveReport solve_lm(const FunctionFamily& F, const RVector& x0, double lambda, const NewtonConfig& cfg);

/// depth(x_{t+1}) / (depth(x_t) + log2 n) for step t.
double step_cost_ratio(const SolveReport& r, std::size_t t, Index n);

nlohmann::json to_json(const StepRecord& s);
nlohmann::json to_json(const SolveReport& r);
NewtonConfig newton_config_from_json(const nlohmann::json& j);

}  // namespace qroot

#pragma once

#include "qroot/block_encoding.hpp"

#include <json.hpp>

#include <iosfwd>
#include <vector>

namespace qroot {

/// Circulant matrix given by its first row: C(r, s) = c[(s - r) mod n].
struct CirculantSpec {
    CVector c;

    Index n() const { return c.size(); }
    void validate() const;
};

/// Symmetric second-derivative stencil r_{-h..h}; coefficients[j + h] = r_j.
struct StencilSpec {
    int half_width = 1;
    RVector coefficients;

    double r(int j) const { return coefficients(j + half_width); }
};

/// λ_k = Σ_j c_j ω^{jk}, ω = exp(-2πi/n).
CVector circulant_eigenvalues(const CirculantSpec& spec);

CMatrix circulant_matrix(const CirculantSpec& spec);

/// QFT · diag(λ/‖λ‖) · QFT†; alpha = ‖λ‖₂.
BlockEncoding circulant_encode(const CirculantSpec& spec);

StencilSpec fd_coefficients(int order);

/// Periodic first row of the stencil on an n-point ring (unscaled by 1/dx²).
CirculantSpec stencil_circulant(const StencilSpec& s, Index n);

struct PoissonReport {
    Index n = 0;
    int order = 1;
    double kappa = 0.0;             // σmax/σmin over the mean-free subspace
    double block_kappa = 0.0;       // condition bound handed to the inverter
    double residual = 0.0;          // ‖L u − g‖∞
    double dense_error = 0.0;       // ‖u − u_dense‖∞
    CostLedger cost;                // this pipeline
    double modeled_prior_cost = 0.0;  // n³ model for the exponentiation-based route
    double speedup = 0.0;           // modeled_prior_cost / cost.base_unitary_uses
};

struct PoissonResult {
    BlockEncoding solution;  // first column ∝ u
    RVector u;
    PoissonReport report;
};

/// Solves (1/dx²)·C u = g on the periodic grid with u mean-free.
PoissonResult poisson_periodic_solve(const RVector& g, double dx, int order, double eps);

/// (n, κ) pairs for the periodic Laplacian of the given order.
std::vector<std::pair<Index, double>> laplacian_condition_numbers(const std::vector<Index>& sizes, int order);

CirculantSpec circulant_from_json(const nlohmann::json& j);
nlohmann::json to_json(const StencilSpec& s);
nlohmann::json to_json(const PoissonReport& r);
void write_poisson_csv(std::ostream& os, const std::vector<PoissonReport>& reports);

}  // namespace qroot

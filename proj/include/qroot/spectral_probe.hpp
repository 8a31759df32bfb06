#pragma once

#include "qroot/block_encoding.hpp"

#include <cstdint>

namespace qroot {

struct SpectralEstimate {
    double value = 0.0;
    double additive_error = 0.0;
    long iterations = 0;
    CostLedger cost;
    /// Set when the two largest eigenvalues sit within 1e-6 of each other.
    bool degenerate = false;
};

/// Iteration budget ceil((1/eps)(log2 dim + log2(1/eps))).
long probe_iterations(Index dim, double eps);

/// Largest eigenvalue of a PSD effective matrix by power iteration from a seeded random start.
SpectralEstimate max_eigenvalue(const BlockEncoding& u, double eps, std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

/// min f = 1 - 2·λmax((I - diag f)/2) for |f| <= 1/2; additive error 2·eps.
SpectralEstimate min_via_shift(const BlockEncoding& u, double eps, std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

/// max f = 2·λmax((I + diag f)/2) - 1 for |f| <= 1/2; additive error 2·eps.
SpectralEstimate max_via_shift(const BlockEncoding& u, double eps, std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

struct ConditionEstimate {
    double kappa = 1.0;
    double sigma_max = 0.0;
    double sigma_min = 0.0;
    CostLedger cost;
};

/// σmax/σmin of the effective matrix; rejects σmin below sigma_floor.
ConditionEstimate condition_number(const BlockEncoding& u, double eps, double sigma_floor = 0.0);

}  // namespace qroot

#pragma once

#include "qroot/matrix_core.hpp"

#include <functional>
#include <string>
#include <vector>

namespace qroot {

struct FitResult {
    std::vector<double> coefficients;
    double r_squared = 0.0;
    double max_residual = 0.0;
    std::string form;
};

/// Least squares y ≈ Σ_k c_k·basis_k(x).
FitResult least_squares(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<std::function<double(double)>>& basis, std::string form);

/// y ≈ a + b·log2 x.
FitResult fit_log(const std::vector<double>& x, const std::vector<double>& y);
/// y ≈ a + b·log2 x + c·log2² x.
FitResult fit_log_quadratic(const std::vector<double>& x, const std::vector<double>& y);
/// ln y ≈ ln c + e·ln x; coefficients = {c, e}.
FitResult fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qroot

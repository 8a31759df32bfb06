#pragma once

#include "qroot/block_encoding.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace qroot {

/// n sample points of M variables, one point per row.
struct SampleGrid {
    RMatrix points;

    Index n() const { return points.rows(); }
    Index M() const { return points.cols(); }

    static SampleGrid uniform(double lo, double hi, Index n);
    /// Rows appended by repeating the last point until n is a power of two.
    SampleGrid padded() const;
};

struct Monomial {
    double a = 0.0;
    std::vector<int> k;
};

struct MultivariatePolynomial {
    int M = 1;
    std::vector<Monomial> terms;

    double operator()(const RVector& x) const;
    int degree() const;
    /// sum |a_k| when some |a_k| > 1, else 1.
    double normalization() const;
    MultivariatePolynomial negated() const;
};

enum class Verdict { SignChange, AllPositive, AllNegative, GridRoot };

std::string to_string(Verdict v);

/// Decision table on extremal values with a dead zone of zero_tol.
Verdict classify(double min_value, double max_value, double zero_tol);

struct DissectionReport {
    double min_est = 0.0;
    double max_est = 0.0;
    double eps = 0.0;
    double zero_tol = 0.0;
    Verdict verdict = Verdict::GridRoot;
    bool degenerate_flag = false;
    double normalization = 1.0;
    Index points = 0;
    CostLedger cost;
};

inline constexpr double kDefaultZeroTol = 1e-9;
inline constexpr double kDefaultDissectEps = 1e-3;

/// Encoding of ⊕_j f(x_j)/normalization over the padded grid.
BlockEncoding encode_grid_function(const SampleGrid& grid, const MultivariatePolynomial& f);

DissectionReport dissect(const SampleGrid& grid, const MultivariatePolynomial& f, double eps = kDefaultDissectEps,
                         double zero_tol = kDefaultZeroTol, std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

/// Linear-scan baseline: exact extremes, cost n evaluations.
DissectionReport classical_scan(const SampleGrid& grid, const MultivariatePolynomial& f,
                                double zero_tol = kDefaultZeroTol);

MultivariatePolynomial multivariate_from_json(const nlohmann::json& j);
SampleGrid grid_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DissectionReport& r);

}  // namespace qroot

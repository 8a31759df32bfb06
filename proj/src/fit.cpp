#include "qroot/fit.hpp"

#include <cmath>

namespace qroot {

FitResult least_squares(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<std::function<double(double)>>& basis, std::string form) {
    if (x.size() != y.size()) throw PreconditionError("fit: x and y lengths differ");
    if (x.size() < basis.size()) throw PreconditionError("fit: fewer points than coefficients", double(x.size()));
    const auto m = static_cast<Index>(x.size()), k = static_cast<Index>(basis.size());
    RMatrix A(m, k);
    RVector b(m);
    for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < k; ++j) A(i, j) = basis[j](x[i]);
        b(i) = y[i];
    }
    const RVector c = A.colPivHouseholderQr().solve(b);
    const RVector r = b - A * c;
    FitResult out;
    out.coefficients.assign(c.data(), c.data() + c.size());
    const double ss_tot = (b.array() - b.mean()).square().sum();
    out.r_squared = ss_tot == 0.0 ? 1.0 : 1.0 - r.squaredNorm() / ss_tot;
    out.max_residual = r.cwiseAbs().maxCoeff();
    out.form = std::move(form);
    return out;
}

FitResult fit_log(const std::vector<double>& x, const std::vector<double>& y) {
    return least_squares(x, y, {[](double) { return 1.0; }, [](double v) { return std::log2(v); }}, "a + b*log2(n)");
}

FitResult fit_log_quadratic(const std::vector<double>& x, const std::vector<double>& y) {
    return least_squares(x, y,
                         {[](double) { return 1.0; }, [](double v) { return std::log2(v); },
                          [](double v) { return std::log2(v) * std::log2(v); }},
                         "a + b*log2(n) + c*log2(n)^2");
}

FitResult fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0 && y[i] > 0.0)) throw PreconditionError("fit_power_law: non-positive sample");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    FitResult f = least_squares(lx, ly, {[](double) { return 1.0; }, [](double v) { return v; }}, "c*n^e");
    f.coefficients[0] = std::exp(f.coefficients[0]);
    return f;
}

}  // namespace qroot

#include "qroot/root_dissect.hpp"

#include "qroot/serialize.hpp"
#include "qroot/spectral_probe.hpp"

#include <cmath>

namespace qroot {

SampleGrid SampleGrid::uniform(double lo, double hi, Index n) {
    if (n < 1) throw PreconditionError("uniform grid: point count must be positive", double(n));
    SampleGrid g;
    g.points.resize(n, 1);
    for (Index i = 0; i < n; ++i) g.points(i, 0) = n == 1 ? lo : lo + (hi - lo) * double(i) / double(n - 1);
    return g;
}

SampleGrid SampleGrid::padded() const {
    const Index target = next_power_of_two(n());
    SampleGrid g;
    g.points.resize(target, M());
    g.points.topRows(n()) = points;
    for (Index i = n(); i < target; ++i) g.points.row(i) = points.row(n() - 1);
    return g;
}

double MultivariatePolynomial::operator()(const RVector& x) const {
    double s = 0.0;
    for (const auto& t : terms) {
        double m = t.a;
        for (std::size_t v = 0; v < t.k.size(); ++v) m *= std::pow(x(static_cast<Index>(v)), t.k[v]);
        s += m;
    }
    return s;
}

int MultivariatePolynomial::degree() const {
    int d = 0;
    for (const auto& t : terms) {
        int s = 0;
        for (int e : t.k) s += e;
        d = std::max(d, s);
    }
    return d;
}

double MultivariatePolynomial::normalization() const {
    double total = 0.0, peak = 0.0;
    for (const auto& t : terms) {
        total += std::abs(t.a);
        peak = std::max(peak, std::abs(t.a));
    }
    return peak > 1.0 ? total : 1.0;
}

MultivariatePolynomial MultivariatePolynomial::negated() const {
    MultivariatePolynomial g = *this;
    for (auto& t : g.terms) t.a = -t.a;
    return g;
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::SignChange: return "SignChange";
    case Verdict::AllPositive: return "AllPositive";
    case Verdict::AllNegative: return "AllNegative";
    case Verdict::GridRoot: return "GridRoot";
    }
    return "?";
}

Verdict classify(double lo, double hi, double zero_tol) {
    if (lo < -zero_tol && hi > zero_tol) return Verdict::SignChange;
    if (std::abs(lo) <= zero_tol || std::abs(hi) <= zero_tol) return Verdict::GridRoot;
    if (lo > zero_tol) return Verdict::AllPositive;
    return Verdict::AllNegative;
}

namespace {

void validate(const SampleGrid& grid, const MultivariatePolynomial& f) {
    if (grid.n() == 0) throw PreconditionError("grid is empty");
    if (grid.M() != f.M) throw PreconditionError("grid and polynomial variable counts differ", double(grid.M()));
    const double box = f.M == 1 ? 0.5 : 1.0;
    const double reach = grid.points.cwiseAbs().maxCoeff();
    if (reach > box + 1e-12) throw PreconditionError("grid point outside the sampling domain", reach);
    for (const auto& t : f.terms) {
        if (static_cast<int>(t.k.size()) != f.M) throw PreconditionError("monomial exponent count differs from M");
        for (int e : t.k)
            if (e < 0) throw PreconditionError("negative exponent", e);
    }
}

BlockEncoding power_of(const BlockEncoding& x, int k, Index n) {
    if (k == 0) return identity(n);
    BlockEncoding p = x;
    for (int i = 1; i < k; ++i) p = product(p, x);
    return p;
}

}  // namespace

BlockEncoding encode_grid_function(const SampleGrid& grid, const MultivariatePolynomial& f) {
    validate(grid, f);
    const SampleGrid g = grid.padded();
    const Index n = g.n();
    const double norm = f.normalization();

    for (Index j = 0; j < g.n(); ++j) {
        const double v = f(g.points.row(j).transpose()) / norm;
        if (std::abs(v) > 0.5 + 1e-12) throw PreconditionError("|f| exceeds 1/2 on the grid", v);
    }

    std::vector<BlockEncoding> coords;
    for (Index m = 0; m < g.M(); ++m) coords.push_back(diag_oracle(RVector(g.points.col(m)), 1.0));

    std::vector<BlockEncoding> terms;
    std::vector<int> signs;
    for (const auto& t : f.terms) {
        const double a = t.a / norm;
        if (a == 0.0) continue;
        BlockEncoding mono;
        bool first = true;
        for (Index m = 0; m < g.M(); ++m) {
            if (t.k[static_cast<std::size_t>(m)] == 0) continue;
            BlockEncoding p = power_of(coords[static_cast<std::size_t>(m)], t.k[static_cast<std::size_t>(m)], n);
            mono = first ? p : product(mono, p);
            first = false;
        }
        if (first) mono = identity(n);
        if (std::abs(a) < 1.0) mono = scale_down(mono, 1.0 / std::abs(a));
        terms.push_back(mono);
        signs.push_back(a > 0 ? 1 : -1);
    }
    if (terms.empty()) return diag_oracle(RVector(RVector::Zero(n)), 1.0);

    BlockEncoding sum = lin_combo(terms, signs);
    const auto K = static_cast<double>(terms.size());
    if (K > 1) sum = amplify(sum, K, 0.25, 1e-10);
    return sum;
}

DissectionReport dissect(const SampleGrid& grid, const MultivariatePolynomial& f, double eps, double zero_tol,
                         std::uint64_t seed) {
    const BlockEncoding u = encode_grid_function(grid, f);
    const auto lo = min_via_shift(u, eps, seed);
    const auto hi = max_via_shift(u, eps, seed ^ 0xa5a5a5a5ULL);
    DissectionReport r;
    r.normalization = f.normalization();
    r.min_est = lo.value * r.normalization;
    r.max_est = hi.value * r.normalization;
    r.eps = eps;
    r.zero_tol = zero_tol;
    r.verdict = classify(r.min_est, r.max_est, zero_tol);
    r.degenerate_flag = lo.degenerate || hi.degenerate;
    r.points = grid.n();
    r.cost = lo.cost + hi.cost;
    return r;
}

DissectionReport classical_scan(const SampleGrid& grid, const MultivariatePolynomial& f, double zero_tol) {
    if (grid.n() == 0) throw PreconditionError("grid is empty");
    DissectionReport r;
    r.min_est = std::numeric_limits<double>::infinity();
    r.max_est = -std::numeric_limits<double>::infinity();
    for (Index j = 0; j < grid.n(); ++j) {
        const double v = f(grid.points.row(j).transpose());
        r.min_est = std::min(r.min_est, v);
        r.max_est = std::max(r.max_est, v);
    }
    r.zero_tol = zero_tol;
    r.verdict = classify(r.min_est, r.max_est, zero_tol);
    r.points = grid.n();
    r.cost.modeled_depth = double(grid.n());
    return r;
}

MultivariatePolynomial multivariate_from_json(const nlohmann::json& j) {
    MultivariatePolynomial f;
    f.M = j.at("M").get<int>();
    if (f.M < 1) throw PreconditionError("function spec: M must be positive", f.M);
    for (const auto& t : j.at("terms")) {
        Monomial m;
        m.a = t.at("a").get<double>();
        m.k = t.at("k").get<std::vector<int>>();
        if (static_cast<int>(m.k.size()) != f.M)
            throw PreconditionError("function spec: exponent list length differs from M");
        f.terms.push_back(m);
    }
    return f;
}

SampleGrid grid_from_json(const nlohmann::json& j) {
    if (j.contains("uniform")) {
        const auto& u = j.at("uniform");
        const auto n = u.at("n").get<Index>();
        if (n < 1) throw PreconditionError("grid spec: uniform point count must be positive", double(n));
        return SampleGrid::uniform(u.at("lo").get<double>(), u.at("hi").get<double>(), n);
    }
    const auto& pts = j.at("points");
    if (!pts.is_array() || pts.empty()) throw PreconditionError("grid spec: empty point list");
    SampleGrid g;
    const auto first = pts.front().is_array() ? pts.front().size() : std::size_t{1};
    g.points.resize(static_cast<Index>(pts.size()), static_cast<Index>(first));
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].is_array()) {
            if (pts[i].size() != first) throw PreconditionError("grid spec: ragged point list");
            for (std::size_t m = 0; m < first; ++m)
                g.points(static_cast<Index>(i), static_cast<Index>(m)) = pts[i][m].get<double>();
        } else {
            g.points(static_cast<Index>(i), 0) = pts[i].get<double>();
        }
    }
    return g;
}

nlohmann::json to_json(const DissectionReport& r) {
    return {{"min_est", r.min_est},         {"max_est", r.max_est},
            {"eps", r.eps},                 {"zero_tol", r.zero_tol},
            {"verdict", to_string(r.verdict)}, {"degenerate_flag", r.degenerate_flag},
            {"normalization", r.normalization}, {"points", r.points},
            {"cost", to_json(r.cost)}};
}

}  // namespace qroot

#include "qroot/nonlinear_system.hpp"

#include <iomanip>
#include <ostream>
#include <random>

namespace qroot {

std::string to_string(FamilyKind k) {
    switch (k) {
    case FamilyKind::SumOfPowers: return "SumOfPowers";
    case FamilyKind::PowerOfSums: return "PowerOfSums";
    case FamilyKind::ProductOfAffinePowers: return "ProductOfAffinePowers";
    }
    return "?";
}

int FunctionFamily::K() const {
    int k = 0;
    for (int e : p) k = std::max(k, e);
    return k;
}

void FunctionFamily::validate() const {
    if (a.empty()) throw PreconditionError("family: no coefficient layers");
    if (p.size() != a.size()) throw PreconditionError("family: one power per layer required");
    const Index rows = a.front().rows(), cols = a.front().cols();
    if (rows != cols) throw PreconditionError("family: system must be square", double(rows));
    for (const auto& l : a)
        if (l.rows() != rows || l.cols() != cols) throw PreconditionError("family: layer shapes differ");
    for (int e : p)
        if (e < 1) throw PreconditionError("family: powers must be positive", e);
    if (c.size() != rows) throw PreconditionError("family: constant vector length differs from n");
    if (kind == FamilyKind::PowerOfSums && (w.rows() != rows || w.cols() != layers()))
        throw PreconditionError("family: PowerOfSums needs an n×L weight matrix");
    if (kind == FamilyKind::ProductOfAffinePowers) {
        if (w.rows() != rows || w.cols() < 1) throw PreconditionError("family: product weight column missing");
        if (b.size() != layers()) throw PreconditionError("family: one offset per layer required");
    }
    if (shared_form && kind != FamilyKind::SumOfPowers)
        throw PreconditionError("family: shared_form applies to SumOfPowers only");
}

FunctionFamily sum_of_powers(const std::vector<RMatrix>& layers, const RVector& c, bool shared_form) {
    FunctionFamily F;
    F.kind = FamilyKind::SumOfPowers;
    F.a = layers;
    for (std::size_t i = 0; i < layers.size(); ++i) F.p.push_back(static_cast<int>(i) + 1);
    F.c = c;
    F.shared_form = shared_form;
    F.validate();
    return F;
}

FunctionFamily linear_system(const RMatrix& A, const RVector& rhs) { return sum_of_powers({A}, -rhs, true); }

RVector evaluate(const FunctionFamily& F, const RVector& x) {
    const Index n = F.equations();
    RVector f = F.c;
    switch (F.kind) {
    case FamilyKind::SumOfPowers:
        for (Index l = 0; l < F.layers(); ++l) f += F.a[l] * x.array().pow(F.p[l]).matrix();
        break;
    case FamilyKind::PowerOfSums:
        for (Index l = 0; l < F.layers(); ++l) f += F.w.col(l).cwiseProduct((F.a[l] * x).array().pow(F.p[l]).matrix());
        break;
    case FamilyKind::ProductOfAffinePowers: {
        RVector prod = RVector::Ones(n);
        for (Index l = 0; l < F.layers(); ++l)
            prod = prod.cwiseProduct(((F.a[l] * x).array() + F.b(l)).pow(F.p[l]).matrix());
        f += F.w.col(0).cwiseProduct(prod);
        break;
    }
    }
    return f;
}

RVector eval(const FunctionFamily& F, const SystemState& s) {
    if (!s.in_domain())
        throw PreconditionError("eval: state outside [-1/2, 1/2]^n", s.x.cwiseAbs().maxCoeff());
    RVector f = evaluate(F, s.x);
    const double peak = f.size() ? f.cwiseAbs().maxCoeff() : 0.0;
    if (peak > 0.5 + 1e-12) throw PreconditionError("eval: |f_j| exceeds 1/2", peak);
    return f;
}

RVector gradient(const FunctionFamily& F, const RVector& x, Index j) {
    const Index n = F.n();
    RVector g = RVector::Zero(n);
    switch (F.kind) {
    case FamilyKind::SumOfPowers:
        for (Index l = 0; l < F.layers(); ++l) {
            const int e = F.p[l];
            for (Index k = 0; k < n; ++k) g(k) += F.a[l](j, k) * e * std::pow(x(k), e - 1);
        }
        break;
    case FamilyKind::PowerOfSums:
        for (Index l = 0; l < F.layers(); ++l) {
            const int e = F.p[l];
            const double s = F.a[l].row(j).dot(x);
            g += F.w(j, l) * e * std::pow(s, e - 1) * F.a[l].row(j).transpose();
        }
        break;
    case FamilyKind::ProductOfAffinePowers: {
        const Index L = F.layers();
        std::vector<double> factor(static_cast<std::size_t>(L));
        for (Index l = 0; l < L; ++l) factor[l] = std::pow(F.a[l].row(j).dot(x) + F.b(l), F.p[l]);
        for (Index l = 0; l < L; ++l) {
            double others = 1.0;
            for (Index m = 0; m < L; ++m)
                if (m != l) others *= factor[m];
            const double s = F.a[l].row(j).dot(x) + F.b(l);
            g += F.w(j, 0) * others * F.p[l] * std::pow(s, F.p[l] - 1) * F.a[l].row(j).transpose();
        }
        break;
    }
    }
    return g;
}

RMatrix jacobian(const FunctionFamily& F, const RVector& x) {
    RMatrix J(F.equations(), F.n());
    for (Index j = 0; j < F.equations(); ++j) J.row(j) = gradient(F, x, j).transpose();
    return J;
}

double gradient_bound(const FunctionFamily& F, const RVector& x) {
    const RMatrix J = jacobian(F, x);
    return J.size() ? J.cwiseAbs().maxCoeff() : 0.0;
}

RVector default_initial_state(Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    RVector x(n);
    for (Index i = 0; i < n; ++i) x(i) = u(rng);
    return x;
}

namespace {

void record(IterateTrace& t, const FunctionFamily& F, const RVector& x) {
    t.iterates.push_back(x);
    t.residuals.push_back(evaluate(F, x).norm());
    if (!SystemState{x}.in_domain()) t.domain_escape = true;
}

}  // namespace

IterateTrace classical_newton(const FunctionFamily& F, const RVector& x0, int T) {
    F.validate();
    IterateTrace t;
    RVector x = x0;
    record(t, F, x);
    for (int it = 0; it < T; ++it) {
        const RMatrix J = jacobian(F, x);
        Eigen::FullPivLU<RMatrix> lu(J);
        if (lu.rank() < J.rows()) {
            t.halted = true;
            t.halt_iteration = it;
            break;
        }
        x = x - lu.solve(evaluate(F, x));
        record(t, F, x);
    }
    return t;
}

IterateTrace classical_lm(const FunctionFamily& F, const RVector& x0, double lambda, int T) {
    F.validate();
    if (!(lambda >= 0.0)) throw PreconditionError("classical_lm: negative damping", lambda);
    IterateTrace t;
    RVector x = x0;
    record(t, F, x);
    for (int it = 0; it < T; ++it) {
        const RMatrix J = jacobian(F, x);
        const RMatrix normal = J.transpose() * J + lambda * RMatrix::Identity(J.cols(), J.cols());
        Eigen::FullPivLU<RMatrix> lu(normal);
        if (lu.rank() < normal.rows()) {
            t.halted = true;
            t.halt_iteration = it;
            break;
        }
        x = x + lu.solve(-J.transpose() * evaluate(F, x));
        record(t, F, x);
    }
    return t;
}

namespace {

RMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) throw PreconditionError("family spec: empty matrix");
    const auto rows = j.size(), cols = j.front().size();
    RMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (j[r].size() != cols) throw PreconditionError("family spec: ragged matrix");
        for (std::size_t c = 0; c < cols; ++c) m(static_cast<Index>(r), static_cast<Index>(c)) = j[r][c].get<double>();
    }
    return m;
}

RVector vector_from_json(const nlohmann::json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const RVector>(v.data(), static_cast<Index>(v.size()));
}

nlohmann::json matrix_to_json(const RMatrix& m) {
    nlohmann::json out = nlohmann::json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(row);
    }
    return out;
}

}  // namespace

FunctionFamily family_from_json(const nlohmann::json& j) {
    FunctionFamily F;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "SumOfPowers") F.kind = FamilyKind::SumOfPowers;
    else if (kind == "PowerOfSums") F.kind = FamilyKind::PowerOfSums;
    else if (kind == "ProductOfAffinePowers") F.kind = FamilyKind::ProductOfAffinePowers;
    else throw PreconditionError("family spec: unknown kind '" + kind + "'");
    for (const auto& layer : j.at("a")) F.a.push_back(matrix_from_json(layer));
    if (F.a.empty()) throw PreconditionError("family spec: no layers");
    const Index n = F.a.front().rows();
    if (j.contains("n") && j.at("n").get<Index>() != n) throw PreconditionError("family spec: n disagrees with a");
    if (j.contains("powers")) F.p = j.at("powers").get<std::vector<int>>();
    else
        for (std::size_t i = 0; i < F.a.size(); ++i) F.p.push_back(static_cast<int>(i) + 1);
    if (j.contains("K") && j.at("K").get<int>() != F.K()) throw PreconditionError("family spec: K disagrees with powers");
    F.c = j.contains("c") ? vector_from_json(j.at("c")) : RVector(RVector::Zero(n));
    const Index wcols = F.kind == FamilyKind::ProductOfAffinePowers ? 1 : F.layers();
    F.w = j.contains("w") ? matrix_from_json(j.at("w")) : RMatrix(RMatrix::Ones(n, wcols));
    F.b = j.contains("b") ? vector_from_json(j.at("b")) : RVector(RVector::Zero(F.layers()));
    F.shared_form = j.value("shared_form", F.kind == FamilyKind::SumOfPowers);
    F.validate();
    return F;
}

nlohmann::json to_json(const FunctionFamily& F) {
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& l : F.a) layers.push_back(matrix_to_json(l));
    return {{"kind", to_string(F.kind)},
            {"n", F.n()},
            {"K", F.K()},
            {"a", layers},
            {"powers", F.p},
            {"w", matrix_to_json(F.w)},
            {"b", std::vector<double>(F.b.data(), F.b.data() + F.b.size())},
            {"c", std::vector<double>(F.c.data(), F.c.data() + F.c.size())},
            {"shared_form", F.shared_form}};
}

void write_iterates_csv(std::ostream& os, const IterateTrace& t) {
    const Index n = t.iterates.empty() ? 0 : t.iterates.front().size();
    os << "iteration";
    for (Index k = 0; k < n; ++k) os << ",x" << k;
    os << ",residual\n";
    os << std::setprecision(17);
    for (std::size_t i = 0; i < t.iterates.size(); ++i) {
        os << i;
        for (Index k = 0; k < n; ++k) os << ',' << t.iterates[i](k);
        os << ',' << t.residuals[i] << '\n';
    }
}

}  // namespace qroot

#include "qroot/root_dissect.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qroot;

namespace {

MultivariatePolynomial univariate(const std::vector<double>& a) {
    MultivariatePolynomial f;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0.0) f.terms.push_back({a[i], {static_cast<int>(i)}});
    return f;
}

// x(x-0.5)(x+0.7) = x³ + 0.2x² - 0.35x
MultivariatePolynomial cubic() { return univariate({0, -0.35, 0.2, 1}); }
// 2x⁶ - 3x⁴ + (9/8)x² - 1/16
MultivariatePolynomial sextic() { return univariate({-1.0 / 16, 0, 9.0 / 8, 0, -3, 0, 2}); }

SampleGrid points1(std::initializer_list<double> xs) {
    SampleGrid g;
    g.points.resize(static_cast<Index>(xs.size()), 1);
    Index i = 0;
    for (double x : xs) g.points(i++, 0) = x;
    return g;
}

double bisect(const MultivariatePolynomial& f, double a, double b) {
    RVector x(1);
    auto at = [&](double t) {
        x(0) = t;
        return f(x);
    };
    double fa = at(a);
    for (int i = 0; i < 80; ++i) {
        const double m = 0.5 * (a + b), fm = at(m);
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

TEST(EncodeGridFunction, Examples) {
    auto u = encode_grid_function(points1({-0.4, 0.2}), univariate({0, 1}));
    EXPECT_NEAR(u.block()(0, 0).real(), -0.4, 1e-15);
    EXPECT_NEAR(u.block()(1, 1).real(), 0.2, 1e-15);

    auto c = encode_grid_function(points1({0.2, -0.4}), cubic());
    EXPECT_NEAR(c.block()(0, 0).real(), -0.054, 1e-12);

    MultivariatePolynomial xy;
    xy.M = 2;
    xy.terms.push_back({1.0, {1, 1}});
    SampleGrid g;
    g.points.resize(2, 2);
    g.points << 0.5, 0.5, -0.5, 0.5;
    auto p = encode_grid_function(g, xy);
    EXPECT_NEAR(p.block()(0, 0).real(), 0.25, 1e-15);
    EXPECT_NEAR(p.block()(1, 1).real(), -0.25, 1e-15);
}

TEST(EncodeGridFunction, PaddingAndBounds) {
    auto u = encode_grid_function(points1({-0.1, 0.1, 0.3}), univariate({0, 1}));
    EXPECT_EQ(u.rows(), 4);
    EXPECT_NEAR(u.block()(3, 3).real(), 0.3, 1e-15);
    EXPECT_THROW(encode_grid_function(points1({0.6}), univariate({0, 1})), PreconditionError);
    EXPECT_THROW(encode_grid_function(points1({0.5}), univariate({0.4, 0.3})), PreconditionError);
}

TEST(Dissect, CubicAndSexticSignChange) {
    const auto grid = SampleGrid::uniform(-0.5, 0.5, 256);
    const auto rf = dissect(grid, cubic());
    EXPECT_EQ(rf.verdict, Verdict::SignChange);
    const auto rg = dissect(grid, sextic());
    EXPECT_EQ(rg.verdict, Verdict::SignChange);
    EXPECT_EQ(classical_scan(grid, sextic()).verdict, Verdict::SignChange);
    EXPECT_GT(rg.normalization, 1.0);
}

TEST(Dissect, StrictlyPositive) {
    const auto r = dissect(SampleGrid::uniform(-0.5, 0.5, 64), univariate({0.1, 0, 1}));
    EXPECT_EQ(r.verdict, Verdict::AllPositive);
    EXPECT_NEAR(r.min_est, 0.1, 2e-3);
}

TEST(ClassicalScan, Examples) {
    const auto one = classical_scan(points1({0.3}), univariate({0, 1}));
    EXPECT_EQ(one.verdict, Verdict::AllPositive);
    EXPECT_EQ(classical_scan(points1({-0.3}), univariate({0, 1})).verdict, Verdict::AllNegative);
    EXPECT_EQ(classical_scan(points1({-0.3, 0.2}), univariate({0.0})).verdict, Verdict::GridRoot);
    EXPECT_DOUBLE_EQ(classical_scan(SampleGrid::uniform(-0.5, 0.5, 100), cubic()).cost.modeled_depth, 100.0);
}

TEST(Classify, Table) {
    EXPECT_EQ(classify(-0.1, 0.2, 1e-9), Verdict::SignChange);
    EXPECT_EQ(classify(0.0, 0.2, 1e-9), Verdict::GridRoot);
    EXPECT_EQ(classify(0.1, 0.2, 1e-9), Verdict::AllPositive);
    EXPECT_EQ(classify(-0.3, -0.2, 1e-9), Verdict::AllNegative);
}

TEST(Dissect, NegationSymmetry) {
    const auto grid = SampleGrid::uniform(-0.5, 0.5, 64);
    const auto pos = univariate({0.2, 0.1, -0.3});
    EXPECT_EQ(dissect(grid, pos).verdict, Verdict::AllPositive);
    EXPECT_EQ(dissect(grid, pos.negated()).verdict, Verdict::AllNegative);
    EXPECT_EQ(dissect(grid, cubic().negated()).verdict, Verdict::SignChange);
}

TEST(Dissect, SignChangeBracketsRoot) {
    const auto grid = SampleGrid::uniform(-0.5, 0.5, 64);
    const auto f = cubic();
    ASSERT_EQ(dissect(grid, f).verdict, Verdict::SignChange);
    RVector x(1);
    bool found = false;
    for (Index j = 0; j + 1 < grid.n(); ++j) {
        x(0) = grid.points(j, 0);
        const double a = f(x);
        x(0) = grid.points(j + 1, 0);
        const double b = f(x);
        if (a * b < 0) {
            const double r = bisect(f, grid.points(j, 0), grid.points(j + 1, 0));
            x(0) = r;
            EXPECT_LE(std::abs(f(x)), 1e-12);
            EXPECT_GE(r, grid.points(j, 0));
            EXPECT_LE(r, grid.points(j + 1, 0));
            found = true;
        }
    }
    EXPECT_TRUE(found);
}

TEST(Dissect, RandomAgreementSmall) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-1, 1);
    std::uniform_int_distribution<int> mdist(1, 3), ddist(1, 6);
    int checked = 0;
    for (int t = 0; t < 30; ++t) {
        MultivariatePolynomial f;
        f.M = mdist(rng);
        const int deg = ddist(rng);
        const double box = f.M == 1 ? 0.5 : 1.0;
        for (int k = 0; k < 4; ++k) {
            Monomial m;
            m.a = u(rng);
            int left = deg;
            for (int v = 0; v < f.M; ++v) {
                const int e = std::uniform_int_distribution<int>(0, left)(rng);
                m.k.push_back(e);
                left -= e;
            }
            f.terms.push_back(m);
        }
        SampleGrid g;
        g.points.resize(64, f.M);
        for (Index i = 0; i < 64; ++i)
            for (Index v = 0; v < f.M; ++v) g.points(i, v) = box * u(rng);
        double peak = 0;
        for (Index i = 0; i < 64; ++i) peak = std::max(peak, std::abs(f(g.points.row(i).transpose())));
        for (auto& m : f.terms) m.a *= 0.45 / peak;
        const auto scan = classical_scan(g, f);
        const auto q = dissect(g, f, 1e-3, 1e-9, 1000 + t);
        const double dead = 2e-3 * f.normalization();
        if (std::abs(std::abs(scan.min_est) - 1e-9) > dead && std::abs(std::abs(scan.max_est) - 1e-9) > dead) {
            EXPECT_EQ(q.verdict, scan.verdict) << t;
            ++checked;
        }
    }
    EXPECT_GT(checked, 20);
}

TEST(Dissect, JsonIngest) {
    const auto spec = nlohmann::json::parse(R"({"M":1,"terms":[{"a":1,"k":[3]},{"a":0.2,"k":[2]},{"a":-0.35,"k":[1]}]})");
    const auto grid = grid_from_json(nlohmann::json::parse(R"({"uniform":{"lo":-0.5,"hi":0.5,"n":256}})"));
    const auto r = dissect(grid, multivariate_from_json(spec));
    EXPECT_EQ(to_json(r)["verdict"], "SignChange");
    EXPECT_THROW(grid_from_json(nlohmann::json::parse(R"({"points":[]})")), PreconditionError);
}

#include "qroot/spectral_probe.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qroot;

namespace {

BlockEncoding diag_enc(const std::vector<double>& xs) {
    RVector v = Eigen::Map<const RVector>(xs.data(), static_cast<Index>(xs.size()));
    return diag_oracle(v, std::max(1.0, v.cwiseAbs().maxCoeff()));
}

}  // namespace

TEST(MaxEigenvalue, Diagonal) {
    const auto e = max_eigenvalue(diag_enc({0.9, 0.1}), 1e-3);
    EXPECT_NEAR(e.value, 0.9, 1e-3);
    EXPECT_EQ(e.iterations, probe_iterations(2, 1e-3));
    EXPECT_FALSE(e.degenerate);
}

TEST(MaxEigenvalue, ShiftedCubicGrid) {
    // f(x) = x(x-0.5)(x+0.7) at x = -0.4 and 0.2
    auto f = [](double x) { return x * (x - 0.5) * (x + 0.7); };
    const auto u = diag_enc({f(-0.4), f(0.2)});
    EXPECT_NEAR(f(-0.4), 0.108, 1e-12);
    EXPECT_NEAR(f(0.2), -0.054, 1e-12);
    const auto half = lin_combo<double>({identity(2), u}, {+1, -1});
    EXPECT_NEAR(max_eigenvalue(half, 1e-4).value, 0.527, 1e-4);
}

TEST(MaxEigenvalue, RandomPsdMatchesEigensolver) {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    CMatrix a(16, 16);
    for (Index i = 0; i < 16; ++i)
        for (Index j = 0; j < 16; ++j) a(i, j) = {g(rng), g(rng)};
    CMatrix psd = a * a.adjoint();
    psd /= spectral_norm(psd);
    BlockEncoding u;
    u.op = psd;
    const auto e = max_eigenvalue(u, 1e-3);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(psd);
    EXPECT_NEAR(e.value, es.eigenvalues().maxCoeff(), 1e-3);
}

TEST(MaxEigenvalue, RejectsIndefiniteAndFlagsDegenerate) {
    EXPECT_THROW(max_eigenvalue(diag_enc({0.5, -0.2}), 1e-3), PreconditionError);
    EXPECT_TRUE(max_eigenvalue(diag_enc({0.4, 0.4, 0.1, 0.0}), 1e-3).degenerate);
}

TEST(MaxEigenvalue, MonotoneUnderIdentityShift) {
    const auto base = diag_enc({0.2, 0.6, 0.1, 0.3});
    const auto e0 = max_eigenvalue(base, 1e-3);
    // (A + I)/2 shifts the top eigenvalue to (λ + 1)/2
    const auto e1 = max_eigenvalue(lin_combo<double>({base, identity(4)}, {1, 1}), 1e-3);
    EXPECT_NEAR(2.0 * e1.value - 1.0, e0.value, 2 * 2e-3);
}

TEST(MinViaShift, Examples) {
    EXPECT_NEAR(min_via_shift(diag_enc({0.4, -0.2}), 1e-3).value, -0.2, 2e-3);
    EXPECT_NEAR(min_via_shift(diag_enc({0.3, 0.3, 0.3, 0.3}), 1e-3).value, 0.3, 2e-3);
    EXPECT_THROW(min_via_shift(diag_enc({0.7, 0.1}), 1e-3), PreconditionError);
}

TEST(MinViaShift, RandomVectorsAndSignSymmetry) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int t = 0; t < 10; ++t) {
        std::vector<double> f(64), nf(64);
        for (int i = 0; i < 64; ++i) nf[i] = -(f[i] = u(rng));
        const double direct = *std::min_element(f.begin(), f.end());
        const double lo = min_via_shift(diag_enc(f), 1e-3, 100 + t).value;
        EXPECT_NEAR(lo, direct, 2e-3);
        const double mirrored = -max_via_shift(diag_enc(nf), 1e-3, 200 + t).value;
        EXPECT_NEAR(lo, mirrored, 4e-3);
    }
}

TEST(ProbeCost, LinearInInverseEpsAffineInLogDim) {
    std::vector<double> xs, ys;
    for (int q = 4; q <= 12; ++q) {
        xs.push_back(q);
        ys.push_back(double(probe_iterations(Index(1) << q, 1e-3)));
    }
    const double slope = (ys.back() - ys.front()) / (xs.back() - xs.front());
    for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_NEAR(ys[i], ys.front() + slope * (xs[i] - xs.front()), 1.0);
    EXPECT_NEAR(double(probe_iterations(256, 1e-4)) / double(probe_iterations(256, 1e-3)), 10.0 * (8 + 13.29) / (8 + 9.97),
                0.01);
}

TEST(ConditionNumber, Examples) {
    EXPECT_DOUBLE_EQ(condition_number(identity(4), 1e-3).kappa, 1.0);
    EXPECT_NEAR(condition_number(diag_enc({1.0, 0.25}), 1e-3).kappa, 4.0, 1e-12);
    EXPECT_THROW(condition_number(diag_enc({1.0, 0.01}), 1e-3, 0.1), PreconditionError);

    std::mt19937_64 rng(31);
    std::normal_distribution<double> g;
    CMatrix j = CMatrix::Identity(8, 8) * 2.0;
    for (Index r = 0; r < 8; ++r)
        for (Index c = 0; c < 8; ++c) j(r, c) += 0.3 * g(rng);
    BlockEncoding u;
    u.op = j;
    u.alpha = 2 * spectral_norm(j);
    const auto s = Eigen::JacobiSVD<CMatrix>(j).singularValues();
    EXPECT_NEAR(condition_number(u, 1e-3).kappa, s(0) / s(7), 0.05 * s(0) / s(7));
}

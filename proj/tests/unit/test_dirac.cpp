#include <gtest/gtest.h>

#include <cmath>

#include "spinflow/dirac.hpp"
#include "spinflow/disk_solve.hpp"
#include "spinflow/estimate_ratio.hpp"
#include "spinflow/green.hpp"
#include "spinflow/oracles.hpp"
#include "spinflow/quadrature.hpp"

using namespace spinflow;

namespace {

double relative_l2(const SpinorField& a, const SpinorField& b) {
    auto d = a;
    d -= b;
    return lp_norm(d, 2) / lp_norm(b, 2);
}

bool interior(const GridChart& c, std::size_t k) { return c.kind(k) == NodeKind::Inside; }

}  // namespace

TEST(DiracApply, ConjugateZOnDisk) {
    const auto disk = GridChart::disk(33, 1.0);
    const auto psi = SpinorField::sample(disk, 1, [](double x, double y, std::span<Complex> o) { o[1] = Complex(x, -y); });
    const auto out = dirac_apply(psi, DiracMode::FiniteDifference);
    for (auto k : disk.data_nodes()) {
        if (!interior(disk, k)) continue;
        EXPECT_NEAR(std::abs(out(k, 0, 0) - 2.0), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(out(k, 0, 1)), 0.0, 1e-12);
    }
}

TEST(DiracApply, ZInFirstSlot) {
    const auto disk = GridChart::disk(33, 1.0);
    const auto psi = SpinorField::sample(disk, 1, [](double x, double y, std::span<Complex> o) { o[0] = Complex(x, y); });
    const auto out = dirac_apply(psi, DiracMode::FiniteDifference);
    for (auto k : disk.data_nodes()) {
        EXPECT_NEAR(std::abs(out(k, 0, 0)), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(out(k, 0, 1) + 2.0), 0.0, 1e-12);
    }
}

TEST(DiracApply, SpectralNeedsTorus) {
    const auto disk = GridChart::disk(17, 1.0);
    EXPECT_THROW(dirac_apply(SpinorField(disk, 1), DiracMode::Spectral), DomainError);
}

TEST(LaplaceApply, ConstantIsHarmonic) {
    const auto c = GridChart::torus(32, 32, 1, 1);
    const auto psi = SpinorField::sample(c, 1, [](double, double, std::span<Complex> o) { o[0] = 2.0; o[1] = Complex(0, 1); });
    for (auto mode : {DiracMode::Spectral, DiracMode::FiniteDifference}) {
        EXPECT_LE(lp_norm(laplace_apply(psi, mode), INFINITY), 1e-10);
    }
}

TEST(LaplaceApply, SineEigenfunction) {
    const auto c = GridChart::torus(32, 32, 1, 1);
    const auto psi = SpinorField::sample(c, 1, [](double x, double, std::span<Complex> o) { o[0] = std::sin(2 * kPi * x); });
    const auto expect = SpinorField::sample(c, 1, [](double x, double, std::span<Complex> o) {
        o[0] = -4 * kPi * kPi * std::sin(2 * kPi * x);
    });
    EXPECT_LE(max_abs_difference(laplace_apply(psi, DiracMode::Spectral), expect), 1e-9);
    EXPECT_LE(max_abs_difference(laplace_apply(psi, DiracMode::FiniteDifference), expect), 0.2);
}

TEST(Weitzenboeck, SpectralIdentityIsExact) {
    const auto c = GridChart::torus(64, 64, 1, 1, SpinStructure::AntiAnti);
    EXPECT_LE(weitzenboeck_residual(oracles::weitzenboeck_field(c), DiracMode::Spectral), 1e-10);
    EXPECT_EQ(weitzenboeck_residual(SpinorField(c, 1), DiracMode::FiniteDifference), 0.0);
}

TEST(Weitzenboeck, FiniteDifferenceConvergesAtSecondOrder) {
    std::vector<double> r;
    for (int n : {32, 64, 128}) {
        r.push_back(weitzenboeck_residual(oracles::weitzenboeck_field(GridChart::torus(n, n, 1, 1, SpinStructure::AntiAnti)),
                                          DiracMode::FiniteDifference));
    }
    for (std::size_t k = 1; k < r.size(); ++k) {
        EXPECT_GE(r[k - 1] / r[k], 3.0);
        EXPECT_LE(r[k - 1] / r[k], 5.0);
    }
}

TEST(Weitzenboeck, BrokenStencilIsFirstOrder) {
    const auto a = oracles::weitzenboeck_field(GridChart::torus(64, 64, 1, 1, SpinStructure::AntiAnti));
    const auto b = oracles::weitzenboeck_field(GridChart::torus(128, 128, 1, 1, SpinStructure::AntiAnti));
    const double f = weitzenboeck_residual(a, DiracMode::FiniteDifference, Stencil::BrokenForwardForTesting) /
                     weitzenboeck_residual(b, DiracMode::FiniteDifference, Stencil::BrokenForwardForTesting);
    EXPECT_LT(f, 2.5);
}

TEST(SpectralInverse, InvertsOnAntiperiodicTorus) {
    const auto c = GridChart::torus(32, 32, 1, 1, SpinStructure::PeriodicAnti);
    const auto f = oracles::random_field(c, 1, 21);
    const auto psi = dirac_inverse_spectral(f);
    EXPECT_LE(max_abs_difference(dirac_apply(psi, DiracMode::Spectral), f), 1e-10);
}

TEST(SpectralInverse, PeriodicPeriodicHasHarmonicSpinors) {
    const auto c = GridChart::torus(16, 16, 1, 1, SpinStructure::PeriodicPeriodic);
    EXPECT_EQ(dirac_symbol_min(c), 0.0);
    EXPECT_THROW(dirac_inverse_spectral(SpinorField(c, 1)), ConfigError);
}

TEST(GreenConvolve, ZeroSourceGivesZero) {
    const auto c = GridChart::torus(32, 32, 2, 2, SpinStructure::PeriodicPeriodic, -1, -1);
    const auto w = green_convolve(SpinorField(c, 1));
    EXPECT_EQ(lp_norm(w, INFINITY), 0.0);
}

TEST(GreenConvolve, ManufacturedRoundTripConvergesAtSecondOrder) {
    std::vector<double> e;
    for (int n : {64, 128}) {
        const auto c = GridChart::torus(n, n, 2, 2, SpinStructure::PeriodicPeriodic, -1, -1);
        const auto [psi, f] = oracles::green_pair(c);
        e.push_back(relative_l2(green_convolve(f), psi));
    }
    EXPECT_LE(e[1], 5e-3);
    EXPECT_GE(e[0] / e[1], 3.0);
    EXPECT_LE(e[0] / e[1], 5.0);
}

TEST(GreenConvolve, AcceleratedMatchesDirectSummation) {
    const auto c = GridChart::torus(32, 32, 2, 2, SpinStructure::PeriodicPeriodic, -1, -1);
    auto f = oracles::random_field(c, 2, 5);
    for (std::size_t k = 0; k < c.size(); ++k) {
        const int i = c.col(k);
        const int j = c.row(k);
        if (i == 0 || j == 0 || i == c.nx() - 1 || j == c.ny() - 1) {
            for (auto& v : f.at(k)) v = 0.0;
        }
    }
    const auto a = green_convolve(f, ConvolutionMethod::Accelerated);
    const auto d = green_convolve(f, ConvolutionMethod::Direct);
    EXPECT_LE(relative_l2(a, d), 1e-10);
}

TEST(GreenConvolve, SourceOnOuterRingIsRejected) {
    const auto c = GridChart::torus(16, 16, 2, 2, SpinStructure::PeriodicPeriodic, -1, -1);
    SpinorField f(c, 1);
    f(c.index(0, 5), 0, 0) = 1.0;
    EXPECT_THROW(green_convolve(f), PreconditionError);
}

TEST(GreenKernel, OddAndSelfCellVanishes) {
    const GreenKernel k{0.5};
    const Mat2 a = k(0.3, -0.2);
    const Mat2 b = k(-0.3, 0.2);
    EXPECT_LE(max_abs(a + b), 1e-15);
    EXPECT_EQ(max_abs(k(0.1, 0.0)), 0.0);
}

TEST(DiskSolve, ConstantTraceWithZeroSource) {
    const auto disk = GridChart::disk(33, 1.0);
    const auto trace = SpinorField::sample(disk, 1, [](double, double, std::span<Complex> o) { o[0] = 1.0; });
    const auto res = disk_solve(SpinorField(disk, 1), trace);
    EXPECT_LE(max_abs_difference(res.psi, trace), 1e-8);
    EXPECT_LE(res.residual, 1e-10);
}

TEST(DiskSolve, ManufacturedSolutionConvergesAtSecondOrder) {
    std::vector<double> e;
    for (int n : {33, 65}) {
        const auto disk = GridChart::disk(n, 1.0);
        const auto psi = SpinorField::sample(disk, 1, [](double x, double y, std::span<Complex> o) {
            o[0] = std::sin(x) * std::exp(y);
            o[1] = Complex(x * x, y);
        });
        // D psi computed by hand.
        const auto f = SpinorField::sample(disk, 1, [](double x, double y, std::span<Complex> o) {
            o[0] = 2 * x - 1;
            o[1] = Complex(-std::cos(x) * std::exp(y), std::sin(x) * std::exp(y));
        });
        const auto res = disk_solve(f, psi);
        auto d = res.psi;
        d -= psi;
        e.push_back(lp_norm(d, 2));
    }
    EXPECT_GE(e[0] / e[1], 3.0);
    EXPECT_LE(e[0] / e[1], 5.0);
}

TEST(DiskSolve, ExhaustedIterationsCarryHistory) {
    const auto disk = GridChart::disk(33, 1.0);
    const auto f = oracles::random_field(disk, 1, 2);
    DiskSolveOptions o;
    o.max_iter = 3;
    try {
        disk_solve(f, SpinorField(disk, 1), o);
        FAIL() << "expected ConvergenceError";
    } catch (const ConvergenceError& e) {
        // Initial residual plus one entry per iteration.
        EXPECT_EQ(e.history().size(), 4u);
    }
}

TEST(DiskSolve, BoundaryTraceNorm) {
    const auto disk = GridChart::disk(65, 1.0);
    const auto one = SpinorField::sample(disk, 1, [](double, double, std::span<Complex> o) { o[0] = 1.0; });
    // Constant trace: derivative vanishes and the p-norm is the curve length^(1/p).
    EXPECT_NEAR(boundary_w1p_norm(one, 2.0), std::sqrt(2 * kPi), 0.05);
}

TEST(EstimateRatio, StableAcrossRefinement) {
    const auto rep = estimate_ratio(4.0 / 3.0, 3, {64, 128}, 0);
    ASSERT_EQ(rep.ratios.size(), 2u);
    EXPECT_TRUE(std::isfinite(rep.ratios[0]));
    EXPECT_GT(rep.ratios[0], 0.0);
    EXPECT_LT(rep.max_drift, 0.2);
}

TEST(EstimateRatio, DeterministicForSeed) {
    const auto a = estimate_ratio(3.0, 2, {32, 64}, 9);
    const auto b = estimate_ratio(3.0, 2, {32, 64}, 9);
    EXPECT_EQ(a.ratios, b.ratios);
}

TEST(EstimateRatio, RejectsExponentTwo) {
    EXPECT_THROW(estimate_ratio(2.0, 1, {32, 64}), ConfigError);
    EXPECT_THROW(estimate_ratio(5.0, 1, {32, 64}), ConfigError);
}

TEST(EstimateRatio, TrialSourceIsReproducible) {
    const auto disk = GridChart::disk(33, 1.0);
    EXPECT_EQ(max_abs_difference(ratio_trial_source(disk, 4, 1), ratio_trial_source(disk, 4, 1)), 0.0);
    EXPECT_GT(max_abs_difference(ratio_trial_source(disk, 4, 1), ratio_trial_source(disk, 4, 2)), 0.0);
}

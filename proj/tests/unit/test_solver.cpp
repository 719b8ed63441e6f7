#include <gtest/gtest.h>

#include <cmath>

#include "spinflow/oracles.hpp"
#include "spinflow/quadrature.hpp"
#include "spinflow/random.hpp"
#include "spinflow/solver.hpp"

using namespace spinflow;

namespace {

const GridChart kTorus = GridChart::torus(32, 32, 1, 1, SpinStructure::AntiAnti);

SpinorField constant(const GridChart& c, Complex a, Complex b) {
    return SpinorField::sample(c, 1, [&](double, double, std::span<Complex> o) {
        o[0] = a;
        o[1] = b;
    });
}

std::vector<double> random_tensor(int n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> t(static_cast<std::size_t>(n * n * n * n));
    for (auto& v : t) v = rng.symmetric();
    return t;
}

std::vector<std::pair<std::string, ReactionSpec>> all_specs() {
    const auto one = ScalarData::constant(1.0);
    return {{"ScalarH", ReactionSpec::scalar_h(one)},
            {"GeneralCubic", ReactionSpec::general_cubic(2, random_tensor(2, 7))},
            {"CurvatureCubic", ReactionSpec::curvature_cubic(2, ReactionSpec::constant_curvature_tensor(2, 1.0))},
            {"SU2", ReactionSpec::chiral_uv(ChiralPreset::SU2, one)},
            {"Nil", ReactionSpec::chiral_uv(ChiralPreset::Nil, one)},
            {"SL2", ReactionSpec::chiral_uv(ChiralPreset::SL2, one)}};
}

}  // namespace

TEST(RhsEval, ScalarHOnUnitSpinor) {
    const auto spec = ReactionSpec::scalar_h(ScalarData::constant(1.0));
    const auto out = rhs_eval(spec, constant(kTorus, 1.0, 0.0));
    EXPECT_EQ(max_abs_difference(out, constant(kTorus, 1.0, 0.0)), 0.0);
}

TEST(RhsEval, ComponentMismatchIsConfigError) {
    const auto spec = ReactionSpec::general_cubic(2, random_tensor(2, 1));
    EXPECT_THROW(rhs_eval(spec, SpinorField(kTorus, 1)), ConfigError);
}

TEST(RhsEval, GeneralCubicWithScalarTensorMatchesScalarH) {
    // H^0_{000} = h reproduces R = h <psi, psi> psi.
    const auto g = ReactionSpec::general_cubic(1, {0.7});
    const auto s = ReactionSpec::scalar_h(ScalarData::constant(0.7));
    const auto psi = oracles::random_field(kTorus, 1, 3);
    EXPECT_LE(max_abs_difference(rhs_eval(g, psi), rhs_eval(s, psi)), 1e-15);
}

TEST(RhsEval, ScalarFieldCoefficient) {
    std::vector<double> h(kTorus.size());
    for (std::size_t k = 0; k < h.size(); ++k) h[k] = kTorus.x(kTorus.col(k));
    const auto spec = ReactionSpec::scalar_h(ScalarData::field(kTorus, h));
    const auto out = rhs_eval(spec, constant(kTorus, 1.0, 0.0));
    for (std::size_t k = 0; k < h.size(); ++k) EXPECT_DOUBLE_EQ(out(k, 0, 0).real(), h[k]);
    EXPECT_DOUBLE_EQ(spec.h0(), kTorus.x(kTorus.nx() - 1));
    EXPECT_GT(spec.h1(), 0.0);
}

TEST(CurvatureCubic, RejectsTensorWithoutSymmetries) {
    auto t = ReactionSpec::constant_curvature_tensor(2, 1.0);
    t[1] += 0.5;
    EXPECT_THROW(ReactionSpec::curvature_cubic(2, t), ConfigError);
}

TEST(ChiralUV, PresetNames) {
    EXPECT_EQ(chiral_preset_from_string("SU2"), ChiralPreset::SU2);
    EXPECT_EQ(chiral_preset_from_string("Nil"), ChiralPreset::Nil);
    EXPECT_EQ(chiral_preset_from_string("SL2"), ChiralPreset::SL2);
    EXPECT_THROW(chiral_preset_from_string("E8"), ConfigError);
}

TEST(ChiralUV, ActsOnChiralHalvesSeparately) {
    ChiralCoefficients u{{1, 0}, {}, {}, {}};
    ChiralCoefficients v{{2, 0}, {}, {}, {}};
    const auto spec = ReactionSpec::chiral_custom(u, v, ScalarData::constant(1.0));
    const auto out = rhs_eval(spec, constant(kTorus, 1.0, 1.0));
    // |psi|^2 = 2: first slot V psi_1 = 4, second slot U psi_2 = 2.
    EXPECT_NEAR(std::abs(out(0, 0, 0) - 4.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out(0, 0, 1) - 2.0), 0.0, 1e-15);
}

TEST(RhsDerivative, MatchesFiniteDifferenceQuotient) {
    for (const auto& [name, spec] : all_specs()) {
        const auto psi = oracles::random_field(kTorus, spec.n(), 4);
        const auto dpsi = oracles::random_field(kTorus, spec.n(), 5);
        const double t = 1e-6;
        auto plus = psi;
        plus.axpy(t, dpsi);
        auto minus = psi;
        minus.axpy(-t, dpsi);
        auto fd = rhs_eval(spec, plus);
        fd -= rhs_eval(spec, minus);
        fd *= 1.0 / (2 * t);
        EXPECT_LE(max_abs_difference(fd, rhs_derivative(spec, psi, dpsi)), 1e-7) << name;
    }
}

TEST(Residual, ZeroField) {
    const auto spec = ReactionSpec::scalar_h(ScalarData::constant(1.0));
    EXPECT_EQ(residual(spec, SpinorField(kTorus, 1), DiracMode::Spectral).norm, 0.0);
}

TEST(Residual, ConstantIsHarmonicOnPeriodicTorus) {
    const auto pp = GridChart::torus(16, 16, 1, 1);
    const auto spec = ReactionSpec::scalar_h(ScalarData::constant(0.0));
    EXPECT_LE(residual(spec, constant(pp, 1.0, 2.0), DiracMode::Spectral).norm, 1e-13);
}

TEST(SmallnessMargin, Definition) {
    const auto spec = ReactionSpec::scalar_h(ScalarData::constant(1.0));
    EXPECT_EQ(smallness_margin(spec, SpinorField(kTorus, 1)), 0.0);
    const auto unit = GridChart::torus(16, 16, 1, 1);
    // energy 0.01 on the unit torus: margin = sqrt(0.01).
    const auto psi = constant(unit, std::pow(0.01, 0.25), 0.0);
    EXPECT_NEAR(smallness_margin(spec, psi), 0.1, 1e-14);
}

TEST(Picard, ZeroReactionConvergesToZero) {
    const auto spec = ReactionSpec::scalar_h(ScalarData::constant(0.0));
    const auto seed = oracles::random_field(kTorus, 1, 12);
    const auto res = picard_solve(spec, seed, nullptr);
    EXPECT_TRUE(res.report.converged);
    EXPECT_LE(lp_norm(res.psi, INFINITY), 1e-7);
}

TEST(Picard, PeriodicPeriodicIsRejected) {
    const auto pp = GridChart::torus(16, 16, 1, 1);
    const auto spec = ReactionSpec::scalar_h(ScalarData::constant(1.0));
    EXPECT_THROW(picard_solve(spec, SpinorField(pp, 1), nullptr), ConfigError);
}

TEST(Picard, ManufacturedSolutionsForEveryReaction) {
    for (const auto& [name, spec] : all_specs()) {
        const auto star = oracles::manufactured_profile(kTorus, spec.n(), 0.8);
        const auto forcing = manufactured_forcing(spec, star);
        PicardOptions po;
        po.tol = 1e-8;
        const auto pr = picard_solve(spec, SpinorField(kTorus, spec.n()), &forcing, po);
        EXPECT_TRUE(pr.report.converged) << name;
        EXPECT_LE(pr.report.final_residual, 1e-7) << name;
        EXPECT_LE(max_abs_difference(pr.psi, star), 1e-7) << name;
        EXPECT_EQ(pr.report.residuals.size(), static_cast<std::size_t>(pr.report.iterations)) << name;
    }
}

TEST(Picard, GuardViolationTakesTheErrorPath) {
    const auto spec = ReactionSpec::scalar_h(ScalarData::constant(1.0));
    const auto star = oracles::manufactured_profile(kTorus, 1, 6.0);
    ASSERT_GE(smallness_margin(spec, star), 1.0);
    const auto forcing = manufactured_forcing(spec, star);
    PicardOptions po;
    po.max_iter = 400;
    EXPECT_THROW(picard_solve(spec, SpinorField(kTorus, 1), &forcing, po), ConvergenceError);
}

TEST(Picard, DiskUsesSeedTrace) {
    const auto disk = GridChart::disk(33, 1.0);
    const auto spec = ReactionSpec::scalar_h(ScalarData::constant(0.0));
    const auto seed = SpinorField::sample(disk, 1, [](double, double, std::span<Complex> o) { o[0] = 1.0; });
    const auto res = picard_solve(spec, seed, nullptr);
    EXPECT_TRUE(res.report.converged);
    EXPECT_LE(max_abs_difference(res.psi, seed), 1e-6);
}

TEST(Newton, FixedPointAtExactSolution) {
    const auto spec = ReactionSpec::scalar_h(ScalarData::constant(1.0));
    const auto star = oracles::manufactured_profile(kTorus, 1, 0.8);
    const auto forcing = manufactured_forcing(spec, star);
    const auto nr = newton_refine(spec, star, &forcing);
    EXPECT_LE(nr.residuals.back(), 1e-10);
    EXPECT_LE(max_abs_difference(nr.psi, star), 1e-10);
}

TEST(Newton, RefinesPicardIterate) {
    const auto spec = ReactionSpec::chiral_uv(ChiralPreset::SL2, ScalarData::constant(1.0));
    const auto star = oracles::manufactured_profile(kTorus, 1, 0.8);
    const auto forcing = manufactured_forcing(spec, star);
    PicardOptions po;
    po.tol = 1e-4;
    const auto pr = picard_solve(spec, SpinorField(kTorus, 1), &forcing, po);
    const auto nr = newton_refine(spec, pr.psi, &forcing);
    EXPECT_LT(nr.residuals.back(), nr.residuals.front());
    EXPECT_LE(nr.residuals.back(), 1e-9);
}

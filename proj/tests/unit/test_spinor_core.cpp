#include <gtest/gtest.h>

#include <cmath>

#include "spinflow/clifford.hpp"
#include "spinflow/oracles.hpp"
#include "spinflow/quadrature.hpp"

using namespace spinflow;

namespace {

SpinorField constant(const GridChart& c, std::vector<Complex> v) {
    const int n = static_cast<int>(v.size() / 2);
    return SpinorField::sample(c, n, [&](double, double, std::span<Complex> o) {
        for (std::size_t k = 0; k < v.size(); ++k) o[k] = v[k];
    });
}

const GridChart kUnitTorus = GridChart::torus(16, 16, 1, 1);

}  // namespace

TEST(Clifford, Sigma1ActsOnFirstBasisVector) {
    const auto out = clifford_multiply(1, constant(kUnitTorus, {1.0, 0.0}));
    for (std::size_t k = 0; k < kUnitTorus.size(); ++k) {
        EXPECT_EQ(out(k, 0, 0), Complex(0, 0));
        EXPECT_EQ(out(k, 0, 1), Complex(-1, 0));
    }
}

TEST(Clifford, Sigma2ActsOnFirstBasisVector) {
    const auto out = clifford_multiply(2, constant(kUnitTorus, {1.0, 0.0}));
    EXPECT_EQ(out(5, 0, 0), Complex(0, 0));
    EXPECT_EQ(out(5, 0, 1), Complex(0, 1));
}

TEST(Clifford, DoubleApplicationIsMinusIdentity) {
    const auto psi = oracles::random_field(kUnitTorus, 2, 11);
    auto twice = clifford_multiply(1, clifford_multiply(1, psi));
    twice += psi;
    EXPECT_EQ(max_abs_difference(twice, SpinorField(kUnitTorus, 2)), 0.0);
}

TEST(Clifford, ChiralityMatrices) {
    const auto& c = CliffordRep::standard();
    const Mat2 gamma = Complex(0, 1) * (c.sigma1 * c.sigma2);
    EXPECT_EQ(gamma[0], Complex(-1, 0));
    EXPECT_EQ(gamma[3], Complex(1, 0));
    EXPECT_EQ(gamma[1], Complex(0, 0));
    EXPECT_EQ(gamma[2], Complex(0, 0));
    EXPECT_EQ(c.proj_plus[3], Complex(1, 0));
    EXPECT_EQ(c.proj_plus[0], Complex(0, 0));
    EXPECT_EQ(c.proj_minus[0], Complex(1, 0));
    EXPECT_EQ(c.proj_minus[3], Complex(0, 0));
}

TEST(Clifford, AlgebraRelationsHold) { EXPECT_LE(oracles::algebra_error(), 1e-12); }

TEST(Clifford, MultiplicationIsSkewForHermitianProduct) {
    const auto psi = oracles::random_field(kUnitTorus, 1, 3);
    const auto phi = oracles::random_field(kUnitTorus, 1, 4);
    for (int a = 1; a <= 2; ++a) {
        const auto ep = clifford_multiply(a, psi);
        const auto ef = clifford_multiply(a, phi);
        for (std::size_t k = 0; k < kUnitTorus.size(); ++k) {
            EXPECT_LE(std::abs(hermitian(ep.at(k), phi.at(k)) + hermitian(psi.at(k), ef.at(k))), 1e-14);
        }
    }
}

TEST(Clifford, HermitianProductConjugatesSecondSlot) {
    const std::vector<Complex> a{{1, 0}, {0, 0}};
    const std::vector<Complex> b{{0, 1}, {0, 0}};
    EXPECT_EQ(hermitian(a, b), Complex(0, -1));
}

TEST(Chirality, ProjectorsSplitTheField) {
    const auto psi = oracles::random_field(kUnitTorus, 1, 5);
    auto sum = chirality_project(Chirality::Plus, psi);
    sum += chirality_project(Chirality::Minus, psi);
    EXPECT_EQ(max_abs_difference(sum, psi), 0.0);
    const auto plus = chirality_project(Chirality::Plus, psi);
    EXPECT_EQ(plus(3, 0, 0), Complex(0, 0));
    EXPECT_EQ(plus(3, 0, 1), psi(3, 0, 1));
}

TEST(PointwiseNorm, ZeroField) {
    for (double v : pointwise_norm(SpinorField(kUnitTorus, 1))) EXPECT_EQ(v, 0.0);
}

TEST(PointwiseNorm, EuclideanNormOfComplexPair) {
    for (double v : pointwise_norm(constant(kUnitTorus, {3.0, Complex(0, 4)}))) EXPECT_DOUBLE_EQ(v, 5.0);
}

TEST(PointwiseNorm, SumsOverComponents) {
    for (double v : pointwise_norm(constant(kUnitTorus, {1.0, 0.0, 0.0, 1.0}))) EXPECT_DOUBLE_EQ(v, std::sqrt(2.0));
}

TEST(Energy, UnitAreaTorusConstantSpinor) {
    EXPECT_DOUBLE_EQ(energy(constant(kUnitTorus, {1.0, 0.0})), 1.0);
}

TEST(Energy, ZeroFieldAndEmptyRegion) {
    EXPECT_EQ(energy(SpinorField(kUnitTorus, 1)), 0.0);
    EXPECT_EQ(energy(constant(kUnitTorus, {1.0, 0.0}), NodeSet{}), 0.0);
}

TEST(Energy, BandLimitedFieldMatchesClosedFormIntegral) {
    // |psi|^4 = cos^4(2 pi x) integrates to 3/8 over the unit torus; the
    // periodic midpoint rule is exact for this trigonometric polynomial.
    const auto psi = SpinorField::sample(kUnitTorus, 1, [](double x, double, std::span<Complex> o) {
        o[0] = std::cos(2 * kPi * x);
    });
    EXPECT_NEAR(energy(psi), 3.0 / 8.0, 1e-14);
}

TEST(Energy, FourHomogeneous) {
    const auto psi = oracles::random_field(kUnitTorus, 2, 8);
    const Complex c(0.3, -1.7);
    const double e = energy(psi);
    EXPECT_NEAR(energy(c * psi), std::pow(std::abs(c), 4) * e, 1e-12 * e * std::pow(std::abs(c), 4));
}

TEST(Energy, AdditiveOverPartitions) {
    const auto psi = oracles::random_field(kUnitTorus, 1, 9);
    NodeSet left, right;
    for (std::size_t k = 0; k < kUnitTorus.size(); ++k) (kUnitTorus.col(k) < 7 ? left : right).push_back(k);
    const double total = energy(psi);
    EXPECT_NEAR(energy(psi, left) + energy(psi, right), total, 1e-14 * total);
}

TEST(Energy, DiskBoundaryNodesGetHalfWeight) {
    const auto disk = GridChart::disk(33, 1.0);
    const double a = disk.cell_area();
    for (auto k : disk.boundary_nodes()) EXPECT_DOUBLE_EQ(disk.weight(k), a / 2);
    for (auto k : disk.data_nodes()) {
        if (disk.kind(k) == NodeKind::Inside) EXPECT_DOUBLE_EQ(disk.weight(k), a);
    }
}

TEST(LpNorm, InfinityOfUnitSpinor) { EXPECT_DOUBLE_EQ(lp_norm(constant(kUnitTorus, {1.0, 0.0}), INFINITY), 1.0); }

TEST(LpNorm, Homogeneous) {
    const auto psi = oracles::random_field(kUnitTorus, 1, 10);
    const Complex c(2.0, 1.0);
    EXPECT_NEAR(lp_norm(c * psi, 4.0 / 3.0), std::abs(c) * lp_norm(psi, 4.0 / 3.0), 1e-12);
}

TEST(PairwiseSum, IndependentOfThreadCountByConstruction) {
    std::vector<double> v(1000);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = 1.0 / (1.0 + static_cast<double>(k));
    const double a = pairwise_sum(v);
    EXPECT_EQ(a, pairwise_sum(v));
    double naive = 0;
    for (double x : v) naive += x;
    EXPECT_NEAR(a, naive, 1e-12);
}

TEST(GridChart, RejectsTooFewNodes) {
    EXPECT_THROW(GridChart::torus(2, 16, 1, 1), ConfigError);
    EXPECT_THROW(GridChart::disk(16, -1.0), ConfigError);
}

TEST(SpinorField, MismatchedArithmeticThrows) {
    SpinorField a(kUnitTorus, 1);
    SpinorField b(kUnitTorus, 2);
    EXPECT_THROW(a += b, ConfigError);
}

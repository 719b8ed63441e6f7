#include <gtest/gtest.h>

#include <cmath>

#include "spinflow/blowup.hpp"
#include "spinflow/conformal.hpp"
#include "spinflow/oracles.hpp"
#include "spinflow/quadrature.hpp"

using namespace spinflow;

namespace {

const GridChart kPatch = GridChart::torus(256, 256, 2, 2, SpinStructure::PeriodicPeriodic, -1, -1);
const double kAmp = std::pow(std::log(2.0) / kPi, 0.25);

struct Bubble {
    double x, y, lambda;
};

// Unit-energy Gaussian bubbles in the first slot plus an optional smooth
// background in the second slot.
SpinorField bubbles(const GridChart& c, const std::vector<Bubble>& bs, double background = 0.0) {
    return SpinorField::sample(c, 1, [&](double x, double y, std::span<Complex> o) {
        o[1] = background;
        for (const auto& b : bs) {
            double dx = x - b.x;
            double dy = y - b.y;
            dx -= 2 * std::round(dx / 2);
            dy -= 2 * std::round(dy / 2);
            o[0] += kAmp / std::sqrt(b.lambda) * std::pow(2.0, -(dx * dx + dy * dy) / (4 * b.lambda * b.lambda));
        }
    });
}

FieldSequence single_bubble_sequence(double px, double py, double background = 0.0) {
    FieldSequence seq;
    for (int m = 0; m < 4; ++m) seq.push_back(bubbles(kPatch, {{px, py, 0.08 * std::pow(0.5, m)}}, background));
    return seq;
}

}  // namespace

TEST(Rescale, UnitScaleAtOriginIsIdentity) {
    const auto c = GridChart::torus(64, 64, 2, 2, SpinStructure::PeriodicPeriodic, -1, -1);
    const auto psi = oracles::conformal_bump(c);
    EXPECT_LE(max_abs_difference(rescale(psi, 0, 0, 1.0, c), psi), 1e-12);
}

TEST(Rescale, PreservesEnergy) {
    const auto c = GridChart::torus(128, 128, 2, 2, SpinStructure::PeriodicPeriodic, -1, -1);
    const auto psi = oracles::conformal_bump(c);
    const double e = energy(psi);
    EXPECT_LE(std::abs(energy(rescale(psi, 0.1, 0.0, 0.5, c)) - e) / e, 5e-4);
}

TEST(Rescale, LeavingDiskSourceIsDomainError) {
    const auto d = GridChart::disk(33, 1.0);
    EXPECT_THROW(rescale(SpinorField(d, 1), 0.8, 0.0, 1.0, GridChart::disk(33, 1.0)), DomainError);
}

TEST(ToCylinder, PreservesAnnulusEnergy) {
    const auto c = GridChart::torus(128, 128, 2, 2, SpinStructure::PeriodicPeriodic, -1, -1);
    const auto psi = oracles::annulus_bump(c);
    const double e = energy(psi);
    const auto cyl = to_cylinder(psi, 0, 0, 0, 1, 128, 128);
    EXPECT_EQ(cyl.chart().spin_structure(), SpinStructure::PeriodicPeriodic);
    EXPECT_LE(std::abs(energy(cyl) - e) / e, 5e-4);
}

TEST(ToCylinder, AnnulusTouchingCentreIsRejected) {
    const auto c = GridChart::torus(64, 64, 2, 2, SpinStructure::PeriodicPeriodic, -1, -1);
    EXPECT_THROW(to_cylinder(SpinorField(c, 1), 0, 0, 0, 20, 64, 64), PreconditionError);
}

TEST(SphereTransfer, RoundTripIsIdentity) {
    const auto big = GridChart::torus(128, 128, 8, 8, SpinStructure::PeriodicPeriodic, -4, -4);
    const auto psi = oracles::wide_bump(big);
    const auto s = sphere_transfer(psi, SphereDirection::ToSphere, GridChart::sphere(128, 128));
    const auto back = sphere_transfer(s, SphereDirection::ToPlane, big);
    EXPECT_LE(max_abs_difference(back, psi), 5e-3);
    const double e = energy(psi);
    EXPECT_LE(std::abs(energy(s) - e) / e, 5e-4);
}

TEST(SphereTransfer, ConstantPlaneFieldIsRejected) {
    const auto big = GridChart::torus(64, 64, 8, 8, SpinStructure::PeriodicPeriodic, -4, -4);
    const auto one = SpinorField::sample(big, 1, [](double, double, std::span<Complex> o) { o[0] = 1.0; });
    EXPECT_THROW(sphere_transfer(one, SphereDirection::ToSphere, GridChart::sphere(64, 64)), DecayError);
}

TEST(BlowupSet, SmallEnergySequenceIsEmpty) {
    const auto c = GridChart::torus(64, 64, 2, 2, SpinStructure::PeriodicPeriodic, -1, -1);
    const auto psi = 0.2 * oracles::smooth_field(c);
    ASSERT_LT(energy(psi), 0.01);
    EXPECT_TRUE(blowup_set({psi, psi, psi, psi}, 0.01, {0.2, 0.1}).empty());
}

TEST(BlowupSet, SingleBubbleIsFoundWithinOneCell) {
    const auto seq = single_bubble_sequence(0.3, -0.2);
    const auto pts = blowup_set(seq, 0.5, {0.2, 0.1, 0.05});
    ASSERT_EQ(pts.size(), 1u);
    EXPECT_LE(std::abs(pts[0].x - 0.3), kPatch.hx());
    EXPECT_LE(std::abs(pts[0].y + 0.2), kPatch.hy());
}

TEST(BlowupSet, SeparatedPointsAreNotMerged) {
    FieldSequence seq;
    for (int m = 0; m < 4; ++m) {
        const double l = 0.08 * std::pow(0.5, m);
        seq.push_back(bubbles(kPatch, {{-0.5, 0.0, l}, {0.5, 0.1, l}}));
    }
    EXPECT_EQ(blowup_set(seq, 0.5, {0.2, 0.1}).size(), 2u);
}

TEST(BallEnergies, MatchRegionQuadrature) {
    const auto c = GridChart::torus(64, 64, 2, 2, SpinStructure::PeriodicPeriodic, -1, -1);
    const auto psi = oracles::smooth_field(c);
    const auto be = ball_energies(psi, 0.3);
    const std::size_t k = c.index(40, 20);
    EXPECT_NEAR(be[k], energy(psi, ball_nodes(c, c.x(40), c.y(20), 0.3)), 1e-12);
}

TEST(ExtractBubble, RecoversPlantedScaleAndCentre) {
    const auto seq = single_bubble_sequence(0.3, -0.2, 0.3);
    const auto pts = blowup_set(seq, 0.5, {0.2, 0.1, 0.05});
    ASSERT_EQ(pts.size(), 1u);
    const auto track = extract_bubble(seq, pts[0], 0.5);
    ASSERT_EQ(track.lambda.size(), seq.size());
    for (std::size_t m = 0; m < seq.size(); ++m) {
        const double planted = 0.08 * std::pow(0.5, static_cast<double>(m));
        EXPECT_GE(track.lambda[m] / planted, 0.5);
        EXPECT_LE(track.lambda[m] / planted, 2.0);
        EXPECT_LE(std::hypot(track.cx[m] - 0.3, track.cy[m] + 0.2), 2 * kPatch.hx());
    }
    EXPECT_NEAR(track.energy, 1.0, 0.05);
}

TEST(ExtractBubble, BubbleEnergyApproachesPlantedEnergyAsRadiusGrows) {
    const auto seq = single_bubble_sequence(0.0, 0.0);
    const auto pts = blowup_set(seq, 0.5, {0.2, 0.1});
    ASSERT_EQ(pts.size(), 1u);
    double prev_gap = INFINITY;
    for (double big : {1.0, 2.0, 4.0}) {
        ExtractionOptions o;
        o.big_radius = big;
        const double gap = std::abs(extract_bubble(seq, pts[0], 0.5, o).energy - 1.0);
        EXPECT_LT(gap, prev_gap);
        prev_gap = gap;
    }
    EXPECT_LE(prev_gap, 0.02);
}

TEST(ExtractBubble, NoConcentrationCannotBracket) {
    const auto c = GridChart::torus(64, 64, 2, 2, SpinStructure::PeriodicPeriodic, -1, -1);
    const auto psi = 0.2 * oracles::smooth_field(c);
    BlowupPoint p;
    p.node = c.index(32, 32);
    EXPECT_THROW(extract_bubble({psi, psi, psi, psi}, p, 0.5), ExtractionError);
}

TEST(NeckEnergy, ZeroField) { EXPECT_EQ(neck_energy(SpinorField(kPatch, 1), 0, 0, 0.2, 5, 0.01), 0.0); }

TEST(NeckEnergy, MalformedAnnulusIsRejected) {
    EXPECT_THROW(neck_energy(SpinorField(kPatch, 1), 0, 0, 0.2, 5, 0.1), PreconditionError);
}

TEST(NeckEnergy, ShrinksAlongTheSequence) {
    const auto seq = single_bubble_sequence(0.0, 0.0, 0.3);
    double prev = INFINITY;
    for (std::size_t m = 0; m < seq.size(); ++m) {
        const double lambda = 0.08 * std::pow(0.5, static_cast<double>(m));
        const double delta = 0.4 * std::pow(0.75, static_cast<double>(m));
        const double e = neck_energy(seq[m], 0, 0, delta, 4.0 * std::pow(1.2, static_cast<double>(m)), lambda);
        EXPECT_LT(e, prev);
        prev = e;
    }
}

TEST(DecayProfile, SmoothFieldDecaysLikeArea) {
    const auto c = GridChart::torus(256, 256, 2, 2, SpinStructure::PeriodicPeriodic, -1, -1);
    const auto prof = decay_profile(oracles::smooth_field(c), 0.1, 0.0, {0.5, 0.25, 0.125, 0.0625});
    EXPECT_GE(prof.exponent, 0.1);
    EXPECT_FALSE(prof.flagged);
}

TEST(DecayProfile, SteepSpikeIsFlagged) {
    // |psi| ~ 1/r: F(r) is dominated by the innermost ring and barely grows.
    const auto c = GridChart::torus(256, 256, 2, 2, SpinStructure::PeriodicPeriodic, -1, -1);
    const auto prof = decay_profile(oracles::spike_field(c, -1.0), 0.0, 0.0, {0.5, 0.25, 0.125, 0.0625});
    EXPECT_TRUE(prof.flagged);
    EXPECT_LE(prof.exponent, 0.1);
}

TEST(DecayProfile, RejectsIncreasingRadiiAndZeroData) {
    const auto c = GridChart::torus(64, 64, 2, 2, SpinStructure::PeriodicPeriodic, -1, -1);
    EXPECT_THROW(decay_profile(oracles::smooth_field(c), 0, 0, {0.2, 0.4}), PreconditionError);
    EXPECT_THROW(decay_profile(SpinorField(c, 1), 0, 0, {0.4, 0.2}), DegenerateFitError);
}

TEST(CylinderSegments, SumToAnnulusEnergy) {
    const auto c = GridChart::torus(128, 128, 2, 2, SpinStructure::PeriodicPeriodic, -1, -1);
    const auto psi = oracles::annulus_bump(c);
    const auto seg = cylinder_segment_energies(psi, 0, 0, 0, 2, 64, 128);
    ASSERT_EQ(seg.size(), 2u);
    const double e = energy(psi, annulus_nodes(c, 0, 0, std::exp(-2.0), 1.0));
    EXPECT_NEAR(seg[0] + seg[1], e, 1e-3 * e);
}

TEST(Ledger, NoBubblesDefectIsQuadratureSmall) {
    const auto c = GridChart::torus(64, 64, 2, 2, SpinStructure::PeriodicPeriodic, -1, -1);
    const auto bg = oracles::smooth_field(c);
    FieldSequence seq;
    for (int m = 0; m < 4; ++m) {
        auto f = bg;
        f *= 1.0 + 0.01 * std::pow(0.5, m);
        seq.push_back(f);
    }
    const auto led = ledger_assemble(seq, &bg, {}, {}, 0.2);
    EXPECT_LE(std::abs(led.defect) / led.total_limit, 0.01);
    EXPECT_EQ(led.defect, led.recompute_defect());
}

TEST(Ledger, PlantedSequenceGroupsBubblesByPoint) {
    const auto planted = oracles::planted_blowup(256);
    const auto pts = blowup_set(planted.members, 0.5, {0.2, 0.1, 0.05});
    ASSERT_EQ(pts.size(), 2u);
    std::vector<std::vector<BubbleTrack>> tracks;
    for (const auto& p : pts) tracks.push_back(extract_bubbles(planted.members, p, 0.5));
    std::vector<std::size_t> counts{tracks[0].size(), tracks[1].size()};
    std::sort(counts.begin(), counts.end());
    EXPECT_EQ(counts, (std::vector<std::size_t>{1, 2}));
    const auto spec = ReactionSpec::curvature_cubic(2, ReactionSpec::constant_curvature_tensor(2, 1.0));
    const auto led = ledger_assemble(planted.members, &planted.background, pts, tracks, 0.2, &spec);
    EXPECT_LE(std::abs(led.defect) / led.total_limit, 0.01);
    EXPECT_EQ(led.bubbles.size(), 3u);
    EXPECT_NEAR(led.guard, spec.h0() * std::sqrt(led.energy_bound), 1e-12);
}

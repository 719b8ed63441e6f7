#pragma once

#include <optional>
#include <vector>

#include "spinflow/quadrature.hpp"
#include "spinflow/reaction.hpp"

namespace spinflow {

using FieldSequence = std::vector<SpinorField>;

struct BlowupPoint {
    std::size_t node = 0;
    double x = 0.0;
    double y = 0.0;
    std::vector<double> radii;
    /// Lower envelope (min over the sequence tail) of the ball energy at this
    /// node, one entry per radius.
    std::vector<double> liminf_energy;
};

/**
 * Nodes whose ball energy stays >= epsilon for every scheduled radius, with
 * liminf realised as the minimum over the last half of the sequence
 * (members M/2 .. M-1). Passing nodes are merged by single linkage at
 * distance 2 * max radius; each cluster is represented by its node with the
 * largest envelope at the smallest radius (ties: smallest index). Points are
 * returned in increasing node order.
 */
std::vector<BlowupPoint> blowup_set(const FieldSequence& sequence, double epsilon, std::vector<double> radii);

/// Ball energy E(psi; B_r(x_k)) for every node k (zero on Outside nodes).
std::vector<double> ball_energies(const SpinorField& psi, double r);

struct ExtractionOptions {
    /// Search radius around the blow-up point.
    double delta = 0.2;
    /// Radius (in bubble units) of the ball the rescaled fields live on.
    double big_radius = 5.0;
    /// Node count across the rescaled disk chart.
    int rescaled_nodes = 65;
    int max_bubbles = 8;
};

struct Exclusion {
    double x;
    double y;
    double r;
};

struct BubbleTrack {
    std::vector<double> lambda;
    std::vector<double> cx;
    std::vector<double> cy;
    /// lambda^{1/2} psi_m(x_m + lambda x) on a disk of radius big_radius.
    std::vector<SpinorField> rescaled;
    /// E(psi_last; B_{lambda R}(x_last)), equal to the energy of the last
    /// rescaled field up to interpolation error.
    double energy = 0.0;
};

/**
 * For every member chooses x_m and lambda_m so that the largest energy of a
 * ball of radius lambda_m centred in B_delta(p), away from the exclusion
 * balls, equals epsilon / 2 (bisection to epsilon / 100). Ball energies use
 * a smoothed indicator min(max((rho - d)/h + 1/2, 0), 1) so they vary
 * continuously with rho; density inside exclusion balls is ignored.
 *
 * Throws ExtractionError when the target energy cannot be bracketed.
 */
BubbleTrack extract_bubble(const FieldSequence& sequence, const BlowupPoint& point, double epsilon,
                           const ExtractionOptions& options = {},
                           const std::vector<std::vector<Exclusion>>& exclusions = {});

/// Repeated extraction at one point; each found bubble excludes the balls
/// B_{lambda_m R}(x_m) from later searches. Stops at the first bracket failure.
std::vector<BubbleTrack> extract_bubbles(const FieldSequence& sequence, const BlowupPoint& point, double epsilon,
                                         const ExtractionOptions& options = {});

/// E(psi; {lambda R <= |x - c| < delta}). Throws PreconditionError unless
/// 0 < lambda R < delta and the annulus fits in the chart.
double neck_energy(const SpinorField& psi, double cx, double cy, double delta, double big_radius, double lambda);

struct DecayProfile {
    std::vector<double> radii;
    /// F(r) = sum over 0 < |x - c| <= r of w (|psi|^4 + |grad psi|^{4/3}).
    std::vector<double> values;
    /// Least-squares slope of log F against log r.
    double exponent = 0.0;
    /// exponent < 0.1.
    bool flagged = false;
};

/// Throws PreconditionError unless radii decrease and the smallest is >= 4h;
/// DegenerateFitError if some F(r) vanishes.
DecayProfile decay_profile(const SpinorField& psi, double cx, double cy, const std::vector<double>& radii);

/// Energies of the unit cylinder segments [t, t + 1] x S^1, t = t1 .. t2 - 1.
std::vector<double> cylinder_segment_energies(const SpinorField& psi, double cx, double cy, int t1, int t2,
                                              int nodes_per_unit, int ntheta);

struct BubbleRecord {
    /// Index into EnergyLedger::points.
    std::size_t point = 0;
    double lambda = 0.0;
    double x = 0.0;
    double y = 0.0;
    double energy = 0.0;
};

struct EnergyLedger {
    /// E of the last sequence member (finite surrogate of lim E(psi_m)).
    double total_limit = 0.0;
    double background = 0.0;
    std::vector<BlowupPoint> points;
    std::vector<BubbleRecord> bubbles;
    double defect = 0.0;
    /// Uniform bound max_m E(psi_m).
    double energy_bound = 0.0;
    /// h0 sqrt(energy_bound); zero without a reaction spec.
    double guard = 0.0;
    bool guard_exceeded = false;

    /// total_limit - background - sum of bubble energies, summed in order.
    double recompute_defect() const;
};

/**
 * Assembles the energy ledger. With a background field its energy is used;
 * otherwise the background is the last member's energy outside the balls
 * B_delta(p) around the blow-up points.
 */
EnergyLedger ledger_assemble(const FieldSequence& sequence, const SpinorField* background,
                             const std::vector<BlowupPoint>& points, const std::vector<std::vector<BubbleTrack>>& bubbles,
                             double delta, const ReactionSpec* spec = nullptr, double guard_threshold = 0.5);

}  // namespace spinflow

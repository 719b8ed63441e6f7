#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "spinflow/blowup.hpp"
#include "spinflow/surface.hpp"

namespace spinflow {

/// Reference fields with known analytic behaviour, shared by the verify
/// command, the test suites and the Python bindings.
namespace oracles {

/// Largest entry error over the Clifford relations, the chirality projector
/// algebra and skew-Hermiticity of the stored matrices.
double algebra_error();
/// max over nodes of |phi_1^2 + phi_2^2 + phi_3^2| / |psi|^4.
double null_identity_error(const SpinorField& psi);
/// Seeded uniform field with entries in [-1,1) + i[-1,1) (zero off-chart).
SpinorField random_field(const GridChart& chart, int n, std::uint64_t seed);

/// Smooth two-mode field on an AntiAnti torus of period 1.
SpinorField weitzenboeck_field(const GridChart& torus);

/// Compactly supported bump pair on the patch [-1,1)^2: psi_c and its
/// finite-difference Dirac image f (returned in that order).
std::pair<SpinorField, SpinorField> green_pair(const GridChart& patch);

/**
 * Trigonometric profile compatible with the chart's spin structure, used as
 * psi* for manufactured solves. With u = 2 pi s_x (x - ox) / Lx and
 * v = 2 pi s_y (y - oy) / Ly (s = 1/2 along antiperiodic cycles, 1 otherwise):
 *   psi^q_1 = A cos(u) cos(v + 0.1 pi q)
 *   psi^q_2 = 0.75 i A sin(u + 0.2 q) cos(v) + 0.375 A cos(3 v)
 */
SpinorField manufactured_profile(const GridChart& torus, int n, double amplitude);

/// psi = (0, 1): the flat plane.
SpinorField plane_field(const GridChart& chart);
/// psi = (1, x + i y): Enneper's minimal surface.
SpinorField enneper_field(const GridChart& chart);

/// Bump fields for the conformal checks: a bump around (0.1, 0) of radius
/// 0.45, an annular bump on 0.39 < r < 0.95, and a bump of radius 2.5 meant
/// for the patch [-4,4)^2.
SpinorField conformal_bump(const GridChart& chart);
SpinorField annulus_bump(const GridChart& chart);
SpinorField wide_bump(const GridChart& chart);

struct PlantedBlowup {
    FieldSequence members;
    SpinorField background;
    /// Planted scale per member (shared by all three bubbles).
    std::vector<double> lambda;
    /// Planted points: two bubbles collide at (-0.45, 0), one sits at (0.45, 0.2).
    std::vector<std::array<double, 2>> points;
};

/**
 * Six n = 2 fields on the PeriodicPeriodic patch [-1,1)^2 with `nodes`
 * nodes per side. Each member is a smooth background in the second
 * component plus three Gaussian bubbles in the first component of unit
 * energy and scale lambda_m = 0.03 * 0.8^m; the bubbles at the left point
 * sit in different spinor slots at separation 0.16 * 0.85^m.
 */
PlantedBlowup planted_blowup(int nodes);

/// sin(pi x) e^{-x^2-y^2} type smooth field (no concentration).
SpinorField smooth_field(const GridChart& chart);
/// |psi| ~ r^{-1/4} spike at the origin times a smooth cutoff.
SpinorField spike_field(const GridChart& chart, double exponent = -0.25);

/// Unit-sphere band theta in [0.3, 2.8] on an (n+1) x n lattice, oriented so
/// that the outward normal gives H = +1.
SurfaceMesh sphere_band_mesh(int n);

}  // namespace oracles
}  // namespace spinflow

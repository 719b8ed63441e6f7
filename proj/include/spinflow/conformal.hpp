#pragma once

#include "spinflow/spinor_field.hpp"

namespace spinflow {

/**
 * lambda^{1/2} psi(x0 + lambda x) sampled on the data nodes of `target`
 * (bicubic interpolation). With this weight both E and the cubic equation
 * are invariant. Throws DomainError when the sampled region leaves a disk
 * source, or when it is wider than a period of a torus source.
 */
SpinorField rescale(const SpinorField& psi, double x0, double y0, double lambda, const GridChart& target);

/**
 * Cylinder picture around (cx, cy): Psi(t, theta) = e^{-t/2} psi(c + e^{-t} e^{i theta})
 * on a chart with periods (t2 - t1, 2 pi), nt nodes at cell midpoints in t and
 * ntheta nodes in theta, tagged PeriodicPeriodic. The segment [t1, t2] covers
 * the annulus e^{-t2} <= r <= e^{-t1}.
 *
 * Throws PreconditionError when the inner radius e^{-t2} is below one source
 * cell, DomainError when the annulus leaves a disk source.
 */
SpinorField to_cylinder(const SpinorField& psi, double cx, double cy, double t1, double t2, int nt, int ntheta);

enum class SphereDirection { ToSphere, ToPlane };

struct SphereTransferOptions {
    /// Fraction of the chart half-width that counts as the outer band.
    double band = 0.2;
    /// Largest allowed share of the energy inside the outer band.
    double decay_threshold = 1e-3;
};

/**
 * Stereographic transfer with conformal weight 1/2. The plane coordinate is
 * z = cot(theta / 2) e^{i phi} (projection from the north pole theta = 0),
 * the conformal factor mu = 2 / (1 + |z|^2), and Phi = mu^{-1/2} psi.
 *
 * ToSphere: `target` must be a sphere chart; points whose preimage lies off
 * the plane chart get zero. Throws DecayError if more than decay_threshold
 * of the energy sits in the outer band of the plane chart.
 * ToPlane: psi lives on a sphere chart and `target` is a plane chart.
 */
SpinorField sphere_transfer(const SpinorField& psi, SphereDirection direction, const GridChart& target,
                            const SphereTransferOptions& options = {});

}  // namespace spinflow

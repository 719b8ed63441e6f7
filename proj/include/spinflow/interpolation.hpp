#pragma once

#include <span>

#include "spinflow/spinor_field.hpp"

namespace spinflow {

/**
 * Bicubic (Catmull-Rom) evaluation of a field at arbitrary chart coordinates.
 *
 * Torus: coordinates wrap, picking up a sign per crossed antiperiodic cycle.
 * Disk: points with |x| > radius are rejected; stencils that reach Outside
 * nodes fall back to bilinear, then to the nearest data node.
 * Sphere: x is longitude (periodic), y colatitude; stencils crossing a pole
 * are reflected to the opposite meridian.
 */
class FieldInterpolator {
public:
    explicit FieldInterpolator(const SpinorField& field) : f_(field) {}

    /// Writes the 2n interpolated values; false when the point is off the chart.
    bool sample(double x, double y, std::span<Complex> out) const;

private:
    bool sample_torus(double x, double y, std::span<Complex> out) const;
    bool sample_disk(double x, double y, std::span<Complex> out) const;
    bool sample_sphere(double x, double y, std::span<Complex> out) const;

    const SpinorField& f_;
};

/// Catmull-Rom weights for the nodes at offsets -1, 0, 1, 2 and fraction t.
void catmull_rom_weights(double t, double w[4]);

}  // namespace spinflow

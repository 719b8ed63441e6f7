#pragma once

#include "spinflow/clifford.hpp"
#include "spinflow/spinor_field.hpp"

namespace spinflow {

/**
 * Free-space Green kernel of the flat Dirac operator,
 *   K(x) = -(1 / 2pi) (x1 sigma1 + x2 sigma2) / |x|^2,
 * so that D (K * f) = f for compactly supported f. Inside the
 * regularisation radius the kernel is replaced by its average over the
 * self cell, which vanishes because K is odd.
 */
struct GreenKernel {
    double regularization_radius = 0.0;

    Mat2 operator()(double dx, double dy) const;
};

enum class ConvolutionMethod { Direct, Accelerated };

/**
 * Dirac-Newton potential w(x) = sum_y K(x - y) f(y) hx hy on a disk chart or
 * on a torus chart used as a planar patch (no periodisation). Direct is the
 * O(N^2) summation with the explicit 2x2 kernel; Accelerated is a
 * zero-padded FFT convolution of the same discrete sum.
 *
 * Throws PreconditionError when f is non-zero on the outer node ring (disk
 * boundary nodes, or the first/last row and column of a torus patch).
 */
SpinorField green_convolve(const SpinorField& f, ConvolutionMethod method = ConvolutionMethod::Accelerated);

}  // namespace spinflow

#pragma once

#include <vector>

#include "spinflow/spinor_field.hpp"

namespace spinflow {

enum class DiracMode { FiniteDifference, Spectral };

/// Finite-difference stencil family. BrokenForwardForTesting replaces the
/// centred first derivative by a first-order forward difference; it exists
/// only so verification runs can demonstrate a failing check.
enum class Stencil { Central, BrokenForwardForTesting };

/**
 * Flat Dirac operator sigma1 d_x + sigma2 d_y. Per 2-block the result is
 * (2 dbar psi_2, -2 d psi_1) with d = (d_x - i d_y)/2, dbar = (d_x + i d_y)/2.
 *
 * FiniteDifference: centred second-order differences; disk boundary nodes
 * use one-sided second-order differences. Spectral: exact per Fourier mode
 * on a torus, with half-integer frequency shifts along antiperiodic cycles.
 * Throws DomainError for Spectral on a non-torus chart and for any mode on
 * a sphere chart.
 */
SpinorField dirac_apply(const SpinorField& psi, DiracMode mode, Stencil stencil = Stencil::Central);

/// Componentwise flat Laplacian d_x^2 + d_y^2.
SpinorField laplace_apply(const SpinorField& psi, DiracMode mode);

/// L2 norm of D(D psi) + Laplace(psi) on a torus; zero in exact arithmetic
/// for the spectral discretisation.
double weitzenboeck_residual(const SpinorField& psi, DiracMode mode, Stencil stencil = Stencil::Central);

/// Exact spectral inverse of the Dirac operator on a torus. Throws
/// ConfigError when the spin structure admits harmonic spinors (PP).
SpinorField dirac_inverse_spectral(const SpinorField& f);

/// Smallest modulus of the spectral Dirac symbol over all torus modes.
/// Zero exactly when constant spinors are harmonic.
double dirac_symbol_min(const GridChart& torus);

/// Centred finite-difference partial derivatives of every stored value
/// (same layout as psi.values()).
void fd_gradient(const SpinorField& psi, std::vector<Complex>& dx, std::vector<Complex>& dy,
                 Stencil stencil = Stencil::Central);

/// |grad psi| per node, sqrt(sum |d_x psi|^2 + |d_y psi|^2), finite differences.
std::vector<double> gradient_norm(const SpinorField& psi);

}  // namespace spinflow

#pragma once

#include <vector>

#include "spinflow/spinor_field.hpp"

namespace spinflow {

struct DiskSolveOptions {
    double tol = 1e-10;
    /// 0 selects 10 * (number of complex unknowns).
    long max_iter = 0;
};

struct DiskSolveResult {
    SpinorField psi;
    /// Relative normal-equation residual ||A^H (b - A psi)|| / ||A^H b||; the
    /// stopping quantity, since the stacked system is solved in least squares.
    double residual = 0.0;
    /// ||b - A psi|| / ||b||.
    double system_residual = 0.0;
    long iterations = 0;
    std::vector<double> history;
};

/**
 * Boundary-value problem D psi = f on a disk chart with psi = trace on the
 * boundary nodes. The discrete system stacks the Dirac operator evaluated
 * at cell centres (box stencil over the four corners, f averaged from the
 * corners) and the rows (psi - trace) / h at Boundary nodes. The
 * overdetermined system is solved in least squares by conjugate gradients
 * on the normal equations (CGNR).
 *
 * Only boundary values of `trace` are read.
 * Throws DomainError off the disk and ConvergenceError (with the relative
 * residual history) when max_iter is exhausted.
 */
DiskSolveResult disk_solve(const SpinorField& f, const SpinorField& trace, const DiskSolveOptions& options = {});

/**
 * Discrete W^{1,p} norm of the boundary trace: the p-norm of phi along the
 * boundary curve plus the p-norm of its arclength derivative (centred
 * differences). The curve is the boundary node set ordered by polar angle.
 */
double boundary_w1p_norm(const SpinorField& trace, double p);

}  // namespace spinflow

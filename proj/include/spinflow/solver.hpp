#pragma once

#include <optional>
#include <vector>

#include "spinflow/dirac.hpp"
#include "spinflow/reaction.hpp"

namespace spinflow {

struct ResidualResult {
    SpinorField field;
    /// L^{4/3} norm of the residual field.
    double norm = 0.0;
};

/// D psi - R(psi) - forcing, with its L^{4/3} norm.
ResidualResult residual(const ReactionSpec& spec, const SpinorField& psi, DiracMode mode,
                        const SpinorField* forcing = nullptr);

/// h0 * ||psi||_{L^4}^2.
double smallness_margin(const ReactionSpec& spec, const SpinorField& psi);

/// D psi_star - R(psi_star) with the spectral operator, so that psi_star
/// solves the forced problem exactly at the discrete level.
SpinorField manufactured_forcing(const ReactionSpec& spec, const SpinorField& psi_star);

struct PicardOptions {
    double damping = 0.5;
    /// Stop once the weighted L2 norm of the update drops below tol.
    double tol = 1e-8;
    int max_iter = 5000;
    /// Smallness guard; reports flag margins at or above it.
    double guard = 0.5;
};

struct IterationReport {
    bool converged = false;
    int iterations = 0;
    std::vector<double> updates;
    /// L^{4/3} residual after each iteration.
    std::vector<double> residuals;
    double final_residual = 0.0;
    double smallness_margin = 0.0;
    bool guard_exceeded = false;
};

struct PicardResult {
    SpinorField psi;
    IterationReport report;
};

/**
 * Damped fixed-point iteration psi <- (1 - theta) psi + theta D^{-1}(R(psi) + F).
 *
 * Torus charts use the exact spectral inverse and the spectral residual;
 * PeriodicPeriodic is rejected with ConfigError because constants are
 * harmonic. Disk charts invert with disk_solve, keeping the seed's boundary
 * values as the trace, and report the finite-difference residual.
 *
 * Throws DivergenceError when the update grows tenfold over 20 iterations or
 * turns non-finite, ConvergenceError when max_iter is exhausted; both carry
 * the update history.
 */
PicardResult picard_solve(const ReactionSpec& spec, const SpinorField& seed, const SpinorField* forcing,
                          const PicardOptions& options = {});

struct NewtonOptions {
    double tol = 1e-10;
    int max_steps = 8;
    int gmres_restart = 60;
    int gmres_max_restarts = 30;
    /// Relative tolerance of each linear solve.
    double gmres_tol = 1e-13;
};

struct NewtonResult {
    SpinorField psi;
    int steps = 0;
    /// L^{4/3} residual before the first step and after each accepted step.
    std::vector<double> residuals;
    bool converged = false;
    /// Set when a step failed to decrease the residual or GMRES stalled.
    bool stagnated = false;
    double last_update = 0.0;
};

/**
 * Newton refinement on a torus with the spectral operator. Each step solves
 * (I - D^{-1} dR(psi)) delta = -D^{-1} r by restarted GMRES in the real inner
 * product Re<.,.> (dR is only real-linear). Steps that do not decrease the
 * residual are rejected and reported as stagnation.
 */
NewtonResult newton_refine(const ReactionSpec& spec, const SpinorField& psi, const SpinorField* forcing,
                           const NewtonOptions& options = {});

}  // namespace spinflow

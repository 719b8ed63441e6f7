#pragma once

#include <cstdint>
#include <vector>

#include "spinflow/spinor_field.hpp"

namespace spinflow {

struct RatioReport {
    double p = 0.0;
    int trials = 0;
    /// Trials skipped because the source vanished identically.
    int skipped = 0;
    std::vector<int> levels;
    /// Max over trials of ||grad w||_p / ||f||_p, one entry per level.
    std::vector<double> ratios;
    /// Largest relative change between consecutive levels.
    double max_drift = 0.0;
};

/**
 * Random band-limited source used by estimate_ratio on a disk chart of
 * radius 1: trial t draws Fourier coefficients from SplitMix64(seed + t) and
 * multiplies by a smooth bump supported in |x| < 0.7, so the same function
 * is sampled at every refinement level.
 */
SpinorField ratio_trial_source(const GridChart& disk, std::uint64_t seed, int trial);

/**
 * Empirical constant of the interior estimate ||grad w||_p <= C ||f||_p for
 * the Dirac-Newton potential w = green_convolve(f). Levels are disk node
 * counts. Throws ConfigError unless p lies in (1, 2) or (2, 4].
 */
RatioReport estimate_ratio(double p, int trials, const std::vector<int>& levels, std::uint64_t seed = 0);

}  // namespace spinflow

#include "spinflow/estimate_ratio.hpp"

#include <algorithm>
#include <cmath>

#include "spinflow/dirac.hpp"
#include "spinflow/green.hpp"
#include "spinflow/quadrature.hpp"
#include "spinflow/random.hpp"

namespace spinflow {

namespace {

constexpr int kModes = 3;
constexpr double kSupport = 0.7;

double bump(double r) {
    const double s = r / kSupport;
    if (s >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

}  // namespace

SpinorField ratio_trial_source(const GridChart& disk, std::uint64_t seed, int trial) {
    SplitMix64 rng(seed + static_cast<std::uint64_t>(trial));
    const int side = 2 * kModes + 1;
    std::vector<Complex> coef(2 * side * side);
    for (auto& c : coef) {
        const double re = rng.symmetric();
        const double im = rng.symmetric();
        c = {re, im};
    }
    return SpinorField::sample(
        disk, 1,
        [&](double x, double y, std::span<Complex> out) {
            const double b = bump(std::hypot(x, y));
            if (b == 0.0) return;
            for (int s = 0; s < 2; ++s) {
                Complex acc{};
                for (int ky = -kModes; ky <= kModes; ++ky)
                    for (int kx = -kModes; kx <= kModes; ++kx) {
                        const std::size_t idx = (s * side + (ky + kModes)) * side + (kx + kModes);
                        acc += coef[idx] * std::polar(1.0, kPi * (kx * x + ky * y));
                    }
                out[s] = b * acc;
            }
        },
        "ratio-source");
}

RatioReport estimate_ratio(double p, int trials, const std::vector<int>& levels, std::uint64_t seed) {
    if (!((p > 1.0 && p < 2.0) || (p > 2.0 && p <= 4.0))) {
        throw ConfigError("estimate_ratio needs p in (1, 2) or (2, 4]");
    }
    RatioReport rep;
    rep.p = p;
    rep.trials = trials;
    rep.levels = levels;
    for (int n : levels) {
        const GridChart disk = GridChart::disk(n, 1.0);
        double worst = 0.0;
        int skipped = 0;
        for (int t = 0; t < trials; ++t) {
            const SpinorField f = ratio_trial_source(disk, seed, t);
            const double fn = lp_norm(f, p);
            if (fn == 0.0) {
                ++skipped;
                continue;
            }
            const SpinorField w = green_convolve(f);
            const auto g = gradient_norm(w);
            worst = std::max(worst, lp_norm_scalar(disk, g, p) / fn);
        }
        rep.skipped = skipped;
        rep.ratios.push_back(worst);
    }
    for (std::size_t k = 1; k < rep.ratios.size(); ++k) {
        const double a = rep.ratios[k - 1];
        const double b = rep.ratios[k];
        if (a > 0.0) rep.max_drift = std::max(rep.max_drift, std::abs(b - a) / a);
    }
    return rep;
}

}  // namespace spinflow

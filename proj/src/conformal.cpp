#include "spinflow/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "spinflow/interpolation.hpp"
#include "spinflow/parallel.hpp"
#include "spinflow/quadrature.hpp"

namespace spinflow {

namespace {

/// Half-extent of a planar chart along x and y, measured from its centre.
void chart_extent(const GridChart& c, double& cx, double& cy, double& hx, double& hy) {
    if (c.domain() == DomainKind::Disk) {
        cx = cy = 0.0;
        hx = hy = c.radius();
        return;
    }
    hx = 0.5 * c.period_x();
    hy = 0.5 * c.period_y();
    cx = c.origin_x() + hx;
    cy = c.origin_y() + hy;
}

void require_planar(const GridChart& c, const char* what) {
    if (c.domain() == DomainKind::SphereChart) throw DomainError(std::string(what) + " needs a planar chart");
}

SpinorField resample(const SpinorField& src, const GridChart& target, std::string tag,
                     const std::function<bool(double, double, std::span<Complex>)>& rule) {
    SpinorField out(target, src.n(), std::move(tag));
    bool failed = false;
    parallel_for(target.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            if (!target.has_data(k)) continue;
            if (!rule(target.x(target.col(k)), target.y(target.row(k)), out.at(k))) failed = true;
        }
    });
    if (failed) throw DomainError("transformed point left the source chart");
    return out;
}

}  // namespace

SpinorField rescale(const SpinorField& psi, double x0, double y0, double lambda, const GridChart& target) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("rescale needs lambda > 0");
    const auto& src = psi.chart();
    require_planar(src, "rescale");
    require_planar(target, "rescale");
    if (src.domain() == DomainKind::Torus) {
        double cx, cy, hx, hy;
        chart_extent(target, cx, cy, hx, hy);
        const double slack = 1e-12;
        if (lambda * 2.0 * hx > src.period_x() * (1 + slack) || lambda * 2.0 * hy > src.period_y() * (1 + slack)) {
            throw DomainError("rescaled region is wider than the source torus");
        }
    }
    const FieldInterpolator interp(psi);
    const double weight = std::sqrt(lambda);
    return resample(psi, target, psi.tag() + "|rescale", [&](double x, double y, std::span<Complex> out) {
        if (!interp.sample(x0 + lambda * x, y0 + lambda * y, out)) return false;
        for (auto& v : out) v *= weight;
        return true;
    });
}

SpinorField to_cylinder(const SpinorField& psi, double cx, double cy, double t1, double t2, int nt, int ntheta) {
    const auto& src = psi.chart();
    require_planar(src, "to_cylinder");
    if (!(t2 > t1)) throw ConfigError("cylinder segment needs t2 > t1");
    if (std::exp(-t2) < src.spacing()) throw PreconditionError("annulus reaches the centre cell");
    const double T = t2 - t1;
    const GridChart cyl =
        GridChart::torus(nt, ntheta, T, 2.0 * kPi, SpinStructure::PeriodicPeriodic, t1 + 0.5 * T / nt, 0.0);
    const FieldInterpolator interp(psi);
    return resample(psi, cyl, psi.tag() + "|cylinder", [&](double t, double theta, std::span<Complex> out) {
        const double r = std::exp(-t);
        if (!interp.sample(cx + r * std::cos(theta), cy + r * std::sin(theta), out)) return false;
        const double w = std::exp(-0.5 * t);
        for (auto& v : out) v *= w;
        return true;
    });
}

SpinorField sphere_transfer(const SpinorField& psi, SphereDirection direction, const GridChart& target,
                            const SphereTransferOptions& options) {
    const auto& src = psi.chart();
    const FieldInterpolator interp(psi);
    if (direction == SphereDirection::ToSphere) {
        require_planar(src, "sphere_transfer");
        if (target.domain() != DomainKind::SphereChart) throw ConfigError("ToSphere needs a sphere target chart");
        double cx, cy, hx, hy;
        chart_extent(src, cx, cy, hx, hy);
        NodeSet band;
        for (std::size_t k = 0; k < src.size(); ++k) {
            if (!src.has_data(k)) continue;
            const double dx = src.x(src.col(k)) - cx;
            const double dy = src.y(src.row(k)) - cy;
            const double inner = 1.0 - options.band;
            const bool outer = src.domain() == DomainKind::Disk
                                   ? std::hypot(dx, dy) > inner * hx
                                   : (std::abs(dx) > inner * hx || std::abs(dy) > inner * hy);
            if (outer) band.push_back(k);
        }
        const double total = energy(psi);
        if (total > 0.0 && energy(psi, band) > options.decay_threshold * total) {
            throw DecayError("field does not decay: too much energy near the edge of the plane chart");
        }
        return resample(psi, target, psi.tag() + "|sphere", [&](double phi, double theta, std::span<Complex> out) {
            const double rho = 1.0 / std::tan(0.5 * theta);
            const double x = rho * std::cos(phi);
            const double y = rho * std::sin(phi);
            if (std::abs(x - cx) > hx || std::abs(y - cy) > hy || !interp.sample(x, y, out)) {
                std::fill(out.begin(), out.end(), Complex{});  // preimage off the chart
                return true;
            }
            const double mu = 2.0 / (1.0 + rho * rho);
            const double w = 1.0 / std::sqrt(mu);
            for (auto& v : out) v *= w;
            return true;
        });
    }
    if (src.domain() != DomainKind::SphereChart) throw ConfigError("ToPlane needs a field on a sphere chart");
    require_planar(target, "sphere_transfer");
    return resample(psi, target, psi.tag() + "|plane", [&](double x, double y, std::span<Complex> out) {
        const double rho2 = x * x + y * y;
        const double theta = 2.0 * std::atan2(1.0, std::sqrt(rho2));
        double phi = std::atan2(y, x);
        if (phi < 0.0) phi += 2.0 * kPi;
        interp.sample(phi, theta, out);
        const double w = std::sqrt(2.0 / (1.0 + rho2));
        for (auto& v : out) v *= w;
        return true;
    });
}

}  // namespace spinflow

#include "spinflow/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spinflow/clifford.hpp"

namespace spinflow {

double pairwise_sum(std::span<const double> v) {
    constexpr std::size_t kLeaf = 16;
    if (v.size() <= kLeaf) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

void displacement(const GridChart& chart, std::size_t k, double cx, double cy, double& dx, double& dy) {
    dx = chart.x(chart.col(k)) - cx;
    dy = chart.y(chart.row(k)) - cy;
    if (chart.domain() == DomainKind::Torus) {
        dx -= chart.period_x() * std::round(dx / chart.period_x());
        dy -= chart.period_y() * std::round(dy / chart.period_y());
    }
}

NodeSet annulus_nodes(const GridChart& chart, double cx, double cy, double r_inner, double r_outer) {
    NodeSet out;
    for (std::size_t k = 0; k < chart.size(); ++k) {
        if (!chart.has_data(k)) continue;
        double dx, dy;
        displacement(chart, k, cx, cy, dx, dy);
        const double r = std::hypot(dx, dy);
        if (r >= r_inner && r < r_outer) out.push_back(k);
    }
    return out;
}

NodeSet ball_nodes(const GridChart& chart, double cx, double cy, double r) {
    NodeSet out;
    for (std::size_t k = 0; k < chart.size(); ++k) {
        if (!chart.has_data(k)) continue;
        double dx, dy;
        displacement(chart, k, cx, cy, dx, dy);
        if (dx * dx + dy * dy <= r * r) out.push_back(k);
    }
    return out;
}

namespace {

double node_norm2(const SpinorField& psi, std::size_t k) {
    double s = 0.0;
    for (const auto& v : psi.at(k)) s += std::norm(v);
    return s;
}

void check_p(double p) {
    if (!(p >= 1.0)) throw ConfigError("L^p norm needs p >= 1");
}

}  // namespace

std::vector<double> energy_density_weighted(const SpinorField& psi) {
    const auto& chart = psi.chart();
    std::vector<double> out(chart.size(), 0.0);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double n2 = node_norm2(psi, k);
        out[k] = chart.weight(k) * n2 * n2;
    }
    return out;
}

double energy(const SpinorField& psi) {
    const auto terms = energy_density_weighted(psi);
    return pairwise_sum(terms);
}

double energy(const SpinorField& psi, std::span<const std::size_t> region) {
    std::vector<double> terms;
    terms.reserve(region.size());
    const auto& chart = psi.chart();
    for (std::size_t k : region) {
        const double n2 = node_norm2(psi, k);
        terms.push_back(chart.weight(k) * n2 * n2);
    }
    return pairwise_sum(terms);
}

double lp_norm(const SpinorField& psi, double p, std::span<const std::size_t> region) {
    check_p(p);
    const auto& chart = psi.chart();
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t k : region) m = std::max(m, std::sqrt(node_norm2(psi, k)));
        return m;
    }
    std::vector<double> terms;
    terms.reserve(region.size());
    for (std::size_t k : region) terms.push_back(chart.weight(k) * std::pow(node_norm2(psi, k), 0.5 * p));
    return std::pow(pairwise_sum(terms), 1.0 / p);
}

double lp_norm(const SpinorField& psi, double p) {
    const auto nodes = psi.chart().data_nodes();
    return lp_norm(psi, p, nodes);
}

double lp_norm_scalar(const GridChart& chart, std::span<const double> values, double p) {
    check_p(p);
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t k = 0; k < values.size(); ++k)
            if (chart.has_data(k)) m = std::max(m, std::abs(values[k]));
        return m;
    }
    std::vector<double> terms(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) terms[k] = chart.weight(k) * std::pow(std::abs(values[k]), p);
    return std::pow(pairwise_sum(terms), 1.0 / p);
}

Complex inner_product(const SpinorField& psi, const SpinorField& phi) {
    if (!psi.compatible(phi)) throw ConfigError("inner product of incompatible fields");
    const auto& chart = psi.chart();
    std::vector<double> re(chart.size()), im(chart.size());
    for (std::size_t k = 0; k < chart.size(); ++k) {
        const Complex z = chart.weight(k) * hermitian(psi.at(k), phi.at(k));
        re[k] = z.real();
        im[k] = z.imag();
    }
    return {pairwise_sum(re), pairwise_sum(im)};
}

}  // namespace spinflow

#include "spinflow/grid_chart.hpp"

#include <cmath>

namespace spinflow {

namespace {

void check_counts(int nx, int ny) {
    if (nx < 8 || ny < 8) {
        throw ConfigError("grid chart needs at least 8 nodes per direction (got " +
                          std::to_string(nx) + "x" + std::to_string(ny) + ")");
    }
}

}  // namespace

std::string to_string(DomainKind d) {
    switch (d) {
        case DomainKind::Torus: return "torus";
        case DomainKind::Disk: return "disk";
        case DomainKind::SphereChart: return "sphere";
    }
    return "unknown";
}

std::string to_string(SpinStructure s) {
    switch (s) {
        case SpinStructure::PeriodicPeriodic: return "PP";
        case SpinStructure::PeriodicAnti: return "PA";
        case SpinStructure::AntiPeriodic: return "AP";
        case SpinStructure::AntiAnti: return "AA";
    }
    return "unknown";
}

SpinStructure spin_structure_from_string(const std::string& s) {
    if (s == "PP") return SpinStructure::PeriodicPeriodic;
    if (s == "PA") return SpinStructure::PeriodicAnti;
    if (s == "AP") return SpinStructure::AntiPeriodic;
    if (s == "AA") return SpinStructure::AntiAnti;
    throw ConfigError("unknown spin structure '" + s + "' (expected PP, PA, AP or AA)");
}

GridChart GridChart::torus(int nx, int ny, double period_x, double period_y, SpinStructure spin,
                           double origin_x, double origin_y) {
    check_counts(nx, ny);
    if (!(period_x > 0.0) || !(period_y > 0.0) || !std::isfinite(period_x) ||
        !std::isfinite(period_y)) {
        throw ConfigError("torus periods must be positive and finite");
    }
    GridChart c;
    c.domain_ = DomainKind::Torus;
    c.nx_ = nx;
    c.ny_ = ny;
    c.period_x_ = period_x;
    c.period_y_ = period_y;
    c.hx_ = period_x / nx;
    c.hy_ = period_y / ny;
    c.origin_x_ = origin_x;
    c.origin_y_ = origin_y;
    c.spin_ = spin;
    return c;
}

GridChart GridChart::disk(int n, double radius) {
    check_counts(n, n);
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw ConfigError("disk radius must be positive and finite");
    }
    GridChart c;
    c.domain_ = DomainKind::Disk;
    c.nx_ = n;
    c.ny_ = n;
    c.radius_ = radius;
    c.hx_ = c.hy_ = 2.0 * radius / (n - 1);
    c.origin_x_ = c.origin_y_ = -radius;

    auto in_open_disk = [&](int i, int j) {
        if (i < 0 || j < 0 || i >= n || j >= n) return false;
        const double x = c.x(i);
        const double y = c.y(j);
        return x * x + y * y < radius * radius;
    };
    auto mask = std::make_shared<std::vector<NodeKind>>(c.size(), NodeKind::Outside);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (!in_open_disk(i, j)) continue;
            const bool interior = in_open_disk(i - 1, j) && in_open_disk(i + 1, j) &&
                                  in_open_disk(i, j - 1) && in_open_disk(i, j + 1);
            (*mask)[c.index(i, j)] = interior ? NodeKind::Inside : NodeKind::Boundary;
        }
    }
    c.mask_ = std::move(mask);
    return c;
}

GridChart GridChart::sphere(int n_phi, int n_theta) {
    check_counts(n_phi, n_theta);
    GridChart c;
    c.domain_ = DomainKind::SphereChart;
    c.nx_ = n_phi;
    c.ny_ = n_theta;
    c.period_x_ = 2.0 * kPi;
    c.period_y_ = kPi;
    c.hx_ = 2.0 * kPi / n_phi;
    c.hy_ = kPi / n_theta;
    c.radius_ = 1.0;
    return c;
}

bool GridChart::antiperiodic_x() const noexcept {
    return spin_ && (*spin_ == SpinStructure::AntiPeriodic || *spin_ == SpinStructure::AntiAnti);
}

bool GridChart::antiperiodic_y() const noexcept {
    return spin_ && (*spin_ == SpinStructure::PeriodicAnti || *spin_ == SpinStructure::AntiAnti);
}

double GridChart::x(int i) const noexcept { return origin_x_ + i * hx_; }

double GridChart::y(int j) const noexcept {
    if (domain_ == DomainKind::SphereChart) return (j + 0.5) * hy_;
    return origin_y_ + j * hy_;
}

NodeKind GridChart::kind(std::size_t node) const noexcept {
    if (mask_) return (*mask_)[node];
    return NodeKind::Inside;
}

double GridChart::weight(std::size_t node) const noexcept {
    switch (domain_) {
        case DomainKind::Torus: return hx_ * hy_;
        case DomainKind::Disk: {
            const NodeKind k = kind(node);
            if (k == NodeKind::Inside) return hx_ * hy_;
            if (k == NodeKind::Boundary) return 0.5 * hx_ * hy_;
            return 0.0;
        }
        case DomainKind::SphereChart: return hx_ * hy_ * std::sin(y(row(node)));
    }
    return 0.0;
}

std::vector<std::size_t> GridChart::data_nodes() const {
    std::vector<std::size_t> out;
    out.reserve(size());
    for (std::size_t k = 0; k < size(); ++k) {
        if (has_data(k)) out.push_back(k);
    }
    return out;
}

std::vector<std::size_t> GridChart::boundary_nodes() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < size(); ++k) {
        if (kind(k) == NodeKind::Boundary) out.push_back(k);
    }
    return out;
}

bool GridChart::operator==(const GridChart& o) const noexcept {
    return domain_ == o.domain_ && nx_ == o.nx_ && ny_ == o.ny_ && hx_ == o.hx_ && hy_ == o.hy_ &&
           period_x_ == o.period_x_ && period_y_ == o.period_y_ && radius_ == o.radius_ &&
           origin_x_ == o.origin_x_ && origin_y_ == o.origin_y_ && spin_ == o.spin_;
}

}  // namespace spinflow

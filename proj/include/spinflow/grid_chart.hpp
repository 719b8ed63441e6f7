#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spinflow/common.hpp"

namespace spinflow {

enum class DomainKind : std::uint8_t { Torus = 0, Disk = 1, SphereChart = 2 };

/// Periodicity of spinors along the two torus cycles. The first word refers
/// to the x cycle, the second to the y cycle.
enum class SpinStructure : std::uint8_t {
    PeriodicPeriodic = 0,
    PeriodicAnti = 1,
    AntiPeriodic = 2,
    AntiAnti = 3,
};

enum class NodeKind : std::uint8_t { Inside = 0, Boundary = 1, Outside = 2 };

std::string to_string(DomainKind d);
std::string to_string(SpinStructure s);
SpinStructure spin_structure_from_string(const std::string& s);

/**
 * Uniform node lattice over one of the supported flat domains.
 *
 * Node (i, j) has index j * nx + i. Coordinates:
 *  - Torus: x_i = origin_x + i * hx with hx = period_x / nx (same for y).
 *    A torus chart also serves as a rectangular planar patch wherever an
 *    operation does not need periodicity.
 *  - Disk: centred at the origin, x_i = -radius + i * h with
 *    h = 2 radius / (n - 1). A node with |x| < radius is Inside when its
 *    four neighbours also satisfy |x| < radius and Boundary otherwise.
 *    Every other node is Outside and carries no data.
 *  - SphereChart: longitude/colatitude grid on the unit sphere,
 *    phi_i = i * 2pi / nx and theta_j = (j + 1/2) * pi / ny; x() returns
 *    phi and y() returns theta. Quadrature uses the round area element.
 */
class GridChart {
public:
    static GridChart torus(int nx, int ny, double period_x, double period_y,
                           SpinStructure spin = SpinStructure::PeriodicPeriodic,
                           double origin_x = 0.0, double origin_y = 0.0);
    static GridChart disk(int n, double radius);
    static GridChart sphere(int n_phi, int n_theta);

    DomainKind domain() const noexcept { return domain_; }
    int nx() const noexcept { return nx_; }
    int ny() const noexcept { return ny_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(nx_) * ny_; }

    double hx() const noexcept { return hx_; }
    double hy() const noexcept { return hy_; }
    /// Cell size along x (equal to hy for disks).
    double spacing() const noexcept { return hx_; }
    double cell_area() const noexcept { return hx_ * hy_; }

    double period_x() const noexcept { return period_x_; }
    double period_y() const noexcept { return period_y_; }
    double radius() const noexcept { return radius_; }
    double origin_x() const noexcept { return origin_x_; }
    double origin_y() const noexcept { return origin_y_; }

    std::optional<SpinStructure> spin_structure() const noexcept { return spin_; }
    bool antiperiodic_x() const noexcept;
    bool antiperiodic_y() const noexcept;

    double x(int i) const noexcept;
    double y(int j) const noexcept;

    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(j) * nx_ + static_cast<std::size_t>(i);
    }
    int col(std::size_t node) const noexcept { return static_cast<int>(node % nx_); }
    int row(std::size_t node) const noexcept { return static_cast<int>(node / nx_); }

    NodeKind kind(std::size_t node) const noexcept;
    bool has_data(std::size_t node) const noexcept { return kind(node) != NodeKind::Outside; }
    /// Quadrature weight of a node (zero for Outside nodes).
    double weight(std::size_t node) const noexcept;

    std::vector<std::size_t> data_nodes() const;
    std::vector<std::size_t> boundary_nodes() const;

    bool operator==(const GridChart& other) const noexcept;
    bool operator!=(const GridChart& other) const noexcept { return !(*this == other); }

private:
    GridChart() = default;

    DomainKind domain_ = DomainKind::Torus;
    int nx_ = 0;
    int ny_ = 0;
    double hx_ = 0.0;
    double hy_ = 0.0;
    double period_x_ = 0.0;
    double period_y_ = 0.0;
    double radius_ = 0.0;
    double origin_x_ = 0.0;
    double origin_y_ = 0.0;
    std::optional<SpinStructure> spin_;
    std::shared_ptr<const std::vector<NodeKind>> mask_;
};

}  // namespace spinflow

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spinflow/spinor_field.hpp"

namespace spinflow {

/// Ordered node subset of a chart.
using NodeSet = std::vector<std::size_t>;

/// Pairwise (tree) reduction in index order; the tree depends only on the length.
double pairwise_sum(std::span<const double> values);

/// Nodes whose distance to (cx, cy) lies in [r_inner, r_outer). Torus charts
/// use the minimum-image distance.
NodeSet annulus_nodes(const GridChart& chart, double cx, double cy, double r_inner, double r_outer);
/// Nodes with distance to (cx, cy) at most r.
NodeSet ball_nodes(const GridChart& chart, double cx, double cy, double r);
/// Displacement from (cx, cy) to node k, minimum image on a torus.
void displacement(const GridChart& chart, std::size_t k, double cx, double cy, double& dx, double& dy);

/// Quadrature of |psi|^4 over the data nodes of the chart.
double energy(const SpinorField& psi);
/// Quadrature of |psi|^4 over a node subset (empty region gives 0).
double energy(const SpinorField& psi, std::span<const std::size_t> region);

/// Per-node quadrature terms w_k |psi_k|^4.
std::vector<double> energy_density_weighted(const SpinorField& psi);

/// Discrete L^p norm with the energy quadrature weights; p may be infinity.
double lp_norm(const SpinorField& psi, double p);
double lp_norm(const SpinorField& psi, double p, std::span<const std::size_t> region);

/// Discrete L^p norm of a non-negative scalar field on a chart.
double lp_norm_scalar(const GridChart& chart, std::span<const double> values, double p);

/// Weighted integral of <psi, phi> over data nodes.
Complex inner_product(const SpinorField& psi, const SpinorField& phi);

}  // namespace spinflow

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "spinflow/spinor_field.hpp"

namespace spinflow {

using Vec3 = std::array<double, 3>;

/// The null C^3-valued form (phi_1, phi_2, phi_3) per node.
struct WeierstrassForm {
    std::array<std::vector<Complex>, 3> phi;
};

/**
 * phi = (i (psi_1^2 + conj(psi_2)^2), conj(psi_2)^2 - psi_1^2, 2 psi_1 conj(psi_2)).
 * phi_1^2 + phi_2^2 + phi_3^2 = 0 and |phi|^2 = 2 |psi|^4 identically.
 * Throws ConfigError unless n = 1.
 */
WeierstrassForm weierstrass_form(const SpinorField& psi);

/**
 * Triangle mesh on a vertex lattice of vx by vy sites. Lattice site (a, b)
 * is vertex b * vx + a when present. On a torus chart the lattice closes the
 * fundamental domain ((nx + 1) x (ny + 1) sites, the last row and column
 * repeating the first nodes' form values); on a disk the sites are the chart
 * nodes and Outside nodes are absent.
 */
struct SurfaceMesh {
    int vx = 0;
    int vy = 0;
    /// Lattice site -> vertex index, or -1 when absent.
    std::vector<std::int64_t> site_vertex;
    std::vector<Vec3> vertices;
    /// Chart node each vertex was built from.
    std::vector<std::size_t> vertex_node;
    std::vector<std::array<std::uint32_t, 3>> faces;
    /// Parameter-domain lattice spacing.
    double hx = 0.0;
    double hy = 0.0;
    std::size_t basepoint = 0;
    std::string source_tag;
    /// max over plaquettes of |loop integral| / cell area; 0 for meshes not
    /// integrated from a form.
    double loop_residual = 0.0;

    /// Builds faces for the given lattice. Complete cells use the diagonal
    /// (a, b)-(a+1, b+1) unless `shortest_diagonal_at` marks them, in which
    /// case the shorter 3-D diagonal is used; cells with three present
    /// corners become one triangle.
    void triangulate(const std::vector<bool>& shortest_diagonal_at);
    /// Mesh from explicit positions on a full vx by vy lattice (fixed diagonals).
    static SurfaceMesh from_lattice(int vx, int vy, double hx, double hy, std::vector<Vec3> positions);
};

/**
 * X = Re of the integral of phi dzbar from the basepoint node, trapezoid rule
 * along a breadth-first axis-aligned spanning tree of the lattice. With the
 * Dirac operator of this library, Re(phi dzbar) is closed exactly when psi
 * solves D psi = H |psi|^2 psi with real H (see README); the loop residual
 * measures the failure of closedness.
 */
SurfaceMesh integrate_surface(const SpinorField& psi, std::size_t basepoint);

/// Node closest to the chart centre (the default basepoint).
std::size_t central_node(const GridChart& chart);

/// max over lattice edges of ||dX|^2 - |psi|^4 h^2| / (|psi|^4 h^2 + 1e-12),
/// |psi|^4 averaged over the edge's endpoints.
double induced_metric_residual(const SurfaceMesh& mesh, const SpinorField& psi);

struct MeanCurvature {
    /// Per vertex; NaN where not computed.
    std::vector<double> h;
    /// Vertices with a closed fan of non-degenerate faces.
    std::vector<std::uint32_t> interior;
    /// Interior-candidate vertices skipped because a face was degenerate.
    std::vector<std::uint32_t> excluded;
    double max_abs = 0.0;
    double mean_abs = 0.0;
};

/// Cotangent-Laplacian mean curvature H = -(1/2) Delta X . n with barycentric
/// vertex areas and area-weighted normals (outward for a positively oriented
/// sphere, so the unit sphere gives H = 1).
MeanCurvature mean_curvature(const SurfaceMesh& mesh);

double mesh_area(const SurfaceMesh& mesh);

/// Energy integrated with the mesh's own faces: parameter-domain face area
/// times the mean of |psi|^4 over its corners.
double mesh_consistent_energy(const SurfaceMesh& mesh, const SpinorField& psi);

/// Largest distance of a vertex to the least-squares plane through all vertices.
double plane_fit_residual(const SurfaceMesh& mesh);

}  // namespace spinflow

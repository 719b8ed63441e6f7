#include "spinflow/surface.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <unordered_map>

#include "spinflow/quadrature.hpp"

namespace spinflow {

namespace {

const Complex kI{0.0, 1.0};

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 scale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

double psi4(const SpinorField& psi, std::size_t node) {
    double s = 0.0;
    for (const auto& v : psi.at(node)) s += std::norm(v);
    return s * s;
}

/// Re(avg(phi) (dx - i dy)) for the three components.
Vec3 trapezoid(const std::array<Complex, 3>& a, const std::array<Complex, 3>& b, double dx, double dy) {
    const Complex dzbar(dx, -dy);
    Vec3 out;
    for (int k = 0; k < 3; ++k) out[k] = std::real(0.5 * (a[k] + b[k]) * dzbar);
    return out;
}

}  // namespace

WeierstrassForm weierstrass_form(const SpinorField& psi) {
    if (psi.n() != 1) throw ConfigError("the Weierstrass form needs a single spinor (n = 1)");
    WeierstrassForm w;
    const std::size_t size = psi.node_count();
    for (auto& p : w.phi) p.assign(size, Complex{});
    for (std::size_t k = 0; k < size; ++k) {
        const Complex a = psi(k, 0, 0) * psi(k, 0, 0);
        const Complex b2 = std::conj(psi(k, 0, 1));
        const Complex b = b2 * b2;
        w.phi[0][k] = kI * (a + b);
        w.phi[1][k] = b - a;
        w.phi[2][k] = 2.0 * psi(k, 0, 0) * b2;
    }
    return w;
}

std::size_t central_node(const GridChart& c) {
    double cx = 0.0, cy = 0.0;
    if (c.domain() == DomainKind::Torus) {
        cx = c.origin_x() + 0.5 * c.period_x();
        cy = c.origin_y() + 0.5 * c.period_y();
    }
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (!c.has_data(k)) continue;
        const double d = std::hypot(c.x(c.col(k)) - cx, c.y(c.row(k)) - cy);
        if (d < bd) {
            bd = d;
            best = k;
        }
    }
    return best;
}

void SurfaceMesh::triangulate(const std::vector<bool>& shortest) {
    faces.clear();
    for (int b = 0; b + 1 < vy; ++b)
        for (int a = 0; a + 1 < vx; ++a) {
            const std::int64_t s[4] = {site_vertex[b * vx + a], site_vertex[b * vx + a + 1],
                                       site_vertex[(b + 1) * vx + a + 1], site_vertex[(b + 1) * vx + a]};
            const int present = (s[0] >= 0) + (s[1] >= 0) + (s[2] >= 0) + (s[3] >= 0);
            if (present < 3) continue;
            auto v = [&](int q) { return static_cast<std::uint32_t>(s[q]); };
            if (present == 3) {
                std::array<std::uint32_t, 3> f{};
                int t = 0;
                for (int q = 0; q < 4; ++q)
                    if (s[q] >= 0) f[t++] = v(q);
                faces.push_back(f);
                continue;
            }
            const std::size_t cell = static_cast<std::size_t>(b) * (vx - 1) + a;
            bool flip = false;
            if (!shortest.empty() && shortest[cell]) {
                flip = norm(sub(vertices[v(0)], vertices[v(2)])) > norm(sub(vertices[v(1)], vertices[v(3)]));
            }
            if (flip) {
                faces.push_back({v(0), v(1), v(3)});
                faces.push_back({v(1), v(2), v(3)});
            } else {
                faces.push_back({v(0), v(1), v(2)});
                faces.push_back({v(0), v(2), v(3)});
            }
        }
}

SurfaceMesh SurfaceMesh::from_lattice(int vx, int vy, double hx, double hy, std::vector<Vec3> positions) {
    if (positions.size() != static_cast<std::size_t>(vx) * vy) throw ConfigError("lattice size mismatch");
    SurfaceMesh m;
    m.vx = vx;
    m.vy = vy;
    m.hx = hx;
    m.hy = hy;
    m.vertices = std::move(positions);
    m.site_vertex.resize(m.vertices.size());
    m.vertex_node.resize(m.vertices.size());
    for (std::size_t k = 0; k < m.vertices.size(); ++k) {
        m.site_vertex[k] = static_cast<std::int64_t>(k);
        m.vertex_node[k] = k;
    }
    m.triangulate({});
    return m;
}

SurfaceMesh integrate_surface(const SpinorField& psi, std::size_t basepoint) {
    const auto& c = psi.chart();
    if (c.domain() == DomainKind::SphereChart) throw DomainError("surface reconstruction needs a planar chart");
    if (basepoint >= c.size() || !c.has_data(basepoint)) throw ConfigError("basepoint must be a data node");
    const auto form = weierstrass_form(psi);
    const bool torus = c.domain() == DomainKind::Torus;

    SurfaceMesh m;
    m.vx = torus ? c.nx() + 1 : c.nx();
    m.vy = torus ? c.ny() + 1 : c.ny();
    m.hx = c.hx();
    m.hy = c.hy();
    m.basepoint = basepoint;
    m.source_tag = psi.tag();
    const std::size_t sites = static_cast<std::size_t>(m.vx) * m.vy;
    auto site_node = [&](int a, int b) { return torus ? c.index(a % c.nx(), b % c.ny()) : c.index(a, b); };
    auto present = [&](int a, int b) {
        return a >= 0 && b >= 0 && a < m.vx && b < m.vy && (torus || c.has_data(c.index(a, b)));
    };
    auto phi_at = [&](int a, int b) {
        const std::size_t k = site_node(a, b);
        return std::array<Complex, 3>{form.phi[0][k], form.phi[1][k], form.phi[2][k]};
    };

    std::vector<Vec3> pos(sites);
    std::vector<bool> seen(sites, false);
    const int a0 = c.col(basepoint);
    const int b0 = c.row(basepoint);
    std::deque<std::pair<int, int>> queue{{a0, b0}};
    seen[b0 * m.vx + a0] = true;
    const int da[4] = {1, -1, 0, 0};
    const int db[4] = {0, 0, 1, -1};
    while (!queue.empty()) {
        const auto [a, b] = queue.front();
        queue.pop_front();
        const auto pa = phi_at(a, b);
        for (int q = 0; q < 4; ++q) {
            const int na = a + da[q];
            const int nb = b + db[q];
            if (!present(na, nb) || seen[nb * m.vx + na]) continue;
            seen[nb * m.vx + na] = true;
            pos[nb * m.vx + na] = add(pos[b * m.vx + a], trapezoid(pa, phi_at(na, nb), da[q] * m.hx, db[q] * m.hy));
            queue.emplace_back(na, nb);
        }
    }
    m.site_vertex.assign(sites, -1);
    for (std::size_t s = 0; s < sites; ++s) {
        if (!seen[s]) continue;
        m.site_vertex[s] = static_cast<std::int64_t>(m.vertices.size());
        m.vertices.push_back(pos[s]);
        m.vertex_node.push_back(site_node(static_cast<int>(s % m.vx), static_cast<int>(s / m.vx)));
    }

    std::vector<bool> shortest;
    if (!torus) {
        shortest.assign(static_cast<std::size_t>(m.vx - 1) * (m.vy - 1), false);
        for (int b = 0; b + 1 < m.vy; ++b)
            for (int a = 0; a + 1 < m.vx; ++a) {
                bool edge = false;
                for (int q = 0; q < 4; ++q) {
                    const std::size_t k = c.index(a + (q & 1), b + (q >> 1));
                    edge = edge || c.kind(k) == NodeKind::Boundary;
                }
                shortest[static_cast<std::size_t>(b) * (m.vx - 1) + a] = edge;
            }
    }
    m.triangulate(shortest);

    double worst = 0.0;
    for (int b = 0; b + 1 < m.vy; ++b)
        for (int a = 0; a + 1 < m.vx; ++a) {
            if (!(present(a, b) && present(a + 1, b) && present(a + 1, b + 1) && present(a, b + 1))) continue;
            if (!(seen[b * m.vx + a] && seen[b * m.vx + a + 1] && seen[(b + 1) * m.vx + a + 1] && seen[(b + 1) * m.vx + a]))
                continue;
            const auto p00 = phi_at(a, b), p10 = phi_at(a + 1, b), p11 = phi_at(a + 1, b + 1), p01 = phi_at(a, b + 1);
            Vec3 loop = trapezoid(p00, p10, m.hx, 0.0);
            loop = add(loop, trapezoid(p10, p11, 0.0, m.hy));
            loop = add(loop, trapezoid(p11, p01, -m.hx, 0.0));
            loop = add(loop, trapezoid(p01, p00, 0.0, -m.hy));
            worst = std::max(worst, norm(loop) / (m.hx * m.hy));
        }
    m.loop_residual = worst;
    return m;
}

double induced_metric_residual(const SurfaceMesh& m, const SpinorField& psi) {
    double worst = 0.0;
    auto edge = [&](std::int64_t u, std::int64_t v, double h) {
        if (u < 0 || v < 0) return;
        const double q = 0.5 * (psi4(psi, m.vertex_node[u]) + psi4(psi, m.vertex_node[v]));
        const Vec3 d = sub(m.vertices[v], m.vertices[u]);
        const double expected = q * h * h;
        worst = std::max(worst, std::abs(dot(d, d) - expected) / (expected + 1e-12));
    };
    for (int b = 0; b < m.vy; ++b)
        for (int a = 0; a < m.vx; ++a) {
            const std::int64_t s = m.site_vertex[b * m.vx + a];
            if (a + 1 < m.vx) edge(s, m.site_vertex[b * m.vx + a + 1], m.hx);
            if (b + 1 < m.vy) edge(s, m.site_vertex[(b + 1) * m.vx + a], m.hy);
        }
    return worst;
}

MeanCurvature mean_curvature(const SurfaceMesh& m) {
    const std::size_t nv = m.vertices.size();
    std::vector<Vec3> lap(nv, Vec3{0, 0, 0}), normal(nv, Vec3{0, 0, 0});
    std::vector<double> area(nv, 0.0);
    std::vector<bool> touches_degenerate(nv, false);
    std::unordered_map<std::uint64_t, int> edge_faces;
    auto key = [](std::uint32_t u, std::uint32_t v) {
        if (u > v) std::swap(u, v);
        return (static_cast<std::uint64_t>(u) << 32) | v;
    };
    double typical = 0.0;
    for (const auto& f : m.faces) {
        const Vec3 n = cross(sub(m.vertices[f[1]], m.vertices[f[0]]), sub(m.vertices[f[2]], m.vertices[f[0]]));
        typical = std::max(typical, norm(n));
    }
    const double degenerate = 1e-12 * typical;
    for (const auto& f : m.faces) {
        for (int q = 0; q < 3; ++q) ++edge_faces[key(f[q], f[(q + 1) % 3])];
        const Vec3 n = cross(sub(m.vertices[f[1]], m.vertices[f[0]]), sub(m.vertices[f[2]], m.vertices[f[0]]));
        const double twice_area = norm(n);
        if (!(twice_area > degenerate)) {
            for (auto v : f) touches_degenerate[v] = true;
            continue;
        }
        for (int q = 0; q < 3; ++q) {
            const std::uint32_t k = f[q], i = f[(q + 1) % 3], j = f[(q + 2) % 3];
            const Vec3 u = sub(m.vertices[i], m.vertices[k]);
            const Vec3 v = sub(m.vertices[j], m.vertices[k]);
            const double cot = dot(u, v) / twice_area;
            lap[i] = add(lap[i], scale(sub(m.vertices[j], m.vertices[i]), cot));
            lap[j] = add(lap[j], scale(sub(m.vertices[i], m.vertices[j]), cot));
            area[f[q]] += twice_area / 6.0;
            normal[f[q]] = add(normal[f[q]], n);
        }
    }
    std::vector<bool> closed(nv, false), open(nv, false);
    for (const auto& f : m.faces)
        for (int q = 0; q < 3; ++q) {
            const bool two = edge_faces[key(f[q], f[(q + 1) % 3])] == 2;
            for (auto v : {f[q], f[(q + 1) % 3]}) {
                closed[v] = true;
                if (!two) open[v] = true;
            }
        }
    MeanCurvature out;
    out.h.assign(nv, std::numeric_limits<double>::quiet_NaN());
    double sum = 0.0;
    for (std::uint32_t v = 0; v < nv; ++v) {
        if (!closed[v] || open[v]) continue;
        if (touches_degenerate[v] || !(area[v] > 0.0) || !(norm(normal[v]) > 0.0)) {
            out.excluded.push_back(v);
            continue;
        }
        const Vec3 n = scale(normal[v], 1.0 / norm(normal[v]));
        const Vec3 dx = scale(lap[v], 1.0 / (2.0 * area[v]));
        const double h = -0.5 * dot(dx, n);
        out.h[v] = h;
        out.interior.push_back(v);
        out.max_abs = std::max(out.max_abs, std::abs(h));
        sum += std::abs(h);
    }
    if (!out.interior.empty()) out.mean_abs = sum / static_cast<double>(out.interior.size());
    return out;
}

double mesh_area(const SurfaceMesh& m) {
    std::vector<double> a;
    a.reserve(m.faces.size());
    for (const auto& f : m.faces) {
        a.push_back(0.5 * norm(cross(sub(m.vertices[f[1]], m.vertices[f[0]]), sub(m.vertices[f[2]], m.vertices[f[0]]))));
    }
    return pairwise_sum(a);
}

double mesh_consistent_energy(const SurfaceMesh& m, const SpinorField& psi) {
    std::vector<double> t;
    t.reserve(m.faces.size());
    const double face_area = 0.5 * m.hx * m.hy;
    for (const auto& f : m.faces) {
        double s = 0.0;
        for (auto v : f) s += psi4(psi, m.vertex_node[v]);
        t.push_back(face_area * s / 3.0);
    }
    return pairwise_sum(t);
}

double plane_fit_residual(const SurfaceMesh& m) {
    if (m.vertices.size() < 3) return 0.0;
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const auto& v : m.vertices) mean += Eigen::Vector3d(v[0], v[1], v[2]);
    mean /= static_cast<double>(m.vertices.size());
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& v : m.vertices) {
        const Eigen::Vector3d d = Eigen::Vector3d(v[0], v[1], v[2]) - mean;
        cov += d * d.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    const Eigen::Vector3d n = eig.eigenvectors().col(0);
    double worst = 0.0;
    for (const auto& v : m.vertices) worst = std::max(worst, std::abs((Eigen::Vector3d(v[0], v[1], v[2]) - mean).dot(n)));
    return worst;
}

}  // namespace spinflow

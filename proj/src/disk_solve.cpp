#include "spinflow/disk_solve.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <numeric>

namespace spinflow {

namespace {

/// Stacked system on a disk chart. Interior rows evaluate the Dirac operator
/// at the centre of every cell whose four corners carry data (box stencil,
/// second order at the cell centre); the right-hand side there is the corner
/// average of f. Boundary rows are (psi - trace) / h. Rows live in a vector
/// of length 2 * size * block: cells first (indexed by their lower-left
/// node), then boundary nodes.
struct DiskSystem {
    const GridChart& c;
    int block;
    double h;
    std::vector<std::size_t> cells;
    // Corner order: (i,j), (i+1,j), (i,j+1), (i+1,j+1).
    std::array<std::array<Complex, 4>, 2> coef;

    DiskSystem(const GridChart& chart, int b) : c(chart), block(b), h(chart.spacing()) {
        for (int j = 0; j + 1 < c.ny(); ++j)
            for (int i = 0; i + 1 < c.nx(); ++i) {
                const std::size_t k = c.index(i, j);
                if (c.has_data(k) && c.has_data(k + 1) && c.has_data(k + c.nx()) && c.has_data(k + c.nx() + 1))
                    cells.push_back(k);
            }
        const double cx[4] = {-1.0, 1.0, -1.0, 1.0};
        const double cy[4] = {-1.0, -1.0, 1.0, 1.0};
        for (int q = 0; q < 4; ++q) {
            coef[0][q] = Complex(cx[q], cy[q]) / (2.0 * h);   // d_x + i d_y on psi_2
            coef[1][q] = Complex(-cx[q], cy[q]) / (2.0 * h);  // -d_x + i d_y on psi_1
        }
    }

    std::size_t rows() const { return 2 * c.size() * block; }

    std::array<std::size_t, 4> corners(std::size_t k) const {
        const std::size_t nx = static_cast<std::size_t>(c.nx());
        return {k, k + 1, k + nx, k + nx + 1};
    }

    void apply(const std::vector<Complex>& x, std::vector<Complex>& y) const {
        std::fill(y.begin(), y.end(), Complex{});
        for (std::size_t k : cells) {
            const auto nb = corners(k);
            for (int s = 0; s < 2; ++s)
                for (int q = 0; q < 4; ++q)
                    for (int t = 0; t < block; t += 2) y[k * block + t + s] += coef[s][q] * x[nb[q] * block + t + 1 - s];
        }
        const std::size_t off = c.size() * block;
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (c.kind(k) != NodeKind::Boundary) continue;
            for (int t = 0; t < block; ++t) y[off + k * block + t] = x[k * block + t] / h;
        }
    }

    void adjoint(const std::vector<Complex>& y, std::vector<Complex>& x) const {
        std::fill(x.begin(), x.end(), Complex{});
        for (std::size_t k : cells) {
            const auto nb = corners(k);
            for (int s = 0; s < 2; ++s)
                for (int q = 0; q < 4; ++q)
                    for (int t = 0; t < block; t += 2)
                        x[nb[q] * block + t + 1 - s] += std::conj(coef[s][q]) * y[k * block + t + s];
        }
        const std::size_t off = c.size() * block;
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (c.kind(k) != NodeKind::Boundary) continue;
            for (int t = 0; t < block; ++t) x[k * block + t] += y[off + k * block + t] / h;
        }
    }
};

double norm2(const std::vector<Complex>& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return s;
}

}  // namespace

DiskSolveResult disk_solve(const SpinorField& f, const SpinorField& trace, const DiskSolveOptions& options) {
    const auto& c = f.chart();
    if (c.domain() != DomainKind::Disk) throw DomainError("disk_solve needs a disk chart");
    if (!f.compatible(trace)) throw ConfigError("disk_solve: source and trace must share chart and n");

    const int block = f.block();
    const std::size_t len = c.size() * block;
    DiskSystem sys(c, block);
    std::vector<Complex> b(sys.rows());
    for (std::size_t k : sys.cells) {
        for (std::size_t nb : sys.corners(k))
            for (int q = 0; q < block; ++q) b[k * block + q] += 0.25 * f.values()[nb * block + q];
    }
    std::size_t unknowns = 0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        const NodeKind kind = c.kind(k);
        if (kind == NodeKind::Outside) continue;
        unknowns += block;
        if (kind != NodeKind::Boundary) continue;
        for (int q = 0; q < block; ++q) b[len + k * block + q] = trace.values()[k * block + q] / c.spacing();
    }
    const long max_iter = options.max_iter > 0 ? options.max_iter : static_cast<long>(10 * unknowns);

    DiskSolveResult out{SpinorField(c, f.n(), f.tag()), 0.0, 0.0, 0, {}};
    const double b_norm = std::sqrt(norm2(b));
    if (b_norm == 0.0) return out;

    std::vector<Complex> x(len), r = b, z(len), p(len), w(sys.rows());
    sys.adjoint(r, z);
    p = z;
    double zz = norm2(z);
    const double z0 = std::sqrt(zz);
    double rel = 1.0;
    out.history.push_back(rel);
    long it = 0;
    while (rel > options.tol) {
        if (it >= max_iter) {
            throw ConvergenceError("disk_solve: CGNR did not reach tolerance", out.history);
        }
        sys.apply(p, w);
        const double ww = norm2(w);
        if (ww == 0.0) break;
        const double alpha = zz / ww;
        for (std::size_t q = 0; q < len; ++q) x[q] += alpha * p[q];
        for (std::size_t q = 0; q < r.size(); ++q) r[q] -= alpha * w[q];
        sys.adjoint(r, z);
        const double zz_new = norm2(z);
        const double beta = zz_new / zz;
        zz = zz_new;
        for (std::size_t q = 0; q < len; ++q) p[q] = z[q] + beta * p[q];
        ++it;
        rel = std::sqrt(zz) / z0;
        out.history.push_back(rel);
    }
    out.psi.values() = std::move(x);
    out.residual = rel;
    out.system_residual = std::sqrt(norm2(r)) / b_norm;
    out.iterations = it;
    return out;
}

double boundary_w1p_norm(const SpinorField& trace, double p) {
    const auto& c = trace.chart();
    if (c.domain() != DomainKind::Disk) throw DomainError("boundary norm needs a disk chart");
    if (!(p >= 1.0)) throw ConfigError("boundary norm needs p >= 1");
    auto nodes = c.boundary_nodes();
    const std::size_t m = nodes.size();
    if (m < 3) return 0.0;
    std::vector<double> angle(c.size());
    for (std::size_t k : nodes) angle[k] = std::atan2(c.y(c.row(k)), c.x(c.col(k)));
    std::stable_sort(nodes.begin(), nodes.end(), [&](std::size_t a, std::size_t b) { return angle[a] < angle[b]; });

    auto pos = [&](std::size_t k, double& x, double& y) {
        x = c.x(c.col(k));
        y = c.y(c.row(k));
    };
    std::vector<double> seg(m);  // length from node q to node q + 1
    for (std::size_t q = 0; q < m; ++q) {
        double x0, y0, x1, y1;
        pos(nodes[q], x0, y0);
        pos(nodes[(q + 1) % m], x1, y1);
        seg[q] = std::hypot(x1 - x0, y1 - y0);
    }
    const int block = trace.block();
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t q = 0; q < m; ++q) {
        const std::size_t prev = (q + m - 1) % m;
        const std::size_t next = (q + 1) % m;
        const double ds = 0.5 * (seg[prev] + seg[q]);
        const double span = seg[prev] + seg[q];
        double v2 = 0.0, d2 = 0.0;
        for (int k = 0; k < block; ++k) {
            const Complex v = trace.values()[nodes[q] * block + k];
            const Complex d = span > 0.0 ? (trace.values()[nodes[next] * block + k] -
                                            trace.values()[nodes[prev] * block + k]) / span
                                         : Complex{};
            v2 += std::norm(v);
            d2 += std::norm(d);
        }
        s0 += ds * std::pow(v2, 0.5 * p);
        s1 += ds * std::pow(d2, 0.5 * p);
    }
    return std::pow(s0, 1.0 / p) + std::pow(s1, 1.0 / p);
}

}  // namespace spinflow

#include "spinflow/interpolation.hpp"

#include <algorithm>
#include <cmath>

namespace spinflow {

void catmull_rom_weights(double t, double w[4]) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    w[0] = 0.5 * (-t + 2.0 * t2 - t3);
    w[1] = 0.5 * (2.0 - 5.0 * t2 + 3.0 * t3);
    w[2] = 0.5 * (t + 4.0 * t2 - 3.0 * t3);
    w[3] = 0.5 * (-t2 + t3);
}

bool FieldInterpolator::sample(double x, double y, std::span<Complex> out) const {
    std::fill(out.begin(), out.end(), Complex{});
    if (!std::isfinite(x) || !std::isfinite(y)) return false;
    switch (f_.chart().domain()) {
        case DomainKind::Torus: return sample_torus(x, y, out);
        case DomainKind::Disk: return sample_disk(x, y, out);
        case DomainKind::SphereChart: return sample_sphere(x, y, out);
    }
    return false;
}

namespace {

/// Wrapped index and the number of full periods crossed.
int wrap(int i, int n, int& turns) {
    turns = static_cast<int>(std::floor(static_cast<double>(i) / n));
    return i - turns * n;
}

}  // namespace

bool FieldInterpolator::sample_torus(double x, double y, std::span<Complex> out) const {
    const auto& c = f_.chart();
    const double u = (x - c.origin_x()) / c.hx();
    const double v = (y - c.origin_y()) / c.hy();
    const int i0 = static_cast<int>(std::floor(u));
    const int j0 = static_cast<int>(std::floor(v));
    double wx[4], wy[4];
    catmull_rom_weights(u - i0, wx);
    catmull_rom_weights(v - j0, wy);
    const int b = f_.block();
    for (int b_j = 0; b_j < 4; ++b_j) {
        int ty;
        const int jj = wrap(j0 - 1 + b_j, c.ny(), ty);
        const double sy = (c.antiperiodic_y() && (ty % 2 != 0)) ? -1.0 : 1.0;
        for (int b_i = 0; b_i < 4; ++b_i) {
            int tx;
            const int ii = wrap(i0 - 1 + b_i, c.nx(), tx);
            const double sx = (c.antiperiodic_x() && (tx % 2 != 0)) ? -1.0 : 1.0;
            const double w = wx[b_i] * wy[b_j] * sx * sy;
            const auto val = f_.at(c.index(ii, jj));
            for (int q = 0; q < b; ++q) out[q] += w * val[q];
        }
    }
    return true;
}

bool FieldInterpolator::sample_disk(double x, double y, std::span<Complex> out) const {
    const auto& c = f_.chart();
    if (std::hypot(x, y) > c.radius() * (1.0 + 1e-12)) return false;
    const double h = c.spacing();
    const double u = (x + c.radius()) / h;
    const double v = (y + c.radius()) / h;
    const int i0 = std::clamp(static_cast<int>(std::floor(u)), 0, c.nx() - 2);
    const int j0 = std::clamp(static_cast<int>(std::floor(v)), 0, c.ny() - 2);
    const double tu = u - i0;
    const double tv = v - j0;
    const int b = f_.block();
    auto has = [&](int i, int j) { return i >= 0 && j >= 0 && i < c.nx() && j < c.ny() && c.has_data(c.index(i, j)); };

    bool full = true;
    for (int dj = -1; dj <= 2 && full; ++dj)
        for (int di = -1; di <= 2 && full; ++di) full = has(i0 + di, j0 + dj);
    if (full) {
        double wx[4], wy[4];
        catmull_rom_weights(tu, wx);
        catmull_rom_weights(tv, wy);
        for (int dj = 0; dj < 4; ++dj)
            for (int di = 0; di < 4; ++di) {
                const auto val = f_.at(c.index(i0 - 1 + di, j0 - 1 + dj));
                const double w = wx[di] * wy[dj];
                for (int q = 0; q < b; ++q) out[q] += w * val[q];
            }
        return true;
    }
    if (has(i0, j0) && has(i0 + 1, j0) && has(i0, j0 + 1) && has(i0 + 1, j0 + 1)) {
        const double w[4] = {(1 - tu) * (1 - tv), tu * (1 - tv), (1 - tu) * tv, tu * tv};
        const std::size_t nodes[4] = {c.index(i0, j0), c.index(i0 + 1, j0), c.index(i0, j0 + 1), c.index(i0 + 1, j0 + 1)};
        for (int k = 0; k < 4; ++k) {
            const auto val = f_.at(nodes[k]);
            for (int q = 0; q < b; ++q) out[q] += w[k] * val[q];
        }
        return true;
    }
    // nearest data node
    double best = 1e300;
    std::size_t pick = c.size();
    for (int dj = -1; dj <= 2; ++dj)
        for (int di = -1; di <= 2; ++di) {
            if (!has(i0 + di, j0 + dj)) continue;
            const double d = std::hypot(c.x(i0 + di) - x, c.y(j0 + dj) - y);
            if (d < best) {
                best = d;
                pick = c.index(i0 + di, j0 + dj);
            }
        }
    if (pick == c.size()) return false;
    const auto val = f_.at(pick);
    std::copy(val.begin(), val.end(), out.begin());
    return true;
}

bool FieldInterpolator::sample_sphere(double phi, double theta, std::span<Complex> out) const {
    const auto& c = f_.chart();
    const double u = phi / c.hx();
    const double v = theta / c.hy() - 0.5;
    const int i0 = static_cast<int>(std::floor(u));
    const int j0 = static_cast<int>(std::floor(v));
    double wx[4], wy[4];
    catmull_rom_weights(u - i0, wx);
    catmull_rom_weights(v - j0, wy);
    const int b = f_.block();
    const int half = c.nx() / 2;
    for (int dj = 0; dj < 4; ++dj) {
        int j = j0 - 1 + dj;
        int shift = 0;
        if (j < 0) {
            j = -1 - j;
            shift = half;
        } else if (j >= c.ny()) {
            j = 2 * c.ny() - 1 - j;
            shift = half;
        }
        for (int di = 0; di < 4; ++di) {
            int turns;
            const int i = wrap(i0 - 1 + di + shift, c.nx(), turns);
            const double w = wx[di] * wy[dj];
            const auto val = f_.at(c.index(i, j));
            for (int q = 0; q < b; ++q) out[q] += w * val[q];
        }
    }
    return true;
}

}  // namespace spinflow

#include "spinflow/dirac.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "spinflow/fft.hpp"
#include "spinflow/parallel.hpp"
#include "spinflow/quadrature.hpp"

namespace spinflow {

namespace {

const Complex kI{0.0, 1.0};

struct Tap {
    bool ok = false;
    std::size_t node = 0;
    double sign = 1.0;
};

Tap neighbour(const GridChart& c, int i, int j, int di, int dj) {
    int ii = i + di;
    int jj = j + dj;
    Tap t;
    if (c.domain() == DomainKind::Torus) {
        if (ii < 0) { ii += c.nx(); if (c.antiperiodic_x()) t.sign = -t.sign; }
        if (ii >= c.nx()) { ii -= c.nx(); if (c.antiperiodic_x()) t.sign = -t.sign; }
        if (jj < 0) { jj += c.ny(); if (c.antiperiodic_y()) t.sign = -t.sign; }
        if (jj >= c.ny()) { jj -= c.ny(); if (c.antiperiodic_y()) t.sign = -t.sign; }
        t.ok = true;
        t.node = c.index(ii, jj);
        return t;
    }
    if (ii < 0 || jj < 0 || ii >= c.nx() || jj >= c.ny()) return t;
    t.node = c.index(ii, jj);
    t.ok = c.has_data(t.node);
    return t;
}

/// Linear combination of up to four nodal values.
struct Taps {
    int count = 0;
    std::array<std::size_t, 4> node{};
    std::array<double, 4> coef{};

    void add(const Tap& t, double w) {
        node[count] = t.node;
        coef[count] = w * t.sign;
        ++count;
    }
};

Taps first_derivative(const GridChart& c, int i, int j, int axis, Stencil stencil) {
    const int di = axis == 0 ? 1 : 0;
    const int dj = axis == 0 ? 0 : 1;
    const double h = axis == 0 ? c.hx() : c.hy();
    const Tap self{true, c.index(i, j), 1.0};
    const Tap p1 = neighbour(c, i, j, di, dj);
    const Tap m1 = neighbour(c, i, j, -di, -dj);
    Taps s;
    if (stencil == Stencil::BrokenForwardForTesting && p1.ok) {
        s.add(p1, 1.0 / h);
        s.add(self, -1.0 / h);
        return s;
    }
    if (p1.ok && m1.ok) {
        s.add(p1, 0.5 / h);
        s.add(m1, -0.5 / h);
        return s;
    }
    const Tap p2 = neighbour(c, i, j, 2 * di, 2 * dj);
    const Tap m2 = neighbour(c, i, j, -2 * di, -2 * dj);
    if (p1.ok && p2.ok) {
        s.add(self, -1.5 / h);
        s.add(p1, 2.0 / h);
        s.add(p2, -0.5 / h);
    } else if (m1.ok && m2.ok) {
        s.add(self, 1.5 / h);
        s.add(m1, -2.0 / h);
        s.add(m2, 0.5 / h);
    } else if (p1.ok) {
        s.add(p1, 1.0 / h);
        s.add(self, -1.0 / h);
    } else if (m1.ok) {
        s.add(self, 1.0 / h);
        s.add(m1, -1.0 / h);
    }
    return s;
}

Taps second_derivative(const GridChart& c, int i, int j, int axis) {
    const int di = axis == 0 ? 1 : 0;
    const int dj = axis == 0 ? 0 : 1;
    const double h = axis == 0 ? c.hx() : c.hy();
    const double h2 = h * h;
    const Tap self{true, c.index(i, j), 1.0};
    const Tap p1 = neighbour(c, i, j, di, dj);
    const Tap m1 = neighbour(c, i, j, -di, -dj);
    Taps s;
    if (p1.ok && m1.ok) {
        s.add(p1, 1.0 / h2);
        s.add(self, -2.0 / h2);
        s.add(m1, 1.0 / h2);
        return s;
    }
    const int dir = p1.ok ? 1 : (m1.ok ? -1 : 0);
    if (dir == 0) return s;
    const Tap a1 = neighbour(c, i, j, dir * di, dir * dj);
    const Tap a2 = neighbour(c, i, j, 2 * dir * di, 2 * dir * dj);
    const Tap a3 = neighbour(c, i, j, 3 * dir * di, 3 * dir * dj);
    if (a2.ok && a3.ok) {
        s.add(self, 2.0 / h2);
        s.add(a1, -5.0 / h2);
        s.add(a2, 4.0 / h2);
        s.add(a3, -1.0 / h2);
    } else if (a2.ok) {
        s.add(self, 1.0 / h2);
        s.add(a1, -2.0 / h2);
        s.add(a2, 1.0 / h2);
    }
    return s;
}

void require_planar(const GridChart& c) {
    if (c.domain() == DomainKind::SphereChart) {
        throw DomainError("flat Dirac/Laplace operators are not defined on the sphere chart");
    }
}

void require_torus(const GridChart& c, const char* what) {
    if (c.domain() != DomainKind::Torus) throw DomainError(std::string(what) + " requires a torus chart");
}

Complex apply_taps(const Taps& t, const std::vector<Complex>& v, int block, int q) {
    Complex s{};
    for (int k = 0; k < t.count; ++k) s += t.coef[k] * v[t.node[k] * block + q];
    return s;
}

// ---- spectral machinery -------------------------------------------------

std::vector<double> wavenumbers(int n, double period, bool anti) {
    std::vector<double> k(n);
    const double shift = anti ? 0.5 : 0.0;
    for (int m = 0; m < n; ++m) {
        const int signed_m = m < n / 2 ? m : m - n;
        k[m] = 2.0 * kPi * (signed_m + shift) / period;
    }
    return k;
}

class Spectral {
public:
    explicit Spectral(const GridChart& c)
        : chart_(c),
          fft_(c.nx(), c.ny()),
          kx_(wavenumbers(c.nx(), c.period_x(), c.antiperiodic_x())),
          ky_(wavenumbers(c.ny(), c.period_y(), c.antiperiodic_y())),
          phase_x_(c.nx(), 1.0),
          phase_y_(c.ny(), 1.0) {
        if (c.antiperiodic_x())
            for (int i = 0; i < c.nx(); ++i) phase_x_[i] = std::polar(1.0, -kPi * i / c.nx());
        if (c.antiperiodic_y())
            for (int j = 0; j < c.ny(); ++j) phase_y_[j] = std::polar(1.0, -kPi * j / c.ny());
    }

    double kx(int m) const { return kx_[m]; }
    double ky(int m) const { return ky_[m]; }

    std::vector<Complex> transform(const SpinorField& psi, int q) {
        std::vector<Complex> buf(chart_.size());
        const int b = psi.block();
        for (int j = 0; j < chart_.ny(); ++j)
            for (int i = 0; i < chart_.nx(); ++i) {
                const std::size_t k = chart_.index(i, j);
                buf[k] = psi.values()[k * b + q] * phase_x_[i] * phase_y_[j];
            }
        fft_.forward(buf);
        return buf;
    }

    void inverse(std::vector<Complex>& buf, SpinorField& out, int q) {
        fft_.backward(buf);
        const int b = out.block();
        for (int j = 0; j < chart_.ny(); ++j)
            for (int i = 0; i < chart_.nx(); ++i) {
                const std::size_t k = chart_.index(i, j);
                out.values()[k * b + q] = buf[k] * std::conj(phase_x_[i] * phase_y_[j]);
            }
    }

private:
    const GridChart& chart_;
    Fft2d fft_;
    std::vector<double> kx_, ky_;
    std::vector<Complex> phase_x_, phase_y_;
};

SpinorField dirac_spectral(const SpinorField& psi) {
    const auto& c = psi.chart();
    Spectral sp(c);
    SpinorField out(c, psi.n(), psi.tag());
    for (int comp = 0; comp < psi.n(); ++comp) {
        auto a = sp.transform(psi, 2 * comp);
        auto b = sp.transform(psi, 2 * comp + 1);
        std::vector<Complex> r1(c.size()), r2(c.size());
        for (int j = 0; j < c.ny(); ++j)
            for (int i = 0; i < c.nx(); ++i) {
                const std::size_t k = c.index(i, j);
                r1[k] = (kI * sp.kx(i) - sp.ky(j)) * b[k];
                r2[k] = (-kI * sp.kx(i) - sp.ky(j)) * a[k];
            }
        sp.inverse(r1, out, 2 * comp);
        sp.inverse(r2, out, 2 * comp + 1);
    }
    return out;
}

SpinorField laplace_spectral(const SpinorField& psi) {
    const auto& c = psi.chart();
    Spectral sp(c);
    SpinorField out(c, psi.n(), psi.tag());
    for (int q = 0; q < psi.block(); ++q) {
        auto a = sp.transform(psi, q);
        for (int j = 0; j < c.ny(); ++j)
            for (int i = 0; i < c.nx(); ++i) {
                const double k2 = sp.kx(i) * sp.kx(i) + sp.ky(j) * sp.ky(j);
                a[c.index(i, j)] *= -k2;
            }
        sp.inverse(a, out, q);
    }
    return out;
}

}  // namespace

void fd_gradient(const SpinorField& psi, std::vector<Complex>& dx, std::vector<Complex>& dy, Stencil stencil) {
    const auto& c = psi.chart();
    require_planar(c);
    const int b = psi.block();
    dx.assign(psi.values().size(), Complex{});
    dy.assign(psi.values().size(), Complex{});
    parallel_for(c.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            if (!c.has_data(k)) continue;
            const int i = c.col(k);
            const int j = c.row(k);
            const Taps tx = first_derivative(c, i, j, 0, stencil);
            const Taps ty = first_derivative(c, i, j, 1, stencil);
            for (int q = 0; q < b; ++q) {
                dx[k * b + q] = apply_taps(tx, psi.values(), b, q);
                dy[k * b + q] = apply_taps(ty, psi.values(), b, q);
            }
        }
    });
}

std::vector<double> gradient_norm(const SpinorField& psi) {
    std::vector<Complex> dx, dy;
    fd_gradient(psi, dx, dy);
    const int b = psi.block();
    std::vector<double> out(psi.node_count(), 0.0);
    for (std::size_t k = 0; k < out.size(); ++k) {
        double s = 0.0;
        for (int q = 0; q < b; ++q) s += std::norm(dx[k * b + q]) + std::norm(dy[k * b + q]);
        out[k] = std::sqrt(s);
    }
    return out;
}

SpinorField dirac_apply(const SpinorField& psi, DiracMode mode, Stencil stencil) {
    const auto& c = psi.chart();
    require_planar(c);
    if (mode == DiracMode::Spectral) {
        require_torus(c, "spectral Dirac operator");
        return dirac_spectral(psi);
    }
    std::vector<Complex> dx, dy;
    fd_gradient(psi, dx, dy, stencil);
    SpinorField out(c, psi.n(), psi.tag());
    auto& o = out.values();
    for (std::size_t k = 0; k + 1 < o.size(); k += 2) {
        o[k] = dx[k + 1] + kI * dy[k + 1];
        o[k + 1] = -dx[k] + kI * dy[k];
    }
    return out;
}

SpinorField laplace_apply(const SpinorField& psi, DiracMode mode) {
    const auto& c = psi.chart();
    require_planar(c);
    if (mode == DiracMode::Spectral) {
        require_torus(c, "spectral Laplacian");
        return laplace_spectral(psi);
    }
    SpinorField out(c, psi.n(), psi.tag());
    const int b = psi.block();
    parallel_for(c.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            if (!c.has_data(k)) continue;
            const Taps tx = second_derivative(c, c.col(k), c.row(k), 0);
            const Taps ty = second_derivative(c, c.col(k), c.row(k), 1);
            for (int q = 0; q < b; ++q) {
                out.values()[k * b + q] = apply_taps(tx, psi.values(), b, q) + apply_taps(ty, psi.values(), b, q);
            }
        }
    });
    return out;
}

double weitzenboeck_residual(const SpinorField& psi, DiracMode mode, Stencil stencil) {
    require_torus(psi.chart(), "Weitzenboeck residual");
    SpinorField r = dirac_apply(dirac_apply(psi, mode, stencil), mode, stencil);
    r += laplace_apply(psi, mode);
    return lp_norm(r, 2.0);
}

double dirac_symbol_min(const GridChart& c) {
    require_torus(c, "Dirac symbol");
    const auto kx = wavenumbers(c.nx(), c.period_x(), c.antiperiodic_x());
    const auto ky = wavenumbers(c.ny(), c.period_y(), c.antiperiodic_y());
    double m = std::numeric_limits<double>::infinity();
    for (double a : kx)
        for (double b : ky) m = std::min(m, std::hypot(a, b));
    return m;
}

SpinorField dirac_inverse_spectral(const SpinorField& f) {
    const auto& c = f.chart();
    require_torus(c, "spectral Dirac inverse");
    if (!(dirac_symbol_min(c) > 0.0)) {
        throw ConfigError("Dirac operator has harmonic spinors for spin structure " +
                          to_string(*c.spin_structure()) + "; not invertible");
    }
    Spectral sp(c);
    SpinorField out(c, f.n(), f.tag());
    for (int comp = 0; comp < f.n(); ++comp) {
        auto a = sp.transform(f, 2 * comp);
        auto b = sp.transform(f, 2 * comp + 1);
        std::vector<Complex> u1(c.size()), u2(c.size());
        for (int j = 0; j < c.ny(); ++j)
            for (int i = 0; i < c.nx(); ++i) {
                const std::size_t k = c.index(i, j);
                u2[k] = a[k] / (kI * sp.kx(i) - sp.ky(j));
                u1[k] = b[k] / (-kI * sp.kx(i) - sp.ky(j));
            }
        sp.inverse(u1, out, 2 * comp);
        sp.inverse(u2, out, 2 * comp + 1);
    }
    return out;
}

}  // namespace spinflow

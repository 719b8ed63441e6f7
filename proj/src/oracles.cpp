#include "spinflow/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "spinflow/clifford.hpp"
#include "spinflow/dirac.hpp"
#include "spinflow/random.hpp"

namespace spinflow::oracles {

namespace {

constexpr Complex kI{0.0, 1.0};

double bump(double r, double radius) {
    const double s = r / radius;
    return s >= 1.0 ? 0.0 : std::exp(1.0 - 1.0 / (1.0 - s * s));
}

}  // namespace

double algebra_error() {
    const auto& c = CliffordRep::standard();
    const Mat2 id = identity2();
    double err = 0.0;
    for (int a = 1; a <= 2; ++a) {
        for (int b = 1; b <= 2; ++b) {
            const Mat2 anti = c.sigma(a) * c.sigma(b) + c.sigma(b) * c.sigma(a);
            err = std::max(err, max_abs(anti + (a == b ? 2.0 : 0.0) * id));
        }
        err = std::max(err, max_abs(adjoint(c.sigma(a)) + c.sigma(a)));
    }
    const Mat2 gamma = Complex(0, 1) * (c.sigma1 * c.sigma2);
    err = std::max(err, max_abs(gamma - c.chirality));
    err = std::max(err, max_abs(c.chirality * c.chirality - id));
    err = std::max(err, max_abs(c.proj_plus * c.proj_plus - c.proj_plus));
    err = std::max(err, max_abs(c.proj_minus * c.proj_minus - c.proj_minus));
    err = std::max(err, max_abs(c.proj_plus * c.proj_minus));
    err = std::max(err, max_abs(c.proj_plus + c.proj_minus - id));
    err = std::max(err, max_abs(c.proj_plus - c.proj_minus - c.chirality));
    return err;
}

double null_identity_error(const SpinorField& psi) {
    const auto form = weierstrass_form(psi);
    const auto norms = pointwise_norm(psi);
    double err = 0.0;
    for (std::size_t k = 0; k < norms.size(); ++k) {
        if (norms[k] == 0.0) continue;
        const Complex s = form.phi[0][k] * form.phi[0][k] + form.phi[1][k] * form.phi[1][k] +
                          form.phi[2][k] * form.phi[2][k];
        err = std::max(err, std::abs(s) / std::pow(norms[k], 4));
    }
    return err;
}

SpinorField random_field(const GridChart& chart, int n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    SpinorField psi(chart, n);
    for (auto& v : psi.values()) {
        const double re = rng.symmetric();
        v = {re, rng.symmetric()};
    }
    psi.clear_outside();
    return psi;
}

SpinorField weitzenboeck_field(const GridChart& torus) {
    return SpinorField::sample(torus, 1, [](double x, double y, std::span<Complex> o) {
        o[0] = std::cos(kPi * x) * std::sin(3 * kPi * y);
        o[1] = kI * std::sin(kPi * x + 3 * kPi * y);
    });
}

std::pair<SpinorField, SpinorField> green_pair(const GridChart& patch) {
    auto psi = SpinorField::sample(patch, 1, [](double x, double y, std::span<Complex> o) {
        const double b = bump(std::hypot(x, y), 0.6);
        o[0] = b * std::cos(2 * x);
        o[1] = b * Complex(x, y);
    });
    auto f = dirac_apply(psi, DiracMode::FiniteDifference);
    return {std::move(psi), std::move(f)};
}

SpinorField manufactured_profile(const GridChart& torus, int n, double amplitude) {
    const double sx = torus.antiperiodic_x() ? 0.5 : 1.0;
    const double sy = torus.antiperiodic_y() ? 0.5 : 1.0;
    const double kx = 2 * kPi * sx / torus.period_x();
    const double ky = 2 * kPi * sy / torus.period_y();
    const double ox = torus.origin_x();
    const double oy = torus.origin_y();
    return SpinorField::sample(torus, n, [&](double x, double y, std::span<Complex> o) {
        const double u = kx * (x - ox);
        const double v = ky * (y - oy);
        for (int q = 0; q < n; ++q) {
            o[2 * q] = amplitude * std::cos(u) * std::cos(v + 0.1 * kPi * q);
            o[2 * q + 1] = 0.75 * amplitude * kI * std::sin(u + 0.2 * q) * std::cos(v) +
                           0.375 * amplitude * std::cos(3 * v);
        }
    });
}

SpinorField plane_field(const GridChart& chart) {
    return SpinorField::sample(chart, 1, [](double, double, std::span<Complex> o) { o[1] = 1.0; });
}

SpinorField enneper_field(const GridChart& chart) {
    return SpinorField::sample(chart, 1, [](double x, double y, std::span<Complex> o) {
        o[0] = 1.0;
        o[1] = Complex(x, y);
    });
}

SpinorField conformal_bump(const GridChart& chart) {
    return SpinorField::sample(chart, 1, [](double x, double y, std::span<Complex> o) {
        const double b = bump(std::hypot(x - 0.1, y), 0.45);
        o[0] = b * Complex(1 + x, y);
        o[1] = b * std::cos(3 * y);
    });
}

SpinorField annulus_bump(const GridChart& chart) {
    return SpinorField::sample(chart, 1, [](double x, double y, std::span<Complex> o) {
        const double s = (std::hypot(x, y) - 0.67) / 0.28;
        const double b = std::abs(s) >= 1 ? 0.0 : std::exp(1 - 1 / (1 - s * s));
        o[0] = b * Complex(x, 2 * y);
        o[1] = b;
    });
}

SpinorField wide_bump(const GridChart& chart) {
    return SpinorField::sample(chart, 1, [](double x, double y, std::span<Complex> o) {
        const double b = bump(std::hypot(x, y), 2.5);
        o[0] = b * Complex(1, x);
        o[1] = b * y;
    });
}

PlantedBlowup planted_blowup(int nodes) {
    const auto chart = GridChart::torus(nodes, nodes, 2, 2, SpinStructure::PeriodicPeriodic, -1, -1);
    auto background_at = [](double x, double y, std::span<Complex> o) {
        o[0] = 0.0;
        o[1] = 0.0;
        o[2] = 0.45 + 0.2 * std::sin(kPi * x) * std::cos(kPi * y);
        o[3] = 0.3 * kI * std::cos(kPi * y + 0.3);
    };
    // Unit energy: A^4 / lambda^2 * integral of 2^{-r^2/lambda^2} = 1.
    const double amp = std::pow(std::log(2.0) / kPi, 0.25);

    PlantedBlowup out{{}, SpinorField::sample(chart, 2, background_at, "background"), {}, {{-0.45, 0.0}, {0.45, 0.2}}};
    for (int m = 0; m < 6; ++m) {
        const double lambda = 0.03 * std::pow(0.8, m);
        const double d = 0.16 * std::pow(0.85, m);
        out.lambda.push_back(lambda);
        struct Bubble {
            double x, y;
            int slot;
        };
        const Bubble bubbles[3] = {{-0.45 - d / 2, 0.0, 0}, {-0.45 + d / 2, 0.0, 1}, {0.45, 0.2, 0}};
        out.members.push_back(SpinorField::sample(
            chart, 2,
            [&](double x, double y, std::span<Complex> o) {
                background_at(x, y, o);
                for (const auto& b : bubbles) {
                    double dx = x - b.x;
                    double dy = y - b.y;
                    dx -= 2 * std::round(dx / 2);
                    dy -= 2 * std::round(dy / 2);
                    o[b.slot] += amp / std::sqrt(lambda) * std::pow(2.0, -(dx * dx + dy * dy) / (4 * lambda * lambda));
                }
            },
            "planted-" + std::to_string(m)));
    }
    return out;
}

SpinorField smooth_field(const GridChart& chart) {
    return SpinorField::sample(chart, 1, [](double x, double y, std::span<Complex> o) {
        const double g = std::exp(-x * x - y * y);
        o[0] = g * Complex(std::cos(kPi * x), 0.5 * std::sin(kPi * y));
        o[1] = g * (0.7 + 0.3 * x * y);
    });
}

SpinorField spike_field(const GridChart& chart, double exponent) {
    return SpinorField::sample(chart, 1, [exponent](double x, double y, std::span<Complex> o) {
        const double r = std::hypot(x, y);
        if (r == 0.0) return;
        o[0] = std::pow(r, exponent) * bump(r, 0.9);
        o[1] = 0.0;
    });
}

SurfaceMesh sphere_band_mesh(int n) {
    const int vx = n + 1;
    const int vy = n;
    const double t0 = 0.3;
    const double t1 = 2.8;
    std::vector<Vec3> p;
    p.reserve(static_cast<std::size_t>(vx) * vy);
    for (int b = 0; b < vy; ++b) {
        for (int a = 0; a < vx; ++a) {
            // Colatitude decreases along b so that the lattice is positively oriented.
            const double th = t1 - (t1 - t0) * b / (vy - 1);
            const double ph = 2 * kPi * a / n;
            p.push_back({std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)});
        }
    }
    return SurfaceMesh::from_lattice(vx, vy, 2 * kPi / n, (t1 - t0) / (vy - 1), p);
}

}  // namespace spinflow::oracles

#include "spinflow/green.hpp"

#include <cmath>

#include "spinflow/fft.hpp"
#include "spinflow/parallel.hpp"

namespace spinflow {

Mat2 GreenKernel::operator()(double dx, double dy) const {
    const double r2 = dx * dx + dy * dy;
    if (r2 <= regularization_radius * regularization_radius) return {};
    const auto& rep = CliffordRep::standard();
    const Mat2 x_dot = Complex(dx) * rep.sigma1 + Complex(dy) * rep.sigma2;
    return Complex(-1.0 / (2.0 * kPi * r2)) * x_dot;
}

namespace {

bool on_outer_ring(const GridChart& c, std::size_t k) {
    if (c.domain() == DomainKind::Disk) return c.kind(k) == NodeKind::Boundary;
    const int i = c.col(k);
    const int j = c.row(k);
    return i == 0 || j == 0 || i == c.nx() - 1 || j == c.ny() - 1;
}

void check_source(const SpinorField& f) {
    const auto& c = f.chart();
    if (c.domain() == DomainKind::SphereChart) {
        throw DomainError("Green convolution needs a planar chart (disk or torus patch)");
    }
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (!c.has_data(k) || !on_outer_ring(c, k)) continue;
        for (const auto& v : f.at(k)) {
            if (v != Complex{}) {
                throw PreconditionError("Green convolution source must vanish on the outer node ring");
            }
        }
    }
}

SpinorField convolve_direct(const SpinorField& f) {
    const auto& c = f.chart();
    const GreenKernel kernel{0.5 * std::min(c.hx(), c.hy())};
    const double w = c.cell_area();
    const int b = f.block();

    std::vector<std::size_t> support;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (!c.has_data(k)) continue;
        for (const auto& v : f.at(k)) {
            if (v != Complex{}) {
                support.push_back(k);
                break;
            }
        }
    }

    SpinorField out(c, f.n(), f.tag());
    parallel_for(c.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t a = begin; a < end; ++a) {
            if (!c.has_data(a)) continue;
            const double xa = c.x(c.col(a));
            const double ya = c.y(c.row(a));
            auto acc = out.at(a);
            for (std::size_t s : support) {
                const Mat2 m = kernel(xa - c.x(c.col(s)), ya - c.y(c.row(s)));
                const auto src = f.at(s);
                for (int q = 0; q < b; q += 2) {
                    Complex u, v;
                    apply(m, src[q], src[q + 1], u, v);
                    acc[q] += w * u;
                    acc[q + 1] += w * v;
                }
            }
        }
    });
    return out;
}

SpinorField convolve_fft(const SpinorField& f) {
    const auto& c = f.chart();
    const int nx = c.nx();
    const int ny = c.ny();
    const int px = 2 * nx;
    const int py = 2 * ny;
    const std::size_t padded = static_cast<std::size_t>(px) * py;
    const double w = c.cell_area();
    Fft2d fft(px, py);

    // g(d) = -(dx + i dy) / (2 pi |d|^2) acts on the second slot; the first
    // slot sees -conj(g).
    std::vector<Complex> g(padded), g_bar(padded);
    for (int dj = -(ny - 1); dj <= ny - 1; ++dj) {
        for (int di = -(nx - 1); di <= nx - 1; ++di) {
            if (di == 0 && dj == 0) continue;
            const double dx = di * c.hx();
            const double dy = dj * c.hy();
            const double r2 = dx * dx + dy * dy;
            const Complex val = Complex(-dx, -dy) * (w / (2.0 * kPi * r2));
            const std::size_t idx = static_cast<std::size_t>((dj + py) % py) * px + (di + px) % px;
            g[idx] = val;
            g_bar[idx] = -std::conj(val);
        }
    }
    fft.forward(g);
    fft.forward(g_bar);

    SpinorField out(c, f.n(), f.tag());
    const int b = f.block();
    std::vector<Complex> s1(padded), s2(padded);
    for (int comp = 0; comp < f.n(); ++comp) {
        std::fill(s1.begin(), s1.end(), Complex{});
        std::fill(s2.begin(), s2.end(), Complex{});
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const std::size_t k = c.index(i, j);
                const std::size_t p = static_cast<std::size_t>(j) * px + i;
                s1[p] = f.values()[k * b + 2 * comp];
                s2[p] = f.values()[k * b + 2 * comp + 1];
            }
        fft.forward(s1);
        fft.forward(s2);
        for (std::size_t p = 0; p < padded; ++p) {
            const Complex first = g[p] * s2[p];
            const Complex second = g_bar[p] * s1[p];
            s1[p] = first;
            s2[p] = second;
        }
        fft.backward(s1);
        fft.backward(s2);
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const std::size_t k = c.index(i, j);
                if (!c.has_data(k)) continue;
                const std::size_t p = static_cast<std::size_t>(j) * px + i;
                out.values()[k * b + 2 * comp] = s1[p];
                out.values()[k * b + 2 * comp + 1] = s2[p];
            }
    }
    return out;
}

}  // namespace

SpinorField green_convolve(const SpinorField& f, ConvolutionMethod method) {
    check_source(f);
    return method == ConvolutionMethod::Direct ? convolve_direct(f) : convolve_fft(f);
}

}  // namespace spinflow

#include "spinflow/reaction.hpp"

#include <algorithm>
#include <cmath>

#include "spinflow/clifford.hpp"
#include "spinflow/parallel.hpp"

namespace spinflow {

namespace {

const Complex kI{0.0, 1.0};

std::size_t tensor_size(int n) { return static_cast<std::size_t>(n) * n * n * n; }

std::size_t tidx(int n, int i, int j, int k, int l) { return ((static_cast<std::size_t>(i) * n + j) * n + k) * n + l; }

/// Value of a per-node scalar at the neighbour (i + di, j + dj), if it exists.
bool scalar_neighbour(const GridChart& c, const std::vector<double>& v, std::size_t stride, std::size_t offset, int i,
                      int j, int di, int dj, double& out) {
    int ii = i + di;
    int jj = j + dj;
    if (c.domain() == DomainKind::Torus) {
        ii = (ii + c.nx()) % c.nx();
        jj = (jj + c.ny()) % c.ny();
    } else if (ii < 0 || jj < 0 || ii >= c.nx() || jj >= c.ny()) {
        return false;
    }
    const std::size_t k = c.index(ii, jj);
    if (!c.has_data(k)) return false;
    out = v[k * stride + offset];
    return true;
}

double partial(const GridChart& c, const std::vector<double>& v, std::size_t stride, std::size_t offset, int i, int j,
               int axis) {
    const int di = axis == 0 ? 1 : 0;
    const int dj = 1 - di;
    const double h = axis == 0 ? c.hx() : c.hy();
    const double self = v[c.index(i, j) * stride + offset];
    double p = 0.0, m = 0.0;
    const bool hp = scalar_neighbour(c, v, stride, offset, i, j, di, dj, p);
    const bool hm = scalar_neighbour(c, v, stride, offset, i, j, -di, -dj, m);
    if (hp && hm) return (p - m) / (2.0 * h);
    if (hp) return (p - self) / h;
    if (hm) return (self - m) / h;
    return 0.0;
}

/// sup over data nodes and entries of |grad v|; v holds `stride` values per node.
double gradient_sup(const GridChart& c, const std::vector<double>& v, std::size_t stride) {
    if (c.domain() == DomainKind::SphereChart) return 0.0;
    double best = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (!c.has_data(k)) continue;
        for (std::size_t q = 0; q < stride; ++q) {
            const double gx = partial(c, v, stride, q, c.col(k), c.row(k), 0);
            const double gy = partial(c, v, stride, q, c.col(k), c.row(k), 1);
            best = std::max(best, std::hypot(gx, gy));
        }
    }
    return best;
}

void check_curvature(int n, const std::vector<double>& r) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const double v = r[tidx(n, i, j, k, l)];
                    worst = std::max(worst, std::abs(v + r[tidx(n, j, i, k, l)]));
                    worst = std::max(worst, std::abs(v + r[tidx(n, i, j, l, k)]));
                    worst = std::max(worst, std::abs(v - r[tidx(n, k, l, i, j)]));
                }
    if (worst > 1e-12) throw ConfigError("curvature tensor lacks the curvature symmetries");
}

Complex potential(const ChiralCoefficients& w, double h, double n_all, double n1, double n2) {
    return (w.h_coef * h + w.c0) * n_all + w.c1 * n1 + w.c2 * n2;
}


}  // namespace

std::string to_string(ReactionKind k) {
    switch (k) {
        case ReactionKind::GeneralCubic: return "GeneralCubic";
        case ReactionKind::ScalarH: return "ScalarH";
        case ReactionKind::CurvatureCubic: return "CurvatureCubic";
        case ReactionKind::ChiralUV: return "ChiralUV";
    }
    return "?";
}

std::string to_string(ChiralPreset p) {
    switch (p) {
        case ChiralPreset::SU2: return "SU2";
        case ChiralPreset::Nil: return "Nil";
        case ChiralPreset::SL2: return "SL2";
        case ChiralPreset::Custom: return "Custom";
    }
    return "?";
}

ChiralPreset chiral_preset_from_string(const std::string& s) {
    if (s == "SU2") return ChiralPreset::SU2;
    if (s == "Nil") return ChiralPreset::Nil;
    if (s == "SL2") return ChiralPreset::SL2;
    if (s == "Custom") return ChiralPreset::Custom;
    throw ConfigError("unknown chiral preset: " + s);
}

ScalarData ScalarData::field(const GridChart& c, std::vector<double> v) {
    if (v.size() != c.size()) throw ConfigError("scalar field size does not match the chart");
    return {c, std::move(v)};
}

ReactionSpec ReactionSpec::general_cubic(int n, std::vector<double> tensor) {
    if (n < 1) throw ConfigError("component count must be >= 1");
    if (tensor.size() != tensor_size(n)) throw ConfigError("cubic tensor must have n^4 entries");
    ReactionSpec s;
    s.kind_ = ReactionKind::GeneralCubic;
    s.n_ = n;
    s.tensors_ = std::move(tensor);
    s.refresh();
    return s;
}

ReactionSpec ReactionSpec::general_cubic_field(const GridChart& chart, int n, std::vector<double> tensors) {
    if (n < 1) throw ConfigError("component count must be >= 1");
    if (tensors.size() != tensor_size(n) * chart.size()) throw ConfigError("per-node cubic tensors must have size * n^4 entries");
    ReactionSpec s;
    s.kind_ = ReactionKind::GeneralCubic;
    s.n_ = n;
    s.chart_ = chart;
    s.tensors_ = std::move(tensors);
    s.refresh();
    return s;
}

ReactionSpec ReactionSpec::scalar_h(ScalarData h) {
    ReactionSpec s;
    s.kind_ = ReactionKind::ScalarH;
    s.n_ = 1;
    s.chart_ = h.chart;
    s.h_ = std::move(h);
    s.refresh();
    return s;
}

ReactionSpec ReactionSpec::curvature_cubic(int n, std::vector<double> riemann) {
    if (n < 1) throw ConfigError("component count must be >= 1");
    if (riemann.size() != tensor_size(n)) throw ConfigError("curvature tensor must have n^4 entries");
    check_curvature(n, riemann);
    ReactionSpec s;
    s.kind_ = ReactionKind::CurvatureCubic;
    s.n_ = n;
    s.tensors_ = std::move(riemann);
    for (auto& v : s.tensors_) v *= -1.0 / 3.0;
    s.refresh();
    return s;
}

std::vector<double> ReactionSpec::constant_curvature_tensor(int n, double kappa) {
    std::vector<double> r(tensor_size(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    r[tidx(n, i, j, k, l)] = kappa * ((i == k && j == l ? 1.0 : 0.0) - (i == l && j == k ? 1.0 : 0.0));
    return r;
}

ReactionSpec ReactionSpec::chiral_uv(ChiralPreset preset, ScalarData h) {
    ChiralCoefficients u, v;
    switch (preset) {
        case ChiralPreset::SU2:
            u = {-1.0, kI, 0.0, 0.0};
            v = {-1.0, -kI, 0.0, 0.0};
            break;
        case ChiralPreset::Nil:
            u = {-1.0, 0.0, -0.5 * kI, 0.5 * kI};
            v = u;
            break;
        case ChiralPreset::SL2:
            u = {-1.0, 0.0, kI, -1.5 * kI};
            v = {-1.0, 0.0, 1.5 * kI, -kI};
            break;
        case ChiralPreset::Custom:
            throw ConfigError("Custom chiral potentials need explicit coefficients");
    }
    ReactionSpec s = chiral_custom(u, v, std::move(h));
    s.preset_ = preset;
    return s;
}

ReactionSpec ReactionSpec::chiral_custom(ChiralCoefficients u, ChiralCoefficients v, ScalarData h) {
    ReactionSpec s;
    s.kind_ = ReactionKind::ChiralUV;
    s.preset_ = ChiralPreset::Custom;
    s.n_ = 1;
    s.chart_ = h.chart;
    s.h_ = std::move(h);
    s.u_ = u;
    s.v_ = v;
    s.refresh();
    return s;
}

const double* ReactionSpec::tensor(std::size_t node) const noexcept {
    if (tensors_.empty()) return nullptr;
    const std::size_t t = tensor_size(n_);
    return tensors_.data() + (tensors_.size() == t ? 0 : node * t);
}

void ReactionSpec::refresh() {
    h0_ = 0.0;
    h1_ = 0.0;
    switch (kind_) {
        case ReactionKind::GeneralCubic:
        case ReactionKind::CurvatureCubic:
            for (double v : tensors_) h0_ = std::max(h0_, std::abs(v));
            if (chart_) h1_ = gradient_sup(*chart_, tensors_, tensor_size(n_));
            break;
        case ReactionKind::ScalarH:
            for (double v : h_.values) h0_ = std::max(h0_, std::abs(v));
            if (chart_) h1_ = gradient_sup(*chart_, h_.values, 1);
            break;
        case ReactionKind::ChiralUV: {
            for (double hv : h_.values) {
                for (const auto* w : {&u_, &v_}) {
                    h0_ = std::max(h0_, std::abs(w->h_coef * hv + w->c0) + std::abs(w->c1) + std::abs(w->c2));
                }
            }
            if (chart_) {
                const double scale = std::max(std::abs(u_.h_coef), std::abs(v_.h_coef));
                h1_ = scale * gradient_sup(*chart_, h_.values, 1);
            }
            break;
        }
    }
    if (!std::isfinite(h0_) || !std::isfinite(h1_)) throw ConfigError("reaction coefficients must be finite");
}

namespace {

void require_chart(const ReactionSpec& spec, const SpinorField& psi) {
    if (psi.n() != spec.n()) throw ConfigError("reaction component count does not match the field");
    if (spec.coefficient_chart() && *spec.coefficient_chart() != psi.chart()) {
        throw ConfigError("reaction coefficients live on a different chart");
    }
}

/// Evaluates R(psi) when dpsi is null, otherwise dR(psi)[dpsi].
SpinorField evaluate(const ReactionSpec& spec, const SpinorField& psi, const SpinorField* dpsi) {
    require_chart(spec, psi);
    if (dpsi && !psi.compatible(*dpsi)) throw ConfigError("direction field does not match the base field");
    const auto& c = psi.chart();
    const int n = spec.n();
    SpinorField out(c, n, psi.tag());
    parallel_for(c.size(), [&](std::size_t begin, std::size_t end) {
        std::vector<Complex> gram(static_cast<std::size_t>(n) * n), dgram(static_cast<std::size_t>(n) * n);
        for (std::size_t k = begin; k < end; ++k) {
            if (!c.has_data(k)) continue;
            const auto p = psi.at(k);
            const auto d = dpsi ? dpsi->at(k) : p;
            auto o = out.at(k);
            switch (spec.kind()) {
                case ReactionKind::GeneralCubic:
                case ReactionKind::CurvatureCubic: {
                    const double* h = spec.tensor(k);
                    for (int j = 0; j < n; ++j)
                        for (int q = 0; q < n; ++q) {
                            const auto pj = p.subspan(2 * j, 2);
                            const auto pq = p.subspan(2 * q, 2);
                            gram[j * n + q] = hermitian(pj, pq);
                            if (dpsi)
                                dgram[j * n + q] = hermitian(d.subspan(2 * j, 2), pq) + hermitian(pj, d.subspan(2 * q, 2));
                        }
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j)
                            for (int q = 0; q < n; ++q)
                                for (int l = 0; l < n; ++l) {
                                    const double hv = h[tidx(n, i, j, q, l)];
                                    if (hv == 0.0) continue;
                                    const Complex g = gram[j * n + q];
                                    for (int s = 0; s < 2; ++s) {
                                        o[2 * i + s] += dpsi ? hv * (dgram[j * n + q] * p[2 * l + s] + g * d[2 * l + s])
                                                             : hv * g * p[2 * l + s];
                                    }
                                }
                    break;
                }
                case ReactionKind::ScalarH: {
                    const double h = spec.h().at(k);
                    const double n2 = std::norm(p[0]) + std::norm(p[1]);
                    if (!dpsi) {
                        for (int s = 0; s < 2; ++s) o[s] = h * n2 * p[s];
                        break;
                    }
                    const double dn2 = 2.0 * std::real(hermitian(d, p));
                    for (int s = 0; s < 2; ++s) o[s] = h * (dn2 * p[s] + n2 * d[s]);
                    break;
                }
                case ReactionKind::ChiralUV: {
                    const double h = spec.h().at(k);
                    const double n1 = std::norm(p[0]);
                    const double n2 = std::norm(p[1]);
                    const Complex U = potential(spec.u(), h, n1 + n2, n1, n2);
                    const Complex V = potential(spec.v(), h, n1 + n2, n1, n2);
                    if (!dpsi) {
                        o[0] = V * p[0];
                        o[1] = U * p[1];
                        break;
                    }
                    const double d1 = 2.0 * std::real(d[0] * std::conj(p[0]));
                    const double d2 = 2.0 * std::real(d[1] * std::conj(p[1]));
                    const Complex dU = potential(spec.u(), h, d1 + d2, d1, d2);
                    const Complex dV = potential(spec.v(), h, d1 + d2, d1, d2);
                    o[0] = dV * p[0] + V * d[0];
                    o[1] = dU * p[1] + U * d[1];
                    break;
                }
            }
        }
    });
    return out;
}

}  // namespace

SpinorField rhs_eval(const ReactionSpec& spec, const SpinorField& psi) { return evaluate(spec, psi, nullptr); }

SpinorField rhs_derivative(const ReactionSpec& spec, const SpinorField& psi, const SpinorField& dpsi) {
    return evaluate(spec, psi, &dpsi);
}

}  // namespace spinflow

#include "spinflow/solver.hpp"

#include <cmath>

#include "spinflow/disk_solve.hpp"
#include "spinflow/quadrature.hpp"

namespace spinflow {

namespace {

DiracMode natural_mode(const GridChart& c) {
    return c.domain() == DomainKind::Torus ? DiracMode::Spectral : DiracMode::FiniteDifference;
}

void check_solvable(const GridChart& c) {
    if (c.domain() == DomainKind::SphereChart) throw ConfigError("the solver runs on torus or disk charts");
    if (c.domain() == DomainKind::Torus && dirac_symbol_min(c) == 0.0) {
        throw ConfigError("Dirac operator has harmonic spinors on this spin structure; use an antiperiodic one");
    }
}

/// D^{-1} rhs with the trace of `trace_source` on disks (zero when null).
SpinorField dirac_inverse(const SpinorField& rhs, const SpinorField* trace_source) {
    const auto& c = rhs.chart();
    if (c.domain() == DomainKind::Torus) return dirac_inverse_spectral(rhs);
    SpinorField trace = trace_source ? *trace_source : SpinorField(c, rhs.n());
    return disk_solve(rhs, trace).psi;
}

double real_dot(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
    return s;
}

}  // namespace

ResidualResult residual(const ReactionSpec& spec, const SpinorField& psi, DiracMode mode, const SpinorField* forcing) {
    ResidualResult out{dirac_apply(psi, mode), 0.0};
    out.field -= rhs_eval(spec, psi);
    if (forcing) out.field -= *forcing;
    out.field.clear_outside();
    out.norm = lp_norm(out.field, 4.0 / 3.0);
    return out;
}

double smallness_margin(const ReactionSpec& spec, const SpinorField& psi) { return spec.h0() * std::sqrt(energy(psi)); }

SpinorField manufactured_forcing(const ReactionSpec& spec, const SpinorField& psi_star) {
    SpinorField f = dirac_apply(psi_star, DiracMode::Spectral);
    f -= rhs_eval(spec, psi_star);
    f.set_tag("manufactured-forcing");
    return f;
}

PicardResult picard_solve(const ReactionSpec& spec, const SpinorField& seed, const SpinorField* forcing,
                          const PicardOptions& opt) {
    const auto& c = seed.chart();
    check_solvable(c);
    if (!(opt.damping > 0.0 && opt.damping <= 1.0)) throw ConfigError("damping must lie in (0, 1]");
    if (!(opt.tol > 0.0)) throw ConfigError("tolerance must be positive");
    if (!seed.is_finite()) throw ConfigError("seed field is not finite");
    if (forcing && !forcing->compatible(seed)) throw ConfigError("forcing does not match the seed field");
    if (seed.n() != spec.n()) throw ConfigError("reaction component count does not match the field");

    const DiracMode mode = natural_mode(c);
    PicardResult out{seed, {}};
    auto& rep = out.report;
    SpinorField& psi = out.psi;
    for (int it = 1; it <= opt.max_iter; ++it) {
        SpinorField rhs = rhs_eval(spec, psi);
        if (forcing) rhs += *forcing;
        SpinorField next = dirac_inverse(rhs, &seed);
        next *= Complex(opt.damping);
        next.axpy(Complex(1.0 - opt.damping), psi);
        SpinorField diff = next - psi;
        const double update = lp_norm(diff, 2.0);
        psi = std::move(next);
        rep.updates.push_back(update);
        rep.iterations = it;
        if (!std::isfinite(update) || !psi.is_finite()) {
            throw DivergenceError("Picard iteration produced non-finite values", rep.updates);
        }
        rep.residuals.push_back(residual(spec, psi, mode, forcing).norm);
        if (update < opt.tol) {
            rep.converged = true;
            break;
        }
        if (it > 20 && update > 10.0 * rep.updates[it - 21]) {
            throw DivergenceError("Picard update grew tenfold over 20 iterations", rep.updates);
        }
    }
    if (!rep.converged) throw ConvergenceError("Picard iteration hit max_iter", rep.updates);
    rep.final_residual = rep.residuals.back();
    rep.smallness_margin = smallness_margin(spec, psi);
    rep.guard_exceeded = rep.smallness_margin >= opt.guard;
    return out;
}

namespace {

struct GmresOutcome {
    std::vector<Complex> x;
    bool converged = false;
};

template <class Op>
GmresOutcome gmres_real(const Op& apply, const std::vector<Complex>& b, const NewtonOptions& opt) {
    const std::size_t len = b.size();
    GmresOutcome out{std::vector<Complex>(len), false};
    const double b_norm = std::sqrt(real_dot(b, b));
    if (b_norm == 0.0) {
        out.converged = true;
        return out;
    }
    const double target = opt.gmres_tol * b_norm;
    const int m = opt.gmres_restart;
    for (int cycle = 0; cycle < opt.gmres_max_restarts; ++cycle) {
        std::vector<Complex> r = apply(out.x);
        for (std::size_t k = 0; k < len; ++k) r[k] = b[k] - r[k];
        const double beta = std::sqrt(real_dot(r, r));
        if (beta <= target) {
            out.converged = true;
            return out;
        }
        std::vector<std::vector<Complex>> v{r};
        for (auto& z : v[0]) z /= beta;
        std::vector<std::vector<double>> h(m + 1, std::vector<double>(m, 0.0));
        std::vector<double> cs(m), sn(m), g(m + 1, 0.0);
        g[0] = beta;
        int used = 0;
        for (int j = 0; j < m; ++j) {
            std::vector<Complex> w = apply(v[j]);
            for (int i = 0; i <= j; ++i) {
                h[i][j] = real_dot(w, v[i]);
                for (std::size_t k = 0; k < len; ++k) w[k] -= h[i][j] * v[i][k];
            }
            h[j + 1][j] = std::sqrt(real_dot(w, w));
            for (int i = 0; i < j; ++i) {
                const double t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
                h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
                h[i][j] = t;
            }
            const double den = std::hypot(h[j][j], h[j + 1][j]);
            const double hj1 = h[j + 1][j];
            cs[j] = den == 0.0 ? 1.0 : h[j][j] / den;
            sn[j] = den == 0.0 ? 0.0 : hj1 / den;
            h[j][j] = den;
            h[j + 1][j] = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = cs[j] * g[j];
            used = j + 1;
            if (std::abs(g[j + 1]) <= target || hj1 == 0.0) break;
            for (auto& z : w) z /= hj1;
            v.push_back(std::move(w));
        }
        std::vector<double> y(used);
        for (int i = used - 1; i >= 0; --i) {
            double s = g[i];
            for (int k = i + 1; k < used; ++k) s -= h[i][k] * y[k];
            y[i] = h[i][i] == 0.0 ? 0.0 : s / h[i][i];
        }
        for (int i = 0; i < used; ++i)
            for (std::size_t k = 0; k < len; ++k) out.x[k] += y[i] * v[i][k];
        if (std::abs(g[used]) <= target) {
            out.converged = true;
            return out;
        }
    }
    return out;
}

}  // namespace

NewtonResult newton_refine(const ReactionSpec& spec, const SpinorField& psi0, const SpinorField* forcing,
                           const NewtonOptions& opt) {
    const auto& c = psi0.chart();
    if (c.domain() != DomainKind::Torus) throw ConfigError("newton_refine runs on torus charts");
    check_solvable(c);
    if (forcing && !forcing->compatible(psi0)) throw ConfigError("forcing does not match the field");

    NewtonResult out{psi0, 0, {}, false, false, 0.0};
    ResidualResult res = residual(spec, out.psi, DiracMode::Spectral, forcing);
    out.residuals.push_back(res.norm);
    for (int step = 0; step < opt.max_steps; ++step) {
        if (res.norm <= opt.tol) {
            out.converged = true;
            break;
        }
        SpinorField rhs = dirac_inverse_spectral(res.field);
        rhs *= Complex(-1.0);
        const SpinorField base = out.psi;
        auto apply = [&](const std::vector<Complex>& x) {
            SpinorField dx(c, base.n());
            dx.values() = x;
            SpinorField t = dirac_inverse_spectral(rhs_derivative(spec, base, dx));
            std::vector<Complex> y = x;
            for (std::size_t k = 0; k < y.size(); ++k) y[k] -= t.values()[k];
            return y;
        };
        GmresOutcome lin = gmres_real(apply, rhs.values(), opt);
        SpinorField delta(c, base.n());
        delta.values() = std::move(lin.x);
        SpinorField trial = base + delta;
        ResidualResult trial_res = residual(spec, trial, DiracMode::Spectral, forcing);
        if (!(trial_res.norm < res.norm)) {
            out.stagnated = true;
            break;
        }
        out.last_update = lp_norm(delta, 2.0);
        out.psi = std::move(trial);
        res = std::move(trial_res);
        out.residuals.push_back(res.norm);
        ++out.steps;
        if (!lin.converged) {
            out.stagnated = true;
            break;
        }
    }
    if (res.norm <= opt.tol) out.converged = true;
    return out;
}

}  // namespace spinflow

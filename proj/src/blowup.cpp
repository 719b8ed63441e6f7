#include "spinflow/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "spinflow/conformal.hpp"
#include "spinflow/dirac.hpp"
#include "spinflow/parallel.hpp"

namespace spinflow {

namespace {

void require_sequence(const FieldSequence& seq) {
    if (seq.empty()) throw ConfigError("empty field sequence");
    for (const auto& f : seq) {
        if (!f.compatible(seq.front())) throw ConfigError("sequence members must share chart and component count");
    }
    if (seq.front().chart().domain() == DomainKind::SphereChart) {
        throw DomainError("blow-up analysis runs on planar charts");
    }
}

double distance(const GridChart& c, std::size_t a, std::size_t b) {
    double dx, dy;
    displacement(c, a, c.x(c.col(b)), c.y(c.row(b)), dx, dy);
    return std::hypot(dx, dy);
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t a) {
    while (parent[a] != a) {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    return a;
}

/// Smoothed ball energy of `density` around node `centre`.
double smooth_ball(const GridChart& c, const std::vector<double>& density, std::size_t centre, double rho) {
    const double h = c.spacing();
    const double reach = rho + 0.5 * h;
    const int ri = static_cast<int>(std::ceil(reach / c.hx()));
    const int rj = static_cast<int>(std::ceil(reach / c.hy()));
    const bool torus = c.domain() == DomainKind::Torus;
    const int i0 = c.col(centre);
    const int j0 = c.row(centre);
    double s = 0.0;
    for (int dj = -rj; dj <= rj; ++dj) {
        int j = j0 + dj;
        if (torus) {
            if (2 * rj + 1 > c.ny() && (dj < -c.ny() / 2 || dj >= (c.ny() + 1) / 2)) continue;
            j = ((j % c.ny()) + c.ny()) % c.ny();
        } else if (j < 0 || j >= c.ny()) {
            continue;
        }
        const double dy = dj * c.hy();
        for (int di = -ri; di <= ri; ++di) {
            int i = i0 + di;
            if (torus) {
                if (2 * ri + 1 > c.nx() && (di < -c.nx() / 2 || di >= (c.nx() + 1) / 2)) continue;
                i = ((i % c.nx()) + c.nx()) % c.nx();
            } else if (i < 0 || i >= c.nx()) {
                continue;
            }
            const double e = density[c.index(i, j)];
            if (e == 0.0) continue;
            const double d = std::hypot(di * c.hx(), dy);
            const double w = std::clamp((rho - d) / h + 0.5, 0.0, 1.0);
            s += w * e;
        }
    }
    return s;
}

bool excluded(const GridChart& c, std::size_t k, const std::vector<Exclusion>& ex) {
    for (const auto& e : ex) {
        double dx, dy;
        displacement(c, k, e.x, e.y, dx, dy);
        if (dx * dx + dy * dy <= e.r * e.r) return true;
    }
    return false;
}

}  // namespace

std::vector<double> ball_energies(const SpinorField& psi, double r) {
    const auto& c = psi.chart();
    if (c.domain() == DomainKind::SphereChart) throw DomainError("ball energies need a planar chart");
    const auto density = energy_density_weighted(psi);
    const int nx = c.nx();
    const int ny = c.ny();
    const bool torus = c.domain() == DomainKind::Torus;
    // prefix[j][i] = sum of density over columns < i of row j
    std::vector<double> prefix(static_cast<std::size_t>(ny) * (nx + 1), 0.0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            prefix[j * (nx + 1) + i + 1] = prefix[j * (nx + 1) + i] + density[c.index(i, j)];
    auto row_span = [&](int j, int a, int b) {  // columns a..b inclusive, wrapped on a torus
        const double* p = prefix.data() + static_cast<std::size_t>(j) * (nx + 1);
        if (!torus) {
            a = std::max(a, 0);
            b = std::min(b, nx - 1);
            return a > b ? 0.0 : p[b + 1] - p[a];
        }
        if (b - a + 1 >= nx) return p[nx];
        const int aa = ((a % nx) + nx) % nx;
        const int bb = aa + (b - a);
        if (bb < nx) return p[bb + 1] - p[aa];
        return (p[nx] - p[aa]) + p[bb - nx + 1];
    };
    const int rj = static_cast<int>(std::floor(r / c.hy() + 1e-9));
    std::vector<int> half(2 * rj + 1);
    for (int dj = -rj; dj <= rj; ++dj) {
        const double dy = dj * c.hy();
        const double w = std::sqrt(std::max(0.0, r * r - dy * dy));
        half[dj + rj] = static_cast<int>(std::floor(w / c.hx() + 1e-9));
    }
    std::vector<double> out(c.size(), 0.0);
    parallel_for(c.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            if (!c.has_data(k)) continue;
            const int i = c.col(k);
            const int j = c.row(k);
            double s = 0.0;
            for (int dj = -rj; dj <= rj; ++dj) {
                int jj = j + dj;
                if (torus) {
                    if (2 * rj + 1 > ny && (dj < -ny / 2 || dj >= (ny + 1) / 2)) continue;
                    jj = ((jj % ny) + ny) % ny;
                } else if (jj < 0 || jj >= ny) {
                    continue;
                }
                const int hw = half[dj + rj];
                s += row_span(jj, i - hw, i + hw);
            }
            out[k] = s;
        }
    });
    return out;
}

std::vector<BlowupPoint> blowup_set(const FieldSequence& seq, double epsilon, std::vector<double> radii) {
    require_sequence(seq);
    if (!(epsilon > 0.0)) throw ConfigError("detection threshold must be positive");
    if (radii.empty()) throw ConfigError("radius schedule is empty");
    for (double r : radii)
        if (!(r > 0.0)) throw ConfigError("radii must be positive");
    const auto& c = seq.front().chart();
    const std::size_t start = seq.size() / 2;
    const std::size_t nr = radii.size();

    std::vector<std::vector<double>> env(nr);
    for (std::size_t q = 0; q < nr; ++q) {
        env[q].assign(c.size(), std::numeric_limits<double>::infinity());
        for (std::size_t m = start; m < seq.size(); ++m) {
            const auto e = ball_energies(seq[m], radii[q]);
            for (std::size_t k = 0; k < c.size(); ++k) env[q][k] = std::min(env[q][k], e[k]);
        }
    }
    std::vector<std::size_t> passing;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (!c.has_data(k)) continue;
        bool ok = true;
        for (std::size_t q = 0; q < nr && ok; ++q) ok = env[q][k] >= epsilon;
        if (ok) passing.push_back(k);
    }
    const double r_max = *std::max_element(radii.begin(), radii.end());
    const std::size_t q_min = static_cast<std::size_t>(std::min_element(radii.begin(), radii.end()) - radii.begin());
    std::vector<std::size_t> parent(passing.size());
    std::iota(parent.begin(), parent.end(), 0);
    for (std::size_t a = 0; a < passing.size(); ++a)
        for (std::size_t b = a + 1; b < passing.size(); ++b)
            if (distance(c, passing[a], passing[b]) <= 2.0 * r_max) {
                parent[find_root(parent, a)] = find_root(parent, b);
            }
    std::vector<std::size_t> best(passing.size(), passing.size());
    for (std::size_t a = 0; a < passing.size(); ++a) {
        const std::size_t root = find_root(parent, a);
        const std::size_t cur = best[root];
        if (cur == passing.size() || env[q_min][passing[a]] > env[q_min][passing[cur]]) best[root] = a;
    }
    std::vector<BlowupPoint> out;
    for (std::size_t a = 0; a < passing.size(); ++a) {
        if (find_root(parent, a) != a) continue;
        const std::size_t k = passing[best[a]];
        BlowupPoint p;
        p.node = k;
        p.x = c.x(c.col(k));
        p.y = c.y(c.row(k));
        p.radii = radii;
        for (std::size_t q = 0; q < nr; ++q) p.liminf_energy.push_back(env[q][k]);
        out.push_back(std::move(p));
    }
    std::sort(out.begin(), out.end(), [](const BlowupPoint& a, const BlowupPoint& b) { return a.node < b.node; });
    return out;
}

BubbleTrack extract_bubble(const FieldSequence& seq, const BlowupPoint& point, double epsilon,
                           const ExtractionOptions& opt, const std::vector<std::vector<Exclusion>>& exclusions) {
    require_sequence(seq);
    if (!(epsilon > 0.0)) throw ConfigError("detection threshold must be positive");
    if (!exclusions.empty() && exclusions.size() != seq.size()) {
        throw ConfigError("need one exclusion list per sequence member");
    }
    const auto& c = seq.front().chart();
    const double target = 0.5 * epsilon;
    const double tol = epsilon / 100.0;
    const GridChart rescaled_chart = GridChart::disk(opt.rescaled_nodes, opt.big_radius);

    BubbleTrack track;
    for (std::size_t m = 0; m < seq.size(); ++m) {
        static const std::vector<Exclusion> none;
        const auto& ex = exclusions.empty() ? none : exclusions[m];
        auto density = energy_density_weighted(seq[m]);
        std::vector<std::size_t> candidates;
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (!c.has_data(k)) continue;
            if (!ex.empty() && excluded(c, k, ex)) {
                density[k] = 0.0;
                continue;
            }
            double dx, dy;
            displacement(c, k, point.x, point.y, dx, dy);
            if (dx * dx + dy * dy <= opt.delta * opt.delta) candidates.push_back(k);
        }
        if (candidates.empty()) throw ExtractionError("no admissible centres near the blow-up point");

        auto best_at = [&](double rho, std::size_t& arg) {
            std::vector<double> vals(candidates.size());
            parallel_for(candidates.size(), [&](std::size_t b, std::size_t e) {
                for (std::size_t q = b; q < e; ++q) vals[q] = smooth_ball(c, density, candidates[q], rho);
            });
            double best = -1.0;
            for (std::size_t q = 0; q < vals.size(); ++q)
                if (vals[q] > best) {
                    best = vals[q];
                    arg = candidates[q];
                }
            return best;
        };

        std::size_t arg = candidates.front();
        double lo = 0.0;
        double hi = opt.delta;
        if (best_at(lo, arg) >= target) throw ExtractionError("energy concentrates below the grid scale");
        double f_hi = best_at(hi, arg);
        if (f_hi < target) throw ExtractionError("local energy never reaches epsilon / 2");
        double rho = hi;
        double f = f_hi;
        for (int it = 0; it < 200 && std::abs(f - target) > tol; ++it) {
            rho = 0.5 * (lo + hi);
            f = best_at(rho, arg);
            (f < target ? lo : hi) = rho;
        }
        if (std::abs(f - target) > tol) throw ExtractionError("bisection for the bubble scale did not close");

        const double x = c.x(c.col(arg));
        const double y = c.y(c.row(arg));
        track.lambda.push_back(rho);
        track.cx.push_back(x);
        track.cy.push_back(y);
        try {
            track.rescaled.push_back(rescale(seq[m], x, y, rho, rescaled_chart));
        } catch (const DomainError& e) {
            throw ExtractionError(std::string("rescaled bubble leaves the chart: ") + e.what());
        }
    }
    const auto& last = seq.back();
    const auto ball = ball_nodes(c, track.cx.back(), track.cy.back(), track.lambda.back() * opt.big_radius);
    track.energy = energy(last, ball);
    return track;
}

std::vector<BubbleTrack> extract_bubbles(const FieldSequence& seq, const BlowupPoint& point, double epsilon,
                                         const ExtractionOptions& opt) {
    std::vector<BubbleTrack> out;
    std::vector<std::vector<Exclusion>> ex(seq.size());
    for (int b = 0; b < opt.max_bubbles; ++b) {
        BubbleTrack t;
        try {
            t = extract_bubble(seq, point, epsilon, opt, ex);
        } catch (const ExtractionError&) {
            break;
        }
        for (std::size_t m = 0; m < seq.size(); ++m) ex[m].push_back({t.cx[m], t.cy[m], t.lambda[m] * opt.big_radius});
        out.push_back(std::move(t));
    }
    return out;
}

double neck_energy(const SpinorField& psi, double cx, double cy, double delta, double big_radius, double lambda) {
    const auto& c = psi.chart();
    const double inner = lambda * big_radius;
    if (!(lambda > 0.0 && big_radius > 0.0 && inner < delta)) throw PreconditionError("neck annulus needs 0 < lambda R < delta");
    if (c.domain() == DomainKind::Disk && std::hypot(cx, cy) + delta > c.radius() * (1 + 1e-12)) {
        throw PreconditionError("neck annulus leaves the disk");
    }
    if (c.domain() == DomainKind::Torus && 2.0 * delta > std::min(c.period_x(), c.period_y())) {
        throw PreconditionError("neck annulus wraps around the torus");
    }
    if (c.domain() == DomainKind::SphereChart) throw DomainError("neck energy needs a planar chart");
    return energy(psi, annulus_nodes(c, cx, cy, inner, delta));
}

DecayProfile decay_profile(const SpinorField& psi, double cx, double cy, const std::vector<double>& radii) {
    const auto& c = psi.chart();
    if (c.domain() == DomainKind::SphereChart) throw DomainError("decay profile needs a planar chart");
    if (radii.size() < 2) throw PreconditionError("decay profile needs at least two radii");
    for (std::size_t q = 1; q < radii.size(); ++q)
        if (!(radii[q] < radii[q - 1])) throw PreconditionError("radii must decrease");
    if (radii.back() < 4.0 * c.spacing()) throw PreconditionError("smallest radius must be at least four cells");

    const auto g = gradient_norm(psi);
    const auto d = energy_density_weighted(psi);
    std::vector<double> dist(c.size(), -1.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (!c.has_data(k)) continue;
        double dx, dy;
        displacement(c, k, cx, cy, dx, dy);
        dist[k] = std::hypot(dx, dy);
    }
    DecayProfile out;
    out.radii = radii;
    for (double r : radii) {
        std::vector<double> terms;
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (!(dist[k] > 0.0 && dist[k] <= r)) continue;
            terms.push_back(d[k] + c.weight(k) * std::pow(g[k], 4.0 / 3.0));
        }
        const double F = pairwise_sum(terms);
        if (!(F > 0.0)) throw DegenerateFitError("F(r) vanishes; no decay exponent");
        out.values.push_back(F);
    }
    const double n = static_cast<double>(radii.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t q = 0; q < radii.size(); ++q) {
        const double lx = std::log(radii[q]);
        const double ly = std::log(out.values[q]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    out.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.flagged = out.exponent < 0.1;
    return out;
}

std::vector<double> cylinder_segment_energies(const SpinorField& psi, double cx, double cy, int t1, int t2,
                                              int nodes_per_unit, int ntheta) {
    if (t2 <= t1) throw ConfigError("cylinder segment needs t2 > t1");
    const SpinorField cyl = to_cylinder(psi, cx, cy, t1, t2, (t2 - t1) * nodes_per_unit, ntheta);
    const auto& c = cyl.chart();
    std::vector<double> out;
    for (int s = 0; s < t2 - t1; ++s) {
        NodeSet seg;
        for (std::size_t k = 0; k < c.size(); ++k) {
            const int i = c.col(k);
            if (i >= s * nodes_per_unit && i < (s + 1) * nodes_per_unit) seg.push_back(k);
        }
        out.push_back(energy(cyl, seg));
    }
    return out;
}

double EnergyLedger::recompute_defect() const {
    double d = total_limit - background;
    for (const auto& b : bubbles) d -= b.energy;
    return d;
}

EnergyLedger ledger_assemble(const FieldSequence& seq, const SpinorField* background,
                             const std::vector<BlowupPoint>& points, const std::vector<std::vector<BubbleTrack>>& bubbles,
                             double delta, const ReactionSpec* spec, double guard_threshold) {
    require_sequence(seq);
    if (background && background->chart() != seq.front().chart()) {
        throw ConfigError("background field lives on a different chart");
    }
    if (bubbles.size() != points.size()) throw ConfigError("need one bubble list per blow-up point");
    const auto& c = seq.front().chart();
    EnergyLedger led;
    led.points = points;
    led.total_limit = energy(seq.back());
    for (const auto& f : seq) led.energy_bound = std::max(led.energy_bound, energy(f));
    if (background) {
        led.background = energy(*background);
    } else {
        NodeSet outside;
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (!c.has_data(k)) continue;
            bool near = false;
            for (const auto& p : points) {
                double dx, dy;
                displacement(c, k, p.x, p.y, dx, dy);
                if (dx * dx + dy * dy <= delta * delta) near = true;
            }
            if (!near) outside.push_back(k);
        }
        led.background = energy(seq.back(), outside);
    }
    for (std::size_t q = 0; q < points.size(); ++q)
        for (const auto& t : bubbles[q]) led.bubbles.push_back({q, t.lambda.back(), t.cx.back(), t.cy.back(), t.energy});
    led.defect = led.recompute_defect();
    if (spec) {
        led.guard = spec->h0() * std::sqrt(led.energy_bound);
        led.guard_exceeded = led.guard >= guard_threshold;
    }
    return led;
}

}  // namespace spinflow

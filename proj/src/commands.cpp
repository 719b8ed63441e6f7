#include "spinflow/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "spinflow/blowup.hpp"
#include "spinflow/conformal.hpp"
#include "spinflow/dirac.hpp"
#include "spinflow/estimate_ratio.hpp"
#include "spinflow/field_file.hpp"
#include "spinflow/green.hpp"
#include "spinflow/obj_writer.hpp"
#include "spinflow/oracles.hpp"
#include "spinflow/quadrature.hpp"
#include "spinflow/random.hpp"
#include "spinflow/surface.hpp"

namespace spinflow {

using Json = nlohmann::json;

namespace {

std::filesystem::path prepare_out(const RunConfig& cfg) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + cfg.out_dir + ": " + ec.message());
    return cfg.out_dir;
}

CommandOutput finish(const std::filesystem::path& out, const std::string& name, const Json& report, int code) {
    CommandOutput res;
    res.exit_code = code;
    res.report = report.dump(2) + "\n";
    res.report_path = (out / (name + "_report.json")).string();
    std::ofstream f(res.report_path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + res.report_path);
    f << res.report;
    if (!f) throw IoError("cannot write " + res.report_path);
    return res;
}

Json chart_json(const GridChart& c) {
    Json j;
    j["domain"] = to_string(c.domain());
    j["nx"] = c.nx();
    j["ny"] = c.ny();
    switch (c.domain()) {
        case DomainKind::Torus:
            j["period_x"] = c.period_x();
            j["period_y"] = c.period_y();
            j["origin_x"] = c.origin_x();
            j["origin_y"] = c.origin_y();
            j["spin"] = to_string(*c.spin_structure());
            break;
        case DomainKind::Disk:
            j["radius"] = c.radius();
            break;
        case DomainKind::SphereChart:
            break;
    }
    return j;
}

Json reaction_json(const ReactionSpec& spec) {
    Json j;
    j["kind"] = to_string(spec.kind());
    j["n"] = spec.n();
    j["h0"] = spec.h0();
    j["h1"] = spec.h1();
    if (spec.kind() == ReactionKind::ChiralUV) j["preset"] = to_string(spec.preset());
    return j;
}

Json guard_json(double margin, double threshold) {
    return Json{{"margin", margin}, {"threshold", threshold}, {"exceeded", margin >= threshold}};
}

SpinorField make_seed(const RunConfig& cfg, const GridChart& chart, int n) {
    if (cfg.seed_kind == "file") {
        auto seed = read_field(cfg.seed_field);
        if (seed.chart() != chart || seed.n() != n) throw ConfigError("seed field does not match the configured chart");
        return seed;
    }
    SpinorField seed(chart, n, "seed");
    if (cfg.seed_kind == "random") {
        SplitMix64 rng(cfg.rng_seed);
        for (auto& v : seed.values()) {
            const double re = rng.symmetric();
            v = cfg.seed_amplitude * Complex(re, rng.symmetric());
        }
        seed.clear_outside();
    }
    return seed;
}

double relative_l2(const SpinorField& a, const SpinorField& b) {
    auto d = a;
    d -= b;
    return lp_norm(d, 2) / lp_norm(b, 2);
}

Json factors(const std::vector<double>& errors) {
    Json f = Json::array();
    for (std::size_t k = 1; k < errors.size(); ++k) f.push_back(errors[k - 1] / errors[k]);
    return f;
}

bool factors_in(const std::vector<double>& errors, double lo, double hi) {
    for (std::size_t k = 1; k < errors.size(); ++k) {
        const double f = errors[k - 1] / errors[k];
        if (!(f >= lo && f <= hi)) return false;
    }
    return true;
}

}  // namespace

CommandOutput run_solve(const RunConfig& cfg) {
    const auto chart = cfg.chart();
    const auto spec = cfg.reaction();
    const int n = spec.n();
    const auto seed = make_seed(cfg, chart, n);

    std::optional<SpinorField> psi_star;
    std::optional<SpinorField> forcing;
    if (cfg.forcing == "manufactured") {
        psi_star = oracles::manufactured_profile(chart, n, cfg.amplitude);
        forcing = manufactured_forcing(spec, *psi_star);
    }
    const auto out = prepare_out(cfg);

    Json report;
    report["command"] = "solve";
    report["chart"] = chart_json(chart);
    report["reaction"] = reaction_json(spec);
    report["rng_seed"] = cfg.rng_seed;
    report["forcing"] = cfg.forcing;
    report["solver"] = {{"damping", cfg.damping}, {"tol", cfg.tol}, {"max_iter", cfg.max_iter}};

    const SpinorField* f = forcing ? &*forcing : nullptr;
    std::optional<PicardResult> picard;
    try {
        picard = picard_solve(spec, seed, f, cfg.picard_options());
    } catch (const ConvergenceError& e) {
        const bool diverged = dynamic_cast<const DivergenceError*>(&e) != nullptr;
        report["status"] = diverged ? "diverged" : "not_converged";
        report["error"] = e.what();
        report["update_history"] = e.history();
        report["guard"] = guard_json(smallness_margin(spec, seed), cfg.guard);
        return finish(out, "solve", report, kExitSolveFailed);
    }

    SpinorField psi = picard->psi;
    const auto& it = picard->report;
    report["picard"] = {{"converged", it.converged},
                        {"iterations", it.iterations},
                        {"updates", it.updates},
                        {"residuals", it.residuals},
                        {"final_residual", it.final_residual}};
    double final_residual = it.final_residual;
    if (cfg.newton && cfg.newton_steps > 0 && chart.domain() == DomainKind::Torus) {
        NewtonOptions no;
        no.tol = cfg.newton_tol;
        no.max_steps = cfg.newton_steps;
        auto nr = newton_refine(spec, psi, f, no);
        report["newton"] = {{"steps", nr.steps},
                            {"residuals", nr.residuals},
                            {"converged", nr.converged},
                            {"stagnated", nr.stagnated},
                            {"last_update", nr.last_update}};
        if (!nr.residuals.empty() && nr.residuals.back() <= final_residual) {
            psi = std::move(nr.psi);
            final_residual = nr.residuals.back();
        }
    } else {
        report["newton"] = nullptr;
    }

    const double margin = smallness_margin(spec, psi);
    report["status"] = "converged";
    report["final_residual"] = final_residual;
    report["energy"] = energy(psi);
    report["guard"] = guard_json(margin, cfg.guard);
    if (psi_star) {
        report["manufactured"] = {{"amplitude", cfg.amplitude},
                                  {"max_error", max_abs_difference(psi, *psi_star)},
                                  {"relative_l2_error", lp_norm(*psi_star, 2) > 0 ? relative_l2(psi, *psi_star) : 0.0}};
    }
    psi.set_tag("solve");
    write_field(psi, (out / "solution.spnf").string());
    report["field_file"] = "solution.spnf";
    return finish(out, "solve", report, kExitOk);
}

CommandOutput run_reconstruct(const RunConfig& cfg) {
    if (cfg.field.empty()) throw ValidationError("reconstruct needs reconstruct.field");
    const auto psi = read_field(cfg.field);
    if (psi.n() != 1) throw ConfigError("reconstruct needs a field with n = 1");
    const auto spec = cfg.reaction();
    const auto out = prepare_out(cfg);

    const auto mesh = integrate_surface(psi, central_node(psi.chart()));
    const auto hm = mean_curvature(mesh);
    const double area = mesh_area(mesh);
    const double e = energy(psi);
    const double mesh_e = mesh_consistent_energy(mesh, psi);

    Json report;
    report["command"] = "reconstruct";
    report["chart"] = chart_json(psi.chart());
    report["loop_residual"] = mesh.loop_residual;
    report["mesh_area"] = area;
    report["energy"] = e;
    report["mesh_energy"] = mesh_e;
    report["area_identity_gap"] = mesh_e > 0 ? std::abs(area - mesh_e) / mesh_e : 0.0;
    report["induced_metric_residual"] = induced_metric_residual(mesh, psi);
    report["mean_curvature"] = {{"max_abs", hm.max_abs},
                                {"mean_abs", hm.mean_abs},
                                {"interior_vertices", hm.interior.size()},
                                {"excluded_vertices", hm.excluded.size()}};
    try {
        report["plane_fit_residual"] = plane_fit_residual(mesh);
    } catch (const DegenerateFitError&) {
        report["plane_fit_residual"] = nullptr;
    }
    report["vertices"] = mesh.vertices.size();
    report["faces"] = mesh.faces.size();
    report["spacing"] = psi.chart().spacing();
    report["guard"] = guard_json(spec.h0() * std::sqrt(e), cfg.guard);
    write_obj(mesh, (out / "surface.obj").string());
    report["obj_file"] = "surface.obj";
    return finish(out, "reconstruct", report, kExitOk);
}

CommandOutput run_blowup(const RunConfig& cfg) {
    if (cfg.sequence.size() < 4) throw ValidationError("blowup.sequence needs at least 4 fields");
    FieldSequence seq;
    for (const auto& p : cfg.sequence) seq.push_back(read_field(p));
    for (const auto& m : seq) {
        if (m.chart() != seq.front().chart() || m.n() != seq.front().n()) {
            throw ConfigError("sequence members live on different charts");
        }
    }
    std::optional<SpinorField> background;
    if (!cfg.background.empty()) {
        background = read_field(cfg.background);
        if (background->chart() != seq.front().chart() || background->n() != seq.front().n()) {
            throw ConfigError("background field does not match the sequence chart");
        }
    }
    const auto spec = cfg.reaction();
    const auto out = prepare_out(cfg);

    ExtractionOptions eo;
    eo.delta = cfg.delta;
    eo.big_radius = cfg.big_radius;
    eo.rescaled_nodes = cfg.rescaled_nodes;
    eo.max_bubbles = cfg.max_bubbles;

    const auto points = blowup_set(seq, cfg.epsilon, cfg.radii);
    std::vector<std::vector<BubbleTrack>> tracks;
    for (const auto& p : points) tracks.push_back(extract_bubbles(seq, p, cfg.epsilon, eo));
    const auto ledger = ledger_assemble(seq, background ? &*background : nullptr, points, tracks, cfg.delta, &spec, cfg.guard);

    Json jp = Json::array();
    for (const auto& p : points) {
        jp.push_back({{"x", p.x}, {"y", p.y}, {"node", p.node}, {"radii", p.radii}, {"liminf_energy", p.liminf_energy}});
    }
    Json jb = Json::array();
    for (std::size_t q = 0; q < tracks.size(); ++q) {
        for (const auto& t : tracks[q]) {
            Json b{{"point", q},
                   {"lambda", t.lambda},
                   {"x", t.cx},
                   {"y", t.cy},
                   {"energy", t.energy}};
            try {
                b["neck_energy"] = neck_energy(seq.back(), t.cx.back(), t.cy.back(), cfg.delta, cfg.big_radius, t.lambda.back());
            } catch (const PreconditionError&) {
                b["neck_energy"] = nullptr;
            }
            jb.push_back(std::move(b));
        }
    }

    Json report;
    report["command"] = "blowup";
    report["chart"] = chart_json(seq.front().chart());
    report["members"] = seq.size();
    report["epsilon"] = cfg.epsilon;
    report["points"] = jp;
    report["bubbles"] = jb;
    report["ledger"] = {{"total_limit", ledger.total_limit},
                        {"background", ledger.background},
                        {"background_source", background ? "field" : "outside_balls"},
                        {"defect", ledger.defect},
                        {"relative_defect", ledger.total_limit > 0 ? ledger.defect / ledger.total_limit : 0.0},
                        {"energy_bound", ledger.energy_bound}};
    report["guard"] = guard_json(ledger.guard, cfg.guard);
    report["reaction"] = reaction_json(spec);
    return finish(out, "blowup", report, kExitOk);
}

CommandOutput run_verify(const RunConfig& cfg) {
    const auto out = prepare_out(cfg);
    Json checks;
    bool all = true;
    auto record = [&](const std::string& name, Json j, bool pass) {
        j["pass"] = pass;
        checks[name] = std::move(j);
        all = all && pass;
    };

    {
        const double alg = oracles::algebra_error();
        const auto chart = GridChart::torus(32, 32, 1, 1, SpinStructure::AntiAnti);
        const double null_err = oracles::null_identity_error(oracles::random_field(chart, 1, cfg.rng_seed));
        record("algebra", {{"clifford_error", alg}, {"null_identity_error", null_err}, {"tolerance", 1e-12}},
               alg <= 1e-12 && null_err <= 1e-12);
    }
    {
        const Stencil st = cfg.break_stencil ? Stencil::BrokenForwardForTesting : Stencil::Central;
        const double spectral = weitzenboeck_residual(
            oracles::weitzenboeck_field(GridChart::torus(64, 64, 1, 1, SpinStructure::AntiAnti)), DiracMode::Spectral);
        std::vector<double> fd;
        for (int n : {64, 128, 256}) {
            const auto c = GridChart::torus(n, n, 1, 1, SpinStructure::AntiAnti);
            fd.push_back(weitzenboeck_residual(oracles::weitzenboeck_field(c), DiracMode::FiniteDifference, st));
        }
        record("weitzenboeck",
               {{"spectral_residual", spectral},
                {"spectral_tolerance", 1e-10},
                {"fd_residuals", fd},
                {"fd_factors", factors(fd)},
                {"factor_band", {3.0, 5.0}},
                {"broken_stencil", cfg.break_stencil}},
               spectral <= 1e-10 && factors_in(fd, 3.0, 5.0));
    }
    {
        std::vector<double> errs;
        double direct_gap = 0.0;
        for (int n : {64, 128, 256}) {
            const auto c = GridChart::torus(n, n, 2, 2, SpinStructure::PeriodicPeriodic, -1, -1);
            const auto [psi, f] = oracles::green_pair(c);
            const auto w = green_convolve(f);
            errs.push_back(relative_l2(w, psi));
            if (n == 64) {
                const auto wd = green_convolve(f, ConvolutionMethod::Direct);
                direct_gap = relative_l2(w, wd);
            }
        }
        record("green_round_trip",
               {{"relative_errors", errs},
                {"factors", factors(errs)},
                {"factor_band", {3.0, 5.0}},
                {"direct_vs_accelerated", direct_gap},
                {"direct_tolerance", 1e-10}},
               factors_in(errs, 3.0, 5.0) && direct_gap <= 1e-10);
    }
    {
        const auto rep = estimate_ratio(cfg.ratio_p, cfg.ratio_trials, cfg.ratio_levels, cfg.rng_seed);
        record("estimate_ratio",
               {{"p", rep.p},
                {"trials", rep.trials},
                {"skipped", rep.skipped},
                {"levels", rep.levels},
                {"ratios", rep.ratios},
                {"max_drift", rep.max_drift},
                {"drift_tolerance", 0.2}},
               rep.max_drift < 0.2);
    }
    {
        std::vector<double> rescale_err, cylinder_err, sphere_err;
        for (int n : {64, 128}) {
            const auto c = GridChart::torus(n, n, 2, 2, SpinStructure::PeriodicPeriodic, -1, -1);
            const auto psi = oracles::conformal_bump(c);
            const double e = energy(psi);
            rescale_err.push_back(std::abs(energy(rescale(psi, 0.1, 0.0, 0.5, c)) - e) / e);
            const auto ann = oracles::annulus_bump(c);
            const double ea = energy(ann);
            cylinder_err.push_back(std::abs(energy(to_cylinder(ann, 0, 0, 0, 1, n, n)) - ea) / ea);
            const auto big = GridChart::torus(n, n, 8, 8, SpinStructure::PeriodicPeriodic, -4, -4);
            const auto wide = oracles::wide_bump(big);
            const double ew = energy(wide);
            sphere_err.push_back(
                std::abs(energy(sphere_transfer(wide, SphereDirection::ToSphere, GridChart::sphere(n, n))) - ew) / ew);
        }
        auto ok = [](const std::vector<double>& e) { return e.back() <= 5e-4 && e.back() < e.front(); };
        record("conformal",
               {{"levels", {64, 128}},
                {"rescale_errors", rescale_err},
                {"cylinder_errors", cylinder_err},
                {"sphere_errors", sphere_err},
                {"tolerance", 5e-4}},
               ok(rescale_err) && ok(cylinder_err) && ok(sphere_err));
    }

    const auto spec = cfg.reaction();
    const auto probe = oracles::manufactured_profile(GridChart::torus(64, 64, 1, 1, SpinStructure::AntiAnti), spec.n(),
                                                     cfg.amplitude);
    Json report;
    report["command"] = "verify";
    report["rng_seed"] = cfg.rng_seed;
    report["checks"] = checks;
    report["all_pass"] = all;
    report["guard"] = guard_json(smallness_margin(spec, probe), cfg.guard);
    return finish(out, "verify", report, all ? kExitOk : kExitVerifyFailed);
}

int run_command(const std::string& command, const std::string& config_path,
                const std::optional<std::string>& out_dir, const std::optional<std::uint64_t>& seed,
                std::ostream& err) {
    try {
        auto cfg = RunConfig::load(config_path);
        if (out_dir) cfg.out_dir = *out_dir;
        if (seed) cfg.rng_seed = *seed;
        CommandOutput res;
        if (command == "solve") {
            res = run_solve(cfg);
        } else if (command == "reconstruct") {
            res = run_reconstruct(cfg);
        } else if (command == "blowup") {
            res = run_blowup(cfg);
        } else if (command == "verify") {
            res = run_verify(cfg);
        } else {
            err << "spinflow: unknown command '" << command << "'\n";
            return kExitInvalidConfig;
        }
        if (res.exit_code != kExitOk) {
            err << "spinflow " << command << ": failed (exit " << res.exit_code << "), see " << res.report_path << "\n";
        }
        return res.exit_code;
    } catch (const ValidationError& e) {
        err << "spinflow: invalid configuration: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const IoError& e) {
        err << "spinflow: I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const FormatError& e) {
        err << "spinflow: format error: " << e.what() << "\n";
        return kExitFormat;
    } catch (const ConvergenceError& e) {
        err << "spinflow: solve failed: " << e.what() << "\n";
        return kExitSolveFailed;
    } catch (const ConfigError& e) {
        err << "spinflow: configuration mismatch: " << e.what() << "\n";
        return kExitMismatch;
    } catch (const DomainError& e) {
        err << "spinflow: configuration mismatch: " << e.what() << "\n";
        return kExitMismatch;
    } catch (const std::exception& e) {
        err << "spinflow: error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace spinflow

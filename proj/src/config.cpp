#include "spinflow/config.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace spinflow {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(v);
    while (std::getline(in, item, ',')) out.push_back(trim(item));
    if (out.size() == 1 && out[0].empty()) out.clear();
    return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
    T out{};
    const char* end = v.data() + v.size();
    const auto res = std::from_chars(v.data(), end, out);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw ValidationError("invalid numeric value for " + key + ": '" + v + "'");
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(out)) throw ValidationError("non-finite value for " + key);
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ValidationError("invalid boolean for " + key + ": '" + v + "'");
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& v) {
    std::vector<T> out;
    for (const auto& item : split_list(v)) out.push_back(parse_number<T>(key, item));
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value, const std::string& base)>;

std::string resolve(const std::string& base, const std::string& p) {
    if (p.empty()) return p;
    std::filesystem::path path(p);
    if (path.is_absolute()) return p;
    auto s = (std::filesystem::path(base) / path).lexically_normal().string();
    if (s.size() > 1 && s.back() == '/') s.pop_back();
    return s;
}

#define NUM(field)                                                                                   \
    [](RunConfig& c, const std::string& k, const std::string& v, const std::string&) {               \
        c.field = parse_number<decltype(c.field)>(k, v);                                             \
    }
#define STR(field) [](RunConfig& c, const std::string&, const std::string& v, const std::string&) { c.field = v; }
#define PATH(field) \
    [](RunConfig& c, const std::string&, const std::string& v, const std::string& b) { c.field = resolve(b, v); }
#define LIST(field, T)                                                                               \
    [](RunConfig& c, const std::string& k, const std::string& v, const std::string&) {               \
        c.field = parse_list<T>(k, v);                                                               \
    }
#define BOOL(field)                                                                                  \
    [](RunConfig& c, const std::string& k, const std::string& v, const std::string&) {               \
        c.field = parse_bool(k, v);                                                                  \
    }

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"chart.domain", STR(domain)},
        {"chart.nx", NUM(nx)},
        {"chart.ny", NUM(ny)},
        {"chart.period_x", NUM(period_x)},
        {"chart.period_y", NUM(period_y)},
        {"chart.origin_x", NUM(origin_x)},
        {"chart.origin_y", NUM(origin_y)},
        {"chart.radius", NUM(radius)},
        {"chart.spin", STR(spin)},
        {"field.n", NUM(components)},
        {"reaction.kind", STR(reaction_kind)},
        {"reaction.h", NUM(h)},
        {"reaction.kappa", NUM(kappa)},
        {"reaction.tensor", LIST(tensor, double)},
        {"reaction.preset", STR(preset)},
        {"reaction.u", LIST(u_coefficients, double)},
        {"reaction.v", LIST(v_coefficients, double)},
        {"solver.damping", NUM(damping)},
        {"solver.tol", NUM(tol)},
        {"solver.max_iter", NUM(max_iter)},
        {"solver.guard", NUM(guard)},
        {"solver.newton", BOOL(newton)},
        {"solver.newton_tol", NUM(newton_tol)},
        {"solver.newton_steps", NUM(newton_steps)},
        {"solve.forcing", STR(forcing)},
        {"solve.amplitude", NUM(amplitude)},
        {"solve.seed", STR(seed_kind)},
        {"solve.seed_amplitude", NUM(seed_amplitude)},
        {"solve.seed_field", PATH(seed_field)},
        {"analysis.epsilon", NUM(epsilon)},
        {"analysis.radii", LIST(radii, double)},
        {"analysis.delta", NUM(delta)},
        {"analysis.big_radius", NUM(big_radius)},
        {"analysis.rescaled_nodes", NUM(rescaled_nodes)},
        {"analysis.max_bubbles", NUM(max_bubbles)},
        {"blowup.sequence",
         [](RunConfig& c, const std::string&, const std::string& v, const std::string& b) {
             c.sequence.clear();
             for (const auto& p : split_list(v)) c.sequence.push_back(resolve(b, p));
         }},
        {"blowup.background", PATH(background)},
        {"reconstruct.field", PATH(field)},
        {"verify.break_stencil", BOOL(break_stencil)},
        {"verify.ratio_trials", NUM(ratio_trials)},
        {"verify.ratio_levels", LIST(ratio_levels, int)},
        {"verify.ratio_p", NUM(ratio_p)},
        {"output.dir", PATH(out_dir)},
        {"rng.seed", NUM(rng_seed)},
    };
    return table;
}

#undef NUM
#undef STR
#undef PATH
#undef LIST
#undef BOOL

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

bool one_of(const std::string& v, std::initializer_list<const char*> options) {
    for (const char* o : options) {
        if (v == o) return true;
    }
    return false;
}

}  // namespace

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& [k, _] : setters()) keys.push_back(k);
    return keys;
}

RunConfig RunConfig::parse(const std::string& text, const std::string& base_dir) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) throw ValidationError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (!seen.insert(key).second) throw ValidationError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        it->second(cfg, key, value, base_dir);
    }
    if (!seen.count("output.dir")) cfg.out_dir = resolve(base_dir, cfg.out_dir);
    cfg.validate();
    return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const auto dir = std::filesystem::path(path).parent_path();
    return parse(ss.str(), dir.empty() ? "." : dir.string());
}

void RunConfig::validate() const {
    require(one_of(domain, {"torus", "disk", "sphere"}), "chart.domain must be torus, disk or sphere");
    require(nx >= 8 && nx <= 4096, "chart.nx must lie in [8, 4096]");
    require(ny >= 8 && ny <= 4096, "chart.ny must lie in [8, 4096]");
    require(period_x > 0 && period_y > 0, "chart periods must be positive");
    require(radius > 0, "chart.radius must be positive");
    require(one_of(spin, {"PP", "PA", "AP", "AA"}), "chart.spin must be PP, PA, AP or AA");
    require(components >= 1 && components <= 8, "field.n must lie in [1, 8]");

    require(one_of(reaction_kind, {"scalar_h", "general_cubic", "curvature_cubic", "chiral_uv"}),
            "reaction.kind must be scalar_h, general_cubic, curvature_cubic or chiral_uv");
    if (reaction_kind == "scalar_h" || reaction_kind == "chiral_uv") {
        require(components == 1, "reaction.kind " + reaction_kind + " needs field.n = 1");
    }
    if (reaction_kind == "general_cubic") {
        const std::size_t n = static_cast<std::size_t>(components);
        require(tensor.size() == n * n * n * n, "reaction.tensor needs field.n^4 entries");
    }
    require(one_of(preset, {"SU2", "Nil", "SL2", "Custom"}), "reaction.preset must be SU2, Nil, SL2 or Custom");
    if (reaction_kind == "chiral_uv" && preset == "Custom") {
        require(u_coefficients.size() == 8 && v_coefficients.size() == 8,
                "reaction.u and reaction.v need 8 values (re, im of h_coef, c0, c1, c2)");
    }

    require(damping > 0 && damping <= 1, "solver.damping must lie in (0, 1]");
    require(tol > 0 && tol < 1, "solver.tol must lie in (0, 1)");
    require(max_iter >= 1 && max_iter <= 10000000, "solver.max_iter must lie in [1, 1e7]");
    require(guard > 0, "solver.guard must be positive");
    require(newton_tol > 0, "solver.newton_tol must be positive");
    require(newton_steps >= 0 && newton_steps <= 100, "solver.newton_steps must lie in [0, 100]");

    require(one_of(forcing, {"none", "manufactured"}), "solve.forcing must be none or manufactured");
    if (forcing == "manufactured") {
        require(domain == "torus" && spin != "PP", "manufactured forcing needs a torus with a non-PP spin structure");
    }
    require(amplitude >= 0, "solve.amplitude must be non-negative");
    require(one_of(seed_kind, {"zero", "random", "file"}), "solve.seed must be zero, random or file");
    require(seed_kind != "file" || !seed_field.empty(), "solve.seed = file needs solve.seed_field");
    require(seed_amplitude >= 0, "solve.seed_amplitude must be non-negative");

    require(epsilon > 0, "analysis.epsilon must be positive");
    require(!radii.empty(), "analysis.radii must not be empty");
    for (double r : radii) require(r > 0, "analysis.radii must be positive");
    require(delta > 0, "analysis.delta must be positive");
    require(big_radius > 0, "analysis.big_radius must be positive");
    require(rescaled_nodes >= 9 && rescaled_nodes <= 1025, "analysis.rescaled_nodes must lie in [9, 1025]");
    require(max_bubbles >= 1 && max_bubbles <= 64, "analysis.max_bubbles must lie in [1, 64]");

    require(ratio_trials >= 1 && ratio_trials <= 1000, "verify.ratio_trials must lie in [1, 1000]");
    require(ratio_levels.size() >= 2, "verify.ratio_levels needs at least two levels");
    for (int l : ratio_levels) require(l >= 16 && l <= 1024, "verify.ratio_levels must lie in [16, 1024]");
    require((ratio_p > 1 && ratio_p < 2) || (ratio_p > 2 && ratio_p <= 4), "verify.ratio_p must lie in (1,2) or (2,4]");
}

GridChart RunConfig::chart() const {
    if (domain == "disk") return GridChart::disk(nx, radius);
    if (domain == "sphere") return GridChart::sphere(nx, ny);
    return GridChart::torus(nx, ny, period_x, period_y, spin_structure_from_string(spin), origin_x, origin_y);
}

ReactionSpec RunConfig::reaction() const {
    const auto h_data = ScalarData::constant(h);
    if (reaction_kind == "general_cubic") return ReactionSpec::general_cubic(components, tensor);
    if (reaction_kind == "curvature_cubic") {
        return ReactionSpec::curvature_cubic(components, ReactionSpec::constant_curvature_tensor(components, kappa));
    }
    if (reaction_kind == "chiral_uv") {
        const auto p = chiral_preset_from_string(preset);
        if (p != ChiralPreset::Custom) return ReactionSpec::chiral_uv(p, h_data);
        auto coeffs = [](const std::vector<double>& a) {
            return ChiralCoefficients{{a[0], a[1]}, {a[2], a[3]}, {a[4], a[5]}, {a[6], a[7]}};
        };
        return ReactionSpec::chiral_custom(coeffs(u_coefficients), coeffs(v_coefficients), h_data);
    }
    return ReactionSpec::scalar_h(h_data);
}

PicardOptions RunConfig::picard_options() const {
    PicardOptions o;
    o.damping = damping;
    o.tol = tol;
    o.max_iter = max_iter;
    o.guard = guard;
    return o;
}

}  // namespace spinflow

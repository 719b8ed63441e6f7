#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spinflow/reaction.hpp"
#include "spinflow/solver.hpp"

namespace spinflow {

/// Malformed configuration text, unknown keys or out-of-range values.
class ValidationError : public Error {
public:
    using Error::Error;
};

/**
 * Run configuration. Text format: one `section.key = value` per line,
 * `#` starts a comment, blank lines are ignored, each key at most once.
 * Lists are comma separated. Relative paths resolve against the directory
 * of the config file. See README for the key table and ranges.
 */
struct RunConfig {
    // chart.*
    std::string domain = "torus";
    int nx = 64;
    int ny = 64;
    double period_x = 1.0;
    double period_y = 1.0;
    double origin_x = 0.0;
    double origin_y = 0.0;
    double radius = 1.0;
    std::string spin = "AA";
    // field.*
    int components = 1;
    // reaction.*
    std::string reaction_kind = "scalar_h";
    double h = 1.0;
    double kappa = 1.0;
    std::vector<double> tensor;
    std::string preset = "SU2";
    std::vector<double> u_coefficients;
    std::vector<double> v_coefficients;
    // solver.*
    double damping = 0.5;
    double tol = 1e-8;
    int max_iter = 5000;
    double guard = 0.5;
    bool newton = true;
    double newton_tol = 1e-10;
    int newton_steps = 8;
    // solve.*
    std::string forcing = "none";
    double amplitude = 0.5;
    std::string seed_kind = "zero";
    double seed_amplitude = 0.1;
    std::string seed_field;
    // analysis.*
    double epsilon = 0.01;
    std::vector<double> radii{0.2, 0.1, 0.05};
    double delta = 0.2;
    double big_radius = 5.0;
    int rescaled_nodes = 65;
    int max_bubbles = 8;
    // blowup.*
    std::vector<std::string> sequence;
    std::string background;
    // reconstruct.*
    std::string field;
    // verify.*
    bool break_stencil = false;
    int ratio_trials = 8;
    std::vector<int> ratio_levels{64, 128};
    double ratio_p = 4.0 / 3.0;
    // output.* / rng.*
    std::string out_dir = ".";
    std::uint64_t rng_seed = 0;

    /// Parses text; `base_dir` anchors relative paths. Throws ValidationError.
    static RunConfig parse(const std::string& text, const std::string& base_dir = ".");
    /// Throws IoError when unreadable, ValidationError when invalid.
    static RunConfig load(const std::string& path);

    /// Range and consistency checks; throws ValidationError.
    void validate() const;

    GridChart chart() const;
    ReactionSpec reaction() const;
    PicardOptions picard_options() const;
};

/// Every accepted key, sorted.
std::vector<std::string> config_keys();

}  // namespace spinflow

// Writes the field files used by the CLI tests into the given directory.
#include <cstdio>
#include <filesystem>
#include <string>

#include "spinflow/field_file.hpp"
#include "spinflow/oracles.hpp"

using namespace spinflow;

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: %s <dir>\n", argv[0]);
        return 2;
    }
    const std::filesystem::path dir = argv[1];
    std::filesystem::create_directories(dir);
    auto put = [&](const SpinorField& f, const std::string& name) { write_field(f, (dir / name).string()); };

    put(oracles::plane_field(GridChart::torus(64, 64, 1, 1)), "plane.spnf");
    put(oracles::enneper_field(GridChart::disk(129, 1.0)), "enneper.spnf");
    put(oracles::random_field(GridChart::torus(16, 16, 1, 1), 2, 1), "two_component.spnf");

    const auto planted = oracles::planted_blowup(256);
    for (std::size_t m = 0; m < planted.members.size(); ++m) put(planted.members[m], "planted_" + std::to_string(m) + ".spnf");
    put(planted.background, "planted_background.spnf");

    const auto patch = GridChart::torus(128, 128, 2, 2, SpinStructure::PeriodicPeriodic, -1, -1);
    const auto smooth = oracles::smooth_field(patch);
    for (int m = 0; m < 4; ++m) {
        auto f = smooth;
        f *= 1.0 + 0.01 * (3 - m);
        put(f, "smooth_" + std::to_string(m) + ".spnf");
    }
    put(smooth, "smooth_limit.spnf");
    put(oracles::smooth_field(GridChart::torus(64, 64, 2, 2, SpinStructure::PeriodicPeriodic, -1, -1)), "smooth_coarse.spnf");

    auto bytes = read_bytes((dir / "plane.spnf").string());
    bytes[0] = 'X';
    write_bytes((dir / "corrupt.spnf").string(), bytes);
    return 0;
}

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "spinflow/blowup.hpp"
#include "spinflow/commands.hpp"
#include "spinflow/conformal.hpp"
#include "spinflow/dirac.hpp"
#include "spinflow/disk_solve.hpp"
#include "spinflow/estimate_ratio.hpp"
#include "spinflow/field_file.hpp"
#include "spinflow/green.hpp"
#include "spinflow/obj_writer.hpp"
#include "spinflow/oracles.hpp"
#include "spinflow/quadrature.hpp"
#include "spinflow/solver.hpp"
#include "spinflow/surface.hpp"

namespace py = pybind11;
using namespace spinflow;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

// Field values as an array of shape (ny, nx, n, 2), copied.
ComplexArray field_values(const SpinorField& f) {
    const auto& c = f.chart();
    ComplexArray a({static_cast<py::ssize_t>(c.ny()), static_cast<py::ssize_t>(c.nx()),
                    static_cast<py::ssize_t>(f.n()), py::ssize_t{2}});
    std::copy(f.values().begin(), f.values().end(), a.mutable_data());
    return a;
}

void set_field_values(SpinorField& f, const ComplexArray& a) {
    if (static_cast<std::size_t>(a.size()) != f.values().size()) {
        throw ConfigError("array size does not match the field (expected ny * nx * n * 2 values)");
    }
    std::copy(a.data(), a.data() + a.size(), f.values().begin());
    f.clear_outside();
}

DiracMode mode_from(const std::string& s) {
    if (s == "fd" || s == "finite_difference") return DiracMode::FiniteDifference;
    if (s == "spectral") return DiracMode::Spectral;
    throw ConfigError("mode must be 'fd' or 'spectral'");
}

py::dict report_dict(const IterationReport& r) {
    py::dict d;
    d["converged"] = r.converged;
    d["iterations"] = r.iterations;
    d["updates"] = r.updates;
    d["residuals"] = r.residuals;
    d["final_residual"] = r.final_residual;
    d["smallness_margin"] = r.smallness_margin;
    d["guard_exceeded"] = r.guard_exceeded;
    return d;
}

py::dict mesh_dict(const SurfaceMesh& m) {
    py::array_t<double> v({static_cast<py::ssize_t>(m.vertices.size()), py::ssize_t{3}});
    auto vm = v.mutable_unchecked<2>();
    for (std::size_t k = 0; k < m.vertices.size(); ++k) {
        for (int q = 0; q < 3; ++q) vm(static_cast<py::ssize_t>(k), q) = m.vertices[k][static_cast<std::size_t>(q)];
    }
    py::array_t<std::uint32_t> f({static_cast<py::ssize_t>(m.faces.size()), py::ssize_t{3}});
    auto fm = f.mutable_unchecked<2>();
    for (std::size_t k = 0; k < m.faces.size(); ++k) {
        for (int q = 0; q < 3; ++q) fm(static_cast<py::ssize_t>(k), q) = m.faces[k][static_cast<std::size_t>(q)];
    }
    py::dict d;
    d["vertices"] = v;
    d["faces"] = f;
    d["loop_residual"] = m.loop_residual;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "spinflow core bindings";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
    auto conv = py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
    py::register_exception<DivergenceError>(m, "DivergenceError", conv.ptr());
    py::register_exception<ExtractionError>(m, "ExtractionError", base.ptr());
    py::register_exception<DecayError>(m, "DecayError", base.ptr());
    py::register_exception<DegenerateFitError>(m, "DegenerateFitError", base.ptr());
    py::register_exception<FormatError>(m, "FormatError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());

    py::class_<GridChart>(m, "GridChart")
        .def_static(
            "torus",
            [](int nx, int ny, double px, double py_, const std::string& spin, double ox, double oy) {
                return GridChart::torus(nx, ny, px, py_, spin_structure_from_string(spin), ox, oy);
            },
            py::arg("nx"), py::arg("ny"), py::arg("period_x") = 1.0, py::arg("period_y") = 1.0, py::arg("spin") = "PP",
            py::arg("origin_x") = 0.0, py::arg("origin_y") = 0.0)
        .def_static("disk", &GridChart::disk, py::arg("n"), py::arg("radius") = 1.0)
        .def_static("sphere", &GridChart::sphere, py::arg("n_phi"), py::arg("n_theta"))
        .def_property_readonly("domain", [](const GridChart& c) { return to_string(c.domain()); })
        .def_property_readonly("spin", [](const GridChart& c) -> py::object {
            if (!c.spin_structure()) return py::none();
            return py::str(to_string(*c.spin_structure()));
        })
        .def_property_readonly("nx", &GridChart::nx)
        .def_property_readonly("ny", &GridChart::ny)
        .def_property_readonly("hx", &GridChart::hx)
        .def_property_readonly("hy", &GridChart::hy)
        .def_property_readonly("radius", &GridChart::radius)
        .def("x", &GridChart::x)
        .def("y", &GridChart::y)
        .def("__eq__", [](const GridChart& a, const GridChart& b) { return a == b; })
        .def("__repr__", [](const GridChart& c) {
            std::ostringstream s;
            s << "GridChart(" << to_string(c.domain()) << ", " << c.nx() << "x" << c.ny() << ")";
            return s.str();
        });

    py::class_<SpinorField>(m, "SpinorField")
        .def(py::init<GridChart, int, std::string>(), py::arg("chart"), py::arg("n") = 1, py::arg("tag") = "")
        .def_static(
            "from_array",
            [](const GridChart& c, const ComplexArray& a, const std::string& tag) {
                if (a.ndim() != 4 || a.shape(3) != 2) throw ConfigError("expected an array of shape (ny, nx, n, 2)");
                SpinorField f(c, static_cast<int>(a.shape(2)), tag);
                set_field_values(f, a);
                return f;
            },
            py::arg("chart"), py::arg("values"), py::arg("tag") = "")
        .def_property_readonly("chart", &SpinorField::chart)
        .def_property_readonly("n", &SpinorField::n)
        .def_property("tag", &SpinorField::tag, &SpinorField::set_tag)
        .def_property("values", &field_values, &set_field_values)
        .def("copy", [](const SpinorField& f) { return SpinorField(f); });

    m.def("energy", py::overload_cast<const SpinorField&>(&energy));
    m.def("lp_norm", py::overload_cast<const SpinorField&, double>(&lp_norm), py::arg("psi"), py::arg("p"));
    m.def("pointwise_norm", &pointwise_norm);

    m.def("dirac_apply", [](const SpinorField& psi, const std::string& mode) { return dirac_apply(psi, mode_from(mode)); },
          py::arg("psi"), py::arg("mode") = "fd");
    m.def("laplace_apply", [](const SpinorField& psi, const std::string& mode) { return laplace_apply(psi, mode_from(mode)); },
          py::arg("psi"), py::arg("mode") = "fd");
    m.def(
        "weitzenboeck_residual",
        [](const SpinorField& psi, const std::string& mode, bool broken) {
            return weitzenboeck_residual(psi, mode_from(mode), broken ? Stencil::BrokenForwardForTesting : Stencil::Central);
        },
        py::arg("psi"), py::arg("mode") = "fd", py::arg("broken_stencil") = false);
    m.def("dirac_inverse_spectral", &dirac_inverse_spectral);
    m.def(
        "green_convolve",
        [](const SpinorField& f, bool direct) {
            return green_convolve(f, direct ? ConvolutionMethod::Direct : ConvolutionMethod::Accelerated);
        },
        py::arg("f"), py::arg("direct") = false);
    m.def(
        "disk_solve",
        [](const SpinorField& f, const SpinorField& trace, double tol) {
            DiskSolveOptions o;
            o.tol = tol;
            auto r = disk_solve(f, trace, o);
            py::dict d;
            d["residual"] = r.residual;
            d["system_residual"] = r.system_residual;
            d["iterations"] = r.iterations;
            return py::make_tuple(std::move(r.psi), d);
        },
        py::arg("f"), py::arg("trace"), py::arg("tol") = 1e-10);
    m.def(
        "estimate_ratio",
        [](double p, int trials, const std::vector<int>& levels, std::uint64_t seed) {
            const auto r = estimate_ratio(p, trials, levels, seed);
            py::dict d;
            d["p"] = r.p;
            d["trials"] = r.trials;
            d["skipped"] = r.skipped;
            d["levels"] = r.levels;
            d["ratios"] = r.ratios;
            d["max_drift"] = r.max_drift;
            return d;
        },
        py::arg("p"), py::arg("trials"), py::arg("levels"), py::arg("seed") = 0);

    py::class_<ReactionSpec>(m, "ReactionSpec")
        .def_static("scalar_h", [](double h) { return ReactionSpec::scalar_h(ScalarData::constant(h)); }, py::arg("h") = 1.0)
        .def_static("general_cubic", &ReactionSpec::general_cubic, py::arg("n"), py::arg("tensor"))
        .def_static(
            "curvature_cubic",
            [](int n, double kappa) {
                return ReactionSpec::curvature_cubic(n, ReactionSpec::constant_curvature_tensor(n, kappa));
            },
            py::arg("n"), py::arg("kappa") = 1.0)
        .def_static(
            "chiral_uv",
            [](const std::string& preset, double h) {
                return ReactionSpec::chiral_uv(chiral_preset_from_string(preset), ScalarData::constant(h));
            },
            py::arg("preset"), py::arg("h") = 1.0)
        .def_property_readonly("kind", [](const ReactionSpec& s) { return to_string(s.kind()); })
        .def_property_readonly("n", &ReactionSpec::n)
        .def_property_readonly("h0", &ReactionSpec::h0)
        .def_property_readonly("h1", &ReactionSpec::h1);

    m.def("rhs_eval", &rhs_eval);
    m.def("manufactured_forcing", &manufactured_forcing);
    m.def("smallness_margin", &smallness_margin);
    m.def(
        "residual",
        [](const ReactionSpec& spec, const SpinorField& psi, const std::string& mode, const SpinorField* forcing) {
            return residual(spec, psi, mode_from(mode), forcing).norm;
        },
        py::arg("spec"), py::arg("psi"), py::arg("mode") = "spectral", py::arg("forcing") = nullptr);
    m.def(
        "picard_solve",
        [](const ReactionSpec& spec, const SpinorField& seed, const SpinorField* forcing, double damping, double tol,
           int max_iter, double guard) {
            PicardOptions o{damping, tol, max_iter, guard};
            auto r = picard_solve(spec, seed, forcing, o);
            return py::make_tuple(std::move(r.psi), report_dict(r.report));
        },
        py::arg("spec"), py::arg("seed"), py::arg("forcing") = nullptr, py::arg("damping") = 0.5, py::arg("tol") = 1e-8,
        py::arg("max_iter") = 5000, py::arg("guard") = 0.5);
    m.def(
        "newton_refine",
        [](const ReactionSpec& spec, const SpinorField& psi, const SpinorField* forcing, double tol, int max_steps) {
            NewtonOptions o;
            o.tol = tol;
            o.max_steps = max_steps;
            auto r = newton_refine(spec, psi, forcing, o);
            py::dict d;
            d["steps"] = r.steps;
            d["residuals"] = r.residuals;
            d["converged"] = r.converged;
            d["stagnated"] = r.stagnated;
            return py::make_tuple(std::move(r.psi), d);
        },
        py::arg("spec"), py::arg("psi"), py::arg("forcing") = nullptr, py::arg("tol") = 1e-10, py::arg("max_steps") = 8);

    m.def("rescale", &rescale, py::arg("psi"), py::arg("x0"), py::arg("y0"), py::arg("lam"), py::arg("target"));
    m.def("to_cylinder", &to_cylinder, py::arg("psi"), py::arg("cx"), py::arg("cy"), py::arg("t1"), py::arg("t2"),
          py::arg("nt"), py::arg("ntheta"));
    m.def(
        "sphere_transfer",
        [](const SpinorField& psi, const std::string& direction, const GridChart& target) {
            if (direction != "to_sphere" && direction != "to_plane") throw ConfigError("direction must be to_sphere or to_plane");
            return sphere_transfer(psi, direction == "to_sphere" ? SphereDirection::ToSphere : SphereDirection::ToPlane,
                                   target);
        },
        py::arg("psi"), py::arg("direction"), py::arg("target"));

    m.def(
        "blowup_set",
        [](const FieldSequence& seq, double eps, const std::vector<double>& radii) {
            py::list out;
            for (const auto& p : blowup_set(seq, eps, radii)) {
                py::dict d;
                d["node"] = p.node;
                d["x"] = p.x;
                d["y"] = p.y;
                d["liminf_energy"] = p.liminf_energy;
                out.append(d);
            }
            return out;
        },
        py::arg("sequence"), py::arg("epsilon") = 0.01, py::arg("radii") = std::vector<double>{0.2, 0.1, 0.05});
    m.def("neck_energy", &neck_energy, py::arg("psi"), py::arg("cx"), py::arg("cy"), py::arg("delta"),
          py::arg("big_radius"), py::arg("lam"));
    m.def(
        "decay_profile",
        [](const SpinorField& psi, double cx, double cy, const std::vector<double>& radii) {
            const auto p = decay_profile(psi, cx, cy, radii);
            py::dict d;
            d["radii"] = p.radii;
            d["values"] = p.values;
            d["exponent"] = p.exponent;
            d["flagged"] = p.flagged;
            return d;
        },
        py::arg("psi"), py::arg("cx"), py::arg("cy"), py::arg("radii"));

    m.def(
        "integrate_surface",
        [](const SpinorField& psi) {
            const auto mesh = integrate_surface(psi, central_node(psi.chart()));
            auto d = mesh_dict(mesh);
            const auto hm = mean_curvature(mesh);
            d["mesh_area"] = mesh_area(mesh);
            d["mean_curvature_max"] = hm.max_abs;
            d["mean_curvature_mean"] = hm.mean_abs;
            d["obj"] = obj_text(mesh);
            return d;
        },
        py::arg("psi"));

    m.def("encode_field", [](const SpinorField& f) {
        const auto b = encode_field(f);
        return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
    });
    m.def("decode_field", [](const py::bytes& b) {
        const std::string s = b;
        return decode_field(std::vector<std::uint8_t>(s.begin(), s.end()));
    });
    m.def("read_field", &read_field);
    m.def("write_field", &write_field);

    m.def(
        "run_command",
        [](const std::string& command, const std::string& config, std::optional<std::string> out,
           std::optional<std::uint64_t> seed) {
            std::ostringstream err;
            const int code = run_command(command, config, out, seed, err);
            return py::make_tuple(code, err.str());
        },
        py::arg("command"), py::arg("config"), py::arg("out") = py::none(), py::arg("seed") = py::none());

    auto o = m.def_submodule("oracles", "Reference fields");
    o.def("weitzenboeck_field", &oracles::weitzenboeck_field);
    o.def("manufactured_profile", &oracles::manufactured_profile, py::arg("chart"), py::arg("n") = 1,
          py::arg("amplitude") = 0.5);
    o.def("plane_field", &oracles::plane_field);
    o.def("enneper_field", &oracles::enneper_field);
    o.def("smooth_field", &oracles::smooth_field);
    o.def("random_field", &oracles::random_field, py::arg("chart"), py::arg("n") = 1, py::arg("seed") = 0);
    o.def("algebra_error", &oracles::algebra_error);
    o.def("null_identity_error", &oracles::null_identity_error);
}

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "grassgeo/errors.hpp"
#include "grassgeo/grassmann.hpp"
#include "grassgeo/kernel.hpp"
#include "grassgeo/loci.hpp"
#include "grassgeo/random.hpp"
#include "grassgeo/topology.hpp"

namespace py = pybind11;
using namespace grassgeo;

namespace {

Flag make_flag(const GrassmannSpace& s, const std::string& name) {
    if (name == "standard") return Flag::standard(s);
    if (name == "complement") return Flag::complement_first(s);
    throw py::value_error("flag must be 'standard' or 'complement'");
}

const char* family_name(ConjugateFamily f) {
    switch (f) {
        case ConjugateFamily::T1: return "T1";
        case ConjugateFamily::T2: return "T2";
        case ConjugateFamily::T3: return "T3";
    }
    return "";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Geometry of complex Grassmann manifolds G_n(C^{n+m}) and their noncompact duals.";

    static py::exception<Error> error_type(m, "GrassgeoError");
    // Raised as GrassgeoError(message, kind, value).
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object value = e.value() ? py::object(py::float_(*e.value())) : py::object(py::none());
            PyErr_SetObject(error_type.ptr(),
                            py::make_tuple(e.what(), std::string(to_string(e.kind())), value).ptr());
        }
    });

    py::class_<GrassmannSpace>(m, "GrassmannSpace")
        .def(py::init([](int n, int m, const std::string& kind) {
                 if (kind != "compact" && kind != "noncompact") {
                     throw py::value_error("kind must be 'compact' or 'noncompact'");
                 }
                 return GrassmannSpace(n, m, kind == "compact" ? Curvature::Compact : Curvature::Noncompact);
             }),
             py::arg("n"), py::arg("m"), py::arg("kind") = "compact")
        .def_readonly("n", &GrassmannSpace::n)
        .def_readonly("m", &GrassmannSpace::m)
        .def_property_readonly("compact", &GrassmannSpace::compact)
        .def("__repr__", [](const GrassmannSpace& s) {
            return "GrassmannSpace(" + std::to_string(s.n) + ", " + std::to_string(s.m) + ", '" +
                   (s.compact() ? "compact" : "noncompact") + "')";
        });

    // Geometry. Matrices are complex NumPy arrays: tangent vectors and chart
    // points n x m, frames (n+m) x n.
    m.def("exp0", [](const GrassmannSpace& s, const ComplexMatrix& B) { return exp0(TangentVector(s, B)).matrix(); },
          py::arg("space"), py::arg("B"));
    m.def("exp0_frame",
          [](const GrassmannSpace& s, const ComplexMatrix& B) { return exp0_frame(TangentVector(s, B)).matrix(); },
          py::arg("space"), py::arg("B"));
    m.def("log0", [](const GrassmannSpace& s, const ComplexMatrix& Z) { return log0(ChartPoint(s, Z)).matrix(); },
          py::arg("space"), py::arg("Z"));
    m.def(
        "geodesic_ode",
        [](const GrassmannSpace& s, const ComplexMatrix& B, double t, int steps) {
            return geodesic_ode(TangentVector(s, B), t, steps).matrix();
        },
        py::arg("space"), py::arg("B"), py::arg("t") = 1.0, py::arg("steps") = 4000);
    m.def("frame_of_chart",
          [](const GrassmannSpace& s, const ComplexMatrix& Z) { return frame_of_chart(ChartPoint(s, Z)).matrix(); },
          py::arg("space"), py::arg("Z"));
    m.def("chart_of_frame",
          [](const GrassmannSpace& s, const ComplexMatrix& F) { return chart_of_frame(Frame(s, F)).matrix(); },
          py::arg("space"), py::arg("F"));
    m.def(
        "distance",
        [](const GrassmannSpace& s, const ComplexMatrix& Z1, const ComplexMatrix& Z2) {
            return distance(ChartPoint(s, Z1), ChartPoint(s, Z2));
        },
        py::arg("space"), py::arg("Z1"), py::arg("Z2"));
    m.def(
        "distance_frames",
        [](const GrassmannSpace& s, const ComplexMatrix& F1, const ComplexMatrix& F2) {
            return distance(Frame(s, F1), Frame(s, F2));
        },
        py::arg("space"), py::arg("F1"), py::arg("F2"));
    m.def(
        "principal_angles",
        [](const GrassmannSpace& s, const ComplexMatrix& F1, const ComplexMatrix& F2) {
            return principal_angles(Frame(s, F1), Frame(s, F2));
        },
        py::arg("space"), py::arg("F1"), py::arg("F2"));

    // Coherent-state kernel.
    m.def(
        "kernel",
        [](const GrassmannSpace& s, const ComplexMatrix& Z1, const ComplexMatrix& Z2) {
            return kernel(ChartPoint(s, Z1), ChartPoint(s, Z2));
        },
        py::arg("space"), py::arg("Z1"), py::arg("Z2"));
    m.def(
        "normalized_overlap",
        [](const GrassmannSpace& s, const ComplexMatrix& Z1, const ComplexMatrix& Z2) {
            const OverlapValue v = normalized_overlap(ChartPoint(s, Z1), ChartPoint(s, Z2));
            return py::make_tuple(v.raw, v.normalized);
        },
        py::arg("space"), py::arg("Z1"), py::arg("Z2"), "Returns (raw, normalized).");
    m.def(
        "cayley_distance",
        [](const GrassmannSpace& s, const ComplexMatrix& Z1, const ComplexMatrix& Z2) {
            return cayley_distance(ChartPoint(s, Z1), ChartPoint(s, Z2));
        },
        py::arg("space"), py::arg("Z1"), py::arg("Z2"));
    m.def(
        "diastasis",
        [](const GrassmannSpace& s, const ComplexMatrix& Z1, const ComplexMatrix& Z2) {
            return diastasis(ChartPoint(s, Z1), ChartPoint(s, Z2));
        },
        py::arg("space"), py::arg("Z1"), py::arg("Z2"));
    m.def(
        "plucker_embed",
        [](const GrassmannSpace& s, const ComplexMatrix& F) {
            const PluckerVector p = plucker_embed(Frame(s, F));
            return py::make_tuple(p.subsets, p.components);
        },
        py::arg("space"), py::arg("F"), "Returns (subsets, components) in lexicographic order.");
    m.def(
        "plucker_overlap_oracle",
        [](const GrassmannSpace& s, const ComplexMatrix& F1, const ComplexMatrix& F2) {
            return plucker_overlap_oracle(Frame(s, F1), Frame(s, F2));
        },
        py::arg("space"), py::arg("F1"), py::arg("F2"));
    m.def(
        "energy",
        [](const GrassmannSpace& s, std::vector<double> eps, const ComplexMatrix& F) {
            return energy(EnergySpec(std::move(eps)), Frame(s, F));
        },
        py::arg("space"), py::arg("eps"), py::arg("F"));
    m.def(
        "energy_gradient",
        [](const GrassmannSpace& s, std::vector<double> eps, const ComplexMatrix& Z) {
            return energy_gradient(EnergySpec(std::move(eps)), ChartPoint(s, Z));
        },
        py::arg("space"), py::arg("eps"), py::arg("Z"));
    m.def(
        "critical_points",
        [](const GrassmannSpace& s, std::vector<double> eps) {
            py::list out;
            for (const CriticalPoint& c : critical_points(s, EnergySpec(std::move(eps)))) {
                py::dict d;
                d["subset"] = c.subset;
                d["frame"] = c.frame.matrix();
                d["value"] = c.value;
                d["gradient_norm"] = c.gradient_norm;
                out.append(d);
            }
            return out;
        },
        py::arg("space"), py::arg("eps"));

    // Loci.
    m.def(
        "cut_locus_test",
        [](const GrassmannSpace& s, const ComplexMatrix& F, double tol) { return cut_locus_test(Frame(s, F), tol); },
        py::arg("space"), py::arg("F"), py::arg("tol") = kDefaultLocusTol);
    m.def(
        "tangent_conjugate_times",
        [](const GrassmannSpace& s, std::vector<double> h, double t_max) {
            py::list out;
            for (const ConjugateTime& c : tangent_conjugate_times(s, CartanVector::normalized(std::move(h)), t_max)) {
                out.append(py::make_tuple(c.t, c.multiplicity, family_name(c.family())));
            }
            return out;
        },
        py::arg("space"), py::arg("h"), py::arg("t_max"), "List of (t, multiplicity, family).");
    m.def(
        "dexp_min_singular",
        [](const GrassmannSpace& s, const ComplexMatrix& B, double t, double fd_step) {
            return dexp_min_singular(TangentVector(s, B), t, fd_step);
        },
        py::arg("space"), py::arg("B"), py::arg("t"), py::arg("fd_step") = 1e-5);
    m.def(
        "conjugate_scan",
        [](const GrassmannSpace& s, std::vector<double> h, double t_max, int points) {
            py::list out;
            for (const ScanPoint& p : conjugate_scan(s, CartanVector::normalized(std::move(h)), t_max, points)) {
                out.append(py::make_tuple(p.t, p.min_singular_normalized, p.predicted));
            }
            return out;
        },
        py::arg("space"), py::arg("h"), py::arg("t_max"), py::arg("points") = 200,
        "List of (t, min_singular_normalized, predicted_flag).");
    m.def(
        "schubert_dims",
        [](const GrassmannSpace& s, const ComplexMatrix& F, const std::string& flag) {
            return schubert_dims(Frame(s, F), make_flag(s, flag));
        },
        py::arg("space"), py::arg("F"), py::arg("flag") = "standard");
    m.def(
        "conjugate_stratum_W",
        [](const GrassmannSpace& s, const ComplexMatrix& F, double tol) { return conjugate_stratum_W(Frame(s, F), tol); },
        py::arg("space"), py::arg("F"), py::arg("tol") = kDefaultAngleTol);
    m.def(
        "conjugate_stratum_I",
        [](const GrassmannSpace& s, const ComplexMatrix& F, double tol) { return conjugate_stratum_I(Frame(s, F), tol); },
        py::arg("space"), py::arg("F"), py::arg("tol") = kDefaultAngleTol);
    m.def(
        "isoclinic_test",
        [](const GrassmannSpace& s, const ComplexMatrix& F1, const ComplexMatrix& F2, double tol) {
            return isoclinic_test(Frame(s, F1), Frame(s, F2), tol);
        },
        py::arg("space"), py::arg("F1"), py::arg("F2"), py::arg("tol") = kDefaultAngleTol);

    // Topology.
    m.def("binomial", &binomial, py::arg("total"), py::arg("k"));
    m.def("euler_characteristic", &euler_characteristic, py::arg("n"), py::arg("m"));
    m.def("poincare_polynomial", &poincare_polynomial, py::arg("n"), py::arg("m"));
    m.def(
        "schubert_cells",
        [](int n, int m) {
            py::list out;
            for (const SchubertSymbol& c : schubert_cells(n, m)) out.append(c.omega());
            return out;
        },
        py::arg("n"), py::arg("m"));
    m.def(
        "characteristic_report",
        [](int n, int m, std::vector<double> eps) {
            const CharacteristicReport r = characteristic_report(n, m, EnergySpec(std::move(eps)));
            py::dict d;
            d["euler"] = r.euler;
            d["weyl_ratio"] = r.weyl_ratio;
            d["cell_count"] = r.cell_count;
            d["fundamental_rep_dim"] = r.fundamental_rep_dim;
            d["kodaira_N"] = r.kodaira_N;
            d["critical_count"] = r.critical_count;
            d["max_orthogonal_coherent"] = r.max_orthogonal_coherent;
            return d;
        },
        py::arg("n"), py::arg("m"), py::arg("eps"));

    m.def(
        "random_plane",
        [](const GrassmannSpace& s, std::uint64_t seed, std::uint64_t index) {
            return random_plane(s, seed, index).matrix();
        },
        py::arg("space"), py::arg("seed"), py::arg("index") = 0);
}

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tmcompose/composition.hpp"
#include "tmcompose/errors.hpp"
#include "tmcompose/invisibility.hpp"
#include "tmcompose/jet.hpp"
#include "tmcompose/jetseries.hpp"
#include "tmcompose/mat2.hpp"
#include "tmcompose/potential.hpp"
#include "tmcompose/propagator.hpp"
#include "tmcompose/scattering.hpp"

namespace py = pybind11;
using namespace tmc;

namespace {

std::vector<std::vector<Complex>> mat_to_list(const Mat2C& m) {
    return {{m.a11, m.a12}, {m.a21, m.a22}};
}

ComposeMethod parse_method(const std::string& method, int order) {
    if (method == "exact") return ComposeMethod::exact();
    if (method == "series") return ComposeMethod::series(order);
    throw DomainError("method must be 'exact' or 'series'");
}

Side parse_side(const std::string& side) {
    if (side == "left") return Side::Left;
    if (side == "right") return Side::Right;
    throw DomainError("side must be 'left' or 'right'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "transfer matrices of 1D complex potentials, overlap-corrected composition";

    py::register_exception<UnimodularityError>(m, "UnimodularityError");
    py::register_exception<SpectralSingularityError>(m, "SpectralSingularityError");
    py::register_exception<IntegrationError>(m, "IntegrationError");
    py::register_exception<JetOrderError>(m, "JetOrderError");

    py::class_<Mat2C>(m, "Mat2C")
        .def(py::init([](Complex a11, Complex a12, Complex a21, Complex a22) {
                 return Mat2C{a11, a12, a21, a22};
             }),
             py::arg("a11"), py::arg("a12"), py::arg("a21"), py::arg("a22"))
        .def_readwrite("a11", &Mat2C::a11)
        .def_readwrite("a12", &Mat2C::a12)
        .def_readwrite("a21", &Mat2C::a21)
        .def_readwrite("a22", &Mat2C::a22)
        .def("__matmul__", [](const Mat2C& a, const Mat2C& b) { return a * b; })
        .def("__add__", [](const Mat2C& a, const Mat2C& b) { return a + b; })
        .def("__sub__", [](const Mat2C& a, const Mat2C& b) { return a - b; })
        .def("transpose", &Mat2C::transpose)
        .def("tolist", &mat_to_list)
        .def("__repr__", [](const Mat2C& a) {
            std::ostringstream os;
            os << "Mat2C([[" << a.a11 << ", " << a.a12 << "], [" << a.a21 << ", " << a.a22
               << "]])";
            return os.str();
        });

    m.def("identity", &mat2_identity);
    m.def("det", &det);
    m.def("inverse_unimodular", &inverse_unimodular, py::arg("m"), py::arg("tol") = 1e-8);
    m.def("max_abs_norm", &max_abs_norm);
    m.def("max_abs_diff", &max_abs_diff);
    m.def("k_matrix", &k_matrix);
    m.def("k_matrix_dot", &k_matrix_dot);
    m.def("k_matrix_ddot", &k_matrix_ddot);
    m.def("pauli", &pauli);
    m.def("commutator", &commutator);

    py::class_<Jet>(m, "Jet")
        .def(py::init<std::vector<Complex>>(), py::arg("derivative_values"))
        .def_static("zeros", &Jet::zeros)
        .def_property_readonly("order", &Jet::order)
        .def("derivatives", &Jet::derivatives)
        .def("__getitem__", [](const Jet& j, int i) { return j[i]; })
        .def("__add__", [](const Jet& a, const Jet& b) { return a + b; })
        .def("__sub__", [](const Jet& a, const Jet& b) { return a - b; })
        .def("__mul__", [](const Jet& a, const Jet& b) { return a * b; })
        .def("scaled", &Jet::scaled)
        .def("differentiated", &Jet::differentiated)
        .def("shifted", &Jet::shifted)
        .def("padded", &Jet::padded)
        .def("truncated", &Jet::truncated);

    py::class_<Interval>(m, "Interval")
        .def(py::init([](double lo, double hi) { return Interval{lo, hi}; }), py::arg("lo"),
             py::arg("hi"))
        .def_readonly("lo", &Interval::lo)
        .def_readonly("hi", &Interval::hi)
        .def("length", &Interval::length);

    py::class_<PotentialPiece>(m, "PotentialPiece")
        .def_static(
            "constant",
            [](double lo, double hi, Complex value) {
                return PotentialPiece::constant({lo, hi}, value);
            },
            py::arg("lo"), py::arg("hi"), py::arg("value"))
        .def_static(
            "polynomial",
            [](double lo, double hi, std::vector<Complex> coeffs) {
                return PotentialPiece::polynomial({lo, hi}, std::move(coeffs));
            },
            py::arg("lo"), py::arg("hi"), py::arg("coefficients"))
        .def_static(
            "complex_exponential",
            [](double lo, double hi, Complex amplitude, double wavevector) {
                return PotentialPiece::complex_exponential({lo, hi}, amplitude, wavevector);
            },
            py::arg("lo"), py::arg("hi"), py::arg("amplitude"), py::arg("wavevector"))
        .def_static(
            "gaussian_bump",
            [](double lo, double hi, Complex amplitude, double center, double width) {
                return PotentialPiece::gaussian_bump({lo, hi}, amplitude, center, width);
            },
            py::arg("lo"), py::arg("hi"), py::arg("amplitude"), py::arg("center"),
            py::arg("width"))
        .def_property_readonly("interval", &PotentialPiece::interval);

    py::class_<Potential>(m, "Potential")
        .def(py::init<>())
        .def(py::init<std::vector<PotentialPiece>>(), py::arg("pieces"))
        .def("evaluate", &Potential::evaluate)
        .def("endpoint_jet",
             [](const Potential& p, double x0, const std::string& side, int order) {
                 return p.endpoint_jet(x0, parse_side(side), order);
             },
             py::arg("x0"), py::arg("side"), py::arg("order") = 3)
        .def("truncated", &Potential::truncated)
        .def("translated", &Potential::translated)
        .def("scaled", &Potential::scaled)
        .def("support",
             [](const Potential& p) -> py::object {
                 const auto s = p.support();
                 if (!s) return py::none();
                 return py::make_tuple(s->lo, s->hi);
             })
        .def("breakpoints", &Potential::breakpoints)
        .def("faddeev_norm", &Potential::faddeev_norm, py::arg("tol") = 1e-10)
        .def("is_zero", &Potential::is_zero);

    m.def("support_relation", [](const Potential& a, const Potential& b) {
        const auto r = support_relation(a, b);
        const char* name = r.kind == SupportRelation::Kind::StrictlyPrecedes
                               ? "strictly_precedes"
                               : r.kind == SupportRelation::Kind::WeaklyPrecedes
                                     ? "weakly_precedes"
                                     : "other";
        return py::make_tuple(name, r.overlap_length, r.overlap_start);
    });

    py::class_<PropagatorConfig>(m, "PropagatorConfig")
        .def(py::init([](double rel_tol, double abs_tol, long max_steps) {
                 PropagatorConfig c;
                 c.rel_tol = rel_tol;
                 c.abs_tol = abs_tol;
                 c.max_steps = max_steps;
                 return c;
             }),
             py::arg("rel_tol") = 1e-10, py::arg("abs_tol") = 1e-12,
             py::arg("max_steps") = 2'000'000)
        .def_readwrite("rel_tol", &PropagatorConfig::rel_tol)
        .def_readwrite("abs_tol", &PropagatorConfig::abs_tol)
        .def_readwrite("max_steps", &PropagatorConfig::max_steps);

    py::class_<TransferResult>(m, "TransferResult")
        .def_readonly("matrix", &TransferResult::matrix)
        .def_readonly("k", &TransferResult::k)
        .def_readonly("det_drift", &TransferResult::det_drift)
        .def_readonly("steps_taken", &TransferResult::steps_taken);

    m.def(
        "transfer_matrix",
        [](const Potential& v, double k, py::object x1, py::object x2,
           const PropagatorConfig& cfg) {
            if (x1.is_none() != x2.is_none())
                throw DomainError("transfer_matrix: give both interval ends or neither");
            if (x1.is_none()) return transfer_matrix(v, k, cfg);
            return transfer_matrix(v, k, x1.cast<double>(), x2.cast<double>(), cfg);
        },
        py::arg("v"), py::arg("k"), py::arg("x1") = py::none(), py::arg("x2") = py::none(),
        py::arg("cfg") = PropagatorConfig{});
    m.def(
        "transfer_matrix_sum",
        [](const std::vector<Potential>& vs, double k, double x1, double x2,
           const PropagatorConfig& cfg) {
            std::vector<const Potential*> ptrs;
            for (const auto& v : vs) ptrs.push_back(&v);
            return transfer_matrix_sum(ptrs, k, x1, x2, cfg);
        },
        py::arg("vs"), py::arg("k"), py::arg("x1"), py::arg("x2"),
        py::arg("cfg") = PropagatorConfig{});
    m.def("inverse_transpose_evolution", &inverse_transpose_evolution, py::arg("v"),
          py::arg("k"), py::arg("x1"), py::arg("x2"), py::arg("cfg") = PropagatorConfig{});
    m.def("rectangular_barrier_oracle", &rectangular_barrier_oracle, py::arg("v0"),
          py::arg("a"), py::arg("k"));

    py::class_<ScatteringAmplitudes>(m, "ScatteringAmplitudes")
        .def(py::init([](Complex r_left, Complex r_right, Complex t, double k) {
                 return ScatteringAmplitudes{r_left, r_right, t, k};
             }),
             py::arg("r_left"), py::arg("r_right"), py::arg("t"), py::arg("k"))
        .def_readwrite("r_left", &ScatteringAmplitudes::r_left)
        .def_readwrite("r_right", &ScatteringAmplitudes::r_right)
        .def_readwrite("t", &ScatteringAmplitudes::t)
        .def_readwrite("k", &ScatteringAmplitudes::k);

    m.def("amplitudes_from_transfer", &amplitudes_from_transfer, py::arg("m"), py::arg("k"),
          py::arg("singularity_tol") = 1e-12);
    m.def("transfer_from_amplitudes", &transfer_from_amplitudes);
    m.def("translate_transfer", &translate_transfer, py::arg("m"), py::arg("k"),
          py::arg("d"));

    m.def("compose_disjoint", &compose_disjoint);
    m.def("split_compose", &split_compose, py::arg("v"), py::arg("k"), py::arg("ell"),
          py::arg("cfg") = PropagatorConfig{});
    m.def("exact_overlap_correction",
          py::overload_cast<const Potential&, const Potential&, double,
                            const PropagatorConfig&>(&exact_overlap_correction),
          py::arg("v1"), py::arg("v2"), py::arg("k"), py::arg("cfg") = PropagatorConfig{});
    m.def("exact_overlap_correction_on", &exact_overlap_correction_on, py::arg("v1"),
          py::arg("v2"), py::arg("k"), py::arg("ell"), py::arg("cfg") = PropagatorConfig{});
    m.def(
        "series_overlap_correction",
        [](const Jet& v1_jet, const Jet& v2_jet, double k, double ell, int order) {
            return series_overlap_correction({v1_jet, v2_jet, k, ell}, order);
        },
        py::arg("v1_jet_at_ell"), py::arg("v2_jet_at_zero"), py::arg("k"), py::arg("ell"),
        py::arg("order") = 6);
    m.def(
        "overlap_series_coefficients",
        [](const Jet& v1_jet, const Jet& v2_jet, double k, int order) {
            const auto b = overlap_series_coefficients(v1_jet, v2_jet, k, order);
            return std::vector<Mat2C>(b.begin(), b.end());
        },
        py::arg("v1_jet_at_ell"), py::arg("v2_jet_at_zero"), py::arg("k"),
        py::arg("order") = 6);
    m.def(
        "generalized_compose",
        [](const Potential& v1, const Potential& v2, double k, const std::string& method,
           int order, const PropagatorConfig& cfg) {
            return generalized_compose(v1, v2, k, parse_method(method, order), cfg);
        },
        py::arg("v1"), py::arg("v2"), py::arg("k"), py::arg("method") = "exact",
        py::arg("order") = 6, py::arg("cfg") = PropagatorConfig{});

    py::class_<OverlapPoint>(m, "OverlapPoint")
        .def_readonly("ell", &OverlapPoint::ell)
        .def_readonly("s_exact", &OverlapPoint::s_exact)
        .def_readonly("s_series", &OverlapPoint::s_series)
        .def_readonly("errors", &OverlapPoint::errors)
        .def_readonly("deviation_from_identity", &OverlapPoint::deviation_from_identity);
    py::class_<OverlapReport>(m, "OverlapReport")
        .def_readonly("points", &OverlapReport::points)
        .def_property_readonly("regime",
                               [](const OverlapReport& r) {
                                   switch (r.regime) {
                                       case OverlapRegime::DiscontinuousBoth:
                                           return "discontinuous_both";
                                       case OverlapRegime::V1Continuous:
                                           return "v1_continuous";
                                       case OverlapRegime::V2Continuous:
                                           return "v2_continuous";
                                       default:
                                           return "continuous_both";
                                   }
                               })
        .def_readonly("fitted_slope", &OverlapReport::fitted_slope)
        .def_readonly("slopes_by_order", &OverlapReport::slopes_by_order)
        .def_readonly("identity_slope", &OverlapReport::identity_slope);
    m.def("convergence_sweep", &convergence_sweep, py::arg("v1"), py::arg("v2"), py::arg("k"),
          py::arg("ells"), py::arg("order"), py::arg("cfg") = PropagatorConfig{1e-12, 1e-14},
          py::arg("jobs") = 1);

    m.def("d_recursion", [](const Jet& f, int n_max) {
        const auto d = d_recursion(f, n_max);
        return py::make_tuple(d.plus, d.minus);
    });
    m.def("c_matrices", &c_matrices);
    m.def("u_series", &u_series);
    m.def("u_inverse_series", &u_inverse_series);
    m.def("multiply_series", &multiply_series);
    m.def("exp_i_sigma3_series", &exp_i_sigma3_series);
    m.def("s_series_from_jets", &s_series_from_jets, py::arg("f1"), py::arg("f2"),
          py::arg("n_max") = 8);
    m.def("s_series_endpoint_form", &s_series_endpoint_form, py::arg("v1_jet_at_ell"),
          py::arg("v2_jet_at_zero"), py::arg("k"), py::arg("n_max") = 8);

    py::class_<UnidirectionalSpec>(m, "UnidirectionalSpec")
        .def(py::init([](Complex coupling, double wavevector, int mode) {
                 UnidirectionalSpec s;
                 s.coupling = coupling;
                 s.wavevector = wavevector;
                 s.mode = mode;
                 return s;
             }),
             py::arg("coupling"), py::arg("wavevector"), py::arg("mode") = 1)
        .def_readwrite("coupling", &UnidirectionalSpec::coupling)
        .def_readwrite("wavevector", &UnidirectionalSpec::wavevector)
        .def_readwrite("mode", &UnidirectionalSpec::mode)
        .def_property_readonly("length", &UnidirectionalSpec::length)
        .def_property_readonly("resonant_k", &UnidirectionalSpec::resonant_k);

    m.def("build_potential", &build_potential);
    m.def("perturbative_amplitudes", &perturbative_amplitudes);
    m.def("overlap_pair", &overlap_pair, py::arg("spec"), py::arg("ell"));
    m.def("predicted_transfer", &predicted_transfer, py::arg("spec"), py::arg("ell"));
    m.def("predicted_amplitudes", &predicted_amplitudes, py::arg("spec"), py::arg("ell"));

    py::class_<InvisibilityRow>(m, "InvisibilityRow")
        .def_readonly("ell", &InvisibilityRow::ell)
        .def_readonly("epsilon", &InvisibilityRow::epsilon)
        .def_readonly("numeric", &InvisibilityRow::numeric)
        .def_readonly("predicted", &InvisibilityRow::predicted)
        .def_readonly("rl_c2_numeric", &InvisibilityRow::rl_c2_numeric)
        .def_readonly("rl_c2_predicted", &InvisibilityRow::rl_c2_predicted)
        .def_readonly("rl_c2_rel_dev", &InvisibilityRow::rl_c2_rel_dev)
        .def_readonly("t_c2_rel_dev", &InvisibilityRow::t_c2_rel_dev)
        .def_readonly("rr_rel_dev", &InvisibilityRow::rr_rel_dev);
    py::class_<InvisibilityReport>(m, "InvisibilityReport")
        .def_readonly("rows", &InvisibilityReport::rows)
        .def_readonly("rl_ell_slope", &InvisibilityReport::rl_ell_slope)
        .def_readonly("rl_z_slope", &InvisibilityReport::rl_z_slope)
        .def_readonly("perturbative_warning", &InvisibilityReport::perturbative_warning);
    m.def("experiment_report", &experiment_report, py::arg("spec"), py::arg("ells"),
          py::arg("cfg") = PropagatorConfig{1e-12, 1e-14}, py::arg("jobs") = 1);
}

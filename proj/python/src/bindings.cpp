#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "freeconv/error.hpp"
#include "freeconv/families.hpp"
#include "freeconv/idlaws.hpp"
#include "freeconv/inversion.hpp"
#include "freeconv/io.hpp"
#include "freeconv/measure.hpp"
#include "freeconv/nc_combinatorics.hpp"
#include "freeconv/rates.hpp"
#include "freeconv/subordination.hpp"
#include "freeconv/transforms.hpp"

namespace py = pybind11;
using namespace freeconv;

namespace {

InversionOptions inversion(const std::vector<double>& eta) {
    InversionOptions o;
    o.eta_schedule = eta;
    return o;
}

const std::vector<double> kDefaultEta{0.04, 0.02, 0.01};

py::object big(BigCount v) { return py::module_::import("builtins").attr("int")(to_string(v)); }

std::vector<std::pair<double, double>> atom_pairs(const Measure& m) {
    std::vector<std::pair<double, double>> out;
    for (const auto& a : m.atoms()) out.emplace_back(a.position, a.weight);
    return out;
}

Measure atomic_from_pairs(const std::vector<std::pair<double, double>>& pairs) {
    std::vector<Atom> atoms;
    for (auto [x, w] : pairs) atoms.push_back({x, w});
    return make_atomic(atoms);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Free additive convolution toolkit";

    static py::exception<Error> error_type(m, "FreeconvError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error_type)(py::str(e.what()));
            exc.attr("code") = py::str(std::string(to_string(e.code())));
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    // measures
    py::class_<Measure>(m, "Measure")
        .def(py::init<>())
        .def_property_readonly("atoms", &atom_pairs)
        .def_property_readonly("grid", &Measure::grid)
        .def_property_readonly("values", &Measure::values)
        .def_property_readonly("mean", &Measure::mean)
        .def_property_readonly("variance", &Measure::variance)
        .def_property_readonly("total_mass", [](const Measure& x) { return x.parts().total_mass(); })
        .def("__eq__", [](const Measure& a, const Measure& b) { return a == b; })
        .def("__repr__", [](const Measure& x) {
            return "<Measure atoms=" + std::to_string(x.atoms().size()) +
                   " grid=" + std::to_string(x.grid().size()) + ">";
        });

    m.def("make_atomic", &atomic_from_pairs, py::arg("atoms"));
    m.def("make_density", &make_density, py::arg("grid"), py::arg("values"), py::arg("normalize") = true);
    m.def("make_measure",
          [](const std::vector<std::pair<double, double>>& atoms, std::vector<double> grid, std::vector<double> values) {
              std::vector<Atom> a;
              for (auto [x, w] : atoms) a.push_back({x, w});
              return make_measure(std::move(a), std::move(grid), std::move(values));
          },
          py::arg("atoms"), py::arg("grid"), py::arg("values"));
    m.def("moment", [](const Measure& x, int k) { return moment(x, k); }, py::arg("measure"), py::arg("k"));
    m.def("absolute_moment", [](const Measure& x, double d) { return absolute_moment(x, d); }, py::arg("measure"),
          py::arg("d"));
    m.def("truncate", &freeconv::truncate, py::arg("measure"), py::arg("cutoff"));
    m.def("dilate", &dilate, py::arg("measure"), py::arg("s"));
    m.def("shift", &shift, py::arg("measure"), py::arg("c"));
    m.def("tail_mass", &tail_mass, py::arg("measure"), py::arg("cutoff"));
    m.def("characteristic_function", &characteristic_function, py::arg("measure"), py::arg("t"));
    m.def("semicircle_grid_measure", &semicircle_grid_measure, py::arg("points") = 2001);

    // nc_combinatorics
    m.def("enumerate_nc", [](int n) {
        std::vector<std::vector<std::vector<int>>> out;
        for (const auto& p : enumerate_nc(n)) out.push_back(p.blocks());
        return out;
    }, py::arg("n"));
    m.def("count_nc_blocks", [](int n, int s) { return big(count_nc_blocks(n, s)); }, py::arg("n"), py::arg("s"));
    m.def("catalan", [](int n) { return big(catalan(n)); }, py::arg("n"));
    m.def("cumulants_to_moments",
          [](const std::vector<double>& alpha, const std::string& method) {
              const auto how = method == "enumeration" ? CumulantMethod::Enumeration : CumulantMethod::Recursion;
              return cumulants_to_moments(CumulantVector{alpha}, how).values;
          },
          py::arg("alpha"), py::arg("method") = "recursion");
    m.def("moments_to_cumulants", [](const std::vector<double>& mv) { return moments_to_cumulants(MomentVector{mv, {}}).values; },
          py::arg("moments"));

    // families and laws
    py::class_<FamilySpec>(m, "FamilySpec")
        .def_static("semicircle", &FamilySpec::semicircle, py::arg("mean") = 0.0, py::arg("variance") = 1.0)
        .def_static("free_poisson", &FamilySpec::free_poisson, py::arg("rate"))
        .def_static("meixner", &FamilySpec::meixner, py::arg("a"))
        .def_property_readonly("name", [](const FamilySpec& f) { return to_string(f.name); })
        .def_readonly("mean", &FamilySpec::mean)
        .def_readonly("variance", &FamilySpec::variance)
        .def_readonly("rate", &FamilySpec::rate)
        .def_readonly("a", &FamilySpec::a);

    py::class_<Law>(m, "Law")
        .def(py::init<Measure>(), py::arg("measure"))
        .def(py::init<FamilySpec>(), py::arg("family"))
        .def("cauchy", &Law::cauchy, py::arg("z"))
        .def("moment", &Law::moment, py::arg("k"))
        .def("dilated", &Law::dilated, py::arg("s"))
        .def_property_readonly("hull", &Law::hull);
    py::implicitly_convertible<Measure, Law>();
    py::implicitly_convertible<FamilySpec, Law>();

    m.def("load_law", [](const std::string& path) { return load_law(path); }, py::arg("path"));
    m.def("law_from_json", [](const std::string& text) { return law_from_json(nlohmann::json::parse(text)); },
          py::arg("text"));
    m.def("meixner_cauchy", &meixner_cauchy, py::arg("a"), py::arg("z"));
    m.def("family_cauchy", &family_cauchy, py::arg("family"), py::arg("z"));
    m.def("family_cumulants", [](const FamilySpec& f, int k) { return family_cumulants(f, k).values; },
          py::arg("family"), py::arg("order"));
    m.def("family_grid_measure", &family_grid_measure, py::arg("family"), py::arg("lo"), py::arg("hi"),
          py::arg("points"), py::arg("eta_schedule") = std::vector<double>{0.004, 0.002});

    // transforms
    m.def("cauchy", [](const Law& l, Complex z) { return cauchy(l, z); }, py::arg("law"), py::arg("z"));
    m.def("reciprocal_cauchy", [](const Law& l, Complex z) { return reciprocal_cauchy(l, z); }, py::arg("law"),
          py::arg("z"));
    m.def("c1_index", &c1_index, py::arg("law"));
    m.def("voiculescu", [](const Law& l, Complex z) { return voiculescu(l, z); }, py::arg("law"), py::arg("z"));
    m.def("nevanlinna_sigma",
          [](const Measure& x) {
              const auto s = nevanlinna_sigma(x);
              std::vector<std::pair<double, double>> atoms;
              for (const auto& a : s.atoms()) atoms.emplace_back(a.position, a.weight);
              return py::dict(py::arg("atoms") = atoms, py::arg("grid") = s.grid(), py::arg("values") = s.values(),
                              py::arg("total_mass") = s.total_mass());
          },
          py::arg("measure"));

    // subordination
    py::class_<SubordinationResult>(m, "SubordinationResult")
        .def_readonly("z", &SubordinationResult::z)
        .def_readonly("Zn", &SubordinationResult::Zn)
        .def_readonly("iterations", &SubordinationResult::iterations)
        .def_readonly("residual", &SubordinationResult::residual);
    m.def("solve_Zn", [](const Law& l, int n, Complex z, double tol) {
        SolverOptions o;
        o.tol = tol;
        return solve_Zn(l, n, z, o);
    }, py::arg("law"), py::arg("n"), py::arg("z"), py::arg("tol") = 1e-12);
    m.def("power_cauchy", [](const Law& l, int n, Complex z) { return power_cauchy(l, n, z); }, py::arg("law"),
          py::arg("n"), py::arg("z"));
    m.def("solve_pair", [](const Law& a, const Law& b, Complex z) {
        const auto r = solve_pair(a, b, z);
        return std::make_pair(r.Z1, r.Z2);
    }, py::arg("law1"), py::arg("law2"), py::arg("z"));
    m.def("inverse_Zn", [](const Law& l, int n, Complex z) { return inverse_Zn(l, n, z); }, py::arg("law"),
          py::arg("n"), py::arg("z"));
    m.def("boundary_curve", [](const Measure& x, int n, double at) { return boundary_curve(x, n, at); },
          py::arg("measure"), py::arg("n"), py::arg("x"));

    // inversion_metrics
    py::class_<CdfTable>(m, "CdfTable")
        .def_readonly("xs", &CdfTable::xs)
        .def_readonly("values", &CdfTable::values)
        .def_readonly("left_limits", &CdfTable::left_limits)
        .def_readonly("eta_used", &CdfTable::eta_used)
        .def_readonly("mass_warning", &CdfTable::mass_warning)
        .def("at", &CdfTable::at, py::arg("x"));
    m.def("linspace", &linspace, py::arg("lo"), py::arg("hi"), py::arg("points"));
    m.def("stieltjes_cdf",
          [](const std::function<Complex(Complex)>& g, const std::vector<double>& xs, const std::vector<double>& eta) {
              return stieltjes_cdf(g, xs, inversion(eta));
          },
          py::arg("g"), py::arg("xs"), py::arg("eta_schedule") = kDefaultEta);
    m.def("power_cdf",
          [](const Law& l, int n, const std::vector<double>& xs, const std::vector<double>& eta) {
              const auto g = free_power(l, n);
              return stieltjes_cdf([&](Complex z) { return g(z).value; }, xs, inversion(eta));
          },
          py::arg("law"), py::arg("n"), py::arg("xs"), py::arg("eta_schedule") = kDefaultEta);
    m.def("convolution_cdf",
          [](const Law& a, const Law& b, const std::vector<double>& xs, const std::vector<double>& eta) {
              const auto g = free_convolution(a.as_function(), b.as_function());
              return stieltjes_cdf([&](Complex z) { return g(z).value; }, xs, inversion(eta));
          },
          py::arg("law1"), py::arg("law2"), py::arg("xs"), py::arg("eta_schedule") = kDefaultEta);
    m.def("measure_to_cdf", &measure_to_cdf, py::arg("measure"));
    m.def("kolmogorov", [](const CdfTable& a, const CdfTable& b) {
        const auto r = kolmogorov(a, b);
        return std::make_pair(r.distance, r.argmax_x);
    }, py::arg("a"), py::arg("b"));
    m.def("tail_smoothing_check", [](const Measure& x, double u) {
        const auto r = tail_smoothing_check(x, u);
        return py::make_tuple(r.lhs, r.rhs, r.holds);
    }, py::arg("measure"), py::arg("u"));

    // idlaws
    m.def("is_free_id_sampled", [](const Law& l) {
        const auto v = is_free_id_sampled(l);
        return py::make_tuple(to_string(v.kind), v.where, v.detail);
    }, py::arg("law"));

    // rates
    py::class_<RateRow>(m, "RateRow")
        .def_readonly("n", &RateRow::n)
        .def_readonly("a_n", &RateRow::a_n)
        .def_readonly("distance", &RateRow::distance)
        .def_readonly("failed", &RateRow::failed)
        .def_readonly("error", &RateRow::error);
    py::class_<RateReport>(m, "RateReport")
        .def_readonly("rows", &RateReport::rows)
        .def_readonly("slope", &RateReport::slope)
        .def_readonly("slope_stderr", &RateReport::slope_stderr);
    m.def("run_rate_experiment",
          [](const Law& l, const std::vector<int>& n_values, std::tuple<double, double, int> grid,
             const std::vector<double>& eta) {
              ExperimentConfig cfg;
              cfg.measure = l;
              cfg.n_values = n_values;
              cfg.grid = GridSpec{std::get<0>(grid), std::get<1>(grid), std::get<2>(grid)};
              cfg.eta_schedule = eta;
              py::gil_scoped_release release;
              return run_rate_experiment(cfg);
          },
          py::arg("law"), py::arg("n_values"), py::arg("grid") = std::make_tuple(-4.0, 4.0, 2001),
          py::arg("eta_schedule") = kDefaultEta);
}

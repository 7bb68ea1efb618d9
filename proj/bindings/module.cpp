#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "fls/spec_io.hpp"

namespace py = pybind11;
using namespace fls;

namespace {

Series series_of(const std::string& spec_json) {
    return parse_series_spec(json::parse(spec_json));
}

std::optional<Series> maybe_series(const std::string& spec_json) {
    if (spec_json.empty()) return std::nullopt;
    return series_of(spec_json);
}

SumPolicy policy_of(int max_terms, double tol) {
    SumPolicy p;
    p.max_terms = max_terms;
    p.tolerance = tol;
    p.validate();
    return p;
}

std::vector<int> depth_schedule(const std::vector<int>& depths) {
    if (depths.empty()) return {16, 32, 64, 128, 256, 512};
    return depths;
}

std::string py_classify(const std::string& spec) {
    Series f = series_of(spec);
    if (auto rep = classify_special(f)) return report_to_json(*rep, Window{-8, 8}).dump();
    json j;
    j["classification"] = "Undetermined";
    j["method"] = "ClosedForm";
    j["note"] = "no closed-form pattern matched";
    return j.dump();
}

std::string py_invert(const std::string& spec, const std::string& method, index_t window,
                      const std::vector<int>& depths, const std::string& split_spec,
                      int max_terms, double tol) {
    Series f = series_of(spec);
    SolveConfig cfg;
    cfg.policy = policy_of(max_terms, tol);
    cfg.depths = depth_schedule(depths);
    cfg.window = window;
    std::optional<SplitSequence> split;
    if (!split_spec.empty()) split = parse_split_spec(json::parse(split_spec));
    InverseReport rep;
    if (method == "strict")
        rep = invert_strict(f, cfg);
    else if (method == "omega")
        rep = invert_omega(f, split.value_or(SplitSequence::zero()), cfg);
    else
        rep = invert_auto(f, cfg, split);
    return report_to_json(rep, Window{-window, window}).dump();
}

std::string py_multiply(const std::string& a, const std::string& b, index_t lo, index_t hi,
                        int max_terms, double tol) {
    return report_to_json(product(series_of(a), series_of(b), Window{lo, hi},
                                  policy_of(max_terms, tol)))
        .dump();
}

std::string py_power(const std::string& spec, int k, index_t lo, index_t hi, bool multinomial,
                     const std::string& finv, int max_terms, double tol) {
    Series f = series_of(spec);
    SumPolicy pol = policy_of(max_terms, tol);
    std::map<index_t, SumOutcome> entry;
    if (multinomial) {
        entry = power_multinomial(f, k, Window{lo, hi}, pol);
    } else {
        PowerTable table(f, maybe_series(finv), pol);
        for (index_t n = lo; n <= hi; ++n) entry.emplace(n, table.coeff(k, n));
    }
    json arr = json::array();
    for (const auto& [n, o] : entry) {
        json e;
        e["n"] = n;
        e["outcome"] = outcome_to_json(o);
        arr.push_back(e);
    }
    json j;
    j["k"] = k;
    j["coefficients"] = arr;
    return j.dump();
}

std::string py_compose(const std::string& g, const std::string& f, const std::string& finv,
                       index_t lo, index_t hi, int max_terms, double tol) {
    return report_to_json(compose(series_of(g), series_of(f), maybe_series(finv),
                                  Window{lo, hi}, policy_of(max_terms, tol)))
        .dump();
}

std::string py_check_rd(const std::string& f, const std::string& g, const std::string& h,
                        const std::string& hinv, index_t lo, index_t hi, int max_terms,
                        double tol) {
    return report_to_json(rd_law_check(series_of(f), series_of(g), series_of(h), Window{lo, hi},
                                       policy_of(max_terms, tol), maybe_series(hinv)))
        .dump();
}

std::string py_check_cr(const std::string& f, const std::string& g, const std::string& ginv,
                        index_t lo, index_t hi, int max_terms, double tol) {
    return report_to_json(cr_law_check(series_of(f), series_of(g), maybe_series(ginv),
                                       Window{lo, hi}, policy_of(max_terms, tol)))
        .dump();
}

std::string py_radii(const std::string& spec, int window) {
    return report_to_json(radii(series_of(spec), window)).dump();
}

std::string py_boundary(const std::string& spec, const std::vector<double>& a,
                        const std::vector<double>& b, int k_max, int max_terms, double tol) {
    std::optional<cplx> pa, pb;
    if (a.size() == 2) pa = cplx(a[0], a[1]);
    if (b.size() == 2) pb = cplx(b[0], b[1]);
    return report_to_json(boundary_check(series_of(spec), pa, pb, k_max,
                                         policy_of(max_terms, tol)))
        .dump();
}

std::string py_bilateral_sum(const std::string& spec, int max_terms, double tol) {
    Series f = series_of(spec);
    return outcome_to_json(bilateral_sum(f.coeffs, policy_of(max_terms, tol))).dump();
}

std::pair<double, double> py_eval(const std::string& spec, index_t n) {
    cplx v = series_of(spec).at(n);
    return {v.real(), v.imag()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "formal Laurent series engine (JSON-spec interface)";

    py::register_exception<InvalidInput>(m, "InvalidInput");
    py::register_exception<CapExceeded>(m, "CapExceeded");

    m.def("classify", &py_classify, py::arg("spec"));
    m.def("invert", &py_invert, py::arg("spec"), py::arg("method") = "auto",
          py::arg("window") = 32, py::arg("depths") = std::vector<int>{},
          py::arg("split") = "", py::arg("max_terms") = 4096, py::arg("tol") = 1e-10);
    m.def("multiply", &py_multiply, py::arg("a"), py::arg("b"), py::arg("lo") = -16,
          py::arg("hi") = 16, py::arg("max_terms") = 4096, py::arg("tol") = 1e-10);
    m.def("power", &py_power, py::arg("spec"), py::arg("k"), py::arg("lo") = -16,
          py::arg("hi") = 16, py::arg("multinomial") = false, py::arg("finv") = "",
          py::arg("max_terms") = 4096, py::arg("tol") = 1e-10);
    m.def("compose", &py_compose, py::arg("g"), py::arg("f"), py::arg("finv") = "",
          py::arg("lo") = -16, py::arg("hi") = 16, py::arg("max_terms") = 4096,
          py::arg("tol") = 1e-10);
    m.def("check_rd", &py_check_rd, py::arg("f"), py::arg("g"), py::arg("h"),
          py::arg("hinv") = "", py::arg("lo") = -8, py::arg("hi") = 8,
          py::arg("max_terms") = 4096, py::arg("tol") = 1e-10);
    m.def("check_cr", &py_check_cr, py::arg("f"), py::arg("g"), py::arg("ginv") = "",
          py::arg("lo") = -8, py::arg("hi") = 8, py::arg("max_terms") = 4096,
          py::arg("tol") = 1e-10);
    m.def("radii", &py_radii, py::arg("spec"), py::arg("window") = 128);
    m.def("boundary", &py_boundary, py::arg("spec"), py::arg("a") = std::vector<double>{},
          py::arg("b") = std::vector<double>{}, py::arg("k_max") = 8,
          py::arg("max_terms") = 4096, py::arg("tol") = 1e-10);
    m.def("bilateral_sum", &py_bilateral_sum, py::arg("spec"), py::arg("max_terms") = 4096,
          py::arg("tol") = 1e-10);
    m.def("eval_coeff", &py_eval, py::arg("spec"), py::arg("n"));
}

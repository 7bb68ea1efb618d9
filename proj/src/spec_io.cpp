#include "fls/spec_io.hpp"

#include <fstream>
#include <set>

namespace fls {

namespace {

cplx complex_from_json(const json& v, const std::string& field) {
    if (v.is_number()) return cplx(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return cplx(v[0].get<double>(), v[1].get<double>());
    throw InvalidInput("field '" + field + "' must be a number or an [re, im] pair");
}

const json& require(const json& doc, const std::string& field) {
    auto it = doc.find(field);
    if (it == doc.end()) throw InvalidInput("missing field '" + field + "'");
    return *it;
}

}  // namespace

Series parse_series_spec(const json& doc) {
    if (!doc.is_object()) throw InvalidInput("series spec must be a JSON object");
    std::string kind = require(doc, "kind").get<std::string>();
    json params = doc.value("params", json::object());
    std::string label = doc.value("label", kind);

    if (kind == "finite") {
        const json& coeffs = require(params, "coeffs");
        if (!coeffs.is_array()) throw InvalidInput("field 'coeffs' must be an array");
        std::vector<std::pair<index_t, cplx>> entries;
        std::set<index_t> seen;
        for (const json& item : coeffs) {
            if (!item.is_array() || item.size() != 3)
                throw InvalidInput("each 'coeffs' entry must be [index, re, im]");
            if (!item[0].is_number_integer())
                throw InvalidInput("coefficient index must be an integer");
            index_t n = item[0].get<index_t>();
            if (!seen.insert(n).second)
                throw InvalidInput("duplicate index " + std::to_string(n) + " in 'coeffs'");
            entries.emplace_back(n, cplx(item[1].get<double>(), item[2].get<double>()));
        }
        return {CoeffRule::finite(std::move(entries)), label};
    }
    if (kind == "constant")
        return {CoeffRule::constant(complex_from_json(require(params, "value"), "value")), label};
    if (kind == "arithmetic")
        return {CoeffRule::arithmetic(complex_from_json(require(params, "c0"), "c0"),
                                      complex_from_json(require(params, "r"), "r")),
                label};
    if (kind == "geometric")
        return {CoeffRule::geometric(complex_from_json(require(params, "c0"), "c0"),
                                     complex_from_json(require(params, "q"), "q")),
                label};
    if (kind == "regular_geometric")
        return {CoeffRule::regular_geometric(complex_from_json(require(params, "c0"), "c0"),
                                             complex_from_json(require(params, "q"), "q")),
                label};
    if (kind == "principal_geometric")
        return {CoeffRule::principal_geometric(complex_from_json(require(params, "c0"), "c0"),
                                               complex_from_json(require(params, "q"), "q")),
                label};
    if (kind == "regular_formula") {
        std::string name = require(params, "name").get<std::string>();
        return {formula_preset(name), label.empty() ? name : label};
    }
    if (kind == "sum") {
        const json& terms = require(params, "terms");
        if (!terms.is_array() || terms.empty())
            throw InvalidInput("field 'terms' must be a nonempty array");
        std::vector<std::pair<cplx, CoeffRule>> parts;
        for (const json& t : terms) {
            cplx scale(1.0, 0.0);
            const json* sub = &t;
            if (t.is_object() && t.contains("spec")) {
                if (t.contains("scale")) scale = complex_from_json(t["scale"], "scale");
                sub = &t["spec"];
            }
            parts.emplace_back(scale, parse_series_spec(*sub).coeffs);
        }
        return {combine(parts), label};
    }
    throw InvalidInput("unknown kind '" + kind + "'");
}

Series load_series_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open spec file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw InvalidInput("malformed JSON in " + path + ": " + e.what());
    }
    return parse_series_spec(doc);
}

SplitSequence parse_split_spec(const json& doc) {
    Series s = parse_series_spec(doc);
    return {s.coeffs, s.label};
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json outcome_to_json(const SumOutcome& o) {
    json j;
    switch (o.state) {
        case SumState::Converged: j["state"] = "Converged"; break;
        case SumState::Diverged: j["state"] = "Diverged"; break;
        case SumState::Inconclusive: j["state"] = "Inconclusive"; break;
    }
    if (o.value) j["value"] = complex_to_json(*o.value);
    j["depth"] = o.depth;
    if (o.residual) j["residual"] = *o.residual;
    if (o.reason) j["reason"] = *o.reason;
    return j;
}

json limit_to_json(const LimitEstimate& e) {
    json j;
    switch (e.state) {
        case LimitState::Stabilized: j["state"] = "Stabilized"; break;
        case LimitState::NotStabilized: j["state"] = "NotStabilized"; break;
        case LimitState::Blowup: j["state"] = "Blowup"; break;
    }
    if (e.value) j["value"] = complex_to_json(*e.value);
    json samples = json::array();
    for (const auto& [d, v] : e.samples) samples.push_back(json::array({d, complex_to_json(v)}));
    j["samples"] = samples;
    return j;
}

json window_to_json(Window w) { return json::array({w.lo, w.hi}); }

json coefficients_to_json(const Series& s, Window w) {
    json arr = json::array();
    for (index_t n = w.lo; n <= w.hi; ++n) {
        cplx v = s.at(n);
        if (v != cplx(0.0, 0.0)) arr.push_back(json::array({n, v.real(), v.imag()}));
    }
    return arr;
}

json report_to_json(const VerificationReport& rep) {
    json j;
    j["ok"] = rep.ok;
    j["max_defect"] = rep.max_defect;
    j["k0_defect"] = rep.k0_defect;
    j["window"] = window_to_json(rep.window);
    return j;
}

namespace {

json minor_trail_to_json(const MinorTrail& t) {
    json j;
    json samples = json::array();
    for (const auto& [d, v] : t.samples) samples.push_back(json::array({d, complex_to_json(v)}));
    j["samples"] = samples;
    j["limit"] = limit_to_json(t.limit);
    return j;
}

json homogeneous_to_json(const HomogeneousReport& h) {
    json j;
    j["exists"] = h.exists;
    if (!h.note.empty()) j["note"] = h.note;
    j["condition_defects"] = h.condition_defects;
    int stabilized = 0;
    for (const auto& e : h.ratio_limits)
        if (e.stabilized()) ++stabilized;
    j["ratio_limits_stabilized"] = stabilized;
    j["ratio_limits_total"] = static_cast<int>(h.ratio_limits.size());
    return j;
}

}  // namespace

json report_to_json(const InverseReport& rep, Window coeff_window) {
    json j;
    j["classification"] = classification_name(rep.classification);
    j["method"] = method_name(rep.method);
    j["parameter_arity"] = rep.parameter_arity;
    if (rep.witness) {
        json w;
        w["label"] = rep.witness->label;
        w["window"] = window_to_json(coeff_window);
        w["coefficients"] = coefficients_to_json(*rep.witness, coeff_window);
        j["witness"] = w;
    }
    if (!rep.homogeneous.empty()) {
        json dirs = json::array();
        for (const Series& h : rep.homogeneous) {
            json d;
            d["label"] = h.label;
            d["coefficients"] = coefficients_to_json(h, coeff_window);
            dirs.push_back(d);
        }
        j["homogeneous"] = dirs;
    }
    json ev;
    if (rep.evidence.w_minors) ev["w_minors"] = minor_trail_to_json(*rep.evidence.w_minors);
    if (rep.evidence.a1_minors) ev["a1_minors"] = minor_trail_to_json(*rep.evidence.a1_minors);
    if (rep.evidence.a2_minors) ev["a2_minors"] = minor_trail_to_json(*rep.evidence.a2_minors);
    ev["strictness_ok"] = rep.evidence.strictness_ok;
    if (rep.evidence.strictness_violation_index)
        ev["strictness_violation_index"] = *rep.evidence.strictness_violation_index;
    ev["stabilized_unknowns"] = rep.evidence.stabilized_unknowns;
    ev["total_unknowns"] = rep.evidence.total_unknowns;
    if (rep.evidence.verification) ev["verification"] = report_to_json(*rep.evidence.verification);
    if (rep.evidence.homogeneous) ev["homogeneous"] = homogeneous_to_json(*rep.evidence.homogeneous);
    if (rep.evidence.homogeneous_t)
        ev["homogeneous_t"] = homogeneous_to_json(*rep.evidence.homogeneous_t);
    if (!rep.evidence.notes.empty()) ev["notes"] = rep.evidence.notes;
    j["evidence"] = ev;
    return j;
}

json report_to_json(const ProductOutcome& rep) {
    json j;
    j["window"] = window_to_json(rep.window);
    j["all_converged"] = rep.all_converged();
    json per = json::array();
    for (const auto& [n, o] : rep.per_coefficient) {
        json e;
        e["n"] = n;
        e["outcome"] = outcome_to_json(o);
        per.push_back(e);
    }
    j["per_coefficient"] = per;
    if (rep.series) j["coefficients"] = coefficients_to_json(*rep.series, rep.window);
    return j;
}

json report_to_json(const CompositionReport& rep) {
    json j;
    j["window"] = window_to_json(rep.window);
    json mr;
    mr["lo"] = rep.m_lo_unbounded ? json("-inf") : json(rep.m_lo);
    mr["hi"] = rep.m_hi_unbounded ? json("+inf") : json(rep.m_hi);
    mr["censored"] = rep.bounds_censored;
    j["m_range"] = mr;
    if (rep.inverse_label) j["inverse_used"] = *rep.inverse_label;
    json per = json::array();
    for (const auto& [n, o] : rep.coefficients) {
        json e;
        e["n"] = n;
        e["outcome"] = outcome_to_json(o);
        per.push_back(e);
    }
    j["coefficients"] = per;
    return j;
}

json report_to_json(const LawCheckReport& rep) {
    json j;
    j["left_exists"] = rep.left_exists;
    j["right_exists"] = rep.right_exists;
    if (rep.failure_note) j["failure_note"] = *rep.failure_note;
    j["equal_where_both"] = rep.equal_where_both;
    j["max_equal_dev"] = rep.max_equal_dev;
    j["compared"] = rep.compared;
    auto side = [](const std::map<index_t, SumOutcome>& m) {
        json arr = json::array();
        for (const auto& [n, o] : m) {
            json e;
            e["n"] = n;
            e["outcome"] = outcome_to_json(o);
            arr.push_back(e);
        }
        return arr;
    };
    j["left"] = side(rep.left);
    j["right"] = side(rep.right);
    return j;
}

json report_to_json(const RadiiEstimate& rep) {
    json j;
    j["r"] = rep.r;
    j["R"] = rep.R_infinite ? json("inf") : json(rep.R);
    j["window"] = rep.window;
    j["exact_r"] = rep.exact_r;
    j["exact_R"] = rep.exact_R;
    j["regular_trail"] = rep.regular_trail;
    j["principal_trail"] = rep.principal_trail;
    return j;
}

json report_to_json(const BoundaryReport& rep) {
    json j;
    switch (rep.conclusion) {
        case BoundaryConclusion::ClosedOuter: j["conclusion"] = "ClosedOuter"; break;
        case BoundaryConclusion::ClosedInner: j["conclusion"] = "ClosedInner"; break;
        case BoundaryConclusion::ClosedAnnulus: j["conclusion"] = "ClosedAnnulus"; break;
        case BoundaryConclusion::NoConclusion: j["conclusion"] = "NoConclusion"; break;
    }
    j["k_max_certified"] = rep.k_max;
    j["radii"] = report_to_json(rep.radii_used);
    auto side = [](const std::map<int, SumOutcome>& m) {
        json arr = json::array();
        for (const auto& [k, o] : m) {
            json e;
            e["k"] = k;
            e["outcome"] = outcome_to_json(o);
            arr.push_back(e);
        }
        return arr;
    };
    j["regular_hypothesis"] = side(rep.regular_hypothesis);
    j["principal_hypothesis"] = side(rep.principal_hypothesis);
    json spots = json::array();
    for (const auto& [z, o] : rep.spot_checks) {
        json e;
        e["z"] = complex_to_json(z);
        e["outcome"] = outcome_to_json(o);
        spots.push_back(e);
    }
    j["absolute_spot_checks"] = spots;
    return j;
}

json report_to_json(const DisjointnessReport& rep) {
    json j;
    j["w_minors"] = minor_trail_to_json(rep.w_trail);
    j["a2_minors"] = minor_trail_to_json(rep.a2_trail);
    j["w_stabilized_nonzero"] = rep.w_nonzero;
    j["a2_stabilized_nonzero"] = rep.a2_nonzero;
    j["disjoint"] = rep.disjoint;
    json ratios = json::array();
    for (const auto& [d, v] : rep.ratio_trail) ratios.push_back(json::array({d, complex_to_json(v)}));
    j["minor_ratio_trail"] = ratios;
    return j;
}

std::string classification_name(InverseClass c) {
    switch (c) {
        case InverseClass::NoInverse: return "NoInverse";
        case InverseClass::Unique: return "Unique";
        case InverseClass::Family: return "Family";
        case InverseClass::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

std::string method_name(InverseMethod m) {
    switch (m) {
        case InverseMethod::Strict: return "Strict";
        case InverseMethod::Omega: return "Omega";
        case InverseMethod::ClosedForm: return "ClosedForm";
    }
    return "Strict";
}

}  // namespace fls

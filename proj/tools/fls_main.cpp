#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "fls/spec_io.hpp"

namespace {

using namespace fls;

struct Options {
    std::string spec, a, b, g, f, finv, split, out;
    std::vector<long long> window{-16, 16};
    int max_terms = 4096;
    double tol = 1e-10;
    double divergence_bound = 1e12;
    int stability_window = 16;
    std::string depths = "16,32,64,128,256,512";
    int kmax = 8;
    int k = 2;
    int nmax = 2;
    std::string method = "auto";
    std::vector<double> point_a, point_b;
};

SumPolicy policy_of(const Options& o) {
    SumPolicy p;
    p.max_terms = o.max_terms;
    p.tolerance = o.tol;
    p.divergence_bound = o.divergence_bound;
    p.stability_window = o.stability_window;
    p.validate();
    return p;
}

Window window_of(const Options& o) {
    if (o.window.size() != 2) throw InvalidInput("--window takes exactly two integers");
    Window w{o.window[0], o.window[1]};
    w.validate();
    return w;
}

std::vector<int> depths_of(const Options& o) {
    std::vector<int> ds;
    std::stringstream ss(o.depths);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) ds.push_back(std::stoi(tok));
    if (ds.empty()) throw InvalidInput("--depths must name at least one depth");
    return ds;
}

void emit(const json& body, const std::string& command, const Options& o) {
    json doc;
    doc["schema_version"] = 1;
    doc["command"] = command;
    for (auto& [k, v] : body.items()) doc[k] = v;
    std::string text = doc.dump(2) + "\n";
    if (!o.out.empty()) {
        std::ofstream file(o.out);
        if (!file) throw Error("cannot open output path: " + o.out);
        file << text;
    } else {
        std::cout << text;
    }
}

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--window", o.window, "coefficient window LO HI")->expected(2);
    cmd->add_option("--max-terms", o.max_terms, "truncation depth for infinite sums");
    cmd->add_option("--tol", o.tol, "stabilization tolerance");
    cmd->add_option("--divergence-bound", o.divergence_bound, "partial-sum blowup bound");
    cmd->add_option("--stability-window", o.stability_window, "trailing window for the Cauchy test");
    cmd->add_option("--depths", o.depths, "comma-separated truncation depth schedule");
    cmd->add_option("--out", o.out, "write the report to a file instead of stdout");
}

int run(int argc, char** argv) {
    CLI::App app{"formal Laurent series engine"};
    app.require_subcommand(1);
    Options o;

    auto* classify = app.add_subcommand("classify", "closed-form inverse classification");
    classify->add_option("--spec", o.spec, "series spec path")->required();
    add_common(classify, o);

    auto* invert = app.add_subcommand("invert", "inverse-series solver");
    invert->add_option("--spec", o.spec, "series spec path")->required();
    invert->add_option("--method", o.method, "strict|omega|auto");
    invert->add_option("--split", o.split, "splitting-sequence spec path (omega method)");
    add_common(invert, o);

    auto* multiply = app.add_subcommand("multiply", "windowed product");
    multiply->add_option("--a", o.a, "first factor spec path")->required();
    multiply->add_option("--b", o.b, "second factor spec path")->required();
    add_common(multiply, o);

    auto* power = app.add_subcommand("power", "k-th power on a window");
    power->add_option("--spec", o.spec, "series spec path")->required();
    power->add_option("--k", o.k, "exponent")->required();
    power->add_option("--finv", o.finv, "inverse spec path (negative exponents)");
    power->add_flag_callback("--multinomial", [] {}, "use the multinomial route");
    add_common(power, o);

    auto* compose_cmd = app.add_subcommand("compose", "composition g o f");
    compose_cmd->add_option("--g", o.g, "outer series spec path")->required();
    compose_cmd->add_option("--f", o.f, "inner series spec path")->required();
    compose_cmd->add_option("--finv", o.finv, "inner inverse spec path");
    add_common(compose_cmd, o);

    auto* rd = app.add_subcommand("check-rd", "right distributive law probe");
    rd->add_option("--a", o.a, "left factor f spec path")->required();
    rd->add_option("--b", o.b, "left factor g spec path")->required();
    rd->add_option("--g", o.g, "inner series h spec path")->required();
    rd->add_option("--finv", o.finv, "inverse of h (for principal-part outers)");
    add_common(rd, o);

    auto* cr = app.add_subcommand("check-cr", "chain rule probe");
    cr->add_option("--f", o.f, "outer series spec path")->required();
    cr->add_option("--g", o.g, "inner series spec path")->required();
    cr->add_option("--finv", o.finv, "inverse of the inner series");
    add_common(cr, o);

    auto* radii_cmd = app.add_subcommand("radii", "annulus-of-convergence estimate");
    radii_cmd->add_option("--spec", o.spec, "series spec path")->required();
    radii_cmd->add_option("--probe-window", o.kmax, "root-test window (default 128)");
    add_common(radii_cmd, o);

    auto* boundary = app.add_subcommand("boundary", "boundary-convergence hypotheses");
    boundary->add_option("--spec", o.spec, "series spec path")->required();
    boundary->add_option("--point-a", o.point_a, "outer boundary point RE IM")->expected(2);
    boundary->add_option("--point-b", o.point_b, "inner boundary point RE IM")->expected(2);
    boundary->add_option("--kmax", o.kmax, "highest derivative order tested");
    add_common(boundary, o);

    CLI11_PARSE(app, argc, argv);

    SumPolicy pol = policy_of(o);

    if (classify->parsed()) {
        Series f = load_series_spec(o.spec);
        json body;
        body["input"] = f.label;
        if (auto rep = classify_special(f)) {
            body.update(report_to_json(*rep, window_of(o)));
        } else {
            body["classification"] = "Undetermined";
            body["method"] = "ClosedForm";
            body["note"] = "no closed-form pattern matched";
        }
        emit(body, "classify", o);
        return 0;
    }
    if (invert->parsed()) {
        Series f = load_series_spec(o.spec);
        SolveConfig cfg;
        cfg.policy = pol;
        cfg.depths = depths_of(o);
        Window w = window_of(o);
        cfg.window = std::max(std::abs(w.lo), std::abs(w.hi));
        std::optional<SplitSequence> split;
        if (!o.split.empty()) {
            std::ifstream in(o.split);
            if (!in) throw InvalidInput("cannot open split spec: " + o.split);
            json doc;
            in >> doc;
            split = parse_split_spec(doc);
        }
        InverseReport rep;
        if (o.method == "strict")
            rep = invert_strict(f, cfg);
        else if (o.method == "omega")
            rep = invert_omega(f, split.value_or(SplitSequence::zero()), cfg);
        else if (o.method == "auto")
            rep = invert_auto(f, cfg, split);
        else
            throw InvalidInput("--method must be strict, omega or auto");
        json body;
        body["input"] = f.label;
        body.update(report_to_json(rep, Window{-cfg.window, cfg.window}));
        emit(body, "invert", o);
        return 0;
    }
    if (multiply->parsed()) {
        Series fa = load_series_spec(o.a);
        Series fb = load_series_spec(o.b);
        ProductOutcome rep = product(fa, fb, window_of(o), pol);
        json body;
        body["inputs"] = json::array({fa.label, fb.label});
        body.update(report_to_json(rep));
        emit(body, "multiply", o);
        return 0;
    }
    if (power->parsed()) {
        Series f = load_series_spec(o.spec);
        Window w = window_of(o);
        json body;
        body["input"] = f.label;
        body["k"] = o.k;
        std::map<index_t, SumOutcome> entry;
        if (power->count("--multinomial")) {
            entry = power_multinomial(f, o.k, w, pol);
            body["route"] = "multinomial";
        } else if (o.k >= 0 && o.finv.empty()) {
            entry = power_oracle(f, o.k, w, pol);
            body["route"] = "product recursion";
        } else {
            std::optional<Series> finv;
            if (!o.finv.empty()) finv = load_series_spec(o.finv);
            PowerTable table(f, finv, pol);
            for (index_t n = w.lo; n <= w.hi; ++n) entry.emplace(n, table.coeff(o.k, n));
            body["route"] = "product recursion";
        }
        json per = json::array();
        for (const auto& [n, out] : entry) {
            json e;
            e["n"] = n;
            e["outcome"] = outcome_to_json(out);
            per.push_back(e);
        }
        body["window"] = window_to_json(w);
        body["coefficients"] = per;
        emit(body, "power", o);
        return 0;
    }
    if (compose_cmd->parsed()) {
        Series g = load_series_spec(o.g);
        Series f = load_series_spec(o.f);
        std::optional<Series> finv;
        if (!o.finv.empty()) finv = load_series_spec(o.finv);
        CompositionReport rep = compose(g, f, finv, window_of(o), pol);
        json body;
        body["outer"] = g.label;
        body["inner"] = f.label;
        body.update(report_to_json(rep));
        emit(body, "compose", o);
        return 0;
    }
    if (rd->parsed()) {
        Series f = load_series_spec(o.a);
        Series g = load_series_spec(o.b);
        Series h = load_series_spec(o.g);
        std::optional<Series> hinv;
        if (!o.finv.empty()) hinv = load_series_spec(o.finv);
        LawCheckReport rep = rd_law_check(f, g, h, window_of(o), pol, hinv);
        json body;
        body["inputs"] = json::array({f.label, g.label, h.label});
        body.update(report_to_json(rep));
        emit(body, "check-rd", o);
        return 0;
    }
    if (cr->parsed()) {
        Series f = load_series_spec(o.f);
        Series g = load_series_spec(o.g);
        std::optional<Series> ginv;
        if (!o.finv.empty()) ginv = load_series_spec(o.finv);
        LawCheckReport rep = cr_law_check(f, g, ginv, window_of(o), pol);
        json body;
        body["inputs"] = json::array({f.label, g.label});
        body.update(report_to_json(rep));
        emit(body, "check-cr", o);
        return 0;
    }
    if (radii_cmd->parsed()) {
        Series f = load_series_spec(o.spec);
        int probe = radii_cmd->count("--probe-window") ? o.kmax : 128;
        RadiiEstimate rep = radii(f, probe);
        json body;
        body["input"] = f.label;
        body.update(report_to_json(rep));
        emit(body, "radii", o);
        return 0;
    }
    if (boundary->parsed()) {
        Series f = load_series_spec(o.spec);
        std::optional<cplx> pa, pb;
        if (o.point_a.size() == 2) pa = cplx(o.point_a[0], o.point_a[1]);
        if (o.point_b.size() == 2) pb = cplx(o.point_b[0], o.point_b[1]);
        BoundaryReport rep = boundary_check(f, pa, pb, o.kmax, pol);
        json body;
        body["input"] = f.label;
        body.update(report_to_json(rep));
        emit(body, "boundary", o);
        return 0;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const fls::InvalidInput& e) {
        std::cerr << "rejected input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

#include "fls/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fls {

namespace {

// Thrown inside a term callback when an inner sum needed by the term did not
// converge; the outer sum inherits the failure.
struct InnerFailure {
    SumOutcome inner;
    index_t at;
};

SumOutcome inherit_failure(const InnerFailure& f, const std::string& what) {
    std::string why = what + " at offset " + std::to_string(f.at) + ": " +
                      f.inner.reason.value_or("did not converge");
    if (f.inner.state == SumState::Diverged)
        return SumOutcome::make_diverged(why, f.inner.depth);
    return SumOutcome::make_inconclusive(f.inner.depth, why);
}

// Bilateral policy sum of term(m), m over Z, where term may throw InnerFailure.
SumOutcome bilateral_term_sum(const std::function<cplx(index_t)>& term, const SumPolicy& pol,
                              const std::string& inner_name) {
    try {
        SumOutcome pos = sum_one_sided([&term](index_t i) { return term(i); }, pol);
        SumOutcome neg = sum_one_sided([&term](index_t i) { return term(-1 - i); }, pol);
        return combine_one_sided(pos, neg);
    } catch (const InnerFailure& f) {
        return inherit_failure(f, inner_name);
    }
}

bool exactly_real(cplx z) { return z.imag() == 0.0; }

}  // namespace

Series Series::monomial(index_t n, cplx c, std::string label) {
    return {CoeffRule::finite({{n, c}}), std::move(label)};
}

Series Series::regular_part() const {
    CoeffRule base = coeffs;
    if (auto fin = coeffs.finite_entries()) {
        std::vector<std::pair<index_t, cplx>> keep;
        for (const auto& [n, v] : *fin)
            if (n >= 0) keep.emplace_back(n, v);
        return {CoeffRule::finite(std::move(keep)), label + "^+"};
    }
    Support s = Support::intersect(coeffs.support(), Support::from(0));
    return {CoeffRule::generator([base](index_t n) { return n >= 0 ? base(n) : cplx(0.0, 0.0); }, s),
            label + "^+"};
}

Series Series::principal_part() const {
    CoeffRule base = coeffs;
    if (auto fin = coeffs.finite_entries()) {
        std::vector<std::pair<index_t, cplx>> keep;
        for (const auto& [n, v] : *fin)
            if (n <= -1) keep.emplace_back(n, v);
        return {CoeffRule::finite(std::move(keep)), label + "^-"};
    }
    Support s = Support::intersect(coeffs.support(), Support::upto(-1));
    return {CoeffRule::generator([base](index_t n) { return n <= -1 ? base(n) : cplx(0.0, 0.0); }, s),
            label + "^-"};
}

Series linear_combine(const std::vector<std::pair<cplx, Series>>& terms) {
    if (terms.empty()) throw InvalidInput("linear_combine: empty term list");
    std::vector<std::pair<cplx, CoeffRule>> rules;
    rules.reserve(terms.size());
    for (const auto& [c, s] : terms) rules.emplace_back(c, s.coeffs);
    return {combine(rules), "combination"};
}

SumOutcome dot(const Series& f, const Series& g, const SumPolicy& policy) {
    return bilateral_sum(f.coeffs.pointwise(g.coeffs), policy);
}

Series shift(const Series& f, index_t k) {
    return {f.coeffs.shifted(k), "S_" + std::to_string(k) + "(" + f.label + ")"};
}

Series reverse(const Series& f) { return {f.coeffs.reversed(), f.label + "~"}; }

Series derivative(const Series& f) { return {f.coeffs.derived(), f.label + "'"}; }

SumOutcome product_coefficient(const Series& f, const Series& g, index_t k,
                               const SumPolicy& policy) {
    // d_k = sum_m g_m f_{k-m}; the term rule keeps finite support exact
    CoeffRule term = g.coeffs.pointwise(f.coeffs.reversed().shifted(k));
    return bilateral_sum(term, policy);
}

ProductOutcome product(const Series& f, const Series& g, Window window, const SumPolicy& policy) {
    window.validate();
    ProductOutcome out;
    out.window = window;
    bool all_ok = true;
    std::vector<std::pair<index_t, cplx>> entries;
    for (index_t k = window.lo; k <= window.hi; ++k) {
        SumOutcome o = product_coefficient(f, g, k, policy);
        if (o.converged())
            entries.emplace_back(k, *o.value);
        else
            all_ok = false;
        out.per_coefficient.emplace(k, std::move(o));
    }
    if (all_ok)
        out.series = Series{CoeffRule::finite(std::move(entries)),
                            "(" + f.label + ")(" + g.label + ")"};
    return out;
}

VerificationReport verify_inverse(const Series& f, const Series& g, Window window,
                                  const SumPolicy& policy, double tol) {
    window.validate();
    if (window.lo > 0 || window.hi < 0)
        throw InvalidInput("verify_inverse: window must contain index 0");
    VerificationReport rep;
    rep.window = window;
    rep.ok = true;
    for (index_t n = window.lo; n <= window.hi; ++n) {
        SumOutcome o = product_coefficient(f, g, n, policy);
        if (!o.converged()) {
            rep.ok = false;
            if (n == 0) rep.k0_defect = std::numeric_limits<double>::infinity();
            rep.max_defect = std::numeric_limits<double>::infinity();
        } else {
            cplx target = n == 0 ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
            double defect = std::abs(*o.value - target);
            rep.max_defect = std::max(rep.max_defect, defect);
            if (n == 0) rep.k0_defect = defect;
            if (defect > tol) rep.ok = false;
        }
        rep.detail.emplace(n, std::move(o));
    }
    return rep;
}

AssociativityReport associativity_probe(const Series& f, const Series& g, const Series& h,
                                        Window window, const SumPolicy& policy) {
    window.validate();
    AssociativityReport rep;
    rep.window = window;
    rep.tol = std::max(policy.tolerance * 100.0, 1e-8);

    std::map<index_t, SumOutcome> fg_cache, gh_cache;
    auto inner = [&policy](std::map<index_t, SumOutcome>& cache, const Series& a, const Series& b,
                           index_t t) -> const SumOutcome& {
        auto it = cache.find(t);
        if (it == cache.end())
            it = cache.emplace(t, product_coefficient(a, b, t, policy)).first;
        return it->second;
    };

    for (index_t n = window.lo; n <= window.hi; ++n) {
        AssociativityReport::PerIndex per;

        // absolute convergence of the double family over expanding squares
        {
            OneSidedAccumulator acc(policy);
            for (index_t K = 0; K < policy.max_terms; ++K) {
                double ring = 0.0;
                for (index_t s = -K; s <= K; ++s) {
                    for (index_t t = -K; t <= K; ++t) {
                        if (std::max(std::abs(s), std::abs(t)) != K) continue;
                        ring += std::abs(f.at(s) * g.at(t - s) * h.at(n - t));
                    }
                }
                if (acc.push(cplx(ring, 0.0))) break;
            }
            per.abs_convergence = acc.finish();
        }

        per.left = bilateral_term_sum(
            [&](index_t t) -> cplx {
                cplx hh = h.at(n - t);
                if (hh == cplx(0.0, 0.0)) return {0.0, 0.0};
                const SumOutcome& in = inner(fg_cache, f, g, t);
                if (!in.converged()) throw InnerFailure{in, t};
                return *in.value * hh;
            },
            policy, "(fg) coefficient");

        per.right = bilateral_term_sum(
            [&](index_t s) -> cplx {
                cplx ff = f.at(s);
                if (ff == cplx(0.0, 0.0)) return {0.0, 0.0};
                const SumOutcome& in = inner(gh_cache, g, h, n - s);
                if (!in.converged()) throw InnerFailure{in, n - s};
                return ff * *in.value;
            },
            policy, "(gh) coefficient");

        per.both_converged = per.left.converged() && per.right.converged();
        if (per.both_converged) {
            per.deviation = std::abs(*per.left.value - *per.right.value);
            per.equal = per.deviation <= rep.tol * std::max(1.0, std::abs(*per.left.value));
        }
        rep.per_n.emplace(n, std::move(per));
    }
    return rep;
}

bool sign_property_check(const Series& f, const Series& g, Window window,
                         const SumPolicy& policy) {
    window.validate();
    int nonzero = 0;
    for (index_t n = window.lo; n <= window.hi; ++n) {
        cplx c = f.at(n);
        if (!exactly_real(c))
            throw InvalidInput("sign_property_check: f must have real coefficients");
        if (c.real() < 0.0)
            throw InvalidInput("sign_property_check: f must have nonnegative coefficients");
        if (c.real() != 0.0) ++nonzero;
        if (!exactly_real(g.at(n)))
            throw InvalidInput("sign_property_check: g must have real coefficients");
    }
    if (nonzero < 2)
        throw InvalidInput("sign_property_check: f needs at least two nonzero coefficients");
    VerificationReport vr =
        verify_inverse(f, g, window, policy, std::max(policy.tolerance * 100.0, 1e-8));
    if (!vr.ok) throw InvalidInput("sign_property_check: g is not a verified inverse of f");

    auto scan = [&g](index_t lo, index_t hi) {
        for (index_t n = lo; n <= hi; ++n)
            if (g.at(n).real() < 0.0) return true;
        return false;
    };
    if (scan(window.lo, window.hi)) return true;
    // widen once before reporting
    return scan(2 * window.lo, window.lo - 1) || scan(window.hi + 1, 2 * window.hi);
}

TailLimitReport tail_limit_check(const Series& f, const Series& g, int n_max, int k_max) {
    if (n_max < 1 || k_max < 1) throw InvalidInput("tail_limit_check: grid depths must be >= 1");
    TailLimitReport rep;
    for (int d = 1; d < n_max; d *= 2) rep.n_grid.push_back(d);
    rep.n_grid.push_back(n_max);
    for (int d = 1; d < k_max; d *= 2) rep.k_grid.push_back(d);
    rep.k_grid.push_back(k_max);

    rep.table.assign(rep.n_grid.size(), std::vector<cplx>(rep.k_grid.size()));
    for (size_t j = 0; j < rep.k_grid.size(); ++j) {
        int k = rep.k_grid[j];
        cplx running(0.0, 0.0);
        size_t gi = 0;
        for (int s = 1; s <= n_max && gi < rep.n_grid.size(); ++s) {
            cplx row(0.0, 0.0);
            for (index_t m = -k; m <= k; ++m) row += g.at(m) * f.at(s - m);
            running += row;
            while (gi < rep.n_grid.size() && rep.n_grid[gi] == s) {
                rep.table[gi][j] = running;
                ++gi;
            }
        }
    }

    rep.corner = rep.table.back().back();
    rep.corner_defect = std::abs(rep.corner);
    size_t diag = std::min(rep.n_grid.size(), rep.k_grid.size());
    for (size_t i = 0; i < diag; ++i) {
        cplx v = rep.table[rep.n_grid.size() - diag + i][rep.k_grid.size() - diag + i];
        int depth = std::min(rep.n_grid[rep.n_grid.size() - diag + i],
                             rep.k_grid[rep.k_grid.size() - diag + i]);
        rep.diagonal_trail.emplace_back(depth, v);
        rep.max_diagonal_defect = std::max(rep.max_diagonal_defect, std::abs(v));
    }
    return rep;
}

}  // namespace fls

#include "fls/converge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fls {

namespace {

// coeff * point^e without intermediate overflow/underflow: magnitudes are
// combined in log scale, phases exactly
cplx scaled_power_term(cplx coeff, cplx point, index_t e) {
    double ac = std::abs(coeff);
    if (ac == 0.0) return {0.0, 0.0};
    double ap = std::abs(point);
    if (ap == 0.0) return e == 0 ? coeff : cplx(0.0, 0.0);
    double lmag = std::log(ac) + static_cast<double>(e) * std::log(ap);
    double phase = std::arg(coeff) + static_cast<double>(e) * std::arg(point);
    if (lmag > 700.0) lmag = 700.0;  // clamp: still far beyond any divergence bound
    if (lmag < -700.0) return {0.0, 0.0};
    return std::polar(std::exp(lmag), phase);
}

double root_sample(double magnitude, index_t n) {
    if (magnitude == 0.0) return 0.0;
    return std::pow(magnitude, 1.0 / static_cast<double>(n));
}

// falling factorial n (n-1) ... (n-k+1)
double falling(index_t n, int k) {
    double acc = 1.0;
    for (int i = 0; i < k; ++i) acc *= static_cast<double>(n - i);
    return acc;
}

}  // namespace

RadiiEstimate radii(const Series& f, int window) {
    if (window < 8) throw InvalidInput("radii: window must be >= 8");
    RadiiEstimate est;
    est.window = window;
    est.regular_trail.reserve(window);
    est.principal_trail.reserve(window);
    for (index_t n = 1; n <= window; ++n) {
        est.regular_trail.push_back(root_sample(std::abs(f.at(n)), n));
        est.principal_trail.push_back(root_sample(std::abs(f.at(-n)), n));
    }

    switch (f.coeffs.kind()) {
        case RuleKind::FiniteSupport:
            est.r = 0.0;
            est.R_infinite = true;
            est.exact_r = est.exact_R = true;
            return est;
        case RuleKind::ConstantAll:
        case RuleKind::Arithmetic:
            est.r = 1.0;
            est.R = 1.0;
            est.exact_r = est.exact_R = true;
            return est;
        case RuleKind::Geometric: {
            double aq = std::abs(f.coeffs.param_ratio());
            est.R = 1.0 / aq;
            est.r = 1.0 / aq;  // |a_{-n}|^{1/n} -> 1/|q|
            est.exact_r = est.exact_R = true;
            return est;
        }
        case RuleKind::RegularGeometric: {
            double aq = std::abs(f.coeffs.param_ratio());
            est.R = 1.0 / aq;
            est.r = 0.0;
            est.exact_r = est.exact_R = true;
            return est;
        }
        case RuleKind::PrincipalGeometric: {
            double aq = std::abs(f.coeffs.param_ratio());
            est.r = aq;
            est.R_infinite = true;
            est.exact_r = est.exact_R = true;
            return est;
        }
        case RuleKind::Generator: {
            double reg = 0.0, pri = 0.0;
            for (index_t n = window / 2; n <= window; ++n) {
                reg = std::max(reg, est.regular_trail[n - 1]);
                pri = std::max(pri, est.principal_trail[n - 1]);
            }
            est.r = pri;
            if (reg == 0.0)
                est.R_infinite = true;
            else
                est.R = 1.0 / reg;
            Support s = f.coeffs.support();
            // a genuinely bounded tail makes the corresponding radius exact
            if (!s.hi_unbounded && s.hi <= window) {
                est.R_infinite = true;
                est.R = 0.0;
                est.exact_R = true;
            }
            if (!s.lo_unbounded && -s.lo <= window) {
                est.r = 0.0;
                est.exact_r = true;
            }
            return est;
        }
    }
    return est;
}

DerivativeRadiiReport derivative_radii_check(const Series& f, int window) {
    DerivativeRadiiReport rep;
    rep.base = radii(f, window);
    rep.deriv = radii(derivative(f), window);
    rep.rel_tol = 12.8 / static_cast<double>(window);  // 10% at window 128

    auto close = [&rep](double x, double y) {
        return std::abs(x - y) <= rep.rel_tol * std::max({x, y, 1e-12});
    };
    rep.r_defect = std::abs(rep.base.r - rep.deriv.r);
    rep.r_match = close(rep.base.r, rep.deriv.r);
    if (rep.base.R_infinite || rep.deriv.R_infinite) {
        rep.R_match = rep.base.R_infinite == rep.deriv.R_infinite;
        rep.R_defect = rep.R_match ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
        rep.R_defect = std::abs(rep.base.R - rep.deriv.R);
        rep.R_match = close(rep.base.R, rep.deriv.R);
    }
    return rep;
}

SumOutcome absolute_convergence_at(const Series& f, cplx z, const SumPolicy& policy) {
    double az = std::abs(z);
    CoeffRule rule = f.coeffs;
    CoeffRule abs_terms = CoeffRule::generator(
        [rule, az](index_t n) {
            cplx t = scaled_power_term(cplx(std::abs(rule(n)), 0.0), cplx(az, 0.0), n);
            return cplx(std::abs(t), 0.0);
        },
        Support::all());
    return bilateral_sum(abs_terms, policy);
}

BoundaryReport boundary_check(const Series& g, std::optional<cplx> a, std::optional<cplx> b,
                              int k_max, const SumPolicy& policy) {
    if (k_max < 0) throw InvalidInput("boundary_check: k_max must be nonnegative");
    if (!a && !b) throw InvalidInput("boundary_check: at least one boundary point is required");
    BoundaryReport rep;
    rep.k_max = k_max;
    rep.radii_used = radii(g, 128);

    if (a && !rep.radii_used.R_infinite) {
        // with R infinite the regular part behaves like an entire function and
        // any outer point is admissible
        double target = rep.radii_used.R;
        if (std::abs(std::abs(*a) - target) > 0.01 * std::max(target, 1e-300))
            throw InvalidInput("boundary_check: |a| must lie within 1% of the estimated R");
    }
    if (b) {
        double target = rep.radii_used.r;
        if (target == 0.0)
            throw InvalidInput("boundary_check: the inner check requires r > 0");
        if (std::abs(std::abs(*b) - target) > 0.01 * target)
            throw InvalidInput("boundary_check: |b| must lie within 1% of the estimated r");
    }

    // Geometric tails are folded into the evaluation point analytically:
    // coefficients like q^n underflow long before the products q^n z^n do.
    RuleKind kind = g.coeffs.kind();
    bool geom = kind == RuleKind::Geometric || kind == RuleKind::RegularGeometric ||
                kind == RuleKind::PrincipalGeometric;
    cplx gq = geom ? g.coeffs.param_ratio() : cplx(0.0, 0.0);
    cplx gc = geom ? g.coeffs.param_c0() : cplx(0.0, 0.0);

    bool outer_ok = a.has_value();
    if (a) {
        for (int k = 0; k <= k_max; ++k) {
            // (g^+)^(k)(a) = sum_{n>=k} n(n-1)...(n-k+1) a_n a^{n-k}
            CoeffRule rule = g.coeffs;
            cplx point = *a;
            bool reg_geom = kind == RuleKind::Geometric || kind == RuleKind::RegularGeometric;
            cplx front = reg_geom ? gc / scaled_power_term(cplx(1.0, 0.0), point, k)
                                  : cplx(0.0, 0.0);
            SumOutcome o = sum_one_sided(
                [rule, point, k, reg_geom, front, gq](index_t i) {
                    index_t n = i + k;
                    if (reg_geom) return falling(n, k) * scaled_power_term(front, gq * point, n);
                    cplx base = rule(n);
                    if (base == cplx(0.0, 0.0)) return cplx(0.0, 0.0);
                    return falling(n, k) * scaled_power_term(base, point, n - k);
                },
                policy);
            if (!o.converged()) outer_ok = false;
            rep.regular_hypothesis.emplace(k, std::move(o));
        }
    }

    bool inner_ok = b.has_value();
    if (b) {
        // g^-(z) = h(1/z) with h(w) = sum_{n>=1} a_{-n} w^n; test h^{(k)}(1/b)
        cplx w = cplx(1.0, 0.0) / *b;
        for (int k = 0; k <= k_max; ++k) {
            CoeffRule rule = g.coeffs;
            // a_{-n} = gc q^n (principal kind) or gc q^{-n} (bilateral kind)
            bool pri_geom = kind == RuleKind::Geometric || kind == RuleKind::PrincipalGeometric;
            cplx ratio(0.0, 0.0), front(0.0, 0.0);
            if (pri_geom) {
                ratio = kind == RuleKind::PrincipalGeometric ? gq * w : w / gq;
                front = gc / scaled_power_term(cplx(1.0, 0.0), w, k);
            }
            SumOutcome o = sum_one_sided(
                [rule, w, k, pri_geom, front, ratio](index_t i) {
                    index_t n = i + std::max<index_t>(k, 1);
                    if (pri_geom) return falling(n, k) * scaled_power_term(front, ratio, n);
                    cplx base = rule(-n);
                    if (base == cplx(0.0, 0.0)) return cplx(0.0, 0.0);
                    return falling(n, k) * scaled_power_term(base, w, n - k);
                },
                policy);
            if (!o.converged()) inner_ok = false;
            rep.principal_hypothesis.emplace(k, std::move(o));
        }
    }

    if (outer_ok && inner_ok)
        rep.conclusion = BoundaryConclusion::ClosedAnnulus;
    else if (outer_ok)
        rep.conclusion = BoundaryConclusion::ClosedOuter;
    else if (inner_ok)
        rep.conclusion = BoundaryConclusion::ClosedInner;
    else
        rep.conclusion = BoundaryConclusion::NoConclusion;

    // absolute-convergence spot checks at the supplied boundary points
    if (a) rep.spot_checks.emplace_back(*a, absolute_convergence_at(g, *a, policy));
    if (b && std::abs(*b) > 0.0)
        rep.spot_checks.emplace_back(*b, absolute_convergence_at(g, *b, policy));
    return rep;
}

}  // namespace fls

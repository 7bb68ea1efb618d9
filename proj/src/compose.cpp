#include "fls/compose.hpp"

#include <algorithm>
#include <cmath>

#include "fls/inverse.hpp"

namespace fls {

namespace {

cplx local_ipow(cplx base, index_t e) {
    if (e < 0) return cplx(1.0, 0.0) / local_ipow(base, -e);
    cplx acc(1.0, 0.0);
    cplx b = base;
    while (e > 0) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

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

SumOutcome poisoned_bilateral(const std::function<cplx(index_t)>& term, const SumPolicy& pol,
                              const std::string& what) {
    try {
        SumOutcome pos = sum_one_sided([&term](index_t i) { return term(i); }, pol);
        SumOutcome neg = sum_one_sided([&term](index_t i) { return term(-1 - i); }, pol);
        return combine_one_sided(pos, neg);
    } catch (const InnerFailure& f) {
        return inherit_failure(f, what);
    } catch (const CapExceeded& c) {
        return SumOutcome::make_inconclusive(0, std::string("evaluation cap: ") + c.what());
    }
}

}  // namespace

DegBounds deg_bounds(const Series& g, Window probe) {
    probe.validate();
    DegBounds b;
    switch (g.coeffs.kind()) {
        case RuleKind::FiniteSupport: {
            auto entries = *g.coeffs.finite_entries();
            for (const auto& [n, v] : entries) {
                if (n >= 0) b.plus = std::max(b.plus, n);
                if (n <= -1) b.minus = std::max(b.minus, -n);
            }
            return b;
        }
        case RuleKind::ConstantAll:
        case RuleKind::Arithmetic:
        case RuleKind::Geometric:
            b.plus_unbounded = b.minus_unbounded = true;
            return b;
        case RuleKind::RegularGeometric:
            b.plus_unbounded = true;
            return b;
        case RuleKind::PrincipalGeometric:
            b.minus_unbounded = true;
            return b;
        case RuleKind::Generator: {
            Support s = g.coeffs.support();
            if (s.hi_unbounded) {
                b.plus_unbounded = true;
            } else {
                index_t top = s.hi;
                if (top > probe.hi) {
                    top = probe.hi;
                    b.censored = true;
                }
                for (index_t n = 0; n <= top; ++n)
                    if (g.at(n) != cplx(0.0, 0.0)) b.plus = n;
            }
            if (s.lo_unbounded) {
                b.minus_unbounded = true;
            } else {
                index_t bottom = s.lo;
                if (bottom < probe.lo) {
                    bottom = probe.lo;
                    b.censored = true;
                }
                for (index_t n = -1; n >= bottom; --n)
                    if (g.at(n) != cplx(0.0, 0.0)) b.minus = -n;
            }
            return b;
        }
    }
    return b;
}

PowerTable::PowerTable(Series base, std::optional<Series> inverse, SumPolicy policy)
    : base_(std::move(base)), inverse_(std::move(inverse)), pol_(policy) {
    pol_.validate();
    fin_ = base_.coeffs.finite_entries();
    if (fin_ && fin_->size() == 1) {
        monomial_ = true;
        mono_deg_ = fin_->front().first;
        mono_coeff_ = fin_->front().second;
    }
}

SumOutcome PowerTable::coeff(index_t k, index_t n) const {
    if (k == 0)
        return SumOutcome::make_converged(n == 0 ? cplx(1.0, 0.0) : cplx(0.0, 0.0), 0, 0.0);
    if (k == 1) return SumOutcome::make_converged(base_.at(n), 0, 0.0);
    if (k > 0 && monomial_) {
        cplx v = n == k * mono_deg_ ? local_ipow(mono_coeff_, k) : cplx(0.0, 0.0);
        return SumOutcome::make_converged(v, 0, 0.0);
    }
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = memo_.find({k, n});
        if (it != memo_.end()) return it->second;
    }
    SumOutcome out = compute(k, n);
    std::lock_guard<std::mutex> lock(mu_);
    return memo_.emplace(std::make_pair(k, n), std::move(out)).first->second;
}

SumOutcome PowerTable::compute(index_t k, index_t n) const {
    if (k < 0) {
        if (!inverse_)
            throw InvalidInput("negative power requested without an inverse series");
        {
            std::lock_guard<std::mutex> lock(mu_);
            if (!inv_table_)
                inv_table_ = std::make_shared<PowerTable>(*inverse_, base_, pol_);
        }
        return inv_table_->coeff(-k, n);
    }
    if (fin_ && k > 512) throw CapExceeded("power recursion cap (512) for finite-support base");
    if (!fin_ && k > 64) throw CapExceeded("power recursion cap (64) for general base");

    if (fin_) {
        cplx acc(0.0, 0.0);
        double resid = 0.0;
        int depth = 0;
        bool diverged = false, inconclusive = false;
        std::string why;
        for (const auto& [m, v] : *fin_) {
            SumOutcome inner = coeff(k - 1, n - m);
            depth = std::max(depth, inner.depth);
            if (!inner.converged()) {
                if (inner.diverged()) diverged = true;
                else inconclusive = true;
                if (why.empty())
                    why = "power factor coefficient at " + std::to_string(n - m) + ": " +
                          inner.reason.value_or("did not converge");
                continue;
            }
            acc += v * *inner.value;
            resid += std::abs(v) * inner.residual.value_or(0.0);
        }
        if (diverged) return SumOutcome::make_diverged(why, depth);
        if (inconclusive) return SumOutcome::make_inconclusive(depth, why);
        return SumOutcome::make_converged(acc, depth, resid);
    }

    const CoeffRule rule = base_.coeffs;
    return poisoned_bilateral(
        [this, &rule, k, n](index_t m) -> cplx {
            cplx b = rule(m);
            if (b == cplx(0.0, 0.0)) return {0.0, 0.0};
            SumOutcome inner = coeff(k - 1, n - m);
            if (!inner.converged()) throw InnerFailure{inner, m};
            return b * *inner.value;
        },
        pol_, "power factor coefficient");
}

std::map<index_t, SumOutcome> power_oracle(const Series& f, int k, Window window,
                                           const SumPolicy& policy) {
    if (k < 0) throw InvalidInput("power_oracle: k must be nonnegative");
    window.validate();
    PowerTable table(f, std::nullopt, policy);
    std::map<index_t, SumOutcome> out;
    for (index_t n = window.lo; n <= window.hi; ++n) out.emplace(n, table.coeff(k, n));
    return out;
}

// ---------------------------------------------------------------------------
// multinomial route
// ---------------------------------------------------------------------------

namespace {

constexpr index_t kMultinomialCap = 64;

double binomial(index_t n, index_t k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double acc = 1.0;
    for (index_t i = 1; i <= k; ++i) acc = acc * static_cast<double>(n - k + i) / i;
    return acc;
}

// Coefficients of the s-th power of a one-sided part, by multinomial
// enumeration over the exponent multiset.
class PartPower {
  public:
    // part(j) for j >= min_index (0 for the regular part, 1 for the principal)
    PartPower(std::function<cplx(index_t)> part, index_t min_index,
              std::optional<index_t> max_index)
        : part_(std::move(part)), min_(min_index), max_(max_index) {}

    bool bounded() const { return max_.has_value(); }
    index_t max_degree(int s) const { return max_ ? *max_ * s : -1; }

    // coefficient of weight m in part^s
    cplx value(int s, index_t m) {
        if (m < 0) return {0.0, 0.0};
        if (s == 0) return m == 0 ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
        if (min_ >= 1 && m < static_cast<index_t>(s) * min_) return {0.0, 0.0};
        if (max_ && m > *max_ * s) return {0.0, 0.0};
        if (m > kMultinomialCap)
            throw CapExceeded("multinomial enumeration cap (degree 64) exceeded");
        auto key = std::make_pair(s, m);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        index_t jmax = max_ ? std::min(*max_, m) : m;
        cplx v = enumerate(jmax, s, m, 1.0, cplx(1.0, 0.0));
        memo_.emplace(key, v);
        return v;
    }

  private:
    // choose exponents r_j for j = jmax down to max(min_,1); weight j*r_j
    // consumes m, slots consume s; index 0 (regular part only) absorbs the
    // remaining slots with weight 0
    cplx enumerate(index_t j, int slots, index_t weight, double multinom, cplx coeff) {
        if (weight == 0) {
            if (min_ == 0) return multinom * coeff * local_ipow(part_(0), slots);
            return slots == 0 ? multinom * coeff : cplx(0.0, 0.0);
        }
        if (j < std::max<index_t>(min_, 1) || slots == 0) return {0.0, 0.0};
        cplx total(0.0, 0.0);
        cplx cj = part_(j);
        index_t rmax = std::min<index_t>(slots, weight / j);
        total += enumerate(j - 1, slots, weight, multinom, coeff);  // r_j = 0 branch
        if (cj != cplx(0.0, 0.0)) {
            // choosing r of the remaining `slots` factors for index j
            // contributes C(slots, r) to the multinomial coefficient
            for (index_t r = 1; r <= rmax; ++r) {
                double mult_r = multinom * binomial(slots, r);
                cplx coeff_r = coeff * local_ipow(cj, r);
                total += enumerate(j - 1, static_cast<int>(slots - r), weight - j * r, mult_r,
                                   coeff_r);
            }
        }
        return total;
    }

    std::function<cplx(index_t)> part_;
    index_t min_;
    std::optional<index_t> max_;
    std::map<std::pair<int, index_t>, cplx> memo_;
};

}  // namespace

std::map<index_t, SumOutcome> power_multinomial(const Series& f, int k, Window window,
                                                const SumPolicy& policy) {
    if (k < 1) throw InvalidInput("power_multinomial: k must be >= 1");
    if (k > kMultinomialCap) throw CapExceeded("multinomial cap: k must be <= 64");
    window.validate();
    policy.validate();

    Support supp = f.coeffs.support();
    std::optional<index_t> reg_max, pri_max;
    if (!supp.hi_unbounded) reg_max = std::max<index_t>(supp.hi, 0);
    if (!supp.lo_unbounded) pri_max = std::max<index_t>(-supp.lo, 0);

    CoeffRule rule = f.coeffs;
    PartPower alpha([rule](index_t j) { return rule(j); }, 0, reg_max);
    PartPower beta([rule](index_t j) { return rule(-j); }, 1, pri_max);

    // c_n^{(s,t)} = sum_{m >= max(0, n+t)} alpha_m^{(s)} beta_{n-m}^{(t)}
    auto cross = [&](int s, int t, index_t n) -> SumOutcome {
        index_t m0 = std::max<index_t>(0, n + t);
        std::optional<index_t> m1;
        if (reg_max) m1 = *reg_max * s;
        if (pri_max) {
            index_t bound = n + *pri_max * t;
            m1 = m1 ? std::min(*m1, bound) : bound;
        }
        if (m1) {
            cplx acc(0.0, 0.0);
            for (index_t m = m0; m <= *m1; ++m) acc += alpha.value(s, m) * beta.value(t, m - n);
            return SumOutcome::make_converged(acc, 0, 0.0);
        }
        return sum_one_sided(
            [&](index_t i) { return alpha.value(s, m0 + i) * beta.value(t, m0 + i - n); },
            policy);
    };

    std::map<index_t, SumOutcome> out;
    for (index_t n = window.lo; n <= window.hi; ++n) {
        cplx acc(0.0, 0.0);
        double resid = 0.0;
        int depth = 0;
        std::optional<SumOutcome> failed;
        for (int s = 0; s <= k; ++s) {
            SumOutcome c = cross(s, k - s, n);
            depth = std::max(depth, c.depth);
            if (!c.converged()) {
                if (!failed || c.diverged()) failed = c;
                continue;
            }
            acc += binomial(k, s) * *c.value;
            resid += binomial(k, s) * c.residual.value_or(0.0);
        }
        if (failed) {
            std::string why = "cross term did not converge: " + failed->reason.value_or("");
            out.emplace(n, failed->diverged() ? SumOutcome::make_diverged(why, depth)
                                             : SumOutcome::make_inconclusive(depth, why));
        } else {
            out.emplace(n, SumOutcome::make_converged(acc, depth, resid));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// composition
// ---------------------------------------------------------------------------

namespace {

// Shared engine: coefficients of T_g(f) evaluated on demand.
class Composer {
  public:
    Composer(Series outer, Series inner, std::optional<Series> inner_inv, SumPolicy pol,
             Window probe)
        : outer_(std::move(outer)), pol_(pol) {
        bounds_ = deg_bounds(outer_, probe);
        if (bounds_.minus > 0 || bounds_.minus_unbounded) {
            if (!inner_inv)
                throw InvalidInput(
                    "composition rejected: the outer series has principal support and no inner "
                    "inverse was supplied");
            VerificationReport vr =
                verify_inverse(inner, *inner_inv, Window{-8, 8}, pol_,
                               std::max(pol_.tolerance * 100.0, 1e-8));
            if (!vr.ok)
                throw InvalidInput(
                    "composition rejected: the supplied inner inverse failed verification");
        }
        table_ = std::make_shared<PowerTable>(std::move(inner), std::move(inner_inv), pol_);
    }

    const DegBounds& bounds() const { return bounds_; }
    const std::shared_ptr<PowerTable>& table() const { return table_; }

    SumOutcome coeff(index_t n) const {
        auto it = memo_.find(n);
        if (it != memo_.end()) return it->second;
        SumOutcome out = compute(n);
        return memo_.emplace(n, std::move(out)).first->second;
    }

  private:
    SumOutcome compute(index_t n) const {
        auto term = [this, n](index_t m) -> cplx {
            cplx b = outer_.at(m);
            if (b == cplx(0.0, 0.0)) return {0.0, 0.0};
            SumOutcome p = table_->coeff(m, n);
            if (!p.converged()) throw InnerFailure{p, m};
            return b * *p.value;
        };
        if (!bounds_.plus_unbounded && !bounds_.minus_unbounded) {
            try {
                cplx acc(0.0, 0.0);
                for (index_t m = -bounds_.minus; m <= bounds_.plus; ++m) acc += term(m);
                return SumOutcome::make_converged(acc, 0, 0.0);
            } catch (const InnerFailure& f) {
                return inherit_failure(f, "inner power coefficient");
            } catch (const CapExceeded& c) {
                return SumOutcome::make_inconclusive(0, std::string("evaluation cap: ") + c.what());
            }
        }
        // at least one unbounded side: policy-governed sums
        try {
            SumOutcome pos, neg;
            if (bounds_.plus_unbounded) {
                pos = sum_one_sided([&term](index_t i) { return term(i); }, pol_);
            } else {
                cplx acc(0.0, 0.0);
                for (index_t m = 0; m <= bounds_.plus; ++m) acc += term(m);
                pos = SumOutcome::make_converged(acc, 0, 0.0);
            }
            if (bounds_.minus_unbounded) {
                neg = sum_one_sided([&term](index_t i) { return term(-1 - i); }, pol_);
            } else {
                cplx acc(0.0, 0.0);
                for (index_t m = -1; m >= -bounds_.minus; --m) acc += term(m);
                neg = SumOutcome::make_converged(acc, 0, 0.0);
            }
            return combine_one_sided(pos, neg);
        } catch (const InnerFailure& f) {
            return inherit_failure(f, "inner power coefficient");
        } catch (const CapExceeded& c) {
            return SumOutcome::make_inconclusive(0, std::string("evaluation cap: ") + c.what());
        }
    }

    Series outer_;
    SumPolicy pol_;
    DegBounds bounds_;
    std::shared_ptr<PowerTable> table_;
    mutable std::map<index_t, SumOutcome> memo_;
};

std::optional<Series> resolve_inverse(const Series& h, const std::optional<Series>& given) {
    if (given) return given;
    if (auto special = classify_special(h); special && special->witness) return special->witness;
    return std::nullopt;
}

}  // namespace

CompositionReport compose(const Series& g, const Series& f, const std::optional<Series>& f_inv,
                          Window window, const SumPolicy& policy) {
    window.validate();
    Window probe{std::min<index_t>(window.lo, -64), std::max<index_t>(window.hi, 64)};
    Composer comp(g, f, f_inv, policy, probe);
    CompositionReport rep;
    rep.window = window;
    rep.m_lo_unbounded = comp.bounds().minus_unbounded;
    rep.m_hi_unbounded = comp.bounds().plus_unbounded;
    rep.m_lo = -comp.bounds().minus;
    rep.m_hi = comp.bounds().plus;
    rep.bounds_censored = comp.bounds().censored;
    if (f_inv) rep.inverse_label = f_inv->label;
    for (index_t n = window.lo; n <= window.hi; ++n) rep.coefficients.emplace(n, comp.coeff(n));
    return rep;
}

RdMembershipReport rd_membership(const Series& h, const std::optional<Series>& h_inv, int n_max,
                                 Window window, const SumPolicy& policy) {
    if (n_max < 0) throw InvalidInput("rd_membership: n_max must be nonnegative");
    window.validate();
    std::optional<Series> inv = resolve_inverse(h, h_inv);
    RdMembershipReport rep;
    rep.window = window;
    rep.tol = std::max(policy.tolerance * 100.0, 1e-8);
    rep.member = true;
    PowerTable table(h, inv, policy);
    // without an inverse only the nonnegative exponents are testable
    index_t lo = inv ? -static_cast<index_t>(n_max) : 0;
    for (index_t n = lo; n <= n_max; ++n) {
        for (index_t m = n; m <= n_max; ++m) {  // symmetric law, test unordered pairs
            RdMembershipReport::Pair pair;
            pair.n = n;
            pair.m = m;
            pair.all_converged = true;
            pair.holds = true;
            for (index_t kk = window.lo; kk <= window.hi; ++kk) {
                SumOutcome lhs = poisoned_bilateral(
                    [&](index_t j) -> cplx {
                        SumOutcome a = table.coeff(n, j);
                        if (!a.converged()) throw InnerFailure{a, j};
                        if (*a.value == cplx(0.0, 0.0)) return {0.0, 0.0};
                        SumOutcome b = table.coeff(m, kk - j);
                        if (!b.converged()) throw InnerFailure{b, kk - j};
                        return *a.value * *b.value;
                    },
                    policy, "power coefficient");
                SumOutcome rhs = table.coeff(n + m, kk);
                if (!lhs.converged() || !rhs.converged()) {
                    pair.all_converged = false;
                    pair.holds = false;
                    break;
                }
                double dev = std::abs(*lhs.value - *rhs.value);
                pair.max_dev = std::max(pair.max_dev, dev);
                if (dev > rep.tol * std::max(1.0, std::abs(*rhs.value))) pair.holds = false;
            }
            rep.member = rep.member && pair.holds;
            rep.pairs.push_back(pair);
        }
    }
    return rep;
}

LawCheckReport rd_law_check(const Series& f, const Series& g, const Series& h, Window window,
                            const SumPolicy& policy, const std::optional<Series>& h_inv) {
    window.validate();
    std::optional<Series> inv = resolve_inverse(h, h_inv);
    Window probe{std::min<index_t>(window.lo, -64), std::max<index_t>(window.hi, 64)};

    LawCheckReport rep;
    Composer fh(f, h, inv, policy, probe);
    Composer gh(g, h, inv, policy, probe);

    rep.left_exists = true;
    for (index_t n = window.lo; n <= window.hi; ++n) {
        SumOutcome left = poisoned_bilateral(
            [&](index_t m) -> cplx {
                SumOutcome a = fh.coeff(m);
                if (a.converged() && *a.value == cplx(0.0, 0.0)) return {0.0, 0.0};
                SumOutcome b = gh.coeff(n - m);
                if (b.converged() && *b.value == cplx(0.0, 0.0)) return {0.0, 0.0};
                if (!a.converged()) throw InnerFailure{a, m};
                if (!b.converged()) throw InnerFailure{b, n - m};
                return *a.value * *b.value;
            },
            policy, "composition coefficient");
        if (!left.converged()) {
            rep.left_exists = false;
            if (!rep.failure_note)
                rep.failure_note = "(f o h)(g o h) coefficient " + std::to_string(n) + ": " +
                                   left.reason.value_or("did not converge");
        }
        rep.left.emplace(n, std::move(left));
    }

    // right route: psi = f g computed first, then psi o h
    DegBounds fb = deg_bounds(f, probe), gb = deg_bounds(g, probe);
    DegBounds pb;
    pb.plus_unbounded = fb.plus_unbounded || gb.plus_unbounded;
    pb.minus_unbounded = fb.minus_unbounded || gb.minus_unbounded;
    pb.plus = fb.plus + gb.plus;
    pb.minus = fb.minus + gb.minus;

    std::map<index_t, SumOutcome> psi;
    auto psi_at = [&](index_t k) -> const SumOutcome& {
        auto it = psi.find(k);
        if (it == psi.end()) it = psi.emplace(k, product_coefficient(f, g, k, policy)).first;
        return it->second;
    };
    auto table = fh.table();  // powers of h shared with the left route

    rep.right_exists = true;
    for (index_t n = window.lo; n <= window.hi; ++n) {
        auto term = [&](index_t m) -> cplx {
            const SumOutcome& pm = psi_at(m);
            if (!pm.converged()) throw InnerFailure{pm, m};
            if (*pm.value == cplx(0.0, 0.0)) return {0.0, 0.0};
            SumOutcome p = table->coeff(m, n);
            if (!p.converged()) throw InnerFailure{p, m};
            return *pm.value * *p.value;
        };
        SumOutcome right;
        if (!pb.plus_unbounded && !pb.minus_unbounded) {
            try {
                cplx acc(0.0, 0.0);
                for (index_t m = -pb.minus; m <= pb.plus; ++m) acc += term(m);
                right = SumOutcome::make_converged(acc, 0, 0.0);
            } catch (const InnerFailure& fl) {
                right = inherit_failure(fl, "(fg) composition operand");
            } catch (const CapExceeded& c) {
                right = SumOutcome::make_inconclusive(0, std::string("evaluation cap: ") + c.what());
            }
        } else {
            right = poisoned_bilateral(term, policy, "(fg) composition operand");
        }
        if (!right.converged()) {
            rep.right_exists = false;
            if (!rep.failure_note)
                rep.failure_note = "(fg) o h coefficient " + std::to_string(n) + ": " +
                                   right.reason.value_or("did not converge");
        }
        rep.right.emplace(n, std::move(right));
    }

    double tol = std::max(policy.tolerance * 100.0, 1e-8);
    for (index_t n = window.lo; n <= window.hi; ++n) {
        const SumOutcome& l = rep.left.at(n);
        const SumOutcome& r = rep.right.at(n);
        if (l.converged() && r.converged()) {
            ++rep.compared;
            double dev = std::abs(*l.value - *r.value);
            rep.max_equal_dev = std::max(rep.max_equal_dev, dev);
            if (dev > tol * std::max(1.0, std::abs(*l.value))) rep.equal_where_both = false;
        }
    }
    return rep;
}

LawCheckReport cr_law_check(const Series& f, const Series& g,
                            const std::optional<Series>& g_inv, Window window,
                            const SumPolicy& policy) {
    window.validate();
    std::optional<Series> inv = resolve_inverse(g, g_inv);
    Window probe{std::min<index_t>(window.lo, -64), std::max<index_t>(window.hi, 64)};

    LawCheckReport rep;
    Composer fg(f, g, inv, policy, probe);

    rep.left_exists = true;
    for (index_t n = window.lo; n <= window.hi; ++n) {
        SumOutcome c = fg.coeff(n + 1);
        SumOutcome left;
        if (c.converged()) {
            left = SumOutcome::make_converged(static_cast<double>(n + 1) * *c.value, c.depth,
                                              std::abs(static_cast<double>(n + 1)) *
                                                  c.residual.value_or(0.0));
        } else {
            left = c;
            rep.left_exists = false;
            if (!rep.failure_note)
                rep.failure_note = "(f o g) coefficient " + std::to_string(n + 1) + ": " +
                                   c.reason.value_or("did not converge");
        }
        rep.left.emplace(n, std::move(left));
    }

    // right route: phi = f' o g must exist before multiplying by g'
    Series fp = derivative(f);
    Composer fpg(fp, g, inv, policy, probe);
    Series gp = derivative(g);

    Window operand_probe{std::min<index_t>(window.lo, 0), std::max<index_t>(window.hi, 0)};
    std::optional<std::string> operand_failure;
    for (index_t k = operand_probe.lo; k <= operand_probe.hi && !operand_failure; ++k) {
        SumOutcome phi = fpg.coeff(k);
        if (!phi.converged())
            operand_failure = "(f' o g) coefficient " + std::to_string(k) + ": " +
                              phi.reason.value_or("did not converge");
    }

    if (operand_failure) {
        rep.right_exists = false;
        rep.failure_note = operand_failure;
        for (index_t n = window.lo; n <= window.hi; ++n)
            rep.right.emplace(n, SumOutcome::make_diverged(*operand_failure, 0));
    } else {
        rep.right_exists = true;
        for (index_t n = window.lo; n <= window.hi; ++n) {
            SumOutcome right = poisoned_bilateral(
                [&](index_t k) -> cplx {
                    cplx gpc = gp.at(n - k);
                    if (gpc == cplx(0.0, 0.0)) return {0.0, 0.0};
                    SumOutcome phi = fpg.coeff(k);
                    if (!phi.converged()) throw InnerFailure{phi, k};
                    return *phi.value * gpc;
                },
                policy, "(f' o g) coefficient");
            if (!right.converged()) rep.right_exists = false;
            rep.right.emplace(n, std::move(right));
        }
    }

    double tol = std::max(policy.tolerance * 100.0, 1e-8);
    for (index_t n = window.lo; n <= window.hi; ++n) {
        const SumOutcome& l = rep.left.at(n);
        const SumOutcome& r = rep.right.at(n);
        if (l.converged() && r.converged()) {
            ++rep.compared;
            double dev = std::abs(*l.value - *r.value);
            rep.max_equal_dev = std::max(rep.max_equal_dev, dev);
            if (dev > tol * std::max(1.0, std::abs(*l.value))) rep.equal_where_both = false;
        }
    }
    return rep;
}

Series absolutize(const Series& f) { return {f.coeffs.absolute(), f.label + "_av"}; }

}  // namespace fls

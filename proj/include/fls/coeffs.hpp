#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "fls/types.hpp"

namespace fls {

enum class RuleKind {
    FiniteSupport,
    ConstantAll,        // c_n = c for all n
    Arithmetic,         // c_n = c0 + n r
    Geometric,          // c_n = c0 q^n, q != 0
    RegularGeometric,   // c_n = c0 q^n for n >= 0, else 0
    PrincipalGeometric, // c_{-n} = c0 q^n for n >= 1, else 0
    Generator,          // opaque memoized generator
};

/// Support interval of a rule, possibly unbounded on either side.
struct Support {
    bool lo_unbounded = false;
    bool hi_unbounded = false;
    index_t lo = 0;
    index_t hi = -1;  // lo > hi with both bounds finite means empty support

    static Support all() { return {true, true, 0, 0}; }
    static Support empty() { return {false, false, 0, -1}; }
    static Support range(index_t lo, index_t hi) { return {false, false, lo, hi}; }
    static Support from(index_t lo) { return {false, true, lo, 0}; }
    static Support upto(index_t hi) { return {true, false, 0, hi}; }

    bool bounded() const { return !lo_unbounded && !hi_unbounded; }
    bool is_empty() const { return bounded() && lo > hi; }
    bool contains(index_t n) const {
        if (!lo_unbounded && n < lo) return false;
        if (!hi_unbounded && n > hi) return false;
        return true;
    }
    static Support hull(const Support& a, const Support& b);
    static Support intersect(const Support& a, const Support& b);
};

/// A bilaterally indexed coefficient sequence: a total, pure map Z -> C.
///
/// Values are immutable after construction and safe to share across threads;
/// Generator rules memoize evaluations behind an internal lock. Structure-aware
/// combinators keep closed-form kinds (finite support, constant, arithmetic,
/// geometric) recognizable so that downstream pattern detectors and exact
/// summation paths can fire.
class CoeffRule {
  public:
    CoeffRule();  // zero rule (empty finite support)

    static CoeffRule finite(std::vector<std::pair<index_t, cplx>> entries);
    static CoeffRule constant(cplx c);
    static CoeffRule arithmetic(cplx c0, cplx r);
    static CoeffRule geometric(cplx c0, cplx q);  // q == 0 is rejected
    static CoeffRule regular_geometric(cplx c0, cplx q);
    static CoeffRule principal_geometric(cplx c0, cplx q);
    static CoeffRule generator(std::function<cplx(index_t)> fn, Support hint);

    cplx operator()(index_t n) const;

    RuleKind kind() const;
    Support support() const;

    /// Entries when the support is finite; nullopt otherwise. Zero entries are
    /// dropped, indices ascending.
    std::optional<std::vector<std::pair<index_t, cplx>>> finite_entries() const;

    /// Structured parameters (valid only for matching kinds).
    cplx param_c0() const;
    cplx param_ratio() const;  // r for Arithmetic, q for the geometric kinds

    // structure-preserving combinators
    CoeffRule shifted(index_t k) const;     // out(n) = in(n - k)
    CoeffRule reversed() const;             // out(n) = in(-n)
    CoeffRule scaled(cplx c) const;
    CoeffRule derived() const;              // out(n) = (n+1) in(n+1)
    CoeffRule absolute() const;             // out(n) = |in(n)|
    CoeffRule pointwise(const CoeffRule& other) const;  // out(n) = in(n) other(n)

  private:
    struct Node;
    explicit CoeffRule(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

/// out = sum_i scale_i * rule_i (exact, coefficientwise).
CoeffRule combine(const std::vector<std::pair<cplx, CoeffRule>>& terms);

/// Named coefficient families used by fixtures ("ones", "inv_square",
/// "alt_inv_sqrt").
CoeffRule formula_preset(const std::string& name);

/// Bijection Z -> N (1-based) ordering equations 0, 1, -1, 2, -2, ...
index_t equation_index(index_t n);
index_t equation_index_inverse(index_t j);  // j >= 1

/// Folds a bilateral rule into a one-sided rule over s >= 0: indices 0 and 1
/// each carry half of the value at 0, even s > 0 carries index s/2, odd s > 1
/// carries index (1-s)/2. Indices s < 0 evaluate to 0.
CoeffRule fold_to_onesided(const CoeffRule& rule);

/// Truncated decision for sum_{n>=0} term(n).
SumOutcome sum_one_sided(const std::function<cplx(index_t)>& term, const SumPolicy& policy);

/// Truncated decision for sum_{n in Z} rule(n), evaluated as two independent
/// one-sided sums (the n >= 0 side and the n <= -1 side). Closed-form kinds are
/// decided structurally.
SumOutcome bilateral_sum(const CoeffRule& rule, const SumPolicy& policy);

/// Merges the two one-sided verdicts of a bilateral sum: divergence on either
/// side makes the whole sum divergent, both sides must converge for a value.
SumOutcome combine_one_sided(const SumOutcome& regular_side, const SumOutcome& principal_side);

/// Streaming one-sided summation core shared by every policy-governed sum.
/// Push terms in order; `decided()` turns true on early convergence or blowup.
/// `finish()` applies the exhaustion rules (tail acceleration, drift check).
class OneSidedAccumulator {
  public:
    explicit OneSidedAccumulator(const SumPolicy& policy);

    bool push(cplx term);  // returns decided()
    bool decided() const { return decided_; }
    SumOutcome finish();

  private:
    void try_accelerate();
    SumPolicy pol_;
    cplx partial_{0.0, 0.0};
    int count_ = 0;
    bool decided_ = false;
    SumOutcome outcome_;
    std::vector<cplx> win_partials_;  // trailing window, ring-ordered
    std::vector<cplx> win_terms_;
    std::vector<std::pair<int, cplx>> checkpoints_;       // geometric depths
    std::vector<std::pair<int, cplx>> checkpoint_terms_;  // term at those depths
    std::vector<cplx> tail_partials_;  // wider trailing buffer for acceleration
    std::vector<cplx> tail_terms_;
};

}  // namespace fls

#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "fls/series.hpp"

namespace fls {

/// deg_+ = sup{n >= 0 : b_n != 0} and deg_- = sup{n >= 1 : b_{-n} != 0}, each
/// with sup(empty) = 0 and an unbounded flag. For opaque rules the bounds are
/// window-censored lower estimates (flagged).
struct DegBounds {
    index_t plus = 0;
    bool plus_unbounded = false;
    index_t minus = 0;
    bool minus_unbounded = false;
    bool censored = false;
};
DegBounds deg_bounds(const Series& g, Window probe);

/// Lazy per-(k, n) coefficients of the powers f^k, built by the product
/// recursion f^k = f f^{k-1} (f^0 = S_1). Negative exponents go through the
/// supplied inverse. Monomials have a closed form; otherwise the recursion
/// depth is capped (512 for finite-support bases, 64 for opaque ones) and the
/// cap raises CapExceeded.
class PowerTable {
  public:
    PowerTable(Series base, std::optional<Series> inverse, SumPolicy policy);

    SumOutcome coeff(index_t k, index_t n) const;
    const Series& base() const { return base_; }
    const std::optional<Series>& inverse_used() const { return inverse_; }

  private:
    SumOutcome compute(index_t k, index_t n) const;
    Series base_;
    std::optional<Series> inverse_;
    SumPolicy pol_;
    bool monomial_ = false;
    index_t mono_deg_ = 0;
    cplx mono_coeff_{0.0, 0.0};
    std::optional<std::vector<std::pair<index_t, cplx>>> fin_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<index_t, index_t>, SumOutcome> memo_;
    mutable std::shared_ptr<PowerTable> inv_table_;
};

/// f^k on a window by the product recursion (the defining route; serves as the
/// independent oracle for the multinomial formula).
std::map<index_t, SumOutcome> power_oracle(const Series& f, int k, Window window,
                                           const SumPolicy& policy);

/// f^k on a window assembled from the regular/principal multinomial expansions
/// alpha and beta and the binomial cross terms c_n^{(s,t)}. Enumeration is
/// capped at degree 64 per part (CapExceeded).
std::map<index_t, SumOutcome> power_multinomial(const Series& f, int k, Window window,
                                                const SumPolicy& policy);

struct CompositionReport {
    std::map<index_t, SumOutcome> coefficients;
    Window window{};
    index_t m_lo = 0;  // meaningful when the matching flag is false
    index_t m_hi = 0;
    bool m_lo_unbounded = false;
    bool m_hi_unbounded = false;
    bool bounds_censored = false;
    std::optional<std::string> inverse_label;
};

/// T_g(f): coefficient n is the sum of g_m (f^m)_n over the m-range given by
/// deg_bounds(g); unbounded ranges become policy-governed sums. An outer g
/// with principal support requires a verified inverse of f.
CompositionReport compose(const Series& g, const Series& f, const std::optional<Series>& f_inv,
                          Window window, const SumPolicy& policy);

struct RdMembershipReport {
    struct Pair {
        index_t n = 0;
        index_t m = 0;
        bool all_converged = false;
        double max_dev = 0.0;
        bool holds = false;
    };
    std::vector<Pair> pairs;
    Window window{};
    double tol = 0.0;
    bool member = false;  // every tested pair holds
};
/// Tests h^n h^m = h^{n+m} coefficientwise on the window for |n|, |m| <= n_max.
RdMembershipReport rd_membership(const Series& h, const std::optional<Series>& h_inv, int n_max,
                                 Window window, const SumPolicy& policy);

/// Two-route comparison report for the distributive/chain law checkers. Each
/// side exists only if every operand coefficient probed for it converged.
struct LawCheckReport {
    std::map<index_t, SumOutcome> left;
    std::map<index_t, SumOutcome> right;
    bool left_exists = false;
    bool right_exists = false;
    std::optional<std::string> failure_note;
    bool equal_where_both = true;  // vacuously true when no index has both
    double max_equal_dev = 0.0;
    int compared = 0;
};

/// left = (f o h)(g o h), right = (fg) o h. A missing h_inv is resolved
/// through the closed-form classifier when possible.
LawCheckReport rd_law_check(const Series& f, const Series& g, const Series& h, Window window,
                            const SumPolicy& policy,
                            const std::optional<Series>& h_inv = std::nullopt);

/// left = (f o g)', right = (f' o g) g'.
LawCheckReport cr_law_check(const Series& f, const Series& g,
                            const std::optional<Series>& g_inv, Window window,
                            const SumPolicy& policy);

/// f_av: coefficientwise absolute value.
Series absolutize(const Series& f);

}  // namespace fls

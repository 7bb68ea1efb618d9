#pragma once

#include <map>
#include <string>

#include "fls/coeffs.hpp"
#include "fls/types.hpp"

namespace fls {

/// A formal Laurent series: a coefficient rule plus a display label.
/// The regular part lives on indices n >= 0, the principal part on n <= -1.
struct Series {
    CoeffRule coeffs;
    std::string label;

    cplx at(index_t n) const { return coeffs(n); }

    static Series zero() { return {CoeffRule::finite({}), "S_0"}; }
    static Series one() { return {CoeffRule::finite({{0, {1.0, 0.0}}}), "S_1"}; }
    static Series monomial(index_t n, cplx c, std::string label = {});

    Series regular_part() const;    // coefficients on n >= 0
    Series principal_part() const;  // coefficients on n <= -1
};

/// Exact coefficientwise combination sum_i scale_i * series_i.
Series linear_combine(const std::vector<std::pair<cplx, Series>>& terms);

/// Dot product sum_n f_n g_n under the policy.
SumOutcome dot(const Series& f, const Series& g, const SumPolicy& policy);

Series shift(const Series& f, index_t k);   // coefficient at n is f(n-k)
Series reverse(const Series& f);            // coefficient at n is f(-n)
Series derivative(const Series& f);         // coefficient at n is (n+1) f(n+1)

/// Single product coefficient d_k = sum_m g_m f_{k-m}; exact when either
/// factor has finite support.
SumOutcome product_coefficient(const Series& f, const Series& g, index_t k,
                               const SumPolicy& policy);

/// Product certified per coefficient on a window. `series` is the
/// window-truncated result and is present only when every coefficient in the
/// window converged.
struct ProductOutcome {
    std::optional<Series> series;
    std::map<index_t, SumOutcome> per_coefficient;
    Window window;

    bool all_converged() const { return series.has_value(); }
};
ProductOutcome product(const Series& f, const Series& g, Window window, const SumPolicy& policy);

/// Checks f g = S_1 on a window: every coefficient must converge, with
/// |d_0 - 1| <= tol and |d_n| <= tol for n != 0.
struct VerificationReport {
    bool ok = false;
    double max_defect = 0.0;
    double k0_defect = 0.0;
    Window window{};
    std::map<index_t, SumOutcome> detail;
};
VerificationReport verify_inverse(const Series& f, const Series& g, Window window,
                                  const SumPolicy& policy, double tol);

/// Compares (fg)h and f(gh) coefficientwise and probes absolute convergence of
/// the underlying double families.
struct AssociativityReport {
    struct PerIndex {
        SumOutcome abs_convergence;  // of sum |f_s g_{t-s} h_{n-t}| over expanding squares
        SumOutcome left;             // ((fg)h)_n
        SumOutcome right;            // (f(gh))_n
        bool both_converged = false;
        bool equal = false;
        double deviation = 0.0;
    };
    std::map<index_t, PerIndex> per_n;
    Window window{};
    double tol = 0.0;
};
AssociativityReport associativity_probe(const Series& f, const Series& g, const Series& h,
                                        Window window, const SumPolicy& policy);

/// For f with real nonnegative coefficients (at least two nonzero on the
/// window) and a verified real inverse g, scans for a negative coefficient of
/// g; widens the window once before giving up.
bool sign_property_check(const Series& f, const Series& g, Window window,
                         const SumPolicy& policy);

/// Tabulates T(n,k) = sum_{s=1}^{n} sum_{m=-k}^{k} d_m c_{s-m} over a grid,
/// where c are the coefficients of f and d those of its inverse g. For a true
/// inverse pair the double/iterated limits vanish; the corner cell and the
/// diagonal trail carry the evidence.
struct TailLimitReport {
    std::vector<int> n_grid;
    std::vector<int> k_grid;
    std::vector<std::vector<cplx>> table;  // table[i][j] = T(n_grid[i], k_grid[j])
    cplx corner{0.0, 0.0};                 // T(n_max, k_max)
    double corner_defect = 0.0;
    std::vector<std::pair<int, cplx>> diagonal_trail;  // T(d, d) along the grid
    double max_diagonal_defect = 0.0;
};
TailLimitReport tail_limit_check(const Series& f, const Series& g, int n_max, int k_max);

}  // namespace fls

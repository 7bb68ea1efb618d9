#pragma once

#include <map>

#include "fls/series.hpp"

namespace fls {

/// Annulus-of-convergence estimate from the root tests
/// r = limsup |a_{-n}|^{1/n}, 1/R = limsup |a_n|^{1/n}. The limsups are not
/// computable from finitely many terms; the estimator takes the maximum of the
/// sampled roots over n in [window/2, window] and reports the raw trails.
/// Structured rules (finite support, geometric tails) bypass estimation.
struct RadiiEstimate {
    double r = 0.0;
    double R = 0.0;
    bool R_infinite = false;
    int window = 0;
    std::vector<double> regular_trail;    // |a_n|^{1/n}, n = 1..window
    std::vector<double> principal_trail;  // |a_{-n}|^{1/n}, n = 1..window
    bool exact_r = false;
    bool exact_R = false;
};
RadiiEstimate radii(const Series& f, int window);  // window >= 8

struct DerivativeRadiiReport {
    bool r_match = false;
    bool R_match = false;
    double r_defect = 0.0;
    double R_defect = 0.0;
    double rel_tol = 0.0;
    RadiiEstimate base;
    RadiiEstimate deriv;
};
DerivativeRadiiReport derivative_radii_check(const Series& f, int window);

enum class BoundaryConclusion { ClosedOuter, ClosedInner, ClosedAnnulus, NoConclusion };

/// Boundary-convergence hypotheses: the k-th derivative sums of the regular
/// part at a (|a| = R) and of the mirrored principal part at b (|b| = r, via
/// the substitution w = 1/z), for k <= k_max. The conclusion is k_max-certified
/// only, never universal.
struct BoundaryReport {
    std::map<int, SumOutcome> regular_hypothesis;
    std::map<int, SumOutcome> principal_hypothesis;
    BoundaryConclusion conclusion = BoundaryConclusion::NoConclusion;
    int k_max = 0;
    RadiiEstimate radii_used;
    std::vector<std::pair<cplx, SumOutcome>> spot_checks;  // absolute sums at sample points
};
BoundaryReport boundary_check(const Series& g, std::optional<cplx> a, std::optional<cplx> b,
                              int k_max, const SumPolicy& policy);

/// Absolute-convergence probe of sum |a_n z^n| at a point (bilateral).
SumOutcome absolute_convergence_at(const Series& f, cplx z, const SumPolicy& policy);

}  // namespace fls

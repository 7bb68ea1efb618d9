#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fls {

using cplx = std::complex<double>;
using index_t = std::int64_t;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input violates an operation's preconditions. The CLI maps this to exit code 2.
struct InvalidInput : Error {
    using Error::Error;
};

/// A Gaussian pivot fell below threshold; the triangular recursions do not apply.
struct StrictnessViolation : Error {
    int index;
    StrictnessViolation(int idx, const std::string& msg) : Error(msg), index(idx) {}
};

/// An enumeration or recursion cap was hit (multinomial size, power depth).
struct CapExceeded : Error {
    using Error::Error;
};

/// Truncation policy for deciding infinite sums at finite depth.
///
/// A one-sided sum is declared convergent when the trailing `stability_window`
/// partial sums agree within `tolerance` (or when a gated tail acceleration
/// stabilizes to that accuracy, see coeffs.hpp). Divergence is declared only on
/// hard evidence: a partial sum exceeding `divergence_bound`, or terms that are
/// still above `tolerance` at exhaustion while the partial sums drift
/// coherently. Everything else is Inconclusive.
struct SumPolicy {
    int max_terms = 4096;
    double tolerance = 1e-10;
    double divergence_bound = 1e12;
    int stability_window = 16;

    void validate() const {
        if (max_terms <= 0) throw InvalidInput("SumPolicy: max_terms must be positive");
        if (tolerance < 0) throw InvalidInput("SumPolicy: tolerance must be nonnegative");
        if (divergence_bound <= 0) throw InvalidInput("SumPolicy: divergence_bound must be positive");
        if (stability_window <= 0) throw InvalidInput("SumPolicy: stability_window must be positive");
        if (stability_window > max_terms)
            throw InvalidInput("SumPolicy: stability_window must not exceed max_terms");
    }
};

enum class SumState { Converged, Diverged, Inconclusive };

/// Tri-state result of a truncated infinite sum.
struct SumOutcome {
    SumState state = SumState::Inconclusive;
    std::optional<cplx> value;     // present iff Converged
    int depth = 0;                 // terms examined (per side for bilateral sums)
    std::optional<double> residual;
    std::optional<std::string> reason;

    bool converged() const { return state == SumState::Converged; }
    bool diverged() const { return state == SumState::Diverged; }

    static SumOutcome make_converged(cplx v, int depth, double residual,
                                     std::string note = {}) {
        SumOutcome o;
        o.state = SumState::Converged;
        o.value = v;
        o.depth = depth;
        o.residual = residual;
        if (!note.empty()) o.reason = std::move(note);
        return o;
    }
    static SumOutcome make_diverged(std::string why, int depth) {
        SumOutcome o;
        o.state = SumState::Diverged;
        o.depth = depth;
        o.reason = std::move(why);
        return o;
    }
    static SumOutcome make_inconclusive(int depth, std::string why = {}) {
        SumOutcome o;
        o.state = SumState::Inconclusive;
        o.depth = depth;
        if (!why.empty()) o.reason = std::move(why);
        return o;
    }
};

enum class LimitState { Stabilized, NotStabilized, Blowup };

/// Limit of a depth-indexed quantity, estimated from a sampled trail.
/// Stabilized means the last three samples agree within tolerance.
struct LimitEstimate {
    LimitState state = LimitState::NotStabilized;
    std::optional<cplx> value;  // present iff Stabilized
    std::vector<std::pair<int, cplx>> samples;

    bool stabilized() const { return state == LimitState::Stabilized; }
};

/// Inclusive coefficient window [lo, hi].
struct Window {
    index_t lo = 0;
    index_t hi = 0;
    void validate() const {
        if (lo > hi) throw InvalidInput("Window: lo must not exceed hi");
    }
    index_t size() const { return hi - lo + 1; }
};

/// Estimates a LimitEstimate from a trail of (depth, value) samples.
/// `blowup_bound` triggers Blowup when any |value| exceeds it.
LimitEstimate estimate_limit(std::vector<std::pair<int, cplx>> samples, double tol,
                             double blowup_bound = 1e12);

}  // namespace fls

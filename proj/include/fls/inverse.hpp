#pragma once

#include <optional>

#include "fls/infsys.hpp"
#include "fls/series.hpp"

namespace fls {

enum class InverseClass { NoInverse, Unique, Family, Undetermined };
enum class InverseMethod { Strict, Omega, ClosedForm };

/// Configuration shared by the inverse pipelines.
struct SolveConfig {
    SumPolicy policy;
    std::vector<int> depths = {16, 32, 64, 128, 256, 512};
    index_t window = 32;      // witnesses verified on [-window, window]
    double verify_tol = 1e-8;
    double limit_tol = 1e-9;  // stabilization tolerance for depth limits
};

struct MinorTrail {
    std::vector<std::pair<int, cplx>> samples;
    LimitEstimate limit;
};

struct InverseEvidence {
    std::optional<MinorTrail> w_minors;
    std::optional<MinorTrail> a1_minors;
    std::optional<MinorTrail> a2_minors;
    bool strictness_ok = false;
    std::optional<int> strictness_violation_index;
    int stabilized_unknowns = 0;
    int total_unknowns = 0;
    std::optional<VerificationReport> verification;
    std::optional<HomogeneousReport> homogeneous;    // strict method / omega S-side
    std::optional<HomogeneousReport> homogeneous_t;  // omega T-side
    std::vector<std::string> notes;
};

/// Outcome of an inverse computation: classification with witness series,
/// homogeneous directions and the full evidence trail. A finite run never
/// proves the infinite statement, so any non-stabilized limit downgrades the
/// verdict to Undetermined.
struct InverseReport {
    InverseClass classification = InverseClass::Undetermined;
    InverseMethod method = InverseMethod::Strict;
    std::optional<Series> witness;
    std::vector<Series> homogeneous;
    int parameter_arity = 0;
    InverseEvidence evidence;
};

/// The merged inverse-system matrix of f: rows are equations indexed by
/// equation_index(n), columns carry the unknowns d_0, d_1, d_{-1}, d_2, ...;
/// entry (i, j) = a_{n(i) - m(j)} with n, m both read off equation_index_inverse.
InfiniteMatrix build_W(const Series& f);

/// The split-system matrices: A1(i, j) = a_{n(i) + 1 - j} acting on the
/// regular-part unknowns x_j = b_{j-1}, and A2(i, j) = a_{n(i) + j} acting on
/// the principal-part unknowns y_j = b_{-j}.
std::pair<InfiniteMatrix, InfiniteMatrix> build_A1A2(const Series& f);

/// Maps the one-sided solution vector back to bilateral coefficients:
/// d_0 = y_1, d_m = y_{2m} for m > 0, d_m = y_{1-2m} for m < 0. Indices beyond
/// the given prefix evaluate to 0.
CoeffRule y_to_coeffs(std::span<const cplx> y);

/// One-sided splitting sequence s_1, s_2, ... for the split systems
/// (evaluated at indices >= 1).
struct SplitSequence {
    CoeffRule values;
    std::string label;

    static SplitSequence zero();
    /// s induced by a candidate inverse's regular part:
    /// s_j = sum_{m>=0} a_{n(j)-m} g_m.
    static SplitSequence from_regular_candidate(const Series& f, const Series& candidate,
                                                const SumPolicy& policy);
};

/// Inverse via the merged-system Gaussian pipeline: strictness screen, D C
/// factorization, strictly particular solution with b = e_1, witness
/// verification, then the homogeneous direction. Applies only to strict
/// series; a failed screen yields Undetermined with evidence.
InverseReport invert_strict(const Series& f, const SolveConfig& cfg);

/// Inverse via the split systems A1 x = s, A2 y = t with t = (1-s_1, -s_2, ...),
/// for an explicit splitting sequence. Absence of a witness for one split is
/// evidence, not proof, of NoInverse.
InverseReport invert_omega(const Series& f, const SplitSequence& split, const SolveConfig& cfg);

/// Core of the omega pipeline on explicit matrices (exposed for testing).
InverseReport omega_solve(const InfiniteMatrix& A1, const InfiniteMatrix& A2,
                          const SplitSequence& split, const Series& f, const SolveConfig& cfg);

/// Closed-form detectors for the constant, arithmetic, geometric and
/// single-support families. Exact when it fires; nullopt otherwise.
std::optional<InverseReport> classify_special(const Series& f);

/// classify_special first, then the strict pipeline, then (optionally) the
/// omega pipeline with the given split.
InverseReport invert_auto(const Series& f, const SolveConfig& cfg,
                          const std::optional<SplitSequence>& split = std::nullopt);

/// Empirical check of the method-disjointness property: the W[f] and A2^T(f)
/// principal-minor trails never both stabilize to nonzero values.
struct DisjointnessReport {
    MinorTrail w_trail;
    MinorTrail a2_trail;
    bool w_nonzero = false;
    bool a2_nonzero = false;
    bool disjoint = false;  // not both nonzero
    std::vector<std::pair<int, cplx>> ratio_trail;  // A2 minor / W minor where defined
};
DisjointnessReport method_disjointness_check(const Series& f, std::span<const int> depths,
                                             double tol = 1e-9);

}  // namespace fls

#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "fls/types.hpp"

namespace fls {

/// Dense square complex matrix, 1-based accessors to match the recursion
/// indexing used throughout.
class DenseMatrix {
  public:
    DenseMatrix() = default;
    explicit DenseMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, cplx(0.0, 0.0)) {}
    static DenseMatrix identity(int n);

    int size() const { return n_; }
    cplx& at(int i, int j) { return a_[idx(i, j)]; }
    const cplx& at(int i, int j) const { return a_[idx(i, j)]; }

    DenseMatrix multiply(const DenseMatrix& other) const;
    double inf_norm() const;  // max absolute row sum
    DenseMatrix leading(int m) const;

  private:
    size_t idx(int i, int j) const { return static_cast<size_t>(i - 1) * n_ + (j - 1); }
    int n_ = 0;
    std::vector<cplx> a_;
};

/// An infinite matrix given by a pure entry function on N x N (1-based).
/// Rectangular truncations are cached; the largest computed block is reused
/// for smaller requests. Copies share the cache.
class InfiniteMatrix {
  public:
    explicit InfiniteMatrix(std::function<cplx(int, int)> entry);

    cplx entry(int i, int j) const;
    DenseMatrix truncation(int n) const;

  private:
    struct State {
        std::function<cplx(int, int)> entry;
        std::mutex mu;
        DenseMatrix cache;
    };
    std::shared_ptr<State> st_;
};

/// Exact determinant of the leading n x n truncation (partial-pivot
/// elimination on a copy; pivoting is a numerical device only).
cplx principal_minor(const InfiniteMatrix& M, int n);

/// Determinant limit along increasing depths. Stabilized when the trailing
/// three minors agree within tol (relative to the last magnitude).
LimitEstimate det_limit(const InfiniteMatrix& M, std::span<const int> depths, double tol);

/// Triangular factorization M = D C with D lower (carrying the pivots) and C
/// unit-upper. Pivots below 1e-12 times the row scale raise
/// StrictnessViolation naming the index.
struct FactorPair {
    DenseMatrix D;
    DenseMatrix C;
    int n = 0;
};
FactorPair gauss_factorize(const InfiniteMatrix& M, int N);

/// Inverse of a lower-triangular matrix by the forward recursion
/// L^{-1}(n,m) = (delta(n,m) - sum_i L(n,i) L^{-1}(i,m)) / L(n,n).
DenseMatrix lower_inverse(const DenseMatrix& D);

/// Forward substitution D x = b for lower-triangular D.
std::vector<cplx> solve_lower(const DenseMatrix& D, std::span<const cplx> b);

/// Independent brute-force solver (partial-pivot elimination); test oracle.
std::vector<cplx> dense_solve_oracle(DenseMatrix M, std::vector<cplx> rhs);

/// A truncated upper-triangular system C y = rhs at a given depth.
struct UpperSystem {
    DenseMatrix C;
    std::vector<cplx> rhs;
};
using UpperSystemProvider = std::function<UpperSystem(int depth)>;

/// Strictly particular solution surrogate: back-substitution with a zero tail
/// at each depth, per-unknown limit estimates across the depth schedule.
/// Unknown j collects samples from depths >= j + 2.
std::vector<LimitEstimate> strictly_particular(const UpperSystemProvider& system,
                                               std::span<const int> depths, double tol,
                                               int unknowns);

/// Nontrivial null direction of an infinite unit-upper system, via the
/// tail-normalized back-substitution ratios S(j) and the alternating row
/// condition sums. The emitted direction is normalized to v_1 = 1 and
/// satisfies v_{i+1} = -v_i / S(i).
struct HomogeneousReport {
    bool exists = false;
    /// Set when the tail ratios stayed bounded yet failed to stabilize: the
    /// single-ratio model cannot decide (e.g. a multi-dimensional null space
    /// mixes several geometric chains). Divergent or degenerate ratios leave
    /// this false: they are evidence the ratio limits genuinely do not exist.
    bool undecided = false;
    std::vector<LimitEstimate> ratio_limits;  // S(j), j = 1..unknowns
    std::vector<double> condition_defects;    // row condition |sum|, per row
    std::vector<cplx> direction;              // v_1..v_unknowns when exists
    std::string note;
};
HomogeneousReport homogeneous_direction(const std::function<DenseMatrix(int)>& C_at,
                                        std::span<const int> depths, double tol, int unknowns);

}  // namespace fls

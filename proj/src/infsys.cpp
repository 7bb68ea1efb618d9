#include "fls/infsys.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fls {

DenseMatrix DenseMatrix::identity(int n) {
    DenseMatrix m(n);
    for (int i = 1; i <= n; ++i) m.at(i, i) = cplx(1.0, 0.0);
    return m;
}

DenseMatrix DenseMatrix::multiply(const DenseMatrix& other) const {
    DenseMatrix out(n_);
    for (int i = 1; i <= n_; ++i) {
        for (int k = 1; k <= n_; ++k) {
            cplx v = at(i, k);
            if (v == cplx(0.0, 0.0)) continue;
            for (int j = 1; j <= n_; ++j) out.at(i, j) += v * other.at(k, j);
        }
    }
    return out;
}

double DenseMatrix::inf_norm() const {
    double best = 0.0;
    for (int i = 1; i <= n_; ++i) {
        double row = 0.0;
        for (int j = 1; j <= n_; ++j) row += std::abs(at(i, j));
        best = std::max(best, row);
    }
    return best;
}

DenseMatrix DenseMatrix::leading(int m) const {
    DenseMatrix out(m);
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= m; ++j) out.at(i, j) = at(i, j);
    return out;
}

InfiniteMatrix::InfiniteMatrix(std::function<cplx(int, int)> entry)
    : st_(std::make_shared<State>()) {
    st_->entry = std::move(entry);
}

cplx InfiniteMatrix::entry(int i, int j) const {
    if (i < 1 || j < 1) throw InvalidInput("InfiniteMatrix: indices are 1-based");
    {
        std::lock_guard<std::mutex> lock(st_->mu);
        if (i <= st_->cache.size() && j <= st_->cache.size()) return st_->cache.at(i, j);
    }
    return st_->entry(i, j);
}

DenseMatrix InfiniteMatrix::truncation(int n) const {
    if (n < 1) throw InvalidInput("InfiniteMatrix: truncation depth must be >= 1");
    std::lock_guard<std::mutex> lock(st_->mu);
    if (st_->cache.size() < n) {
        DenseMatrix grown(n);
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j)
                grown.at(i, j) = (i <= st_->cache.size() && j <= st_->cache.size())
                                     ? st_->cache.at(i, j)
                                     : st_->entry(i, j);
        st_->cache = std::move(grown);
    }
    return st_->cache.leading(n);
}

namespace {

// In-place partial-pivot elimination; returns the determinant.
cplx det_destructive(DenseMatrix& m) {
    const int n = m.size();
    cplx det(1.0, 0.0);
    for (int k = 1; k <= n; ++k) {
        int piv = k;
        double best = std::abs(m.at(k, k));
        for (int i = k + 1; i <= n; ++i) {
            double v = std::abs(m.at(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0) return {0.0, 0.0};
        if (piv != k) {
            for (int j = 1; j <= n; ++j) std::swap(m.at(k, j), m.at(piv, j));
            det = -det;
        }
        det *= m.at(k, k);
        for (int i = k + 1; i <= n; ++i) {
            cplx factor = m.at(i, k) / m.at(k, k);
            if (factor == cplx(0.0, 0.0)) continue;
            for (int j = k; j <= n; ++j) m.at(i, j) -= factor * m.at(k, j);
        }
    }
    return det;
}

}  // namespace

cplx principal_minor(const InfiniteMatrix& M, int n) {
    if (n < 1) throw InvalidInput("principal_minor: n must be >= 1");
    DenseMatrix block = M.truncation(n);
    return det_destructive(block);
}

LimitEstimate det_limit(const InfiniteMatrix& M, std::span<const int> depths, double tol) {
    std::vector<std::pair<int, cplx>> samples;
    int prev = 0;
    for (int d : depths) {
        if (d <= prev) throw InvalidInput("det_limit: depths must be increasing");
        prev = d;
        samples.emplace_back(d, principal_minor(M, d));
    }
    return estimate_limit(std::move(samples), tol);
}

FactorPair gauss_factorize(const InfiniteMatrix& M, int N) {
    if (N < 1) throw InvalidInput("gauss_factorize: N must be >= 1");
    DenseMatrix U = M.truncation(N);
    FactorPair fp{DenseMatrix(N), DenseMatrix(N), N};
    for (int k = 1; k <= N; ++k) {
        for (int i = k; i <= N; ++i) {
            cplx acc = U.at(i, k);
            for (int j = 1; j < k; ++j) acc -= fp.D.at(i, j) * fp.C.at(j, k);
            fp.D.at(i, k) = acc;  // c_{k,k} = 1 by convention
        }
        double row_scale = 1.0;
        for (int j = 1; j <= N; ++j) row_scale = std::max(row_scale, std::abs(U.at(k, j)));
        if (std::abs(fp.D.at(k, k)) < 1e-12 * row_scale)
            throw StrictnessViolation(
                k, "near-zero pivot at index " + std::to_string(k) +
                       "; a principal minor vanishes and the factorization recursions do not apply");
        fp.C.at(k, k) = cplx(1.0, 0.0);
        for (int m = k + 1; m <= N; ++m) {
            cplx acc = U.at(k, m);
            for (int j = 1; j < k; ++j) acc -= fp.D.at(k, j) * fp.C.at(j, m);
            fp.C.at(k, m) = acc / fp.D.at(k, k);
        }
    }
    return fp;
}

DenseMatrix lower_inverse(const DenseMatrix& D) {
    const int n = D.size();
    for (int i = 1; i <= n; ++i)
        if (D.at(i, i) == cplx(0.0, 0.0))
            throw InvalidInput("lower_inverse: zero diagonal at index " + std::to_string(i));
    DenseMatrix X(n);
    for (int m = 1; m <= n; ++m) {
        for (int i = m; i <= n; ++i) {
            cplx acc = i == m ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
            for (int j = m; j < i; ++j) acc -= D.at(i, j) * X.at(j, m);
            X.at(i, m) = acc / D.at(i, i);
        }
    }
    return X;
}

std::vector<cplx> solve_lower(const DenseMatrix& D, std::span<const cplx> b) {
    const int n = D.size();
    if (static_cast<int>(b.size()) != n) throw InvalidInput("solve_lower: size mismatch");
    std::vector<cplx> x(n);
    for (int i = 1; i <= n; ++i) {
        if (D.at(i, i) == cplx(0.0, 0.0))
            throw InvalidInput("solve_lower: zero diagonal at index " + std::to_string(i));
        cplx acc = b[i - 1];
        for (int j = 1; j < i; ++j) acc -= D.at(i, j) * x[j - 1];
        x[i - 1] = acc / D.at(i, i);
    }
    return x;
}

std::vector<cplx> dense_solve_oracle(DenseMatrix M, std::vector<cplx> rhs) {
    const int n = M.size();
    if (static_cast<int>(rhs.size()) != n) throw InvalidInput("dense_solve_oracle: size mismatch");
    for (int k = 1; k <= n; ++k) {
        int piv = k;
        double best = std::abs(M.at(k, k));
        for (int i = k + 1; i <= n; ++i) {
            double v = std::abs(M.at(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0) throw InvalidInput("dense_solve_oracle: singular matrix");
        if (piv != k) {
            for (int j = 1; j <= n; ++j) std::swap(M.at(k, j), M.at(piv, j));
            std::swap(rhs[k - 1], rhs[piv - 1]);
        }
        for (int i = k + 1; i <= n; ++i) {
            cplx factor = M.at(i, k) / M.at(k, k);
            if (factor == cplx(0.0, 0.0)) continue;
            for (int j = k; j <= n; ++j) M.at(i, j) -= factor * M.at(k, j);
            rhs[i - 1] -= factor * rhs[k - 1];
        }
    }
    std::vector<cplx> x(n);
    for (int i = n; i >= 1; --i) {
        cplx acc = rhs[i - 1];
        for (int j = i + 1; j <= n; ++j) acc -= M.at(i, j) * x[j - 1];
        x[i - 1] = acc / M.at(i, i);
    }
    return x;
}

std::vector<LimitEstimate> strictly_particular(const UpperSystemProvider& system,
                                               std::span<const int> depths, double tol,
                                               int unknowns) {
    if (unknowns < 1) throw InvalidInput("strictly_particular: unknowns must be >= 1");
    std::vector<std::vector<std::pair<int, cplx>>> samples(unknowns);
    for (int d : depths) {
        UpperSystem sys = system(d);
        const int n = sys.C.size();
        if (static_cast<int>(sys.rhs.size()) != n)
            throw InvalidInput("strictly_particular: rhs size mismatch");
        std::vector<cplx> y(n);
        for (int j = n; j >= 1; --j) {
            cplx acc = sys.rhs[j - 1];
            for (int p = j + 1; p <= n; ++p) acc -= sys.C.at(j, p) * y[p - 1];
            y[j - 1] = acc / sys.C.at(j, j);
        }
        for (int j = 1; j <= unknowns && j + 2 <= n; ++j)
            samples[j - 1].emplace_back(d, y[j - 1]);
    }
    std::vector<LimitEstimate> out;
    out.reserve(unknowns);
    for (auto& s : samples) out.push_back(estimate_limit(std::move(s), tol));
    return out;
}

HomogeneousReport homogeneous_direction(const std::function<DenseMatrix(int)>& C_at,
                                        std::span<const int> depths, double tol, int unknowns) {
    if (unknowns < 1) throw InvalidInput("homogeneous_direction: unknowns must be >= 1");
    HomogeneousReport rep;
    std::vector<std::vector<std::pair<int, cplx>>> ratio_samples(unknowns);
    DenseMatrix largest;

    // run the tail recursion at both parities of every scheduled depth: a
    // banded system whose rows skip columns can zero out one parity chain of
    // the seeded tail unknown, hiding the direction at that truncation
    std::vector<int> run_depths;
    for (int d : depths) {
        if (d > 2) run_depths.push_back(d - 1);
        run_depths.push_back(d);
    }
    std::sort(run_depths.begin(), run_depths.end());
    run_depths.erase(std::unique(run_depths.begin(), run_depths.end()), run_depths.end());

    for (int d : run_depths) {
        DenseMatrix C = C_at(d);
        const int n = C.size();
        if (n > largest.size()) largest = C;
        // tail-normalized back-substitution: Y_n = 1, rows above solved upward
        std::vector<cplx> Y(n);
        Y[n - 1] = cplx(1.0, 0.0);
        for (int j = n - 1; j >= 1; --j) {
            cplx acc(0.0, 0.0);
            for (int p = j + 1; p <= n; ++p) acc += C.at(j, p) * Y[p - 1];
            Y[j - 1] = -acc / C.at(j, j);
            double mag = std::abs(Y[j - 1]);
            if (mag > 1e100) {
                for (int i = j; i <= n; ++i) Y[i - 1] *= 1e-100;  // ratios unaffected
            }
        }
        for (int j = 1; j <= unknowns && j + 1 <= n; ++j) {
            double denom = std::abs(Y[j]);
            if (denom < 1e-250) continue;  // ratio undefined at this depth
            ratio_samples[j - 1].emplace_back(d, -Y[j - 1] / Y[j]);
        }
    }

    rep.ratio_limits.reserve(unknowns);
    bool ratios_ok = true;
    bool bounded_and_populated = true;
    for (auto& s : ratio_samples) {
        bool bounded = s.size() >= 3;
        for (const auto& [d, v] : s)
            if (std::abs(v) > 1e50) bounded = false;
        if (!bounded) bounded_and_populated = false;
        rep.ratio_limits.push_back(estimate_limit(std::move(s), tol));
        if (!rep.ratio_limits.back().stabilized()) ratios_ok = false;
    }
    if (!ratios_ok) {
        if (bounded_and_populated) {
            // bounded oscillation: several null chains may be mixing, the
            // single-ratio recursion cannot decide either way
            rep.undecided = true;
            rep.note = "tail ratios bounded but not stabilized; existence undecided";
        } else {
            rep.note = "tail ratio limits do not exist (divergent or degenerate samples)";
        }
        return rep;
    }

    // Row condition: sum_p (-1)^p C(j, j+p) / (C(j,j) prod_{k<p} S(j+k)) = 0,
    // with the empty product equal to 1. This is exactly the statement that
    // the direction v_i = (-1)^i / prod_{k<i} S(k) annihilates row j.
    const int cond_rows = std::max(1, unknowns / 2);
    bool conditions_ok = true;
    for (int j = 1; j <= cond_rows; ++j) {
        cplx sum(0.0, 0.0);
        cplx prod(1.0, 0.0);
        bool degenerate = false;
        for (int p = 0; j + p <= largest.size() && (p == 0 || j + p - 1 <= unknowns); ++p) {
            if (p > 0) {
                cplx s = *rep.ratio_limits[j + p - 2].value;  // S(j+p-1)
                if (std::abs(s) < 1e-150) {
                    degenerate = true;
                    break;
                }
                prod *= s;
            }
            double sign = (p % 2 == 0) ? 1.0 : -1.0;
            sum += sign * largest.at(j, j + p) / (largest.at(j, j) * prod);
        }
        double defect = degenerate ? std::numeric_limits<double>::infinity() : std::abs(sum);
        rep.condition_defects.push_back(defect);
        if (defect > tol) conditions_ok = false;
    }
    if (!conditions_ok) {
        rep.note = "row condition sums do not vanish";
        return rep;
    }

    rep.exists = true;
    rep.direction.resize(unknowns);
    rep.direction[0] = cplx(1.0, 0.0);
    for (int i = 1; i < unknowns; ++i)
        rep.direction[i] = -rep.direction[i - 1] / *rep.ratio_limits[i - 1].value;
    return rep;
}

}  // namespace fls

#pragma once

#include <random>

#include "fls/series.hpp"

namespace fls::testing {

inline std::mt19937_64 seeded_rng(unsigned seed) { return std::mt19937_64(seed); }

inline cplx random_unit_box(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return {u(rng), u(rng)};
}

/// Random finite-support series with `count` nonzero entries inside [lo, hi].
inline Series random_finite(std::mt19937_64& rng, index_t lo, index_t hi, int count,
                            bool real = false) {
    std::uniform_int_distribution<index_t> idx(lo, hi);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::pair<index_t, cplx>> entries;
    for (int i = 0; i < count; ++i) {
        cplx v = real ? cplx(u(rng), 0.0) : random_unit_box(rng);
        if (std::abs(v) < 0.05) v += cplx(0.3, 0.0);  // keep entries visibly nonzero
        entries.emplace_back(idx(rng), v);
    }
    return {CoeffRule::finite(std::move(entries)), "seeded"};
}

/// The inverse family of 1 - z: b_n = c for n >= 0, c - 1 for n < 0.
inline Series family_member(cplx c) {
    return {combine({{cplx(1.0, 0.0), formula_preset("ones")},
                     {c - cplx(1.0, 0.0), CoeffRule::constant({1.0, 0.0})}}),
            "family member"};
}

inline Series one_minus_z() {
    return {CoeffRule::finite({{0, {1.0, 0.0}}, {1, {-1.0, 0.0}}}), "1-z"};
}

inline Series ones_regular() { return {formula_preset("ones"), "ones_regular"}; }

inline Series all_ones() { return {CoeffRule::constant({1.0, 0.0}), "all_ones"}; }

// frozen reference values
// sum_{n != 0} (-1)^n / sqrt|n| = -2 eta(1/2)
inline constexpr double kAltInvSqrtSum = -1.2097972868432607;
// sum_{n != 0} 1/n^2 = pi^2/3
inline constexpr double kInvSquareSum = 3.2898681336964529;
// prod_{k>=1} (1 - 2^-k)
inline constexpr double kEulerProductHalf = 0.2887880950866024;

}  // namespace fls::testing

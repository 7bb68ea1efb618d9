#include "doctest.h"
#include "helpers.hpp"

#include "fls/inverse.hpp"

using namespace fls;
using namespace fls::testing;

namespace {

SolveConfig quick_config() {
    SolveConfig cfg;
    cfg.depths = {16, 32, 64, 128};
    cfg.window = 8;
    return cfg;
}

}  // namespace

TEST_CASE("build_W realizes the merged reindexed system") {
    // row i carries the original equation n with equation_index(n) = i and
    // column j carries the unknown d_m with equation_index(m) = j, so the
    // entry is a_{n - m}
    Series mono{CoeffRule::finite({{2, {3.0, 0.0}}}), "3z^2"};
    InfiniteMatrix W = build_W(mono);
    for (int i = 1; i <= 6; ++i) {
        for (int j = 1; j <= 6; ++j) {
            index_t n = equation_index_inverse(i);
            index_t m = equation_index_inverse(j);
            cplx expect = (n - m == 2) ? cplx(3.0, 0.0) : cplx(0.0, 0.0);
            CHECK(W.entry(i, j) == expect);
        }
    }
    // row 1 always carries the n = 0 equation
    CHECK(equation_index_inverse(1) == 0);

    InfiniteMatrix WS1 = build_W(Series::one());
    for (int i = 1; i <= 8; ++i)
        for (int j = 1; j <= 8; ++j)
            CHECK(WS1.entry(i, j) == (i == j ? cplx(1.0, 0.0) : cplx(0.0, 0.0)));
}

TEST_CASE("reindexing round trip: W rows re-expand to the convolution equations") {
    auto rng = seeded_rng(42);
    Series f = random_finite(rng, -4, 4, 5);
    std::vector<cplx> d(17);
    for (auto& v : d) v = random_unit_box(rng);
    auto d_at = [&d](index_t m) {
        return (m >= -8 && m <= 8) ? d[static_cast<size_t>(m + 8)] : cplx(0.0, 0.0);
    };
    InfiniteMatrix W = build_W(f);
    for (index_t n = -8; n <= 8; ++n) {
        cplx direct(0.0, 0.0);
        for (index_t m = -8; m <= 8; ++m) direct += f.at(n - m) * d_at(m);
        cplx via_w(0.0, 0.0);
        int row = static_cast<int>(equation_index(n));
        for (int j = 1; j <= 17; ++j)
            via_w += W.entry(row, j) * d_at(equation_index_inverse(j));
        CHECK(std::abs(direct - via_w) <= 1e-14);
    }
}

TEST_CASE("y_to_coeffs mapping") {
    std::vector<cplx> e1{{1.0, 0.0}};
    CoeffRule r1 = y_to_coeffs(e1);
    CHECK(r1(0) == cplx(1.0, 0.0));
    CHECK(r1(1) == cplx(0.0, 0.0));

    std::vector<cplx> y2{{0.0, 0.0}, {5.0, 0.0}};
    CHECK(y_to_coeffs(y2)(1) == cplx(5.0, 0.0));

    std::vector<cplx> y3{{0.0, 0.0}, {0.0, 0.0}, {7.0, 0.0}};
    CHECK(y_to_coeffs(y3)(-1) == cplx(7.0, 0.0));
}

TEST_CASE("invert_strict on the unit series") {
    InverseReport rep = invert_strict(Series::one(), quick_config());
    CHECK(rep.classification == InverseClass::Unique);
    REQUIRE(rep.witness.has_value());
    CHECK(std::abs(rep.witness->at(0) - cplx(1.0, 0.0)) == 0.0);
    for (index_t n = 1; n <= 8; ++n) CHECK(std::abs(rep.witness->at(n)) == 0.0);
}

TEST_CASE("invert_strict recovers 1 - z from the regular ones") {
    SolveConfig cfg = quick_config();
    cfg.window = 16;
    cfg.depths = {16, 32, 64, 128, 256};
    InverseReport rep = invert_strict(ones_regular(), cfg);
    CHECK(rep.classification == InverseClass::Unique);
    REQUIRE(rep.witness.has_value());
    Series expect = one_minus_z();
    for (index_t n = -16; n <= 16; ++n)
        CHECK(std::abs(rep.witness->at(n) - expect.at(n)) <= 1e-9);
    // the strictness of this series is an empirical observation; the minor
    // trail is recorded as evidence
    REQUIRE(rep.evidence.w_minors.has_value());
    CHECK(rep.evidence.w_minors->limit.stabilized());
}

TEST_CASE("invert_strict reports the uncountable family of 1 - z") {
    SolveConfig cfg = quick_config();
    cfg.window = 16;
    cfg.depths = {16, 32, 64, 128, 256};
    InverseReport rep = invert_strict(one_minus_z(), cfg);
    CHECK(rep.classification == InverseClass::Family);
    CHECK(rep.parameter_arity == 1);
    REQUIRE(rep.witness.has_value());
    // the solver lands on the c = 1 family member
    VerificationReport vr = verify_inverse(one_minus_z(), *rep.witness, {-16, 16}, SumPolicy{},
                                           1e-10);
    CHECK(vr.ok);
    REQUIRE(rep.homogeneous.size() == 1);
    for (index_t n = -16; n <= 16; ++n)
        CHECK(std::abs(rep.homogeneous[0].at(n) - cplx(1.0, 0.0)) <= 1e-9);
}

TEST_CASE("invert_strict stays honest outside the strict class") {
    // zero leading minor: the strict method does not apply to 3 z^2
    Series mono{CoeffRule::finite({{2, {3.0, 0.0}}}), "3z^2"};
    InverseReport rep = invert_strict(mono, quick_config());
    CHECK(rep.classification == InverseClass::Undetermined);
    CHECK(!rep.witness.has_value());
    CHECK(rep.evidence.strictness_violation_index.has_value());

    // constant series: degenerate minors, never a verified witness
    InverseReport c = invert_strict(all_ones(), quick_config());
    CHECK(c.classification == InverseClass::Undetermined);
    CHECK(!c.witness.has_value());
    // the closed-form detector corroborates independently
    auto special = classify_special(all_ones());
    REQUIRE(special.has_value());
    CHECK(special->classification == InverseClass::NoInverse);
}

TEST_CASE("build_A1A2 realize the split-system displays") {
    auto rng = seeded_rng(8);
    Series f = random_finite(rng, -5, 5, 6);
    auto [A1, A2] = build_A1A2(f);
    // first rows of the displayed matrices
    for (int j = 1; j <= 6; ++j) {
        CHECK(A1.entry(1, j) == f.at(1 - j));  // a_0, a_-1, a_-2, ...
        CHECK(A2.entry(1, j) == f.at(j));      // a_1, a_2, a_3, ...
    }
    for (int i = 1; i <= 8; ++i) {
        index_t n = equation_index_inverse(i);
        for (int j = 1; j <= 8; ++j) {
            CHECK(A1.entry(i, j) == f.at(n + 1 - j));
            CHECK(A2.entry(i, j) == f.at(n + j));
        }
    }
    // A2 of S_1: row 3 carries the n = -1 equation, so its first entry is a_0
    auto [B1, B2] = build_A1A2(Series::one());
    CHECK(B2.entry(3, 1) == cplx(1.0, 0.0));
}

TEST_CASE("invert_omega reports omega-membership failures honestly") {
    // these inputs are outside the omega class (degenerate split-system
    // minors); the method must say so instead of guessing
    for (const Series& f : {ones_regular(), Series::one(),
                            Series{CoeffRule::finite({{2, {3.0, 0.0}}}), "3z^2"}}) {
        InverseReport rep = invert_omega(f, SplitSequence::zero(), quick_config());
        CHECK(rep.classification == InverseClass::Undetermined);
        CHECK(!rep.witness.has_value());
        CHECK(rep.evidence.a1_minors.has_value());
        CHECK(rep.evidence.a2_minors.has_value());
    }
}

TEST_CASE("omega_solve runs the split pipeline on synthetic systems") {
    // identity split systems: A1 x = s gives x = s, A2 y = t gives y = t
    InfiniteMatrix id([](int i, int j) { return i == j ? cplx(1.0, 0.0) : cplx(0.0, 0.0); });
    SplitSequence s{CoeffRule::finite({{1, {1.0, 0.0}}}), "e1 split"};
    SolveConfig cfg = quick_config();
    InverseReport rep = omega_solve(id, id, s, Series::one(), cfg);
    CHECK(rep.classification == InverseClass::Unique);
    REQUIRE(rep.witness.has_value());
    // x = (1, 0, ...) -> b_0 = 1; t = (1 - s_1, ...) = 0 -> principal part 0
    CHECK(std::abs(rep.witness->at(0) - cplx(1.0, 0.0)) == 0.0);
    for (index_t n = -4; n <= 4; ++n)
        if (n != 0) CHECK(std::abs(rep.witness->at(n)) == 0.0);
    CHECK(rep.parameter_arity == 0);

    // a regular-side system with a nontrivial null direction: the report
    // carries the extra parameter and the direction lives on indices n >= 0
    InfiniteMatrix bidiag([](int i, int j) {
        if (i == j) return cplx(1.0, 0.0);
        if (j == i + 1) return cplx(-1.0, 0.0);
        return cplx(0.0, 0.0);
    });
    InverseReport fam = omega_solve(bidiag, id, s, Series::one(), cfg);
    CHECK(fam.classification == InverseClass::Family);
    CHECK(fam.parameter_arity == 1);
    REQUIRE(fam.homogeneous.size() == 1);
    CHECK(fam.homogeneous[0].at(0) != cplx(0.0, 0.0));
    CHECK(fam.homogeneous[0].at(-1) == cplx(0.0, 0.0));
}

TEST_CASE("split presets") {
    SplitSequence zero = SplitSequence::zero();
    CHECK(zero.values(1) == cplx(0.0, 0.0));

    // the split induced by the true inverse of the regular ones is e1
    SplitSequence s =
        SplitSequence::from_regular_candidate(ones_regular(), one_minus_z(), SumPolicy{});
    CHECK(std::abs(s.values(1) - cplx(1.0, 0.0)) <= 1e-12);
    for (index_t j = 2; j <= 6; ++j) CHECK(std::abs(s.values(j)) <= 1e-12);
}

TEST_CASE("classify_special closed forms") {
    auto a = classify_special({CoeffRule::constant({3.0, 0.0}), "c3"});
    REQUIRE(a.has_value());
    CHECK(a->classification == InverseClass::NoInverse);
    CHECK(a->method == InverseMethod::ClosedForm);

    auto b = classify_special({CoeffRule::geometric({1.0, 0.0}, {2.0, 0.0}), "geo"});
    REQUIRE(b.has_value());
    CHECK(b->classification == InverseClass::NoInverse);

    auto c = classify_special({CoeffRule::arithmetic({1.0, 0.0}, {0.5, 0.0}), "arith"});
    REQUIRE(c.has_value());
    CHECK(c->classification == InverseClass::NoInverse);

    // arithmetic with r = 0 reduces to the constant family
    auto d = classify_special({CoeffRule::arithmetic({2.0, 0.0}, {0.0, 0.0}), "const-by-arith"});
    REQUIRE(d.has_value());
    CHECK(d->classification == InverseClass::NoInverse);

    auto e = classify_special({CoeffRule::finite({{-4, {2.0, 0.0}}}), "2z^-4"});
    REQUIRE(e.has_value());
    CHECK(e->classification == InverseClass::Unique);
    REQUIRE(e->witness.has_value());
    CHECK(e->witness->at(4) == cplx(0.5, 0.0));

    auto zero = classify_special(Series::zero());
    REQUIRE(zero.has_value());
    CHECK(zero->classification == InverseClass::NoInverse);

    CHECK(!classify_special(one_minus_z()).has_value());
}

TEST_CASE("invert_auto prefers closed forms and fills in with the solvers") {
    SolveConfig cfg = quick_config();
    InverseReport mono = invert_auto({CoeffRule::finite({{2, {3.0, 0.0}}}), "3z^2"}, cfg);
    CHECK(mono.classification == InverseClass::Unique);
    CHECK(mono.method == InverseMethod::ClosedForm);
    CHECK(std::abs(mono.witness->at(-2) - cplx(1.0 / 3.0, 0.0)) == 0.0);

    InverseReport ones = invert_auto(ones_regular(), cfg);
    CHECK(ones.method == InverseMethod::Strict);
    CHECK(ones.classification == InverseClass::Unique);
}

TEST_CASE("solver verdicts never contradict the closed-form detectors") {
    auto rng = seeded_rng(140);
    SolveConfig cfg = quick_config();
    cfg.depths = {8, 16, 32, 64};
    cfg.window = 4;
    std::uniform_real_distribution<double> u(0.2, 2.0);
    for (int trial = 0; trial < 6; ++trial) {
        std::vector<Series> bad;
        bad.push_back({CoeffRule::constant({u(rng), 0.0}), "c"});
        bad.push_back({CoeffRule::arithmetic({u(rng), 0.0}, {u(rng), 0.0}), "a"});
        bad.push_back({CoeffRule::geometric({u(rng), 0.0}, {u(rng), 0.0}), "g"});
        for (const Series& f : bad) {
            auto special = classify_special(f);
            REQUIRE(special.has_value());
            REQUIRE(special->classification == InverseClass::NoInverse);
            InverseReport strict = invert_strict(f, cfg);
            CHECK(!strict.witness.has_value());
            InverseReport omega = invert_omega(f, SplitSequence::zero(), cfg);
            CHECK(!omega.witness.has_value());
        }
    }
}

TEST_CASE("method disjointness on fixtures and seeded series") {
    std::vector<int> depths{8, 16, 24, 32, 48, 64};
    CHECK(method_disjointness_check(Series::one(), depths).disjoint);
    CHECK(method_disjointness_check({CoeffRule::finite({{2, {3.0, 0.0}}}), "3z^2"}, depths)
              .disjoint);

    auto rng = seeded_rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
        Series f = random_finite(rng, -4, 4, 2 + trial % 5);
        CHECK(method_disjointness_check(f, depths).disjoint);
    }
}

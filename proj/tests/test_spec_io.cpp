#include "doctest.h"
#include "helpers.hpp"

#include "fls/spec_io.hpp"

using namespace fls;

TEST_CASE("series spec parsing") {
    json fz = json::parse(R"({"kind":"finite","params":{"coeffs":[[0,1,0],[1,-1,0]]}})");
    Series f = parse_series_spec(fz);
    CHECK(f.at(0) == cplx(1.0, 0.0));
    CHECK(f.at(1) == cplx(-1.0, 0.0));

    json cz = json::parse(R"({"kind":"constant","params":{"value":[3,0]}})");
    CHECK(parse_series_spec(cz).at(-5) == cplx(3.0, 0.0));

    json dup = json::parse(R"({"kind":"finite","params":{"coeffs":[[0,1,0],[0,2,0]]}})");
    CHECK_THROWS_AS(parse_series_spec(dup), InvalidInput);

    json unknown = json::parse(R"({"kind":"mystery","params":{}})");
    CHECK_THROWS_AS(parse_series_spec(unknown), InvalidInput);

    json sum = json::parse(R"({"kind":"sum","params":{"terms":[
        {"spec":{"kind":"regular_formula","params":{"name":"ones"}}},
        {"scale":[1.5,0],"spec":{"kind":"constant","params":{"value":[1,0]}}}]}})");
    Series fam = parse_series_spec(sum);
    CHECK(fam.at(3) == cplx(2.5, 0.0));
    CHECK(fam.at(-3) == cplx(1.5, 0.0));

    json badname = json::parse(R"({"kind":"regular_formula","params":{"name":"nope"}})");
    CHECK_THROWS_AS(parse_series_spec(badname), InvalidInput);
}

TEST_CASE("reports serialize deterministically") {
    SumOutcome o = SumOutcome::make_converged({1.5, -0.25}, 12, 1e-12);
    std::string a = outcome_to_json(o).dump();
    std::string b = outcome_to_json(o).dump();
    CHECK(a == b);

    json z = complex_to_json({0.1, -2.0});
    CHECK(z[0].get<double>() == 0.1);
    CHECK(z[1].get<double>() == -2.0);

    // round-trip through text preserves the doubles bit-exactly
    json reparsed = json::parse(z.dump());
    CHECK(reparsed[0].get<double>() == 0.1);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "jsr2/errors.hpp"
#include "jsr2/family.hpp"

#include "oracles.hpp"

using jsr2::Mat2;
using jsr2::MatrixFamily;
using jsr2::SignClass;

namespace {

MatrixFamily proportional_triple() {
    MatrixFamily fam;
    fam.members = {{std::sqrt(3.0), 1, 2, 1.3},
                   {std::sqrt(2.0), 10, 20, std::sqrt(7.0)},
                   {-1, 0.1, 0.2, std::sqrt(5.0)}};
    return fam;
}

MatrixFamily mixed_sign_pair() {
    MatrixFamily fam;
    fam.members = {{-3, 3.5, -4, 4.5}, {0.5, 0, 0, 1}};
    return fam;
}

} // namespace

TEST_CASE("pattern detection on the reference families") {
    jsr2::PatternReport rep = jsr2::detect_pattern(proportional_triple());
    CHECK(rep.holds);
    CHECK_FALSE(rep.all_diagonal);
    CHECK(rep.sign_class == SignClass::Positive);
    // base comes from the largest off-diagonal member (10, 20)
    CHECK(rep.base_b == doctest::Approx(10.0));
    CHECK(rep.base_c == doctest::Approx(20.0));
    REQUIRE(rep.ratios.size() == 3);
    CHECK(rep.ratios[0] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(rep.ratios[1] == doctest::Approx(1.0));
    CHECK(rep.ratios[2] == doctest::Approx(0.01).epsilon(1e-12));

    rep = jsr2::detect_pattern(mixed_sign_pair());
    CHECK(rep.holds); // the zero off-diagonal is parallel to anything
    CHECK(rep.sign_class == SignClass::Negative);
    CHECK(rep.base_b == doctest::Approx(3.5));
    CHECK(rep.base_c == doctest::Approx(-4.0));
    CHECK(rep.ratios[1] == doctest::Approx(0.0));

    MatrixFamily ident;
    ident.members = {Mat2::identity(), Mat2::identity()};
    rep = jsr2::detect_pattern(ident);
    CHECK(rep.holds);
    CHECK(rep.all_diagonal);
    CHECK(rep.sign_class == SignClass::Zero);

    MatrixFamily skew;
    skew.members = {{0, 1, 1, 0}, {0, 1, -1, 0}};
    rep = jsr2::detect_pattern(skew);
    CHECK_FALSE(rep.holds); // cross product is -2
}

TEST_CASE("pattern detection invariances") {
    std::mt19937_64 gen(81);
    for (int trial = 0; trial < 100; ++trial) {
        MatrixFamily fam = oracles::random_pattern_family(gen, 1 + trial % 3 + 1);
        jsr2::PatternReport rep = jsr2::detect_pattern(fam);
        CHECK(rep.holds);

        // the reported ratios reconstruct every off-diagonal against the base
        double off_scale = 0.0;
        for (const Mat2& m : fam.members)
            off_scale = std::max(off_scale,
                                 (std::fabs(m.b) + std::fabs(m.c)) *
                                     (std::fabs(m.b) + std::fabs(m.c)));
        for (std::size_t k = 0; k < fam.size(); ++k) {
            CHECK(std::fabs(fam.members[k].b - rep.ratios[k] * rep.base_b) <=
                  fam.tol.rtol * off_scale);
            CHECK(std::fabs(fam.members[k].c - rep.ratios[k] * rep.base_c) <=
                  fam.tol.rtol * off_scale);
        }

        // positive member scaling preserves holds and sign class
        MatrixFamily scaled = fam;
        for (std::size_t k = 0; k < scaled.size(); ++k)
            scaled.members[k] = scaled.members[k] * oracles::uniform(gen, 0.1, 10.0);
        jsr2::PatternReport rep2 = jsr2::detect_pattern(scaled);
        CHECK(rep2.holds == rep.holds);
        CHECK(rep2.sign_class == rep.sign_class);

        // permutation preserves holds and sign class
        MatrixFamily shuffled = fam;
        std::shuffle(shuffled.members.begin(), shuffled.members.end(), gen);
        jsr2::PatternReport rep3 = jsr2::detect_pattern(shuffled);
        CHECK(rep3.holds == rep.holds);
        CHECK(rep3.sign_class == rep.sign_class);

        // member-wise nonnegativity of b_k c_k for nonnegative sign classes
        if (rep.sign_class != SignClass::Negative) {
            double scale = 0.0;
            for (const Mat2& m : fam.members) {
                double s = std::fabs(m.b) + std::fabs(m.c);
                scale = std::max(scale, s * s);
            }
            for (const Mat2& m : fam.members)
                CHECK(m.b * m.c >= -fam.tol.rtol * scale);
        }
    }
}

TEST_CASE("parse accepts the documented format") {
    MatrixFamily fam = jsr2::parse_family(R"({"matrices":[[[1,0],[0,1]]]})");
    REQUIRE(fam.size() == 1);
    CHECK(fam.members[0].a == 1.0);
    CHECK(fam.members[0].b == 0.0);
    CHECK(fam.tol.rtol == 1e-9);
    CHECK(fam.tol.atol == 1e-12);

    fam = jsr2::parse_family(
        R"({"matrices":[[[1,2],[3,4]],[[5,6],[7,8]]],"tol":{"rtol":1e-6,"atol":1e-10}})");
    REQUIRE(fam.size() == 2);
    CHECK(fam.members[1].c == 7.0);
    CHECK(fam.tol.rtol == 1e-6);
    CHECK(fam.tol.atol == 1e-10);

    // shortest round-trip decimals parse back to the exact binary values
    fam = jsr2::parse_family(
        R"({"matrices":[[[1.7320508075688772,1],[2,1.3]],)"
        R"([[1.4142135623730951,10],[20,2.6457513110645907]],)"
        R"([[-1,0.1],[0.2,2.23606797749979]]]})");
    REQUIRE(fam.size() == 3);
    CHECK(fam.members[0].a == std::sqrt(3.0));
    CHECK(fam.members[1].a == std::sqrt(2.0));
    CHECK(fam.members[1].d == std::sqrt(7.0));
    CHECK(fam.members[2].d == std::sqrt(5.0));
}

TEST_CASE("parse rejects malformed input with diagnostics") {
    CHECK_THROWS_AS(jsr2::parse_family("{"), jsr2::ParseError);
    CHECK_THROWS_AS(jsr2::parse_family("[]"), jsr2::ParseError);
    CHECK_THROWS_AS(jsr2::parse_family(R"({"matrices":[]})"), jsr2::ParseError);
    CHECK_THROWS_AS(jsr2::parse_family(R"({"matrices":[[[1,0],[0]]]})"), jsr2::ParseError);
    CHECK_THROWS_AS(jsr2::parse_family(R"({"matrices":[[[1,0],[0,"x"]]]})"), jsr2::ParseError);
    CHECK_THROWS_AS(jsr2::parse_family(R"({"matrices":[[[1,0],[0,1]],[[1,0]]]})"),
                    jsr2::ParseError);
    CHECK_THROWS_AS(jsr2::parse_family(R"({"matrices":[[[1,1e999],[0,1]]]})"),
                    jsr2::ParseError);
    CHECK_THROWS_AS(
        jsr2::parse_family(R"({"matrices":[[[1,0],[0,1]]],"tol":{"rtol":-1}})"),
        jsr2::ParseError);

    try {
        jsr2::parse_family(R"({"matrices":[[[1,0],[0,1]],[[1,0],[0]]]})");
        FAIL("expected ParseError");
    } catch (const jsr2::ParseError& e) {
        CHECK(std::string(e.what()).find("matrices[1]") != std::string::npos);
    }
}

TEST_CASE("serialization round-trips entries bit-exactly") {
    std::mt19937_64 gen(82);
    for (int trial = 0; trial < 50; ++trial) {
        MatrixFamily fam = oracles::random_family(gen, 1 + trial % 4);
        // stress the renderer with extreme magnitudes as well
        fam.members.push_back({1e300, -1e-300, 5e-324, -0.1});
        fam.members.push_back({std::sqrt(2.0), -std::sqrt(3.0), 0.0, -0.0});
        fam.tol.rtol = oracles::uniform(gen, 1e-12, 1e-6);

        MatrixFamily back = jsr2::parse_family(jsr2::serialize_family(fam));
        REQUIRE(back.size() == fam.size());
        for (std::size_t k = 0; k < fam.size(); ++k) {
            CHECK(back.members[k].a == fam.members[k].a);
            CHECK(back.members[k].b == fam.members[k].b);
            CHECK(back.members[k].c == fam.members[k].c);
            CHECK(back.members[k].d == fam.members[k].d);
        }
        CHECK(back.tol.rtol == fam.tol.rtol);
        CHECK(back.tol.atol == fam.tol.atol);
    }
}

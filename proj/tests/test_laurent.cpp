#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lcade/laurent.hpp"

using namespace lcade;

TEST_CASE("series convention x_i <-> X^{-i}") {
    LocalRule rule = normalize(parse_rule("2x[-1]+2x[0]+3x[1] % 4"));
    LaurentPoly u = to_laurent(rule);
    CHECK(u.coeff(1) == 2);   // 2X from x_{-1}
    CHECK(u.coeff(0) == 2);
    CHECK(u.coeff(-1) == 3);  // 3X^{-1} from x_1
    CHECK(from_laurent(u, 4) == rule);

    LocalRule nine = normalize(parse_rule("4x[-1]+3x[0]+3x[1] % 9"));
    LaurentPoly u9 = to_laurent(nine);
    CHECK(u9.coeff(1) == 4);
    CHECK(u9.coeff(0) == 3);
    CHECK(u9.coeff(-1) == 3);

    CHECK(to_laurent(identity_rule(5)).is_one());
}

TEST_CASE("compose is the series product") {
    LocalRule f = normalize(parse_rule("1x[0]+1x[1] % 2"));
    LocalRule ff = compose(f, f);
    // (1 + X^{-1})^2 = 1 + 2X^{-1} + X^{-2} = 1 + X^{-2} mod 2
    CHECK(ff == normalize(parse_rule("1x[0]+1x[2] % 2")));

    CHECK_THROWS_AS(compose(f, identity_rule(3)), std::invalid_argument);
}

TEST_CASE("power") {
    LocalRule f = normalize(parse_rule("1x[0]+1x[1] % 2"));
    CHECK(power(f, 0) == identity_rule(2));
    CHECK(power(f, 1) == f);
    CHECK(power(f, 2) == compose(f, f));
    CHECK(power(f, 5) == compose(f, power(f, 4)));
}

TEST_CASE("project reduces mod prime powers then normalizes") {
    LocalRule rule = normalize(
        parse_rule("2x[-3]+3x[-2]+5x[-1]+30x[0]+3x[1]+2x[2]+5x[3] % 30"));
    Modulus mod = factorize(30);

    LocalRule p2 = project(rule, mod, 0);
    CHECK(p2.modulus == 2);
    CHECK(p2.l == -2);  // even leading coefficient trimmed
    CHECK(p2.r == 3);
    CHECK(p2.coeffs == std::vector<i64>{1, 1, 0, 1, 0, 1});

    LocalRule nine = normalize(parse_rule("4x[-1]+3x[0]+3x[1] % 9"));
    CHECK(project(nine, 0) == nine);

    LocalRule even = normalize(parse_rule("2x[0]+2x[1] % 6"));
    CHECK(project(even, 0) == zero_rule(2));
}

TEST_CASE("project then crt_recombine is the identity") {
    for (const char* text :
         {"2x[-3]+3x[-2]+5x[-1]+30x[0]+3x[1]+2x[2]+5x[3] % 30", "2x[-1]+2x[0]+3x[1] % 4",
          "5x[-2]+6x[0]+10x[1] % 12", "1x[0] % 6"}) {
        LocalRule rule = normalize(parse_rule(text));
        Modulus mod = factorize(rule.modulus);
        std::vector<LocalRule> parts;
        for (std::size_t i = 0; i < mod.factors.size(); ++i)
            parts.push_back(project(rule, mod, i));
        CHECK(crt_recombine(parts, mod) == rule);
    }
}

TEST_CASE("invertibility criterion") {
    CHECK(is_invertible(normalize(parse_rule("2x[-1]+2x[0]+3x[1] % 4"))));
    CHECK(is_invertible(normalize(parse_rule("4x[-1]+3x[0]+3x[1] % 9"))));
    CHECK(is_invertible(identity_rule(30)));
    CHECK_FALSE(is_invertible(normalize(parse_rule("1x[-1]+1x[1] % 2"))));
    CHECK_FALSE(is_invertible(zero_rule(6)));

    auto bad = invertibility_violations(normalize(parse_rule("1x[-1]+1x[1] % 2")));
    CHECK(bad == std::vector<i64>{2});

    // exactly one unit mod 2 but two units mod 3
    auto mixed = invertibility_violations(normalize(parse_rule("1x[0]+2x[1] % 6")));
    CHECK(mixed == std::vector<i64>{3});
    CHECK(is_invertible(normalize(parse_rule("3x[0]+2x[1] % 6"))));
}

TEST_CASE("worked inverse mod 4") {
    LocalRule f = normalize(parse_rule("2x[-1]+2x[0]+3x[1] % 4"));
    LocalRule g = invert(f);
    CHECK(g == normalize(parse_rule("2x[-3]+2x[-2]+3x[-1] % 4")));
    CHECK(compose(f, g) == identity_rule(4));
    CHECK(compose(g, f) == identity_rule(4));
}

TEST_CASE("worked inverse mod 9") {
    LocalRule f = normalize(parse_rule("4x[-1]+3x[0]+3x[1] % 9"));
    LocalRule g = invert(f);
    CHECK(g == normalize(parse_rule("7x[1]+6x[2]+6x[3] % 9")));
    CHECK(laurent_mul(to_laurent(f), to_laurent(g)).is_one());
}

TEST_CASE("invert reports violating primes") {
    try {
        invert(normalize(parse_rule("1x[-1]+1x[1] % 2")));
        CHECK(false);
    } catch (const NotInvertibleError& e) {
        CHECK(e.violating_primes == std::vector<i64>{2});
    }
}

TEST_CASE("composite-modulus inverse via CRT") {
    // mod 12 = 4 * 3: unit at 1 for p=2 (coeff 3), unit at 0 for p=3 (coeff 4)
    LocalRule f = normalize(parse_rule("4x[0]+3x[1] % 12"));
    REQUIRE(is_invertible(f));
    LocalRule g = invert(f);
    CHECK(compose(f, g) == identity_rule(12));
}

TEST_CASE("step then inverse step restores the interior") {
    LocalRule f = normalize(parse_rule("2x[-1]+2x[0]+3x[1] % 4"));
    LocalRule g = invert(f);
    Segment seg{0, {3, 1, 0, 2, 2, 1, 3, 0, 1, 2, 0, 3, 1, 1, 2, 0, 3, 2, 1, 0}};
    Segment mid = step(f, seg);
    Segment back = step(g, mid);
    for (i64 n = back.lo; n <= back.hi(); ++n) CHECK(back.at(n) == seg.at(n));
    CHECK(back.lo == seg.lo - f.l - g.l);
    CHECK(back.hi() == seg.hi() - f.r - g.r);
}

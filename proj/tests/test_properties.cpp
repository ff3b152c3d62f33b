#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "property_checks.hpp"

using namespace lcade;

TEST_CASE("curve continuity at breakpoints") { CHECK(props::check_curve_continuity(250) == ""); }

TEST_CASE("curve boundary values") { CHECK(props::check_boundary_values(250) == ""); }

TEST_CASE("MTDE equals TDE for prime bipermutative rules") {
    CHECK(props::check_mtde_tde_agreement(250) == "");
}

TEST_CASE("direction homogeneity, antipodal symmetry, case consistency") {
    CHECK(props::check_homogeneity(250) == "");
}

TEST_CASE("composite-modulus additivity") { CHECK(props::check_additivity(250) == ""); }

TEST_CASE("compose algebra and laurent round trip") {
    CHECK(props::check_compose_algebra(250) == "");
}

TEST_CASE("random invertible rules invert exactly") {
    CHECK(props::check_invert_roundtrip(250) == "");
}

TEST_CASE("project then recombine") { CHECK(props::check_project_crt(250) == ""); }

TEST_CASE("pattern count enumeration order") {
    CHECK(props::check_count_order_invariance() == "");
}

TEST_CASE("estimate agreement for width-2 bipermutative rules") {
    CHECK(props::check_estimate_agreement() == "");
}

TEST_CASE("step/invert exhaustive round trip") {
    CHECK(props::check_step_invert_roundtrip(12) == "");
}

// Pattern distinctness in a window is the same thing as metric
// separation at scale m^{-half_width}: a differing cell at |n| <= w
// contributes |dx|/m^{|n|} >= m^{-w} to the row metric
// d(x, y) = sum |x_i - y_i| / m^{|i|}.
TEST_CASE("epsilon separation reduces to pattern distinctness") {
    LocalRule rule = normalize(parse_rule("1x[-1]+1x[1] % 2"));
    WindowSpec w{1, 2, props::kPi / 2};
    detail::WindowEvolver<LocalRule> evolver(rule, w);
    const double eps = std::pow(2.0, -static_cast<double>(w.half_width));

    auto window_rows = [&](u64 code) {
        std::vector<i64> seg(evolver.cone_len());
        for (std::size_t i = 0; i < seg.size(); ++i) seg[i] = (code >> i) & 1;
        std::vector<std::vector<i64>> rows;
        Segment cur{evolver.cone_lo(), seg};
        for (i64 t = 0; t <= w.rows; ++t) {
            std::vector<i64> row;
            auto [lo, hi] = row_site_range(w, t);
            for (i64 n = lo; n <= hi; ++n) row.push_back(cur.at(n));
            rows.push_back(row);
            if (t < w.rows) cur = step(rule, cur);
        }
        return rows;
    };

    const u64 total = 1ULL << evolver.cone_len();
    for (u64 a = 0; a < total; ++a) {
        for (u64 b = a + 1; b < total; ++b) {
            auto ra = window_rows(a), rb = window_rows(b);
            bool distinct = ra != rb;
            double best = 0.0;
            for (i64 t = 0; t <= w.rows; ++t) {
                auto [lo, hi] = row_site_range(w, t);
                double d = 0.0;
                for (i64 n = lo; n <= hi; ++n)
                    d += std::abs(static_cast<double>(
                             ra[static_cast<std::size_t>(t)][static_cast<std::size_t>(n - lo)] -
                             rb[static_cast<std::size_t>(t)][static_cast<std::size_t>(n - lo)])) /
                         std::pow(2.0, std::abs(static_cast<double>(n)));
                best = std::max(best, d);
            }
            CHECK((best >= eps) == distinct);
        }
    }
}

#include <doctest.h>

#include <fsuq/fuzzy_variable.hpp>

#include <cmath>
#include <stdexcept>

using namespace fsuq;

TEST_CASE("triangular construction and cuts") {
    FuzzyVariable fv = make_triangular(1.00, 1.06, 1.20);

    Interval c0 = fv.alpha_cut(0.0);
    CHECK(c0.lo == doctest::Approx(1.00).epsilon(1e-15));
    CHECK(c0.hi == doctest::Approx(1.20).epsilon(1e-15));

    Interval c1 = fv.alpha_cut(1.0);
    CHECK(c1.lo == doctest::Approx(1.06).epsilon(1e-15));
    CHECK(c1.hi == doctest::Approx(1.06).epsilon(1e-15));

    // direct evaluation of the marginal cut formula [l + a(m-l), r - a(r-m)]
    Interval ch = fv.alpha_cut(0.5);
    CHECK(ch.lo == doctest::Approx(1.03).epsilon(1e-14));
    CHECK(ch.hi == doctest::Approx(1.13).epsilon(1e-14));

    FuzzyVariable g = make_triangular(0.10, 0.13, 0.20);
    Interval gh = g.alpha_cut(0.5);
    CHECK(gh.lo == doctest::Approx(0.115).epsilon(1e-14));
    CHECK(gh.hi == doctest::Approx(0.165).epsilon(1e-14));

    CHECK_THROWS_AS(make_triangular(2.0, 1.0, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(make_triangular(1.0, 3.0, 2.0), std::invalid_argument);
}

TEST_CASE("degenerate triangles and crisp variables") {
    FuzzyVariable crisp = make_triangular(5.0, 5.0, 5.0);
    CHECK(crisp.is_crisp());
    for (double a : {0.0, 0.3, 1.0}) {
        Interval c = crisp.alpha_cut(a);
        CHECK(c.lo == 5.0);
        CHECK(c.hi == 5.0);
    }
    CHECK(crisp.geq_scalar(5.0));
    CHECK(crisp.leq_scalar(5.0));

    FuzzyVariable left = make_triangular(1.0, 1.0, 2.0);
    CHECK(left.alpha_cut(0.5).lo == doctest::Approx(1.0));
    CHECK(left.alpha_cut(0.5).hi == doctest::Approx(1.5));
}

TEST_CASE("polygonal construction from ten vertices") {
    std::vector<double> z3 = {0, 0.25, 0.50, 0.75, 1.00, 1.20, 1.25, 1.50, 1.75, 2.00};
    FuzzyVariable fv = make_polygonal(z3);
    CHECK(fv.alpha_cut(0.0).lo == doctest::Approx(0.0));
    CHECK(fv.alpha_cut(0.0).hi == doctest::Approx(2.00));
    CHECK(fv.alpha_cut(1.0).lo == doctest::Approx(1.00));
    CHECK(fv.alpha_cut(1.0).hi == doctest::Approx(1.20));

    std::vector<double> z1 = {0.1222, 0.1249, 0.1277, 0.1304, 0.1330,
                              0.1360, 0.1388, 0.1445, 0.1502, 0.1559};
    FuzzyVariable f1 = make_polygonal(z1);
    CHECK(f1.alpha_cut(0.5).lo == doctest::Approx(0.1277).epsilon(1e-15));
    CHECK(f1.alpha_cut(0.5).hi == doctest::Approx(0.1445).epsilon(1e-15));

    // repeated adjacent vertices are legal (non-strict ascending)
    std::vector<double> z2 = {0.0200, 0.0217, 0.0236, 0.0236, 0.0285,
                              0.0345, 0.0360, 0.0360, 0.0408, 0.0430};
    FuzzyVariable f2 = make_polygonal(z2);
    CHECK(f2.alpha_cut(0.5).lo == doctest::Approx(0.0236));
    CHECK(f2.alpha_cut(0.75).lo == doctest::Approx(0.0236));

    FuzzyVariable cc = make_polygonal(std::vector<double>(10, 3.0));
    CHECK(cc.is_crisp());

    std::vector<double> bad = {0, 1, 0.5, 2, 3, 4, 5, 6, 7, 8};
    CHECK_THROWS_AS(make_polygonal(bad), std::invalid_argument);
    CHECK_THROWS_AS(make_polygonal(std::vector<double>{0, 1, 2}), std::invalid_argument);
}

TEST_CASE("alpha_cut interpolation, bounds checking, nesting sweep") {
    FuzzyVariable fv = make_triangular(1.00, 1.06, 1.20);
    CHECK_THROWS_AS(fv.alpha_cut(-0.01), std::invalid_argument);
    CHECK_THROWS_AS(fv.alpha_cut(1.01), std::invalid_argument);

    Interval prev = fv.alpha_cut(0.0);
    for (int i = 1; i <= 100; ++i) {
        Interval cur = fv.alpha_cut(i / 100.0);
        CHECK(prev.lo <= cur.lo);
        CHECK(cur.hi <= prev.hi);
        prev = cur;
    }
}

TEST_CASE("membership evaluation") {
    FuzzyVariable fv = make_triangular(1.00, 1.06, 1.20);
    CHECK(fv.membership(1.06) == doctest::Approx(1.0));
    CHECK(fv.membership(0.5) == 0.0);
    CHECK(fv.membership(5.0) == 0.0);
    CHECK(fv.membership(1.03) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fv.membership(1.13) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fv.membership(1.00) == doctest::Approx(0.0));
    CHECK(fv.membership(1.20) == doctest::Approx(0.0));

    // plateau on the left limb: membership jumps past the flat stretch
    std::vector<double> z2 = {0.0200, 0.0217, 0.0236, 0.0236, 0.0285,
                              0.0345, 0.0360, 0.0360, 0.0408, 0.0430};
    FuzzyVariable f2 = make_polygonal(z2);
    CHECK(f2.membership(0.0236) == doctest::Approx(0.75));
    CHECK(f2.membership(0.0360) == doctest::Approx(0.75));
}

TEST_CASE("membership / alpha_cut round trip at stored levels") {
    std::vector<double> z1 = {0.1222, 0.1249, 0.1277, 0.1304, 0.1330,
                              0.1360, 0.1388, 0.1445, 0.1502, 0.1559};
    FuzzyVariable fv = make_polygonal(z1);
    for (double a : fv.levels()) {
        Interval c = fv.alpha_cut(a);
        for (double z : {c.lo, c.mid(), c.hi}) {
            CHECK(fv.membership(z) >= a - 1e-12);
        }
        if (a > 0.0) {
            CHECK(fv.membership(c.lo - 1e-9) < a);
            CHECK(fv.membership(c.hi + 1e-9) < a);
        }
    }
}

TEST_CASE("geq_scalar / leq_scalar against the zero cut") {
    FuzzyVariable fv = make_triangular(1.00, 1.06, 1.20);
    CHECK(fv.geq_scalar(0.9));
    CHECK_FALSE(fv.geq_scalar(1.05));
    CHECK(fv.leq_scalar(1.20));
    CHECK_FALSE(fv.leq_scalar(1.19));

    FuzzyVariable crisp = make_triangular(5, 5, 5);
    CHECK((crisp.geq_scalar(5.0) && crisp.leq_scalar(5.0)));
    CHECK_FALSE((fv.geq_scalar(1.0) && fv.leq_scalar(1.0)));
}

TEST_CASE("from_alpha_cuts validates and reproduces") {
    FuzzyVariable tri = from_alpha_cuts({0.0, 1.0}, {{0.0, 2.0}, {1.0, 1.0}});
    CHECK(tri.alpha_cut(0.5).lo == doctest::Approx(0.5));
    CHECK(tri.alpha_cut(0.5).hi == doctest::Approx(1.5));

    FuzzyVariable fv = make_triangular(1.00, 1.06, 1.20);
    FuzzyVariable copy = from_alpha_cuts(fv.levels(), fv.cuts());
    CHECK(copy.levels() == fv.levels());
    for (std::size_t i = 0; i < fv.cuts().size(); ++i) {
        CHECK(copy.cuts()[i].lo == fv.cuts()[i].lo);
        CHECK(copy.cuts()[i].hi == fv.cuts()[i].hi);
    }

    CHECK_THROWS_AS(from_alpha_cuts({0.0, 1.0}, {{0.0, 1.0}, {2.0, 3.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(from_alpha_cuts({0.5, 1.0}, {{0.0, 2.0}, {1.0, 1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(from_alpha_cuts({0.0}, {{0.0, 2.0}}), std::invalid_argument);

    // rounding-scale nesting violations are absorbed, not fatal
    FuzzyVariable snapped = from_alpha_cuts(
        {0.0, 1.0}, {{0.0, 1.0}, {-1e-13, 1.0 + 1e-13}});
    CHECK(snapped.alpha_cut(1.0).lo >= snapped.alpha_cut(0.0).lo);
    CHECK(snapped.alpha_cut(1.0).hi <= snapped.alpha_cut(0.0).hi);
}

TEST_CASE("validate reports violations on raw tables") {
    FuzzyVariable fv = make_triangular(1.0, 1.06, 1.2);
    CHECK(fv.validate().empty());

    auto v1 = validate_cut_table({0.0, 1.0}, {{0.0, 1.0}, {2.0, 3.0}});
    REQUIRE(v1.size() == 1);
    CHECK(v1[0].find("nest") != std::string::npos);

    auto v2 = validate_cut_table({0.0, 1.0}, {{0.0, 1.0}, {0.8, 0.2}});
    CHECK(!v2.empty());  // empty modal cut: lo > hi

    auto v3 = validate_cut_table({0.2, 1.0}, {{0.0, 1.0}, {0.4, 0.6}});
    CHECK(!v3.empty());  // levels must start at 0

    auto v4 = validate_cut_table({0.0, 0.5}, {{0.0, 1.0}, {0.4, 0.6}});
    CHECK(!v4.empty());  // levels must end at 1
}

TEST_CASE("membership polyline traces the cut endpoints") {
    FuzzyVariable fv = make_triangular(0.0, 1.0, 3.0);
    auto poly = fv.membership_polyline();
    REQUIRE(poly.size() >= 4);
    CHECK(poly.front().first == doctest::Approx(0.0));
    CHECK(poly.front().second == doctest::Approx(0.0));
    CHECK(poly.back().first == doctest::Approx(3.0));
    CHECK(poly.back().second == doctest::Approx(0.0));
    for (std::size_t i = 1; i < poly.size(); ++i)
        CHECK(poly[i - 1].first <= poly[i].first + 1e-15);
    double peak = 0.0;
    for (auto& [z, d] : poly) peak = std::max(peak, d);
    CHECK(peak == doctest::Approx(1.0));
}

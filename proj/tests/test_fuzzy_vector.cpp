#include <doctest.h>

#include <fsuq/fuzzy_vector.hpp>

#include <cmath>
#include <stdexcept>

using namespace fsuq;

namespace {

FuzzyVector example1_vector(Interaction mode) {
    return FuzzyVector({make_triangular(1.00, 1.06, 1.20),
                        make_triangular(0.10, 0.13, 0.20)},
                       mode);
}

FuzzyVector moment_decagons(Interaction mode) {
    std::vector<std::vector<double>> verts = {
        {0.1222, 0.1249, 0.1277, 0.1304, 0.1330, 0.1360, 0.1388, 0.1445, 0.1502, 0.1559},
        {0.0200, 0.0217, 0.0236, 0.0236, 0.0285, 0.0345, 0.0360, 0.0360, 0.0408, 0.0430},
        {0, 0.25, 0.50, 0.75, 1.00, 1.20, 1.25, 1.50, 1.75, 2.00},
        {-1.00, -0.55, -0.20, 0, 0.50, 1.00, 1.50, 2.00, 3.30, 4.50}};
    std::vector<FuzzyVariable> comps;
    for (auto& v : verts) comps.push_back(make_polygonal(v));
    return FuzzyVector(std::move(comps), mode);
}

double point_segment_dist(const std::vector<double>& p, const std::vector<double>& a,
                          const std::vector<double>& b) {
    double dot = 0.0, len2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        dot += (p[i] - a[i]) * (b[i] - a[i]);
        len2 += (b[i] - a[i]) * (b[i] - a[i]);
    }
    double t = len2 > 0.0 ? std::clamp(dot / len2, 0.0, 1.0) : 0.0;
    double d2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double d = p[i] - (a[i] + t * (b[i] - a[i]));
        d2 += d * d;
    }
    return std::sqrt(d2);
}

double point_chain_dist(const std::vector<double>& p, const PolylineCut& chain) {
    if (chain.vertices.size() == 1) {
        return point_segment_dist(p, chain.vertices[0], chain.vertices[0]);
    }
    double best = 1e300;
    for (std::size_t i = 1; i < chain.vertices.size(); ++i)
        best = std::min(best,
                        point_segment_dist(p, chain.vertices[i - 1], chain.vertices[i]));
    return best;
}

}  // namespace

TEST_CASE("non-interactive joint cut is the marginal box") {
    FuzzyVector fvec = example1_vector(Interaction::NonInteractive);
    JointAlphaCut cut = fvec.joint_alpha_cut(0.0);
    REQUIRE(cut.is_box());
    const BoxCut& box = cut.box();
    REQUIRE(box.bounds.size() == 2);
    CHECK(box.bounds[0].lo == doctest::Approx(1.00));
    CHECK(box.bounds[0].hi == doctest::Approx(1.20));
    CHECK(box.bounds[1].lo == doctest::Approx(0.10));
    CHECK(box.bounds[1].hi == doctest::Approx(0.20));

    CHECK_THROWS_AS(fvec.joint_alpha_cut(1.5), std::invalid_argument);
    CHECK_THROWS_AS(FuzzyVector({}, Interaction::NonInteractive), std::invalid_argument);
}

TEST_CASE("fully interactive zero cut is the two-segment diagonal chain") {
    FuzzyVector fvec = example1_vector(Interaction::FullyInteractivePolygonal);
    JointAlphaCut cut = fvec.joint_alpha_cut(0.0);
    REQUIRE_FALSE(cut.is_box());
    const PolylineCut& pl = cut.polyline();

    // stored levels are {0,.25,.5,.75,1}; for triangular marginals all the
    // intermediate vertices are collinear with the outer ones, so the chain
    // geometrically runs (1.00,0.10) -> (1.06,0.13) -> (1.20,0.20)
    REQUIRE(pl.vertices.size() >= 3);
    CHECK(pl.vertices.front()[0] == doctest::Approx(1.00));
    CHECK(pl.vertices.front()[1] == doctest::Approx(0.10));
    CHECK(pl.vertices.back()[0] == doctest::Approx(1.20));
    CHECK(pl.vertices.back()[1] == doctest::Approx(0.20));

    double L0 = std::sqrt(0.06 * 0.06 + 0.03 * 0.03) + std::sqrt(0.14 * 0.14 + 0.07 * 0.07);
    CHECK(pl.total_length() == doctest::Approx(L0).epsilon(1e-12));
    CHECK(L0 == doctest::Approx(0.22360679).epsilon(1e-7));

    // modal point sits at cumulative length of the first leg
    double L1 = std::sqrt(0.06 * 0.06 + 0.03 * 0.03);
    auto mid = arc_length_point(pl, L1);
    CHECK(mid[0] == doctest::Approx(1.06).epsilon(1e-12));
    CHECK(mid[1] == doctest::Approx(0.13).epsilon(1e-12));

    auto p0 = arc_length_point(pl, 0.0);
    CHECK(p0[0] == doctest::Approx(1.00));
    CHECK(p0[1] == doctest::Approx(0.10));
    auto p1 = arc_length_point(pl, pl.total_length());
    CHECK(p1[0] == doctest::Approx(1.20));
    CHECK(p1[1] == doctest::Approx(0.20));

    CHECK_THROWS_AS(arc_length_point(pl, -1e-9), std::invalid_argument);
    CHECK_THROWS_AS(arc_length_point(pl, pl.total_length() + 1e-9),
                    std::invalid_argument);
}

TEST_CASE("fully interactive modal cut degenerates to the modal point") {
    FuzzyVector fvec = example1_vector(Interaction::FullyInteractivePolygonal);
    JointAlphaCut cut = fvec.joint_alpha_cut(1.0);
    const PolylineCut& pl = cut.polyline();
    REQUIRE(pl.vertices.size() == 1);
    CHECK(pl.total_length() == 0.0);
    CHECK(pl.vertices[0][0] == doctest::Approx(1.06));
    CHECK(pl.vertices[0][1] == doctest::Approx(0.13));
    auto p = arc_length_point(pl, 0.0);
    CHECK(p[0] == doctest::Approx(1.06));
}

TEST_CASE("chain inclusion: higher-alpha chains lie on lower-alpha chains") {
    FuzzyVector fvec = moment_decagons(Interaction::FullyInteractivePolygonal);
    for (double a1 : {0.0, 0.1, 0.25, 0.4}) {
        const PolylineCut outer = fvec.joint_alpha_cut(a1).polyline();
        for (double da : {0.05, 0.25, 0.6}) {
            double a2 = std::min(1.0, a1 + da);
            const PolylineCut inner = fvec.joint_alpha_cut(a2).polyline();
            for (auto& v : inner.vertices)
                CHECK(point_chain_dist(v, outer) <= 1e-12);
        }
    }
}

TEST_CASE("box inclusion across levels") {
    FuzzyVector fvec = moment_decagons(Interaction::NonInteractive);
    BoxCut outer = fvec.joint_alpha_cut(0.2).box();
    BoxCut inner = fvec.joint_alpha_cut(0.7).box();
    for (int i = 0; i < 4; ++i)
        CHECK(outer.bounds[i].contains(inner.bounds[i]));
}

TEST_CASE("marginal consistency of joint cuts") {
    FuzzyVector fvec = moment_decagons(Interaction::FullyInteractivePolygonal);
    for (double a : {0.0, 0.3, 0.75}) {
        const PolylineCut pl = fvec.joint_alpha_cut(a).polyline();
        for (int i = 0; i < fvec.dim(); ++i) {
            double lo = 1e300, hi = -1e300;
            for (auto& v : pl.vertices) {
                lo = std::min(lo, v[i]);
                hi = std::max(hi, v[i]);
            }
            Interval c = fvec.component(i).alpha_cut(a);
            CHECK(lo == doctest::Approx(c.lo).epsilon(1e-14));
            CHECK(hi == doctest::Approx(c.hi).epsilon(1e-14));
        }
    }

    FuzzyVector box = moment_decagons(Interaction::NonInteractive);
    BoxCut b = box.joint_alpha_cut(0.3).box();
    for (int i = 0; i < box.dim(); ++i) {
        Interval c = box.component(i).alpha_cut(0.3);
        CHECK(b.bounds[i].lo == c.lo);
        CHECK(b.bounds[i].hi == c.hi);
    }
}

TEST_CASE("chains are coordinatewise monotone and arcs strictly ascend") {
    FuzzyVector fvec = moment_decagons(Interaction::FullyInteractivePolygonal);
    for (double a : {0.0, 0.33, 0.66}) {
        const PolylineCut pl = fvec.joint_alpha_cut(a).polyline();
        for (std::size_t k = 1; k < pl.vertices.size(); ++k) {
            for (int i = 0; i < fvec.dim(); ++i)
                CHECK(pl.vertices[k - 1][i] <= pl.vertices[k][i] + 1e-15);
            CHECK(pl.arc[k] > pl.arc[k - 1]);
        }
        CHECK(pl.arc.front() == 0.0);
    }
}

TEST_CASE("arc_length_point is 1-Lipschitz") {
    FuzzyVector fvec = moment_decagons(Interaction::FullyInteractivePolygonal);
    const PolylineCut pl = fvec.joint_alpha_cut(0.0).polyline();
    double L = pl.total_length();
    for (int i = 0; i < 40; ++i) {
        double s1 = L * i / 40.0, s2 = L * (i + 2) / 42.0;
        auto p = arc_length_point(pl, s1);
        auto q = arc_length_point(pl, s2);
        double d2 = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) d2 += (p[k] - q[k]) * (p[k] - q[k]);
        CHECK(std::sqrt(d2) <= std::abs(s1 - s2) + 1e-12);
    }
}

TEST_CASE("discretize boxes: tensor grid with corners") {
    FuzzyVector fvec = example1_vector(Interaction::NonInteractive);
    auto corners = discretize(fvec.joint_alpha_cut(0.0), 2);
    REQUIRE(corners.size() == 4);
    // lexicographic corner sweep
    CHECK(corners[0][0] == doctest::Approx(1.00));
    CHECK(corners[0][1] == doctest::Approx(0.10));
    CHECK(corners[3][0] == doctest::Approx(1.20));
    CHECK(corners[3][1] == doctest::Approx(0.20));

    auto grid = discretize(fvec.joint_alpha_cut(0.0), 5);
    CHECK(grid.size() == 25);

    // degenerate (modal) box collapses to a single point
    auto modal = discretize(fvec.joint_alpha_cut(1.0), 7);
    REQUIRE(modal.size() == 1);
    CHECK(modal[0][0] == doctest::Approx(1.06));

    CHECK_THROWS_AS(discretize(fvec.joint_alpha_cut(0.0), 1), std::invalid_argument);
}

TEST_CASE("discretize polylines: uniform in arc length, vertices snapped in") {
    FuzzyVector fvec = moment_decagons(Interaction::FullyInteractivePolygonal);
    JointAlphaCut cut = fvec.joint_alpha_cut(0.0);
    auto pts = discretize(cut, 181);
    CHECK(pts.size() == 181);

    const PolylineCut& pl = cut.polyline();
    // endpoints exact
    for (int i = 0; i < 4; ++i) {
        CHECK(pts.front()[i] == doctest::Approx(pl.vertices.front()[i]));
        CHECK(pts.back()[i] == doctest::Approx(pl.vertices.back()[i]));
    }
    // every chain vertex appears among the samples
    for (auto& v : pl.vertices) {
        double best = 1e300;
        for (auto& p : pts) {
            double d2 = 0.0;
            for (int i = 0; i < 4; ++i) d2 += (p[i] - v[i]) * (p[i] - v[i]);
            best = std::min(best, d2);
        }
        CHECK(std::sqrt(best) <= 1e-12);
    }
    // all samples on the chain
    for (auto& p : pts) CHECK(point_chain_dist(p, pl) <= 1e-12);

    // two-vertex chain at resolution 2 gives exactly the endpoints
    FuzzyVector seg({make_triangular(0.0, 0.0, 1.0, {0.0, 1.0})},
                    Interaction::FullyInteractivePolygonal);
    REQUIRE(seg.joint_alpha_cut(0.0).polyline().vertices.size() == 2);
    auto ends = discretize(seg.joint_alpha_cut(0.0), 2);
    REQUIRE(ends.size() == 2);
    CHECK(ends[0][0] == doctest::Approx(0.0));
    CHECK(ends[1][0] == doctest::Approx(1.0));

    // when the chain has more vertices than the requested resolution, every
    // vertex is still present and the count grows to fit
    FuzzyVector tri({make_triangular(0.0, 0.5, 1.0)},
                    Interaction::FullyInteractivePolygonal);
    auto dense = discretize(tri.joint_alpha_cut(0.0), 2);
    CHECK(dense.size() == tri.joint_alpha_cut(0.0).polyline().vertices.size());

    // modal polyline is a single point regardless of resolution
    auto modal = discretize(fvec.joint_alpha_cut(1.0), 181);
    REQUIRE(modal.size() >= 1);
    CHECK(point_chain_dist(modal[0], fvec.joint_alpha_cut(1.0).polyline()) <= 1e-12);
}

TEST_CASE("degenerate chain segments are dropped") {
    // both coordinates share identical cuts at adjacent levels, so the chain
    // vertex repeats exactly and the duplicate must not enter the arc table
    std::vector<double> flat = {0.0, 0.1, 0.2, 0.2, 0.3, 0.5, 0.6, 0.6, 0.7, 0.8};
    FuzzyVector fvec({make_polygonal(flat), make_polygonal(flat)},
                     Interaction::FullyInteractivePolygonal);
    const PolylineCut pl = fvec.joint_alpha_cut(0.0).polyline();
    for (std::size_t k = 1; k < pl.vertices.size(); ++k) {
        CHECK(pl.arc[k] > pl.arc[k - 1]);
        bool same = true;
        for (int i = 0; i < 2; ++i)
            same = same && pl.vertices[k][i] == pl.vertices[k - 1][i];
        CHECK_FALSE(same);
    }
}

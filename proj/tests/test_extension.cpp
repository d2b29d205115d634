#include <doctest.h>

#include <fsuq/extension.hpp>
#include <fsuq/sampler.hpp>
#include <fsuq/translation.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

using namespace fsuq;

namespace {

const std::vector<double> kLevels = {0.0, 0.25, 0.5, 0.75, 1.0};

FuzzyVector triangular_pair(Interaction mode) {
    return FuzzyVector({make_triangular(0.0, 1.0, 2.0), make_triangular(0.0, 1.0, 2.0)},
                       mode);
}

}  // namespace

TEST_CASE("extend with the identity map returns the input cuts") {
    for (auto mode : {Interaction::NonInteractive, Interaction::FullyInteractivePolygonal}) {
        FuzzyVector fvec({make_triangular(1.0, 2.0, 4.0)}, mode);
        CrispMap id = [](const std::vector<double>& z) { return z[0]; };
        FuzzyVariable out = extend(id, fvec, kLevels, 181);
        for (double a : kLevels) {
            Interval got = out.alpha_cut(a);
            Interval want = fvec.component(0).alpha_cut(a);
            CHECK(got.lo == doctest::Approx(want.lo).epsilon(1e-12));
            CHECK(got.hi == doctest::Approx(want.hi).epsilon(1e-12));
        }
        CHECK(out.validate().empty());
    }
}

TEST_CASE("extend of a sum over a non-interactive box") {
    FuzzyVector fvec = triangular_pair(Interaction::NonInteractive);
    CrispMap sum = [](const std::vector<double>& z) { return z[0] + z[1]; };
    FuzzyVariable out = extend(sum, fvec, kLevels, 21);
    CHECK(out.alpha_cut(0.0).lo == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(out.alpha_cut(0.0).hi == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(out.alpha_cut(1.0).lo == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(out.alpha_cut(1.0).hi == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("extend at the modal level evaluates the modal point") {
    FuzzyVector fvec({make_triangular(1.00, 1.06, 1.20),
                      make_triangular(0.10, 0.13, 0.20)},
                     Interaction::FullyInteractivePolygonal);
    const double L = 2.0;
    CrispMap q1 = [L](const std::vector<double>& z) {
        return (L / std::sqrt(3.0)) * std::exp(-z[0] + 0.5 * z[1] * z[1]);
    };
    FuzzyVariable out = extend(q1, fvec, kLevels, 181);
    double modal = q1({1.06, 0.13});
    CHECK(modal == doctest::Approx(0.403448).epsilon(5e-6));
    CHECK(out.alpha_cut(1.0).lo == doctest::Approx(modal).epsilon(1e-12));
    CHECK(out.alpha_cut(1.0).hi == doctest::Approx(modal).epsilon(1e-12));
}

TEST_CASE("extend rejects empty level lists and reports failing points") {
    FuzzyVector fvec({make_triangular(0.0, 1.0, 2.0)}, Interaction::NonInteractive);
    CrispMap id = [](const std::vector<double>& z) { return z[0]; };
    CHECK_THROWS_AS(extend(id, fvec, {}, 11), std::invalid_argument);

    CrispMap bomb = [](const std::vector<double>& z) -> double {
        if (z[0] > 1.5) throw std::runtime_error("boom");
        return z[0];
    };
    try {
        extend(bomb, fvec, kLevels, 11);
        FAIL("expected propagation");
    } catch (const std::runtime_error& e) {
        std::string msg = e.what();
        CHECK(msg.find("z = (") != std::string::npos);
        CHECK(msg.find("boom") != std::string::npos);
    }
}

TEST_CASE("extend_oracle brute force against extend") {
    FuzzyVector fvec = triangular_pair(Interaction::NonInteractive);
    CrispMap sum = [](const std::vector<double>& z) { return z[0] + z[1]; };

    auto grid = membership_grid(fvec, 401);
    CHECK(grid.size() == 401u * 401u);
    std::vector<double> edges(201);
    for (int i = 0; i <= 200; ++i) edges[i] = -0.2 + 4.4 * i / 200.0;
    auto samples = extend_oracle(sum, grid, edges);
    CHECK(samples.size() == 200);

    // one output bin plus the z-grid shortfall of each coordinate
    double bin_w = edges[1] - edges[0];
    double tol = bin_w + 2.0 * (2.0 / 400.0) + 1e-12;
    FuzzyVariable direct = extend(sum, fvec, kLevels, 401);
    for (double a : {0.25, 0.75}) {
        // oracle cut at level a: abscissa range where membership >= a
        double lo = 1e300, hi = -1e300;
        for (const auto& s : samples) {
            if (s.membership >= a) {
                lo = std::min(lo, s.value);
                hi = std::max(hi, s.value);
            }
        }
        Interval cut = direct.alpha_cut(a);
        CHECK(std::abs(lo - cut.lo) <= tol);
        CHECK(std::abs(hi - cut.hi) <= tol);
    }
}

TEST_CASE("extend_oracle handles identity and constant maps") {
    FuzzyVector fvec({make_triangular(0.0, 1.0, 2.0)}, Interaction::NonInteractive);
    auto grid = membership_grid(fvec, 401);

    std::vector<double> edges(101);
    for (int i = 0; i <= 100; ++i) edges[i] = -0.1 + 2.2 * i / 100.0;
    CrispMap id = [](const std::vector<double>& z) { return z[0]; };
    auto samples = extend_oracle(id, grid, edges);
    double bin_w = edges[1] - edges[0];
    for (const auto& s : samples) {
        double expected = fvec.component(0).membership(s.value);
        CHECK(std::abs(s.membership - expected) <= bin_w + 1e-12);
    }

    CrispMap constant = [](const std::vector<double>&) { return 0.7; };
    auto flat = extend_oracle(constant, grid, edges);
    for (const auto& s : flat) {
        if (0.7 >= s.value - 0.5 * bin_w && 0.7 < s.value + 0.5 * bin_w)
            CHECK(s.membership == doctest::Approx(1.0));
        else
            CHECK(s.membership == 0.0);
    }
}

TEST_CASE("fuzzy_expectation of a deterministic map matches extend") {
    FuzzyVector fvec = triangular_pair(Interaction::NonInteractive);
    StochasticMap det{1, [](const std::vector<double>&, const std::vector<double>& z) {
                          return z[0] + z[1];
                      }};
    Sampler s(5);
    FuzzyVariable fe = fuzzy_expectation(det, fvec, s, 16, kLevels, 21);
    CrispMap sum = [](const std::vector<double>& z) { return z[0] + z[1]; };
    FuzzyVariable ex = extend(sum, fvec, kLevels, 21);
    for (double a : kLevels) {
        CHECK(fe.alpha_cut(a).lo == doctest::Approx(ex.alpha_cut(a).lo).epsilon(1e-14));
        CHECK(fe.alpha_cut(a).hi == doctest::Approx(ex.alpha_cut(a).hi).epsilon(1e-14));
    }
}

TEST_CASE("fuzzy_expectation of pure noise degenerates to the sample mean") {
    FuzzyVector fvec = triangular_pair(Interaction::NonInteractive);
    StochasticMap noise{1, [](const std::vector<double>& y, const std::vector<double>&) {
                            return y[0];
                        }};
    Sampler s(31);
    const int ms = 2000;
    FuzzyVariable fe = fuzzy_expectation(noise, fvec, s, ms, kLevels, 11);
    for (double a : kLevels) {
        Interval c = fe.alpha_cut(a);
        CHECK(c.width() <= 1e-14);
        CHECK(std::abs(c.lo) <= 3.0 / std::sqrt(double(ms)));
    }
    CHECK_THROWS_AS(fuzzy_expectation(noise, fvec, s, 0, kLevels, 11),
                    std::invalid_argument);
}

TEST_CASE("type-1 fuzzy cdf envelopes") {
    CdfFamily normal_family = [](double y0, const std::vector<double>& theta) {
        return standard_normal_cdf(y0 - theta[0]);
    };

    FuzzyVector crisp({make_triangular(0.5, 0.5, 0.5)}, Interaction::NonInteractive);
    std::vector<double> y0;
    for (int i = 0; i <= 40; ++i) y0.push_back(-3.0 + 6.0 * i / 40.0);
    PBoxFamily flat = fuzzy_cdf_type1(normal_family, crisp, y0, kLevels, 41);
    for (std::size_t l = 0; l < flat.levels.size(); ++l)
        for (std::size_t i = 0; i < y0.size(); ++i)
            CHECK(flat.left[l][i] == doctest::Approx(flat.right[l][i]).epsilon(1e-12));

    FuzzyVector fuzzy_mean({make_triangular(-1.0, 0.0, 1.0)},
                           Interaction::NonInteractive);
    PBoxFamily pb = fuzzy_cdf_type1(normal_family, fuzzy_mean, y0, kLevels, 41);
    CHECK(validate_pbox(pb).empty());
    // at y0 = 0 the zero-cut envelopes hit Phi(+-1)
    std::size_t mid = 20;
    CHECK(y0[mid] == doctest::Approx(0.0));
    CHECK(pb.left[0][mid] == doctest::Approx(0.8413447460685429).epsilon(1e-9));
    CHECK(pb.right[0][mid] == doctest::Approx(0.15865525393145707).epsilon(1e-9));

    CHECK_THROWS_AS(fuzzy_cdf_type1(normal_family, fuzzy_mean, {}, kLevels, 41),
                    std::invalid_argument);
}

TEST_CASE("type-2 fuzzy cdf of pure noise collapses to the empirical cdf") {
    FuzzyVector fvec = triangular_pair(Interaction::NonInteractive);
    StochasticMap noise{1, [](const std::vector<double>& y, const std::vector<double>&) {
                            return y[0];
                        }};
    Sampler s(77);
    std::vector<double> u0;
    for (int i = 0; i <= 30; ++i) u0.push_back(-3.0 + 6.0 * i / 30.0);
    const int ms = 10000;
    PBoxFamily pb = fuzzy_cdf_type2(noise, fvec, s, ms, u0, kLevels, 9);
    CHECK(validate_pbox(pb).empty());
    for (std::size_t l = 0; l < pb.levels.size(); ++l) {
        for (std::size_t i = 0; i < u0.size(); ++i) {
            CHECK(pb.left[l][i] == pb.right[l][i]);
            CHECK(std::abs(pb.left[l][i] - standard_normal_cdf(u0[i])) <= 0.02);
        }
    }
}

TEST_CASE("failure probability of trivial limit states") {
    FuzzyVector fvec = triangular_pair(Interaction::NonInteractive);
    Sampler s(13);
    StochasticMap safe{1, [](const std::vector<double>&, const std::vector<double>&) {
                           return 1.0;
                       }};
    FuzzyVariable none = failure_probability(safe, fvec, s, 200, kLevels, 9);
    CHECK(none.is_crisp());
    CHECK(none.alpha_cut(0.0).lo == 0.0);

    StochasticMap doomed{1, [](const std::vector<double>&, const std::vector<double>&) {
                             return -1.0;
                         }};
    FuzzyVariable all = failure_probability(doomed, fvec, s, 200, kLevels, 9);
    CHECK(all.alpha_cut(0.0).lo == 1.0);
    CHECK(all.alpha_cut(0.0).hi == 1.0);
}

TEST_CASE("failure probability of a gaussian exceedance law") {
    // limit state g = z1 - y: failure (g <= 0) iff y >= z1, so the
    // probability is 1 - Phi(z1), decreasing in z1
    FuzzyVector fvec({make_triangular(-1.0, 0.0, 1.0)}, Interaction::NonInteractive);
    StochasticMap g{1, [](const std::vector<double>& y, const std::vector<double>& z) {
                        return z[0] - y[0];
                    }};
    Sampler s(2025);
    const int ms = 10000;
    FuzzyVariable fp = failure_probability(g, fvec, s, ms, kLevels, 21);
    double tol = 0.02;
    CHECK(fp.alpha_cut(0.0).lo ==
          doctest::Approx(1.0 - standard_normal_cdf(1.0)).epsilon(0.15));
    CHECK(std::abs(fp.alpha_cut(0.0).lo - (1.0 - standard_normal_cdf(1.0))) <= tol);
    CHECK(std::abs(fp.alpha_cut(0.0).hi - (1.0 - standard_normal_cdf(-1.0))) <= tol);
    CHECK(std::abs(fp.alpha_cut(1.0).lo - 0.5) <= tol);
    for (double a : kLevels) {
        CHECK(fp.alpha_cut(a).lo >= 0.0);
        CHECK(fp.alpha_cut(a).hi <= 1.0);
    }
    CHECK(fp.validate().empty());
}

TEST_CASE("extrema of the sum beat the sum of the extrema") {
    FuzzyVector fvec({make_triangular(0.0, 0.5, 1.0)}, Interaction::NonInteractive);
    CrispMap whole = [](const std::vector<double>& z) {
        return z[0] + (1.0 - z[0]) * (1.0 - z[0]);
    };
    FuzzyVariable out = extend(whole, fvec, kLevels, 401);

    // deliberately wrong per-term aggregation: extremize each term alone
    CrispMap t1 = [](const std::vector<double>& z) { return z[0]; };
    CrispMap t2 = [](const std::vector<double>& z) {
        return (1.0 - z[0]) * (1.0 - z[0]);
    };
    FuzzyVariable e1 = extend(t1, fvec, kLevels, 401);
    FuzzyVariable e2 = extend(t2, fvec, kLevels, 401);

    Interval joint = out.alpha_cut(0.0);
    Interval wrong{e1.alpha_cut(0.0).lo + e2.alpha_cut(0.0).lo,
                   e1.alpha_cut(0.0).hi + e2.alpha_cut(0.0).hi};
    CHECK(wrong.contains(joint, 1e-12));
    CHECK(joint.lo == doctest::Approx(0.75).epsilon(1e-4));
    CHECK(joint.hi == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(wrong.lo == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(wrong.hi == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("full interaction tightens every cut") {
    CrispMap g = [](const std::vector<double>& z) { return z[0] - z[1] * z[1]; };
    FuzzyVector box({make_triangular(1.00, 1.06, 1.20), make_triangular(0.10, 0.13, 0.20)},
                    Interaction::NonInteractive);
    FuzzyVector chain({make_triangular(1.00, 1.06, 1.20),
                       make_triangular(0.10, 0.13, 0.20)},
                      Interaction::FullyInteractivePolygonal);
    FuzzyVariable wide = extend(g, box, kLevels, 61);
    FuzzyVariable tight = extend(g, chain, kLevels, 61);
    for (double a : kLevels)
        CHECK(wide.alpha_cut(a).contains(tight.alpha_cut(a), 1e-12));
}

TEST_CASE("engine outputs are deterministic across seeds and worker counts") {
    FuzzyVector fvec = triangular_pair(Interaction::NonInteractive);
    StochasticMap q{2, [](const std::vector<double>& y, const std::vector<double>& z) {
                        return z[0] * y[0] + z[1] * std::abs(y[1]);
                    }};
    Sampler s1(404), s2(404);
    FuzzyVariable a = fuzzy_expectation(q, fvec, s1, 500, kLevels, 21, 1);
    FuzzyVariable b = fuzzy_expectation(q, fvec, s2, 500, kLevels, 21, 4);
    for (double lv : kLevels) {
        CHECK(a.alpha_cut(lv).lo == b.alpha_cut(lv).lo);
        CHECK(a.alpha_cut(lv).hi == b.alpha_cut(lv).hi);
    }
}

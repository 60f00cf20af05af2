#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qdim/dimension.hpp"
#include "qdim/measure.hpp"
#include "qdim/presets.hpp"

using namespace qdim;

namespace {

ConformalMeasureModel cantor_nu() {
    return ConformalMeasureModel(
        {AffineContraction(1.0 / 3.0, 4.0 / 15.0), AffineContraction(1.0 / 3.0, 2.0 / 5.0)},
        BernoulliScheme{{0.5, 0.5}}, Interval{0.4, 0.6});
}

ConformalMeasureModel markov_nu() {
    MarkovChain chain;
    chain.initial = {4.0 / 7.0, 3.0 / 7.0};
    chain.transition = {{0.7, 0.3}, {0.4, 0.6}};
    return ConformalMeasureModel({AffineContraction(1.0 / 3.0, 0.0), AffineContraction(0.25, 0.75)},
                                 chain, Interval{0.0, 1.0});
}

double moment_sum(const std::vector<double>& p, const std::vector<double>& c, double r,
                  double s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        acc += std::pow(p[i] * std::pow(c[i], r), s / (r + s));
    return acc;
}

}  // namespace

TEST_CASE("similarity-dimension equation") {
    SUBCASE("symmetric two-map system has a closed form") {
        // p = (1/2, 1/2), c = (1/3, 1/3): s/(r+s) log(2 (1/3)^r) = -log 2
        double r = 2.0;
        DimensionSolveResult res =
            solve_similarity_dimension({0.5, 0.5}, {1.0 / 3.0, 1.0 / 3.0}, r);
        double q = std::log(0.5) / std::log(0.5 / 9.0);  // exponent at the root
        double exact = r * q / (1.0 - q);
        CHECK(res.value == doctest::Approx(exact).epsilon(1e-12));
        CHECK(std::abs(res.residual) < 1e-12);
        CHECK_FALSE(res.boundary);
    }
    SUBCASE("residual vanishes across a parameter sweep") {
        std::vector<double> p{0.2, 0.3, 0.5};
        std::vector<double> c{0.4, 0.35, 0.25};
        for (double r : {0.5, 1.0, 2.0, 3.7}) {
            DimensionSolveResult res = solve_similarity_dimension(p, c, r);
            CHECK(std::abs(moment_sum(p, c, r, res.value) - 1.0) < 1e-12);
            CHECK(res.value > 0.0);
        }
    }
    SUBCASE("single map sits on the boundary") {
        DimensionSolveResult res = solve_similarity_dimension({0.6}, {0.5}, 2.0);
        CHECK(res.value == 0.0);
        CHECK(res.boundary);
    }
    SUBCASE("invalid inputs") {
        CHECK_THROWS_AS(solve_similarity_dimension({0.5, 0.6}, {0.5, 0.5}, 2.0),
                        std::invalid_argument);  // probabilities exceed 1
        CHECK_THROWS_AS(solve_similarity_dimension({0.5, 0.5}, {0.5, 1.0}, 2.0),
                        std::invalid_argument);  // ratio not a contraction
        CHECK_THROWS_AS(solve_similarity_dimension({0.5, 0.5}, {0.5}, 2.0),
                        std::invalid_argument);  // length mismatch
        CHECK_THROWS_AS(solve_similarity_dimension({0.5, 0.5}, {0.5, 0.5}, 0.0),
                        std::invalid_argument);
    }
}

TEST_CASE("pressure function") {
    ConformalMeasureModel nu = cantor_nu();
    SUBCASE("product models evaluate in closed form") {
        for (double t : {0.1, 0.5, 0.9}) {
            double expect = std::log(2.0 * std::pow(0.5 / 9.0, t));
            CHECK(h_of_t(nu, 2.0, t) == doctest::Approx(expect).epsilon(1e-14));
        }
    }
    SUBCASE("t -> 0 limit is log of the alphabet size") {
        CHECK(h_of_t(nu, 2.0, 1e-6) == doctest::Approx(std::log(2.0)).epsilon(1e-4));
    }
    SUBCASE("strictly decreasing in t") {
        double prev = h_of_t(nu, 2.0, 0.05);
        for (double t = 0.15; t < 1.0; t += 0.1) {
            double cur = h_of_t(nu, 2.0, t);
            CHECK(cur < prev);
            prev = cur;
        }
    }
    SUBCASE("chain with equal rows matches the product formula") {
        MarkovChain chain;
        chain.initial = {0.3, 0.7};
        chain.transition = {{0.3, 0.7}, {0.3, 0.7}};
        ConformalMeasureModel markov(
            {AffineContraction(1.0 / 3.0, 0.0), AffineContraction(0.25, 0.75)}, chain,
            Interval{0.0, 1.0});
        ConformalMeasureModel product(
            {AffineContraction(1.0 / 3.0, 0.0), AffineContraction(0.25, 0.75)},
            BernoulliScheme{{0.3, 0.7}}, Interval{0.0, 1.0});
        for (double t : {0.2, 0.5, 0.8})
            CHECK(h_of_t(markov, 2.0, t) == doctest::Approx(h_of_t(product, 2.0, t)).epsilon(1e-12));
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(h_of_t(nu, 2.0, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(h_of_t(nu, 2.0, 1.5), std::invalid_argument);
        CHECK_THROWS_AS(h_of_t(nu, -1.0, 0.5), std::invalid_argument);
    }
}

TEST_CASE("quantization dimension of the fractal part") {
    SUBCASE("symmetric self-similar support: log 2 / log 3 at r = 2") {
        DimensionSolveResult res = solve_kr(cantor_nu(), 2.0);
        CHECK(res.value == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-10));
        CHECK(std::abs(h_of_t(cantor_nu(), 2.0, res.value / (2.0 + res.value))) < 1e-10);
    }
    SUBCASE("single-symbol model reports the boundary 0") {
        ConformalMeasureModel one({AffineContraction(0.5, 0.0)}, BernoulliScheme{{1.0}},
                                  Interval{0.0, 1.0});
        DimensionSolveResult res = solve_kr(one, 2.0);
        CHECK(res.value == 0.0);
        CHECK(res.boundary);
    }
    SUBCASE("two-state chain model") {
        DimensionSolveResult res = solve_kr(markov_nu(), 2.0);
        CHECK(res.value == doctest::Approx(0.5519455541368827).epsilon(1e-10));
        double t_star = res.value / (2.0 + res.value);
        CHECK(t_star == doctest::Approx(0.21628422018727644).epsilon(1e-10));
    }
}

TEST_CASE("cylinder-sum sandwich") {
    SUBCASE("product models are pinched exactly") {
        ConformalMeasureModel nu = cantor_nu();
        for (int n : {1, 4, 8, 12}) {
            SandwichCheck sc = verify_pressure_sandwich(nu, 2.0, 0.5, n);
            CHECK(sc.ok);
            CHECK(sc.middle == doctest::Approx(sc.lower).epsilon(1e-12));
            CHECK(sc.middle == doctest::Approx(sc.upper).epsilon(1e-12));
        }
    }
    SUBCASE("level one equals the direct sum") {
        ConformalMeasureModel nu = cantor_nu();
        double t = 0.37;
        SandwichCheck sc = verify_pressure_sandwich(nu, 2.0, t, 1);
        double direct = 2.0 * std::pow(0.5 / 9.0, t);
        CHECK(sc.middle == doctest::Approx(direct).epsilon(1e-12));
    }
    SUBCASE("chain models stay inside the envelope") {
        ConformalMeasureModel nu = markov_nu();
        double t_star = 0.21628422018727644;
        for (double t : {0.3, t_star, 0.7}) {
            for (int n : {1, 3, 6, 9, 12}) {
                SandwichCheck sc = verify_pressure_sandwich(nu, 2.0, t, n);
                CHECK(sc.ok);
                CHECK(sc.lower <= sc.middle);
                CHECK(sc.middle <= sc.upper);
            }
        }
    }
    SUBCASE("enumeration refuses excessive depth") {
        CHECK_THROWS_AS(verify_pressure_sandwich(cantor_nu(), 2.0, 0.5, 17),
                        std::invalid_argument);
    }
}

TEST_CASE("dimension bounds for condensation systems") {
    SUBCASE("equal Lipschitz bounds collapse the bracket") {
        CondensationSystem sys = cantor_condensation_example();
        TheoremBounds tb = theorem1_bounds(sys, 2.0);
        CHECK(tb.l_r.value == doctest::Approx(2.0 * std::log(0.5) / std::log(2.0 / 27.0))
                                  .epsilon(1e-10));
        CHECK(tb.k_r.value == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-10));
        CHECK(tb.d_r.value == doctest::Approx(tb.l_r.value).epsilon(1e-12));
        REQUIRE(tb.upper.has_value());
        CHECK(tb.lower == doctest::Approx(*tb.upper).epsilon(1e-12));
        CHECK(tb.lower == doctest::Approx(std::max(tb.d_r.value, tb.k_r.value)).epsilon(1e-15));
        CHECK(tb.separation.ssc_condensation);
        CHECK(tb.separation.ssc_conformal);
    }
    SUBCASE("a heavy fractal part can dominate both ends") {
        // nu concentrates on one branch, so k_r is tiny; the maps' Lipschitz
        // spread separates d_r from l_r.
        ConformalMeasureModel nu(
            {AffineContraction(0.05, 0.4), AffineContraction(0.05, 0.55)},
            BernoulliScheme{{0.999, 0.001}}, Interval{0.4, 0.6});
        CondensationSystem sys(
            {AffineContraction(1.0 / 3.0, 0.0, 0.30, 0.34),
             AffineContraction(1.0 / 3.0, 2.0 / 3.0, 0.30, 0.34)},
            {0.2, 0.4, 0.4}, nu, Interval{0.0, 1.0});
        TheoremBounds tb = theorem1_bounds(sys, 2.0);
        DimensionSolveResult d =
            solve_similarity_dimension({0.4, 0.4}, {0.30, 0.30}, 2.0);
        DimensionSolveResult l =
            solve_similarity_dimension({0.4, 0.4}, {0.34, 0.34}, 2.0);
        CHECK(tb.d_r.value == doctest::Approx(d.value).epsilon(1e-12));
        CHECK(tb.l_r.value == doctest::Approx(l.value).epsilon(1e-12));
        CHECK(tb.k_r.value < tb.d_r.value);
        CHECK(tb.lower == doctest::Approx(d.value).epsilon(1e-12));
        REQUIRE(tb.upper.has_value());
        CHECK(*tb.upper == doctest::Approx(l.value).epsilon(1e-12));
        CHECK(tb.lower <= *tb.upper);
    }
    SUBCASE("no upper bound without full separation") {
        ConformalMeasureModel nu = cantor_nu();
        CondensationSystem touching(
            {AffineContraction(0.5, 0.0), AffineContraction(0.5, 0.5)}, {0.2, 0.4, 0.4}, nu,
            Interval{0.0, 1.0});
        TheoremBounds tb = theorem1_bounds(touching, 2.0);
        CHECK_FALSE(tb.separation.ssc_condensation);
        CHECK_FALSE(tb.upper.has_value());
        CHECK(tb.lower > 0.0);
    }
    SUBCASE("discrete nu contributes nothing to the fractal term") {
        DiscreteMeasure atoms({0.45, 0.55}, {0.5, 0.5});
        CondensationSystem sys(
            {AffineContraction(1.0 / 3.0, 0.0), AffineContraction(1.0 / 3.0, 2.0 / 3.0)},
            {0.2, 0.4, 0.4}, atoms, Interval{0.0, 1.0});
        TheoremBounds tb = theorem1_bounds(sys, 2.0);
        CHECK(tb.k_r.value == 0.0);
        CHECK(tb.lower == doctest::Approx(tb.d_r.value).epsilon(1e-15));
    }
}

TEST_CASE("dimension estimation from error sequences") {
    SUBCASE("exact power law is recovered for every prefactor") {
        for (double C : {1e-6, 1.0, 17.0}) {
            std::vector<std::pair<double, double>> pairs;
            double kappa = 1.37;
            for (int n = 2; n <= 40; ++n)
                pairs.emplace_back(n, C * std::pow(n, -2.0 / kappa));
            DimensionEstimate est = estimate_dimension(pairs, 2.0);
            CHECK(est.slope == doctest::Approx(kappa).epsilon(1e-6));
            CHECK(est.excluded == 0);
            // the per-n ratios carry the prefactor but the slope does not
            if (C == 1.0) {
                CHECK(est.lower_est == doctest::Approx(kappa).epsilon(1e-12));
                CHECK(est.upper_est == doctest::Approx(kappa).epsilon(1e-12));
            }
        }
    }
    SUBCASE("inverse-square sequence gives ratio one everywhere") {
        std::vector<std::pair<double, double>> pairs;
        for (int n = 2; n <= 20; ++n) pairs.emplace_back(n, std::pow(n, -2.0));
        DimensionEstimate est = estimate_dimension(pairs, 2.0);
        for (double ratio : est.ratios) CHECK(ratio == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(est.lower_est == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(est.upper_est == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("geometric-preset closed form matches the frozen ratio at n = 20") {
        std::vector<std::pair<double, double>> pairs;
        for (int n = 2; n <= 20; ++n)
            pairs.emplace_back(n, std::ldexp(1.0, 6 - 3 * n) / 1575.0);
        DimensionEstimate est = estimate_dimension(pairs, 2.0);
        double expect20 = 2.0 * std::log(20.0) / (54.0 * std::log(2.0) + std::log(1575.0));
        CHECK(est.ratios.back() == doctest::Approx(expect20).epsilon(1e-12));
        CHECK(est.lower_est < 0.15);
        // ratios decrease monotonically over the tail of the sequence
        for (std::size_t i = 4; i + 1 < est.ratios.size(); ++i)
            CHECK(est.ratios[i + 1] < est.ratios[i]);
    }
    SUBCASE("zero errors are excluded, not fatal") {
        std::vector<std::pair<double, double>> pairs;
        for (int n = 2; n <= 12; ++n) pairs.emplace_back(n, n <= 9 ? std::pow(n, -2.0) : 0.0);
        DimensionEstimate est = estimate_dimension(pairs, 2.0);
        CHECK(est.excluded == 3);
        CHECK(est.pairs.size() == 8);
    }
    SUBCASE("degenerate input throws") {
        CHECK_THROWS_AS(estimate_dimension({{2, 0.1}, {3, 0.05}}, 2.0), std::invalid_argument);
        CHECK_THROWS_AS(estimate_dimension({{2, 0.1}, {3, 0.2}, {4, 0.05}}, 2.0),
                        std::invalid_argument);  // non-monotone
        CHECK_THROWS_AS(estimate_dimension({{2, 0.0}, {3, 0.0}, {4, 0.0}}, 2.0),
                        std::invalid_argument);  // nothing positive
    }
}

TEST_CASE("scaled-coefficient verdicts") {
    SUBCASE("exponentially fast decay reads vanishing") {
        std::vector<std::pair<double, double>> pairs;
        for (int n = 2; n <= 20; ++n)
            pairs.emplace_back(n, std::ldexp(1.0, 6 - 3 * n) / 1575.0);
        CoefficientEstimate ce = estimate_coefficient(pairs, 1.0, 2.0);
        CHECK(ce.verdict == CoefficientVerdict::vanishing);
        CHECK(ce.last_third_mean < ce.first_third_mean);
    }
    SUBCASE("matching power law reads bounded positive") {
        std::vector<std::pair<double, double>> pairs;
        for (int n = 2; n <= 30; ++n) pairs.emplace_back(n, 3.0 * std::pow(n, -2.0));
        CoefficientEstimate ce = estimate_coefficient(pairs, 1.0, 2.0);
        CHECK(ce.verdict == CoefficientVerdict::bounded_positive);
        for (double v : ce.values) CHECK(v == doctest::Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("too-small kappa reads diverging") {
        std::vector<std::pair<double, double>> pairs;
        for (int n = 2; n <= 40; ++n) pairs.emplace_back(n, std::pow(n, -1.0));
        CoefficientEstimate ce = estimate_coefficient(pairs, 0.5, 2.0);
        // scaling by n^{2/0.5} = n^4 against V = 1/n blows up cubically
        CHECK(ce.verdict == CoefficientVerdict::diverging);
    }
    SUBCASE("slowly varying factor stays bounded positive on a finite window") {
        std::vector<std::pair<double, double>> pairs;
        for (int n = 5; n <= 60; ++n)
            pairs.emplace_back(n, 1.0 / (9.0 * n * n * std::log(double(n))));
        CoefficientEstimate ce = estimate_coefficient(pairs, 1.0, 2.0);
        CHECK(ce.verdict == CoefficientVerdict::bounded_positive);
        CHECK(ce.last_third_mean < ce.first_third_mean);  // drifting down, not vanished
    }
}

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qdim/measure.hpp"
#include "qdim/presets.hpp"
#include "qdim/sampler.hpp"

using namespace qdim;

namespace {

ConformalMeasureModel cantor_nu() {
    return ConformalMeasureModel(
        {AffineContraction(1.0 / 3.0, 4.0 / 15.0), AffineContraction(1.0 / 3.0, 2.0 / 5.0)},
        BernoulliScheme{{0.5, 0.5}}, Interval{0.4, 0.6});
}

double sample_mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_sd(const std::vector<double>& xs, double mean) {
    double s = 0.0;
    for (double x : xs) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(xs.size()));
}

}  // namespace

TEST_CASE("streams are reproducible and batch-separated") {
    ConformalMeasureModel nu = cantor_nu();
    SampleBatch a = sample_nu(nu, 256, 30, 42);
    SampleBatch b = sample_nu(nu, 256, 30, 42);
    CHECK(a.points == b.points);

    SampleBatch other_seed = sample_nu(nu, 256, 30, 43);
    CHECK(a.points != other_seed.points);

    SampleBatch other_batch = sample_nu(nu, 256, 30, 42, 1);
    CHECK(a.points != other_batch.points);

    CHECK(a.seed == 42);
    CHECK(a.depth == 30);
    CHECK(a.generator == SplitRng::generator_name());
    CHECK(!a.generator.empty());
}

TEST_CASE("coding-map samples respect the geometry") {
    SUBCASE("single map collapses onto its fixed point") {
        ConformalMeasureModel one({AffineContraction(0.5, 0.2)}, BernoulliScheme{{1.0}},
                                  Interval{0.0, 1.0});
        SampleBatch batch = sample_nu(one, 16, 60, 9);
        for (double x : batch.points)
            CHECK(x == doctest::Approx(0.4).epsilon(1e-12));  // x = 0.5 x + 0.2
    }
    SUBCASE("positional error bound is the contraction power") {
        ConformalMeasureModel nu = cantor_nu();
        SampleBatch batch = sample_nu(nu, 8, 20, 3);
        CHECK(batch.truncation_error_bound ==
              doctest::Approx(std::pow(1.0 / 3.0, 20) * 0.2).epsilon(1e-15));
        CHECK(batch.truncation_probability == 0.0);
        for (double x : batch.points) CHECK(nu.support_interval().contains(x));
    }
    SUBCASE("empirical mean matches the symmetric center") {
        ConformalMeasureModel nu = cantor_nu();
        SampleBatch batch = sample_nu(nu, 100000, 40, 7);
        double mean = sample_mean(batch.points);
        double sd = sample_sd(batch.points, mean);
        double se = sd / std::sqrt(double(batch.points.size()));
        CHECK(std::abs(mean - 0.5) <= 4.0 * se);
    }
    SUBCASE("atomic measures are sampled by inverse CDF") {
        DiscreteMeasure mu({-1.0, 2.0}, {0.25, 0.75});
        SampleBatch batch = sample_nu(mu, 200000, 5);
        double mean = sample_mean(batch.points);
        // E = -0.25 + 1.5 = 1.25, sd = sqrt(E X^2 - E^2) = sqrt(3.25 - 1.5625)
        double se = std::sqrt(3.25 - 1.5625) / std::sqrt(200000.0);
        CHECK(std::abs(mean - 1.25) <= 4.0 * se);
        for (double x : batch.points) CHECK((x == -1.0 || x == 2.0));
    }
}

TEST_CASE("condensation samples") {
    CondensationSystem sys = cantor_condensation_example();

    SUBCASE("stay inside the bounding interval") {
        SampleBatch batch = sample_mu(sys, 5000, 30, 5);
        CHECK(batch.points.size() == 5000);
        for (double x : batch.points) CHECK(sys.bounding_interval().contains(x));
        CHECK(batch.depth_cap == 200);
        CHECK(batch.truncation_probability ==
              doctest::Approx(std::pow(2.0 / 3.0, 200)).epsilon(1e-12));
    }
    SUBCASE("a depth cap of one is hit with probability 1 - p_0") {
        SampleBatch batch = sample_mu(sys, 100, 30, 5, 1);
        CHECK(batch.truncation_probability == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    }
    SUBCASE("empirical mean agrees with the affine fixed point") {
        SampleBatch batch = sample_mu(sys, 100000, 40, 11);
        double mean = sample_mean(batch.points);
        double sd = sample_sd(batch.points, mean);
        double se = sd / std::sqrt(double(batch.points.size()));
        CHECK(std::abs(mean - exact_mean_affine(sys)) <= 4.0 * se);
    }
    SUBCASE("reproducible for identical parameters") {
        SampleBatch a = sample_mu(sys, 512, 25, 3);
        SampleBatch b = sample_mu(sys, 512, 25, 3);
        CHECK(a.points == b.points);
        SampleBatch c = sample_mu(sys, 512, 25, 3, 200, 2);
        CHECK(a.points != c.points);
    }
}

TEST_CASE("affine moment identities") {
    SUBCASE("product model mean solves the fixed-point equation") {
        // E = 0.5 (E/3 + 0.4) + 0.5 (E/3 + 0.4 + 2/15) -> E = 0.5 by symmetry
        CHECK(nu_mean_affine(cantor_nu()) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("discrete nu reports its plain mean") {
        DiscreteMeasure mu({-1.0, 2.0}, {0.25, 0.75});
        CHECK(nu_mean_affine(mu) == doctest::Approx(1.25).epsilon(1e-15));
    }
    SUBCASE("chain models are refused") {
        MarkovChain chain;
        chain.initial = {4.0 / 7.0, 3.0 / 7.0};
        chain.transition = {{0.7, 0.3}, {0.4, 0.6}};
        ConformalMeasureModel markov(
            {AffineContraction(1.0 / 3.0, 0.0), AffineContraction(0.25, 0.75)}, chain,
            Interval{0.0, 1.0});
        CHECK_THROWS_AS(nu_mean_affine(NuModel{markov}), std::invalid_argument);
    }
    SUBCASE("condensation fixed point") {
        CondensationSystem sys = cantor_condensation_example();
        CHECK(exact_mean_affine(sys) == doctest::Approx(0.5).epsilon(1e-12));

        // one-sided system: m = 0.5 (m/2) + 0.5 * 0 -> m = 0
        ConformalMeasureModel point({AffineContraction(0.5, 0.0)}, BernoulliScheme{{1.0}},
                                    Interval{0.0, 1.0});
        CondensationSystem half({AffineContraction(0.5, 0.0)}, {0.5, 0.5}, point,
                                Interval{0.0, 1.0});
        CHECK(exact_mean_affine(half) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(exact_mean_affine(half, nu_mean_affine(half.nu())) ==
              doctest::Approx(exact_mean_affine(half)).epsilon(1e-15));
    }
}

TEST_CASE("empirical distortion") {
    SUBCASE("zero when the codebook covers every sample") {
        DiscreteMeasure mu({0.0, 1.0}, {0.5, 0.5});
        SampleBatch batch = sample_nu(mu, 1000, 1);
        EmpiricalDistortion ed = empirical_distortion(batch, {0.0, 1.0}, 2.0);
        CHECK(ed.value == 0.0);
        CHECK(ed.std_error == 0.0);
        CHECK(ed.count == 1000);
    }
    SUBCASE("recovers the exact one-point error of the geometric preset") {
        DiscreteMeasure nu = section4_measure(50);
        SampleBatch batch = sample_nu(nu, 200000, 13);
        EmpiricalDistortion ed = empirical_distortion(batch, {7.0 / 15.0}, 2.0);
        double exact = 8.0 / 1575.0;
        CHECK(std::abs(ed.value - exact) <= 3.0 * ed.std_error);
        CHECK(ed.std_error > 0.0);
        CHECK(ed.std_error < 1e-4);
    }
    SUBCASE("empty codebook is refused") {
        DiscreteMeasure mu({0.0, 1.0}, {0.5, 0.5});
        SampleBatch batch = sample_nu(mu, 10, 1);
        CHECK_THROWS_AS(empirical_distortion(batch, {}, 2.0), std::invalid_argument);
    }
}

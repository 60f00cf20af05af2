#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qdim/measure.hpp"

// Monte Carlo side: i.i.d. sampling of nu (finite coding-map compositions)
// and of the condensation measure mu (recursive index unrolling), plus
// empirical distortion with standard errors and exact-moment cross-checks.
//
// Randomness is fully deterministic: a batch stream is mt19937_64 seeded
// with splitmix64(seed xor batch * golden), and uniforms take the top 53
// bits of each draw. Identical (seed, batch, count, depth) always reproduce
// the same points, on any platform.

namespace qdim {

class SplitRng {
public:
    explicit SplitRng(std::uint64_t seed, std::uint64_t batch = 0);

    std::uint64_t next_u64();
    double uniform();  // [0, 1), 53-bit resolution
    // Index in 0..probs.size()-1 by inverse CDF; probs need not sum to 1
    // exactly (the walk is normalized by the total).
    int categorical(const std::vector<double>& probs);

    static const char* generator_name();

private:
    std::mt19937_64 engine_;
};

struct SampleBatch {
    std::vector<double> points;
    std::uint64_t seed = 0;
    std::uint64_t batch = 0;
    int depth = 0;      // nu coding depth
    int depth_cap = 0;  // recursion cap for mu sampling (0 for plain nu)
    double truncation_error_bound = 0.0;  // max positional error of a point
    double truncation_probability = 0.0;  // chance the recursion was capped
    std::string generator;
};

// Approximate nu samples: a length-`depth` symbol string drawn from the
// symbolic measure, its map composition applied to the support midpoint.
// Positional error is at most max_ratio^depth * diam(support).
SampleBatch sample_nu(const ConformalMeasureModel& model, std::size_t count, int depth,
                      std::uint64_t seed, std::uint64_t batch = 0);

// Exact inverse-CDF samples from a finite atomic measure.
SampleBatch sample_nu(const DiscreteMeasure& mu, std::size_t count, std::uint64_t seed,
                      std::uint64_t batch = 0);

// Samples of the condensation measure: repeatedly draw an index from
// (p_0, ..., p_N); index 0 stops the recursion with a nu sample pushed
// through the accumulated map composition, a positive index composes that
// map. Hitting depth_cap falls back to a nu sample as well, which happens
// with probability (1 - p_0)^depth_cap.
SampleBatch sample_mu(const CondensationSystem& system, std::size_t count, int depth,
                      std::uint64_t seed, int depth_cap = 200, std::uint64_t batch = 0);

// Mean of nu when it is determined by affine fixed points: Bernoulli models
// solve E = sum t_j (scale_j E + offset_j); discrete measures report their
// mean. Markov models have no such closed form here.
double nu_mean_affine(const NuModel& nu);

// Fixed point of the mean under the condensation recursion:
// m = sum_i p_i (scale_i m + offset_i) + p_0 nu_mean.
double exact_mean_affine(const CondensationSystem& system, double nu_mean);
double exact_mean_affine(const CondensationSystem& system);

struct EmpiricalDistortion {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
};

// Mean r-th power distance of the samples to the codebook, with the standard
// error of that mean.
EmpiricalDistortion empirical_distortion(const SampleBatch& batch,
                                         const std::vector<double>& codebook, double r);

}  // namespace qdim

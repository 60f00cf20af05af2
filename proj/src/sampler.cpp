#include "qdim/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qdim {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Accumulated affine composition h = h o f, kept as (scale, offset).
struct Accum {
    double scale = 1.0;
    double offset = 0.0;
    void append(const AffineContraction& f) {
        offset += scale * f.offset;
        scale *= f.scale;
    }
    double operator()(double x) const { return scale * x + offset; }
};

int draw_symbol(SplitRng& rng, const ConformalMeasureModel& model, int prev) {
    if (const auto* bern = std::get_if<BernoulliScheme>(&model.symbolic()))
        return 1 + rng.categorical(bern->weights);
    const auto& mk = std::get<MarkovChain>(model.symbolic());
    if (prev == 0) return 1 + rng.categorical(mk.initial);
    return 1 + rng.categorical(mk.transition[static_cast<std::size_t>(prev - 1)]);
}

double draw_nu_point(SplitRng& rng, const ConformalMeasureModel& model, int depth) {
    Accum acc;
    int prev = 0;
    for (int d = 0; d < depth; ++d) {
        int s = draw_symbol(rng, model, prev);
        acc.append(model.maps()[static_cast<std::size_t>(s - 1)]);
        prev = s;
    }
    return acc(model.support_interval().mid());
}

double draw_nu_point(SplitRng& rng, const DiscreteMeasure& mu) {
    return mu.points()[static_cast<std::size_t>(rng.categorical(mu.masses()))];
}

}  // namespace

SplitRng::SplitRng(std::uint64_t seed, std::uint64_t batch)
    : engine_(splitmix64(seed ^ (batch * 0x9E3779B97F4A7C15ull))) {}

std::uint64_t SplitRng::next_u64() { return engine_(); }

double SplitRng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int SplitRng::categorical(const std::vector<double>& probs) {
    require(!probs.empty(), "categorical draw needs at least one weight");
    double total = 0.0;
    for (double p : probs) total += p;
    double u = uniform() * total;
    double cum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        cum += probs[i];
        if (u < cum) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
}

const char* SplitRng::generator_name() { return "mt19937_64/splitmix64"; }

SampleBatch sample_nu(const ConformalMeasureModel& model, std::size_t count, int depth,
                      std::uint64_t seed, std::uint64_t batch) {
    require(depth >= 1, "coding depth must be at least 1");
    SplitRng rng(seed, batch);
    SampleBatch out;
    out.seed = seed;
    out.batch = batch;
    out.depth = depth;
    out.generator = SplitRng::generator_name();
    out.truncation_error_bound =
        std::pow(model.max_ratio(), depth) * model.support_interval().length();
    out.points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.points.push_back(draw_nu_point(rng, model, depth));
    return out;
}

SampleBatch sample_nu(const DiscreteMeasure& mu, std::size_t count, std::uint64_t seed,
                      std::uint64_t batch) {
    SplitRng rng(seed, batch);
    SampleBatch out;
    out.seed = seed;
    out.batch = batch;
    out.generator = SplitRng::generator_name();
    out.points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.points.push_back(draw_nu_point(rng, mu));
    return out;
}

SampleBatch sample_mu(const CondensationSystem& system, std::size_t count, int depth,
                      std::uint64_t seed, int depth_cap, std::uint64_t batch) {
    require(depth_cap >= 1, "depth cap must be at least 1");
    require(system.prob(0) > 0.0, "p_0 must be positive for the recursion to terminate");
    const auto* model = std::get_if<ConformalMeasureModel>(&system.nu());
    const auto* discrete = std::get_if<DiscreteMeasure>(&system.nu());
    if (model != nullptr) require(depth >= 1, "coding depth must be at least 1");

    SplitRng rng(seed, batch);
    SampleBatch out;
    out.seed = seed;
    out.batch = batch;
    out.depth = depth;
    out.depth_cap = depth_cap;
    out.generator = SplitRng::generator_name();
    out.truncation_probability = std::pow(1.0 - system.prob(0), depth_cap);
    if (model != nullptr)
        out.truncation_error_bound =
            std::pow(model->max_ratio(), depth) * model->support_interval().length();

    out.points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Accum acc;
        for (int step = 0; step < depth_cap; ++step) {
            int idx = rng.categorical(system.probs());
            if (idx == 0) break;
            acc.append(system.map(idx));
        }
        double y = model != nullptr ? draw_nu_point(rng, *model, depth)
                                    : draw_nu_point(rng, *discrete);
        out.points.push_back(acc(y));
    }
    return out;
}

double nu_mean_affine(const NuModel& nu) {
    if (const auto* discrete = std::get_if<DiscreteMeasure>(&nu)) return discrete->mean();
    const auto& model = std::get<ConformalMeasureModel>(nu);
    const auto* bern = std::get_if<BernoulliScheme>(&model.symbolic());
    require(bern != nullptr, "closed-form nu mean needs a Bernoulli model");
    double a = 0.0, b = 0.0;
    for (int j = 1; j <= model.alphabet(); ++j) {
        const auto& g = model.maps()[static_cast<std::size_t>(j - 1)];
        double t = bern->weights[static_cast<std::size_t>(j - 1)];
        a += t * g.scale;
        b += t * g.offset;
    }
    require(std::abs(a) < 1.0, "mean fixed point needs |sum t_j scale_j| < 1");
    return b / (1.0 - a);
}

double exact_mean_affine(const CondensationSystem& system, double nu_mean) {
    double a = 0.0, b = 0.0;
    for (int i = 1; i <= system.map_count(); ++i) {
        a += system.prob(i) * system.map(i).scale;
        b += system.prob(i) * system.map(i).offset;
    }
    require(std::abs(a) < 1.0, "mean fixed point needs |sum p_i scale_i| < 1");
    return (b + system.prob(0) * nu_mean) / (1.0 - a);
}

double exact_mean_affine(const CondensationSystem& system) {
    return exact_mean_affine(system, nu_mean_affine(system.nu()));
}

EmpiricalDistortion empirical_distortion(const SampleBatch& batch,
                                         const std::vector<double>& codebook, double r) {
    require(!batch.points.empty(), "sample batch must be nonempty");
    require(!codebook.empty(), "codebook must be nonempty");
    require(r > 0.0, "order r must be positive");

    std::vector<double> sorted = codebook;
    std::sort(sorted.begin(), sorted.end());

    // Welford over the per-sample r-th power distances.
    double mean = 0.0, m2 = 0.0;
    std::size_t k = 0;
    for (double x : batch.points) {
        auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
        double dist = std::numeric_limits<double>::infinity();
        if (it != sorted.end()) dist = *it - x;
        if (it != sorted.begin()) dist = std::min(dist, x - *(it - 1));
        double v = r == 2.0 ? dist * dist : std::pow(dist, r);
        ++k;
        double d = v - mean;
        mean += d / static_cast<double>(k);
        m2 += d * (v - mean);
    }

    EmpiricalDistortion out;
    out.count = batch.points.size();
    out.value = mean;
    if (out.count > 1)
        out.std_error = std::sqrt(m2 / static_cast<double>(out.count - 1) /
                                  static_cast<double>(out.count));
    return out;
}

}  // namespace qdim

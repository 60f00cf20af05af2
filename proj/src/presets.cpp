#include "qdim/presets.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qdim {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Antiderivative bound for the heavy-tail terms: sum_{j > J} 9^j term(j)
// is at most G(J) with G(x) = 1 / ((x-2)^2 log(x-1)); the summand is
// exactly -G'(j).
double tail_envelope(double x) { return 1.0 / ((x - 2.0) * (x - 2.0) * std::log(x - 1.0)); }

}  // namespace

double section4_atom(int j) {
    require(j >= 1, "atom index starts at 1");
    return 0.6 - 0.4 * std::ldexp(1.0, -j);
}

double section4_block_mean(int k) {
    require(k >= 1, "block index starts at 1");
    return 0.6 - (4.0 / 15.0) * std::ldexp(1.0, -k);
}

DiscreteMeasure section4_measure(int J) {
    require(J >= 1, "need at least one atom");
    std::vector<double> points, masses;
    points.reserve(static_cast<std::size_t>(J));
    masses.reserve(static_cast<std::size_t>(J));
    for (int j = 1; j <= J; ++j) {
        points.push_back(section4_atom(j));
        masses.push_back(std::ldexp(1.0, -j));
    }
    const double tail = std::ldexp(1.0, -J);
    return DiscreteMeasure(std::move(points), std::move(masses), tail, tail * 0.04);
}

QuantizationResult section4_optimal(int n) {
    require(n >= 1, "codebook size must be at least 1");
    QuantizationResult res;
    res.n = n;
    res.r = 2.0;
    res.points.reserve(static_cast<std::size_t>(n));
    for (int j = 1; j < n; ++j) res.points.push_back(section4_atom(j));
    res.points.push_back(section4_block_mean(n));
    res.distortion = std::ldexp(1.0, 6 - 3 * n) / 1575.0;
    if (res.points.size() > 1) {
        res.boundaries.reserve(res.points.size() - 1);
        for (std::size_t k = 0; k + 1 < res.points.size(); ++k)
            res.boundaries.push_back(0.5 * (res.points[k] + res.points[k + 1]));
    }
    return res;
}

double example46_term(int j) {
    require(j >= 3, "terms are defined for j >= 3");
    const double L = std::log(static_cast<double>(j - 1));
    const double num = 2.0 * (j - 1) * L + (j - 2);
    const double log_term = std::log(num) - 2.0 * j * std::log(3.0) -
                            std::log(static_cast<double>(j - 1)) -
                            3.0 * std::log(static_cast<double>(j - 2)) - 2.0 * std::log(L);
    return std::exp(log_term);
}

double example46_normalizer() {
    // Terms decay like 9^{-j}; far tail is below double resolution long
    // before j = 400. Summed smallest-first.
    double sum = 0.0;
    for (int j = 400; j >= 3; --j) sum += example46_term(j);
    return 1.0 / sum;
}

double example46_tail_sum(int J) {
    require(J >= 3, "terms are defined for j >= 3");
    return tail_envelope(static_cast<double>(J));
}

DiscreteMeasure example46_measure(int J) {
    require(J >= 3, "need at least the first atom (j = 3)");
    std::vector<double> points, masses;
    points.reserve(static_cast<std::size_t>(J - 2));
    masses.reserve(static_cast<std::size_t>(J - 2));
    double partial = 0.0;
    for (int j = J; j >= 3; --j) partial += example46_term(j);
    for (int j = 3; j <= J; ++j) {
        double m = example46_term(j) / partial;
        require(m > 0.0, "atom mass underflows double range at this J");
        points.push_back(4.0 * std::pow(3.0, j - 1));
        masses.push_back(m);
    }

    const double k = example46_normalizer();
    double dropped = 0.0;
    for (int j = J + 1; j <= J + 200; ++j) dropped += example46_term(j);
    // Distortion of a dropped atom against any codebook point inside the
    // retained hull is below its own squared position 16 * 9^{j-1}.
    const double tail_bound = (16.0 * k / 9.0) * example46_tail_sum(J);
    return DiscreteMeasure(std::move(points), std::move(masses), k * dropped, tail_bound);
}

CondensationSystem cantor_condensation_example() {
    std::vector<AffineContraction> f{AffineContraction(1.0 / 3.0, 0.0),
                                     AffineContraction(1.0 / 3.0, 2.0 / 3.0)};
    std::vector<AffineContraction> g{AffineContraction(1.0 / 3.0, 4.0 / 15.0),
                                     AffineContraction(1.0 / 3.0, 2.0 / 5.0)};
    ConformalMeasureModel nu(std::move(g), BernoulliScheme{{0.5, 0.5}},
                             Interval{0.4, 0.6});
    return CondensationSystem(std::move(f), {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, std::move(nu),
                              Interval{0.0, 1.0});
}

}  // namespace qdim

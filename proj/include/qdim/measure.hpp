#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

// Core domain types: discrete measures, affine contractions, condensation
// systems and the separation checker. Everything is 1D and immutable after
// construction; constructors validate and throw std::invalid_argument.

namespace qdim {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
    // Closed intervals: touching endpoints count as an intersection.
    bool disjoint(const Interval& other) const { return hi < other.lo || other.hi < lo; }
    double gap(const Interval& other) const;
};

// Finite atomic probability measure on the line. Atoms are sorted strictly
// increasing; points closer than 1e-14 are merged (their masses add) so the
// quantizer never sees zero-width cells. An optional tail records mass that
// was dropped when truncating an infinite measure, together with a rigorous
// bound on the distortion that tail can contribute.
class DiscreteMeasure {
public:
    DiscreteMeasure(std::vector<double> points, std::vector<double> masses,
                    double tail_mass = 0.0, double tail_error_bound = 0.0);

    const std::vector<double>& points() const { return points_; }
    const std::vector<double>& masses() const { return masses_; }
    std::size_t size() const { return points_.size(); }
    int dimension() const { return 1; }
    double tail_mass() const { return tail_mass_; }
    double tail_error_bound() const { return tail_error_bound_; }

    double mean() const;
    double variance() const;
    Interval hull() const { return {points_.front(), points_.back()}; }

private:
    std::vector<double> points_;
    std::vector<double> masses_;
    double tail_mass_;
    double tail_error_bound_;
};

// x -> scale*x + offset with 0 < |scale| < 1. The Lipschitz bounds (a, b)
// carry the bi-Lipschitz data used by the dimension formulas; a similitude
// has a = b = |scale|, and a user may widen them to model a map that is only
// known up to bounds.
struct AffineContraction {
    double scale;
    double offset;
    double lower_lip;  // a
    double upper_lip;  // b

    AffineContraction(double scale_, double offset_);
    AffineContraction(double scale_, double offset_, double a, double b);

    double operator()(double x) const { return scale * x + offset; }
    Interval image(const Interval& iv) const;
    // Composition (this o inner): first apply inner, then this.
    AffineContraction compose(const AffineContraction& inner) const;
};

struct BernoulliScheme {
    std::vector<double> weights;  // t_j, strictly positive, sum to 1
};

struct MarkovChain {
    std::vector<double> initial;                  // pi, stationary for P
    std::vector<std::vector<double>> transition;  // P, strictly positive rows
};

using SymbolicMeasure = std::variant<BernoulliScheme, MarkovChain>;

// Similitudes g_j with ratios s_j < 1 driving a symbolic measure (i.i.d. or
// stationary Markov) on the code space; the pushforward under the coding map
// is the condensation input nu. The conformal constant c >= 1 models maps
// whose derivative is only constant up to a factor; for true similitudes
// c = 1. The distortion constant L is computed, not supplied: L = 1 for
// Bernoulli, and for Markov the max over entries of P_ij/pi_j and pi_j/P_ij.
class ConformalMeasureModel {
public:
    ConformalMeasureModel(std::vector<AffineContraction> maps, SymbolicMeasure symbolic,
                          Interval support, double conformal_constant = 1.0);

    int alphabet() const { return static_cast<int>(maps_.size()); }
    const std::vector<AffineContraction>& maps() const { return maps_; }
    const SymbolicMeasure& symbolic() const { return symbolic_; }
    bool is_bernoulli() const;
    const Interval& support_interval() const { return support_; }
    double conformal_constant() const { return conformal_constant_; }
    double distortion_constant() const { return distortion_constant_; }
    double max_ratio() const { return max_ratio_; }

    // Contraction ratio s_j and one-symbol mass nu_hat[j]; symbols are
    // 1-based everywhere, matching the code-space convention.
    double ratio(int j) const;
    double symbol_weight(int j) const;
    // Exact cylinder mass of a word: product of t_j, or pi * transition
    // products for Markov.
    double cylinder_mass(const std::vector<int>& word) const;
    double log_cylinder_mass(const std::vector<int>& word) const;

private:
    std::vector<AffineContraction> maps_;
    SymbolicMeasure symbolic_;
    Interval support_;
    double conformal_constant_;
    double distortion_constant_;
    double max_ratio_;
};

using NuModel = std::variant<ConformalMeasureModel, DiscreteMeasure>;

// Maps f_1..f_N, probabilities (p_0, p_1, ..., p_N) with p_0 attached to the
// condensation measure nu, and a bounding interval that every f_i maps into
// itself. Probabilities are stored with p_0 first.
class CondensationSystem {
public:
    CondensationSystem(std::vector<AffineContraction> maps, std::vector<double> probs,
                       NuModel nu, Interval bounding);

    int map_count() const { return static_cast<int>(maps_.size()); }
    const AffineContraction& map(int i) const;  // i in 1..N
    const std::vector<AffineContraction>& maps() const { return maps_; }
    double prob(int i) const;  // i in 0..N, p_0 = condensation weight
    const std::vector<double>& probs() const { return probs_; }
    const NuModel& nu() const { return nu_; }
    const Interval& bounding_interval() const { return bounding_; }
    // Hull of nu: the support interval for a conformal model, the atom hull
    // for a discrete one.
    Interval nu_hull() const;

private:
    std::vector<AffineContraction> maps_;
    std::vector<double> probs_;
    NuModel nu_;
    Interval bounding_;
};

struct SeparationReport {
    struct Gap {
        std::string first;
        std::string second;
        Interval a;
        Interval b;
        double distance;  // 0 when the intervals intersect
    };
    bool ssc_condensation = false;
    bool ssc_conformal = false;
    std::vector<Gap> gaps;
};

// Strong separation by closed-interval arithmetic: the f_i images of the
// bounding interval must be pairwise disjoint and disjoint from the nu hull;
// the conformal flag asks the same of the g_j images of the support interval.
SeparationReport check_separation(const CondensationSystem& system);

// Atom generator for truncating an infinite discrete measure: rule(j) yields
// (point, mass) for j = 1, 2, ...
using AtomRule = std::function<std::pair<double, double>(int)>;

struct TruncatedMeasure {
    DiscreteMeasure measure;
    double tail_mass;
    double tail_error_bound;
};

// Keep the first J atoms. With renormalize = false the measure keeps its raw
// masses and carries tail_mass = 1 - sum(masses) plus the distortion bound
// tail_mass * diameter^r; renormalize = true rescales masses to sum to 1 (the
// tail fields still report what was dropped). A support diameter is required
// whenever the tail mass is positive.
TruncatedMeasure truncate_nu(const AtomRule& rule, int J, double r,
                             std::optional<double> support_diameter,
                             bool renormalize);

}  // namespace qdim

#include "qdim/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qdim {

namespace {

constexpr double kMergeTol = 1e-14;
constexpr double kMassTol = 1e-12;

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

double Interval::gap(const Interval& other) const {
    double g = std::max(other.lo - hi, lo - other.hi);
    return g > 0.0 ? g : 0.0;
}

DiscreteMeasure::DiscreteMeasure(std::vector<double> points, std::vector<double> masses,
                                 double tail_mass, double tail_error_bound)
    : tail_mass_(tail_mass), tail_error_bound_(tail_error_bound) {
    require(!points.empty(), "measure needs at least one atom");
    require(points.size() == masses.size(), "points/masses size mismatch");
    require(tail_mass >= 0.0 && tail_error_bound >= 0.0, "negative tail");
    for (double m : masses) require(m > 0.0, "atom masses must be positive");
    for (double x : points) require(std::isfinite(x), "atom points must be finite");

    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });

    points_.reserve(points.size());
    masses_.reserve(points.size());
    for (std::size_t idx : order) {
        if (!points_.empty() && points[idx] - points_.back() < kMergeTol) {
            masses_.back() += masses[idx];
        } else {
            points_.push_back(points[idx]);
            masses_.push_back(masses[idx]);
        }
    }

    // Compensated sum: with 1e5+ sample atoms a plain accumulation can drift
    // past the validation tolerance.
    double total = 0.0, comp = 0.0;
    for (double m : masses_) {
        double y = m - comp;
        double t = total + y;
        comp = (t - total) - y;
        total = t;
    }
    // Either a full probability measure (possibly renormalized after a
    // truncation) or a truncation whose dropped mass is carried in the tail.
    require(std::abs(total - 1.0) <= kMassTol || std::abs(total + tail_mass_ - 1.0) <= kMassTol,
            "masses (plus tail) must sum to 1");
}

double DiscreteMeasure::mean() const {
    double s0 = 0.0, mu = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        s0 += masses_[i];
        mu += (points_[i] - mu) * (masses_[i] / s0);
    }
    return mu;
}

double DiscreteMeasure::variance() const {
    // Weighted Welford: stable when masses span many orders of magnitude.
    double s0 = 0.0, mu = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        double s0n = s0 + masses_[i];
        double d = points_[i] - mu;
        mu += d * (masses_[i] / s0n);
        m2 += masses_[i] * d * (points_[i] - mu);
        s0 = s0n;
    }
    return m2 / s0;
}

AffineContraction::AffineContraction(double scale_, double offset_)
    : AffineContraction(scale_, offset_, std::abs(scale_), std::abs(scale_)) {}

AffineContraction::AffineContraction(double scale_, double offset_, double a, double b)
    : scale(scale_), offset(offset_), lower_lip(a), upper_lip(b) {
    require(std::isfinite(scale) && std::isfinite(offset), "map coefficients must be finite");
    require(std::abs(scale) > 0.0 && std::abs(scale) < 1.0, "|scale| must lie in (0,1)");
    require(a > 0.0 && b < 1.0 && a <= std::abs(scale) && std::abs(scale) <= b,
            "Lipschitz bounds must satisfy 0 < a <= |scale| <= b < 1");
}

Interval AffineContraction::image(const Interval& iv) const {
    double u = (*this)(iv.lo), v = (*this)(iv.hi);
    return u <= v ? Interval{u, v} : Interval{v, u};
}

AffineContraction AffineContraction::compose(const AffineContraction& inner) const {
    return AffineContraction(scale * inner.scale, scale * inner.offset + offset,
                             lower_lip * inner.lower_lip, upper_lip * inner.upper_lip);
}

ConformalMeasureModel::ConformalMeasureModel(std::vector<AffineContraction> maps,
                                             SymbolicMeasure symbolic, Interval support,
                                             double conformal_constant)
    : maps_(std::move(maps)),
      symbolic_(std::move(symbolic)),
      support_(support),
      conformal_constant_(conformal_constant) {
    require(!maps_.empty(), "conformal model needs at least one map");
    require(support_.lo < support_.hi, "support interval must have positive length");
    require(conformal_constant_ >= 1.0, "conformal constant must be >= 1");

    max_ratio_ = 0.0;
    for (const auto& g : maps_) {
        require(g.lower_lip == g.upper_lip, "conformal maps must be similitudes");
        max_ratio_ = std::max(max_ratio_, std::abs(g.scale));
        Interval im = g.image(support_);
        require(im.lo >= support_.lo - kMassTol && im.hi <= support_.hi + kMassTol,
                "each conformal map must send the support interval into itself");
    }

    const std::size_t m = maps_.size();
    if (const auto* bern = std::get_if<BernoulliScheme>(&symbolic_)) {
        require(bern->weights.size() == m, "Bernoulli weight count must match map count");
        double sum = 0.0;
        for (double t : bern->weights) {
            require(t > 0.0, "Bernoulli weights must be positive");
            sum += t;
        }
        require(std::abs(sum - 1.0) <= kMassTol, "Bernoulli weights must sum to 1");
        distortion_constant_ = 1.0;
    } else {
        const auto& mk = std::get<MarkovChain>(symbolic_);
        require(mk.initial.size() == m && mk.transition.size() == m,
                "Markov dimensions must match map count");
        double pisum = 0.0;
        for (double p : mk.initial) {
            require(p > 0.0, "stationary vector must be positive");
            pisum += p;
        }
        require(std::abs(pisum - 1.0) <= kMassTol, "stationary vector must sum to 1");
        for (const auto& row : mk.transition) {
            require(row.size() == m, "transition matrix must be square");
            double rsum = 0.0;
            for (double p : row) {
                require(p > 0.0, "transition entries must be positive");
                rsum += p;
            }
            require(std::abs(rsum - 1.0) <= kMassTol, "transition rows must sum to 1");
        }
        // pi must be stationary: (pi P)_j = pi_j.
        for (std::size_t j = 0; j < m; ++j) {
            double pj = 0.0;
            for (std::size_t i = 0; i < m; ++i) pj += mk.initial[i] * mk.transition[i][j];
            require(std::abs(pj - mk.initial[j]) <= kMassTol,
                    "initial vector must be stationary for the transition matrix");
        }
        double L = 1.0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                L = std::max(L, mk.transition[i][j] / mk.initial[j]);
                L = std::max(L, mk.initial[j] / mk.transition[i][j]);
            }
        distortion_constant_ = L;
    }
    require(max_ratio_ < 1.0, "contraction ratios must stay below 1");
}

bool ConformalMeasureModel::is_bernoulli() const {
    return std::holds_alternative<BernoulliScheme>(symbolic_);
}

double ConformalMeasureModel::ratio(int j) const {
    require(j >= 1 && j <= alphabet(), "symbol out of range");
    return std::abs(maps_[static_cast<std::size_t>(j - 1)].scale);
}

double ConformalMeasureModel::symbol_weight(int j) const {
    require(j >= 1 && j <= alphabet(), "symbol out of range");
    if (const auto* bern = std::get_if<BernoulliScheme>(&symbolic_))
        return bern->weights[static_cast<std::size_t>(j - 1)];
    return std::get<MarkovChain>(symbolic_).initial[static_cast<std::size_t>(j - 1)];
}

double ConformalMeasureModel::cylinder_mass(const std::vector<int>& word) const {
    return std::exp(log_cylinder_mass(word));
}

double ConformalMeasureModel::log_cylinder_mass(const std::vector<int>& word) const {
    if (word.empty()) return 0.0;
    for (int s : word) require(s >= 1 && s <= alphabet(), "symbol out of range");
    if (const auto* bern = std::get_if<BernoulliScheme>(&symbolic_)) {
        double lw = 0.0;
        for (int s : word) lw += std::log(bern->weights[static_cast<std::size_t>(s - 1)]);
        return lw;
    }
    const auto& mk = std::get<MarkovChain>(symbolic_);
    double lw = std::log(mk.initial[static_cast<std::size_t>(word[0] - 1)]);
    for (std::size_t k = 1; k < word.size(); ++k)
        lw += std::log(mk.transition[static_cast<std::size_t>(word[k - 1] - 1)]
                                    [static_cast<std::size_t>(word[k] - 1)]);
    return lw;
}

CondensationSystem::CondensationSystem(std::vector<AffineContraction> maps,
                                       std::vector<double> probs, NuModel nu, Interval bounding)
    : maps_(std::move(maps)), probs_(std::move(probs)), nu_(std::move(nu)), bounding_(bounding) {
    require(!maps_.empty(), "condensation system needs at least one map");
    require(probs_.size() == maps_.size() + 1,
            "probability vector must have one entry per map plus the condensation weight");
    require(bounding_.lo < bounding_.hi, "bounding interval must have positive length");
    double sum = 0.0;
    for (double p : probs_) {
        require(p > 0.0, "probabilities must be strictly positive");
        sum += p;
    }
    require(std::abs(sum - 1.0) <= kMassTol, "probabilities must sum to 1");
    for (const auto& f : maps_) {
        Interval im = f.image(bounding_);
        require(im.lo >= bounding_.lo - kMassTol && im.hi <= bounding_.hi + kMassTol,
                "each map must send the bounding interval into itself");
    }
    Interval nh = nu_hull();
    require(nh.lo >= bounding_.lo - kMassTol && nh.hi <= bounding_.hi + kMassTol,
            "nu support must lie inside the bounding interval");
}

const AffineContraction& CondensationSystem::map(int i) const {
    if (i < 1 || i > map_count()) throw std::invalid_argument("map index out of range");
    return maps_[static_cast<std::size_t>(i - 1)];
}

double CondensationSystem::prob(int i) const {
    if (i < 0 || i > map_count()) throw std::invalid_argument("probability index out of range");
    return probs_[static_cast<std::size_t>(i)];
}

Interval CondensationSystem::nu_hull() const {
    if (const auto* model = std::get_if<ConformalMeasureModel>(&nu_))
        return model->support_interval();
    return std::get<DiscreteMeasure>(nu_).hull();
}

SeparationReport check_separation(const CondensationSystem& system) {
    SeparationReport report;
    const Interval K = system.bounding_interval();
    const Interval C = system.nu_hull();

    std::vector<Interval> images;
    images.reserve(static_cast<std::size_t>(system.map_count()));
    for (int i = 1; i <= system.map_count(); ++i) images.push_back(system.map(i).image(K));

    auto record = [&](std::string a, std::string b, const Interval& ia, const Interval& ib) {
        report.gaps.push_back({std::move(a), std::move(b), ia, ib, ia.gap(ib)});
        return ia.disjoint(ib);
    };

    report.ssc_condensation = true;
    for (std::size_t i = 0; i < images.size(); ++i) {
        for (std::size_t j = i + 1; j < images.size(); ++j)
            report.ssc_condensation &=
                record("f" + std::to_string(i + 1), "f" + std::to_string(j + 1), images[i],
                       images[j]);
        report.ssc_condensation &=
            record("f" + std::to_string(i + 1), "nu", images[i], C);
    }

    // Vacuously true when nu carries no maps of its own.
    report.ssc_conformal = true;
    if (const auto* model = std::get_if<ConformalMeasureModel>(&system.nu())) {
        const Interval S = model->support_interval();
        std::vector<Interval> gimages;
        for (const auto& g : model->maps()) gimages.push_back(g.image(S));
        for (std::size_t i = 0; i < gimages.size(); ++i)
            for (std::size_t j = i + 1; j < gimages.size(); ++j)
                report.ssc_conformal &=
                    record("g" + std::to_string(i + 1), "g" + std::to_string(j + 1), gimages[i],
                           gimages[j]);
    }
    return report;
}

TruncatedMeasure truncate_nu(const AtomRule& rule, int J, double r,
                             std::optional<double> support_diameter, bool renormalize) {
    require(J >= 1, "truncation needs at least one atom");
    require(r > 0.0, "order r must be positive");

    std::vector<double> points, masses;
    points.reserve(static_cast<std::size_t>(J));
    masses.reserve(static_cast<std::size_t>(J));
    double sum = 0.0;
    for (int j = 1; j <= J; ++j) {
        auto [x, m] = rule(j);
        require(m > 0.0, "atom rule produced a non-positive mass");
        points.push_back(x);
        masses.push_back(m);
        sum += m;
    }
    require(sum <= 1.0 + kMassTol, "atom masses exceed total mass 1");

    double tail = std::max(0.0, 1.0 - sum);
    double bound = 0.0;
    if (tail > 1e-15) {
        require(support_diameter.has_value(),
                "unbounded support: a diameter is required to bound the tail");
        require(*support_diameter > 0.0, "support diameter must be positive");
        bound = tail * std::pow(*support_diameter, r);
    }
    if (renormalize)
        for (double& m : masses) m /= sum;

    // The tail fields always describe the truncation, whether or not the
    // retained masses were rescaled.
    DiscreteMeasure measure(std::move(points), std::move(masses), tail, bound);
    return {std::move(measure), tail, bound};
}

}  // namespace qdim

#include "qdim/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qdim {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

constexpr double kBracketTol = 1e-13;

double spectral_radius_positive(const std::vector<std::vector<double>>& a) {
    const std::size_t m = a.size();
    std::vector<double> v(m, 1.0), w(m);
    double lo = 0.0, hi = 0.0;
    for (int it = 0; it < 200000; ++it) {
        double norm = 0.0;
        lo = std::numeric_limits<double>::infinity();
        hi = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < m; ++j) s += a[i][j] * v[j];
            w[i] = s;
            double ratio = s / v[i];
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
            norm = std::max(norm, s);
        }
        for (std::size_t i = 0; i < m; ++i) v[i] = w[i] / norm;
        // Collatz-Wielandt: the radius is pinched between the extreme ratios.
        if (hi - lo <= kBracketTol * hi) return 0.5 * (lo + hi);
    }
    throw std::runtime_error("power iteration did not converge");
}

// h without the domain check; the pressure extends continuously to [0,1].
double h_raw(const ConformalMeasureModel& model, double r, double t) {
    const int m = model.alphabet();
    if (model.is_bernoulli()) {
        double sum = 0.0;
        for (int j = 1; j <= m; ++j)
            sum += std::pow(std::pow(model.ratio(j), r) * model.symbol_weight(j), t);
        return std::log(sum);
    }
    const auto& mk = std::get<MarkovChain>(model.symbolic());
    std::vector<std::vector<double>> a(static_cast<std::size_t>(m),
                                       std::vector<double>(static_cast<std::size_t>(m)));
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= m; ++j)
            a[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = std::pow(
                std::pow(model.ratio(j), r) *
                    mk.transition[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)],
                t);
    return std::log(spectral_radius_positive(a));
}

}  // namespace

DimensionSolveResult solve_similarity_dimension(const std::vector<double>& probs,
                                                const std::vector<double>& ratios, double r) {
    require(r > 0.0, "order r must be positive");
    require(!probs.empty() && probs.size() == ratios.size(), "probs/ratios size mismatch");
    double psum = 0.0;
    for (double p : probs) {
        require(p > 0.0 && p < 1.0, "probabilities must lie in (0,1)");
        psum += p;
    }
    require(psum <= 1.0 + 1e-12, "probabilities must sum to at most 1");
    for (double c : ratios) require(c > 0.0 && c < 1.0, "contraction ratios must lie in (0,1)");

    std::vector<double> lw(probs.size());
    double limit = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        double w = probs[i] * std::pow(ratios[i], r);
        limit += w;
        lw[i] = std::log(w);
    }
    require(limit < 1.0, "no root: sum p_i c_i^r >= 1");

    auto F = [&](double s) {
        double q = s / (r + s);
        double sum = 0.0;
        for (double l : lw) sum += std::exp(q * l);
        return sum;
    };

    DimensionSolveResult res;
    if (probs.size() == 1) {
        // F(0) = 1 exactly: the root sits at the boundary.
        res.value = 0.0;
        res.boundary = true;
        res.residual = F(0.0) - 1.0;
        return res;
    }

    double lo = 0.0, hi = r > 1.0 ? r : 1.0;
    int doublings = 0;
    while (F(hi) >= 1.0) {
        hi *= 2.0;
        require(++doublings <= 1000, "failed to bracket the similarity dimension");
    }
    int iters = 0;
    while (hi - lo > kBracketTol * std::max(1.0, hi)) {
        double mid = 0.5 * (lo + hi);
        if (F(mid) >= 1.0)
            lo = mid;
        else
            hi = mid;
        ++iters;
    }
    res.value = 0.5 * (lo + hi);
    res.bracket_lo = lo;
    res.bracket_hi = hi;
    res.residual = F(res.value) - 1.0;
    res.iterations = iters;
    return res;
}

double h_of_t(const ConformalMeasureModel& model, double r, double t) {
    require(r > 0.0, "order r must be positive");
    require(t > 0.0 && t < 1.0, "t must lie in (0,1)");
    return h_raw(model, r, t);
}

DimensionSolveResult solve_kr(const ConformalMeasureModel& model, double r) {
    require(r > 0.0, "order r must be positive");

    DimensionSolveResult res;
    if (model.alphabet() == 1) {
        // h(t) = t r log s_1 < 0 for every t > 0: dimension 0.
        res.value = 0.0;
        res.boundary = true;
        return res;
    }

    // h(0) = log M > 0 and h(1) < 0 (all one-symbol weights are below 1), so
    // the zero is interior and bisection applies directly.
    double lo = 0.0, hi = 1.0;
    int iters = 0;
    while (hi - lo > kBracketTol) {
        double mid = 0.5 * (lo + hi);
        if (h_raw(model, r, mid) >= 0.0)
            lo = mid;
        else
            hi = mid;
        ++iters;
    }
    double t_star = 0.5 * (lo + hi);
    res.value = r * t_star / (1.0 - t_star);
    res.bracket_lo = r * lo / (1.0 - lo);
    res.bracket_hi = r * hi / (1.0 - hi);
    res.residual = h_raw(model, r, t_star);
    res.iterations = iters;
    return res;
}

SandwichCheck verify_pressure_sandwich(const ConformalMeasureModel& model, double r, double t,
                                       int n) {
    require(r > 0.0, "order r must be positive");
    require(t > 0.0 && t < 1.0, "t must lie in (0,1)");
    require(n >= 1, "cylinder length must be at least 1");
    require(n <= 16, "enumeration bound exceeded (n must be <= 16)");

    const int m = model.alphabet();
    std::vector<double> log_ratio(static_cast<std::size_t>(m));
    for (int j = 1; j <= m; ++j)
        log_ratio[static_cast<std::size_t>(j - 1)] = std::log(model.ratio(j));

    // Depth-first product over all M^n cylinders with exact symbolic masses.
    double total = 0.0;
    struct Frame {
        int depth;
        int last;
        double log_w;  // log (s_w^r nu[w])
    };
    std::vector<Frame> stack;
    stack.reserve(64);
    const auto* bern = std::get_if<BernoulliScheme>(&model.symbolic());
    const auto* mk = std::get_if<MarkovChain>(&model.symbolic());
    stack.push_back({0, 0, 0.0});
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (f.depth == n) {
            total += std::exp(t * f.log_w);
            continue;
        }
        for (int j = 1; j <= m; ++j) {
            double step;
            if (bern != nullptr)
                step = std::log(bern->weights[static_cast<std::size_t>(j - 1)]);
            else if (f.last == 0)
                step = std::log(mk->initial[static_cast<std::size_t>(j - 1)]);
            else
                step = std::log(mk->transition[static_cast<std::size_t>(f.last - 1)]
                                              [static_cast<std::size_t>(j - 1)]);
            stack.push_back({f.depth + 1, j, f.log_w + r * log_ratio[static_cast<std::size_t>(j - 1)] + step});
        }
    }

    const double h = h_raw(model, r, t);
    const double crl = std::pow(model.conformal_constant(), r) * model.distortion_constant();
    SandwichCheck check;
    check.middle = total;
    check.lower = std::exp(static_cast<double>(n) * h) * std::pow(crl, -t);
    check.upper = std::exp(static_cast<double>(n) * h) * std::pow(crl, t);
    // Relative slack so that the Bernoulli equality case (lower = upper)
    // passes under roundoff.
    check.ok = check.middle >= check.lower * (1.0 - 1e-9) &&
               check.middle <= check.upper * (1.0 + 1e-9);
    return check;
}

TheoremBounds theorem1_bounds(const CondensationSystem& system, double r) {
    require(r > 0.0, "order r must be positive");

    std::vector<double> probs, lower_ratios, upper_ratios;
    for (int i = 1; i <= system.map_count(); ++i) {
        probs.push_back(system.prob(i));
        lower_ratios.push_back(system.map(i).lower_lip);
        upper_ratios.push_back(system.map(i).upper_lip);
    }

    TheoremBounds out;
    out.d_r = solve_similarity_dimension(probs, lower_ratios, r);
    out.l_r = solve_similarity_dimension(probs, upper_ratios, r);
    if (const auto* model = std::get_if<ConformalMeasureModel>(&system.nu())) {
        out.k_r = solve_kr(*model, r);
    } else {
        out.k_r.value = 0.0;  // finite discrete nu has quantization dimension 0
        out.k_r.boundary = true;
    }
    out.separation = check_separation(system);
    out.lower = std::max(out.d_r.value, out.k_r.value);
    if (out.separation.ssc_condensation && out.separation.ssc_conformal)
        out.upper = std::max(out.l_r.value, out.k_r.value);
    return out;
}

DimensionEstimate estimate_dimension(std::vector<std::pair<double, double>> pairs, double r) {
    require(r > 0.0, "order r must be positive");

    DimensionEstimate est;
    for (const auto& [n, v] : pairs) {
        require(n >= 1.0, "n must be at least 1");
        require(v >= 0.0, "V_n must be nonnegative");
        if (v == 0.0) {
            ++est.excluded;  // support exhausted at this n
            continue;
        }
        est.pairs.emplace_back(n, v);
    }
    require(est.pairs.size() >= 3, "need at least 3 pairs with positive V_n");
    for (std::size_t i = 0; i + 1 < est.pairs.size(); ++i) {
        require(est.pairs[i].first < est.pairs[i + 1].first, "n values must be increasing");
        require(est.pairs[i].second >= est.pairs[i + 1].second, "V_n must be non-increasing");
    }

    est.ratios.reserve(est.pairs.size());
    for (const auto& [n, v] : est.pairs)
        est.ratios.push_back(r * std::log(n) / (-std::log(v)));

    const std::size_t count = est.pairs.size();
    const std::size_t third = std::max<std::size_t>(1, count / 3);
    est.lower_est = std::numeric_limits<double>::infinity();
    est.upper_est = -std::numeric_limits<double>::infinity();
    for (std::size_t i = count - third; i < count; ++i) {
        est.lower_est = std::min(est.lower_est, est.ratios[i]);
        est.upper_est = std::max(est.upper_est, est.ratios[i]);
    }

    // Slope of r log n against -log V_n; recovers kappa on exact power laws.
    double xbar = 0.0, ybar = 0.0;
    for (const auto& [n, v] : est.pairs) {
        xbar += -std::log(v);
        ybar += r * std::log(n);
    }
    xbar /= static_cast<double>(count);
    ybar /= static_cast<double>(count);
    double sxy = 0.0, sxx = 0.0;
    for (const auto& [n, v] : est.pairs) {
        double dx = -std::log(v) - xbar;
        double dy = r * std::log(n) - ybar;
        sxy += dx * dy;
        sxx += dx * dx;
    }
    require(sxx > 0.0, "V_n values are all equal: slope undefined");
    est.slope = sxy / sxx;
    return est;
}

CoefficientEstimate estimate_coefficient(const std::vector<std::pair<double, double>>& pairs,
                                         double kappa, double r) {
    require(kappa > 0.0, "kappa must be positive");
    require(r > 0.0, "order r must be positive");
    require(!pairs.empty(), "need at least one pair");

    CoefficientEstimate est;
    est.values.reserve(pairs.size());
    for (const auto& [n, v] : pairs) {
        require(n >= 1.0, "n must be at least 1");
        est.values.push_back(std::pow(n, r / kappa) * v);
    }

    const std::size_t count = est.values.size();
    const std::size_t third = std::max<std::size_t>(1, count / 3);
    double first = 0.0, last = 0.0;
    for (std::size_t i = 0; i < third; ++i) first += est.values[i];
    for (std::size_t i = count - third; i < count; ++i) last += est.values[i];
    est.first_third_mean = first / static_cast<double>(third);
    est.last_third_mean = last / static_cast<double>(third);

    const double ratio = est.last_third_mean / est.first_third_mean;
    if (ratio > 10.0)
        est.verdict = CoefficientVerdict::diverging;
    else if (ratio < 0.1)
        est.verdict = CoefficientVerdict::vanishing;
    else
        est.verdict = CoefficientVerdict::bounded_positive;
    return est;
}

}  // namespace qdim

#include "qdim/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace qdim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

double power(double d, double r) { return r == 2.0 ? d * d : std::pow(d, r); }

// Compensated accumulation: distortion sums mix terms of very different
// magnitude (tiny far-tail cells against bulk cells).
struct Kahan {
    double sum = 0.0, carry = 0.0;
    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

double nearest_distance(const std::vector<double>& sorted_codebook, double x) {
    auto it = std::lower_bound(sorted_codebook.begin(), sorted_codebook.end(), x);
    double best = kInf;
    if (it != sorted_codebook.end()) best = *it - x;
    if (it != sorted_codebook.begin()) best = std::min(best, x - *(it - 1));
    return best;
}

// Minimum of the convex cell objective sum m_k |x_k - a|^r over a by
// golden-section search; returns (representative, cost).
std::pair<double, double> golden_cell(const std::vector<double>& x, const std::vector<double>& m,
                                      std::size_t lo, std::size_t hi, double r) {
    auto cost_at = [&](double a) {
        Kahan acc;
        for (std::size_t k = lo; k <= hi; ++k) acc.add(m[k] * power(std::abs(x[k] - a), r));
        return acc.sum;
    };
    double a = x[lo], b = x[hi];
    if (a == b) return {a, 0.0};
    const double invphi = 0.6180339887498949;
    const double tol = 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
    double c1 = b - invphi * (b - a), c2 = a + invphi * (b - a);
    double f1 = cost_at(c1), f2 = cost_at(c2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - invphi * (b - a);
            f1 = cost_at(c1);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + invphi * (b - a);
            f2 = cost_at(c2);
        }
    }
    double rep = 0.5 * (a + b);
    return {rep, cost_at(rep)};
}

// Weighted mean of a cell by a running update; exact enough even when the
// masses decay geometrically across the cell.
double cell_mean(const std::vector<double>& x, const std::vector<double>& m, std::size_t lo,
                 std::size_t hi) {
    double s0 = 0.0, mu = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) {
        s0 += m[k];
        mu += (x[k] - mu) * (m[k] / s0);
    }
    return mu;
}

std::vector<double> midpoint_boundaries(const std::vector<double>& points) {
    std::vector<double> b;
    if (points.size() < 2) return b;
    b.reserve(points.size() - 1);
    for (std::size_t k = 0; k + 1 < points.size(); ++k)
        b.push_back(0.5 * (points[k] + points[k + 1]));
    return b;
}

QuantizationResult exhausted_result(const DiscreteMeasure& mu, int n, double r) {
    QuantizationResult res;
    res.n = n;
    res.r = r;
    res.points = mu.points();
    res.boundaries = midpoint_boundaries(res.points);
    res.distortion = 0.0;
    res.tail_bound = mu.tail_error_bound();
    res.support_exhausted = n > static_cast<int>(mu.size());
    return res;
}

}  // namespace

double distortion(const DiscreteMeasure& mu, const std::vector<double>& codebook, double r) {
    require(!codebook.empty(), "codebook must be nonempty");
    require(r > 0.0, "order r must be positive");
    std::vector<double> sorted = codebook;
    std::sort(sorted.begin(), sorted.end());
    Kahan acc;
    const auto& x = mu.points();
    const auto& m = mu.masses();
    for (std::size_t i = 0; i < x.size(); ++i)
        acc.add(m[i] * power(nearest_distance(sorted, x[i]), r));
    return acc.sum;
}

QuantizationResult optimal_quantizer_dp(const DiscreteMeasure& mu, int n, double r) {
    require(n >= 1, "codebook size must be at least 1");
    require(r >= 1.0, "the exact solver requires r >= 1");
    const auto& x = mu.points();
    const auto& m = mu.masses();
    const int J = static_cast<int>(x.size());
    if (n >= J) return exhausted_result(mu, n, r);

    const std::size_t w = static_cast<std::size_t>(J) + 1;
    std::vector<double> best(static_cast<std::size_t>(n + 1) * w, kInf);
    std::vector<int> split(static_cast<std::size_t>(n + 1) * w, -1);
    best[0] = 0.0;

    std::vector<double> col(static_cast<std::size_t>(J));
    for (int j = 0; j < J; ++j) {
        if (r == 2.0) {
            // col[i] = cost of the cell holding atoms i..j, accumulated
            // backwards with Welford updates anchored at this cell end. A
            // prefix-sum formulation cancels catastrophically when masses
            // and positions span many orders of magnitude.
            double s0 = 0.0, mean = 0.0, m2 = 0.0;
            for (int i = j; i >= 0; --i) {
                const std::size_t iu = static_cast<std::size_t>(i);
                double s0n = s0 + m[iu];
                double d = x[iu] - mean;
                mean += d * (m[iu] / s0n);
                m2 += m[iu] * d * (x[iu] - mean);
                s0 = s0n;
                col[iu] = m2;
            }
        } else {
            for (int i = j; i >= 0; --i)
                col[static_cast<std::size_t>(i)] =
                    golden_cell(x, m, static_cast<std::size_t>(i), static_cast<std::size_t>(j), r)
                        .second;
        }
        const int gmax = std::min(n, j + 1);
        for (int g = 1; g <= gmax; ++g) {
            double b = kInf;
            int arg = -1;
            const std::size_t prev_row = static_cast<std::size_t>(g - 1) * w;
            for (int i = g - 1; i <= j; ++i) {
                double v = best[prev_row + static_cast<std::size_t>(i)];
                if (v == kInf) continue;
                v += col[static_cast<std::size_t>(i)];
                if (v < b) {  // strict: ties stay at the leftmost split
                    b = v;
                    arg = i;
                }
            }
            best[static_cast<std::size_t>(g) * w + static_cast<std::size_t>(j + 1)] = b;
            split[static_cast<std::size_t>(g) * w + static_cast<std::size_t>(j + 1)] = arg;
        }
    }

    std::vector<int> cuts(static_cast<std::size_t>(n) + 1);
    cuts[static_cast<std::size_t>(n)] = J;
    for (int g = n; g >= 1; --g)
        cuts[static_cast<std::size_t>(g - 1)] =
            split[static_cast<std::size_t>(g) * w + static_cast<std::size_t>(cuts[static_cast<std::size_t>(g)])];

    QuantizationResult res;
    res.n = n;
    res.r = r;
    res.tail_bound = mu.tail_error_bound();
    res.points.reserve(static_cast<std::size_t>(n));
    for (int g = 0; g < n; ++g) {
        const std::size_t lo = static_cast<std::size_t>(cuts[static_cast<std::size_t>(g)]);
        const std::size_t hi = static_cast<std::size_t>(cuts[static_cast<std::size_t>(g) + 1] - 1);
        res.points.push_back(r == 2.0 ? cell_mean(x, m, lo, hi)
                                      : golden_cell(x, m, lo, hi, r).first);
    }
    res.boundaries = midpoint_boundaries(res.points);
    res.distortion = best[static_cast<std::size_t>(n) * w + static_cast<std::size_t>(J)];
    return res;
}

LloydOutcome lloyd(const DiscreteMeasure& mu, int n, double r, const std::vector<double>* init,
                   LloydOptions options) {
    require(n >= 1, "codebook size must be at least 1");
    require(r >= 1.0, "Lloyd descent requires r >= 1");
    const auto& x = mu.points();
    const auto& m = mu.masses();
    const int J = static_cast<int>(x.size());

    LloydOutcome out;
    if (n >= J) {
        out.result = exhausted_result(mu, n, r);
        out.converged = true;
        return out;
    }

    std::vector<double> code;
    if (init != nullptr) {
        require(static_cast<int>(init->size()) == n, "init size must equal n");
        code = *init;
        std::sort(code.begin(), code.end());
        for (std::size_t k = 0; k + 1 < code.size(); ++k)
            require(code[k] < code[k + 1], "init points must be distinct");
    } else {
        // Mass-quantile seeding: atom indices at cumulative mass
        // (k + 1/2)/n, then forced strictly increasing.
        double total = 0.0;
        for (double mm : m) total += mm;
        std::vector<int> idx(static_cast<std::size_t>(n));
        double cum = 0.0;
        int pos = 0;
        for (int k = 0; k < n; ++k) {
            double target = total * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
            while (pos < J - 1 && cum + m[static_cast<std::size_t>(pos)] < target)
                cum += m[static_cast<std::size_t>(pos++)];
            idx[static_cast<std::size_t>(k)] = pos;
        }
        for (int k = 1; k < n; ++k)
            idx[static_cast<std::size_t>(k)] =
                std::max(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(k - 1)] + 1);
        idx[static_cast<std::size_t>(n - 1)] = std::min(idx[static_cast<std::size_t>(n - 1)], J - 1);
        for (int k = n - 2; k >= 0; --k)
            idx[static_cast<std::size_t>(k)] =
                std::min(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(k + 1)] - 1);
        code.reserve(static_cast<std::size_t>(n));
        for (int i : idx) code.push_back(x[static_cast<std::size_t>(i)]);
    }

    std::vector<std::size_t> cell_start(static_cast<std::size_t>(n));
    std::vector<std::size_t> cell_end(static_cast<std::size_t>(n));  // exclusive
    auto assign = [&]() {
        std::vector<double> bounds = midpoint_boundaries(code);
        std::size_t begin = 0;
        for (int k = 0; k < n; ++k) {
            std::size_t end;
            if (k == n - 1) {
                end = static_cast<std::size_t>(J);
            } else {
                // Atoms at or left of the boundary belong to the left cell.
                end = static_cast<std::size_t>(
                    std::upper_bound(x.begin() + static_cast<std::ptrdiff_t>(begin), x.end(),
                                     bounds[static_cast<std::size_t>(k)]) -
                    x.begin());
            }
            cell_start[static_cast<std::size_t>(k)] = begin;
            cell_end[static_cast<std::size_t>(k)] = end;
            begin = end;
        }
    };

    double prev = kInf;
    int reseeds = 0;
    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        out.iterations = iter;
        assign();

        std::vector<int> empties;
        for (int k = 0; k < n; ++k)
            if (cell_start[static_cast<std::size_t>(k)] == cell_end[static_cast<std::size_t>(k)])
                empties.push_back(k);
        if (!empties.empty()) {
            require(++reseeds <= 2 * n + 10, "Lloyd reseeding failed to stabilize");
            // Deterministic rule: move each empty point to the atom with the
            // largest current distortion contribution (ties to the left).
            std::vector<double> sorted_code = code;
            std::sort(sorted_code.begin(), sorted_code.end());
            std::vector<std::pair<double, std::size_t>> contrib;
            contrib.reserve(static_cast<std::size_t>(J));
            for (std::size_t i = 0; i < static_cast<std::size_t>(J); ++i)
                contrib.emplace_back(-m[i] * power(nearest_distance(sorted_code, x[i]), r), i);
            std::sort(contrib.begin(), contrib.end());
            std::size_t next = 0;
            for (int k : empties) {
                while (next < contrib.size() &&
                       std::binary_search(sorted_code.begin(), sorted_code.end(),
                                          x[contrib[next].second]))
                    ++next;
                if (next == contrib.size()) break;
                code[static_cast<std::size_t>(k)] = x[contrib[next++].second];
            }
            std::sort(code.begin(), code.end());
            continue;  // re-assign with the reseeded configuration
        }

        double cost = 0.0;
        Kahan acc;
        for (int k = 0; k < n; ++k) {
            const std::size_t lo = cell_start[static_cast<std::size_t>(k)];
            const std::size_t hi = cell_end[static_cast<std::size_t>(k)] - 1;
            if (r == 2.0) {
                double s0 = 0.0, mean = 0.0, m2 = 0.0;
                for (std::size_t i = lo; i <= hi; ++i) {
                    double s0n = s0 + m[i];
                    double d = x[i] - mean;
                    mean += d * (m[i] / s0n);
                    m2 += m[i] * d * (x[i] - mean);
                    s0 = s0n;
                }
                code[static_cast<std::size_t>(k)] = mean;
                acc.add(m2);
            } else {
                auto [rep, c] = golden_cell(x, m, lo, hi, r);
                code[static_cast<std::size_t>(k)] = rep;
                acc.add(c);
            }
        }
        cost = acc.sum;
        out.history.push_back(cost);

        if (std::isfinite(prev) && prev - cost <= options.rel_tol * prev) {
            out.converged = true;
            break;
        }
        prev = cost;
    }

    std::sort(code.begin(), code.end());
    out.result.n = n;
    out.result.r = r;
    out.result.points = code;
    out.result.boundaries = midpoint_boundaries(code);
    out.result.distortion = distortion(mu, code, r);
    out.result.tail_bound = mu.tail_error_bound();
    return out;
}

AntichainCodebook codebook_from_antichain(const CondensationSystem& system,
                                          const AntichainFamily& family) {
    return codebook_from_antichain(system, family,
                                   [](const AffineContraction& map, const Interval& domain) {
                                       return map(domain.mid());
                                   });
}

AntichainCodebook codebook_from_antichain(const CondensationSystem& system,
                                          const AntichainFamily& family,
                                          const CellSelector& selector) {
    const auto* model = std::get_if<ConformalMeasureModel>(&system.nu());
    require(model != nullptr, "antichain codebook requires a conformal nu model");
    SeparationReport sep = check_separation(system);
    require(sep.ssc_condensation && sep.ssc_conformal,
            "strong separation is required for the codebook bound");

    const double r = family.r;
    const Interval K = system.bounding_interval();
    const Interval C = model->support_interval();
    const double dstar = std::max(std::pow(K.length(), r), std::pow(C.length(), r));
    const double c = model->conformal_constant();

    auto compose_f = [&](const CodeString& word) -> std::optional<AffineContraction> {
        std::optional<AffineContraction> acc;
        for (int s : word) acc = acc ? acc->compose(system.map(s)) : system.map(s);
        return acc;
    };
    auto compose_g = [&](const CodeString& word) -> AffineContraction {
        std::optional<AffineContraction> acc;
        for (int s : word) {
            const auto& g = model->maps()[static_cast<std::size_t>(s - 1)];
            acc = acc ? acc->compose(g) : g;
        }
        return *acc;
    };

    std::vector<double> system_log_weights;
    for (int i = 1; i <= system.map_count(); ++i)
        system_log_weights.push_back(
            std::log(system.prob(i) * std::pow(system.map(i).upper_lip, r)));

    AntichainCodebook out;
    out.psi_budget = family.psi_total;

    Kahan gamma_sum;
    for (std::size_t i = 0; i < family.gamma.members.size(); ++i) {
        auto fmap = compose_f(family.gamma.members[i]);
        out.points.push_back(selector(*fmap, K));
        gamma_sum.add(std::exp(family.gamma.log_weights[i]));
    }

    Kahan phi_sum;
    for (std::size_t k = 0; k < family.phi.size(); ++k) {
        const CodeString& omega = family.phi[k];
        double log_pw = 0.0;
        for (int s : omega) log_pw += system_log_weights[static_cast<std::size_t>(s - 1)];
        auto fmap = compose_f(omega);
        const Antichain& go = family.gamma_omega[k];
        for (std::size_t t = 0; t < go.members.size(); ++t) {
            AffineContraction gmap = compose_g(go.members[t]);
            AffineContraction full = fmap ? fmap->compose(gmap) : gmap;
            out.points.push_back(selector(full, C));
            phi_sum.add(std::exp(log_pw + go.log_weights[t]));
        }
    }

    out.bound = dstar * (gamma_sum.sum + c * phi_sum.sum);

    std::sort(out.points.begin(), out.points.end());
    std::vector<double> dedup;
    dedup.reserve(out.points.size());
    for (double p : out.points)
        if (dedup.empty() || p - dedup.back() >= 1e-14) dedup.push_back(p);
    out.points = std::move(dedup);
    return out;
}

}  // namespace qdim

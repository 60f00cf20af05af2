#include "qdim/reproduce.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "qdim/codes.hpp"
#include "qdim/dimension.hpp"
#include "qdim/measure.hpp"
#include "qdim/presets.hpp"
#include "qdim/quantizer.hpp"
#include "qdim/sampler.hpp"

namespace qdim {

namespace {

ClaimResult approx(std::string claim, double expected, double got, double tol) {
    ClaimResult c;
    c.claim = std::move(claim);
    c.expected = expected;
    c.got = got;
    c.tol = tol;
    c.pass = std::isfinite(got) && std::abs(got - expected) <= tol;
    return c;
}

ClaimResult at_most(std::string claim, double got, double threshold) {
    ClaimResult c;
    c.claim = std::move(claim);
    c.expected = threshold;
    c.got = got;
    c.tol = 0.0;
    c.pass = std::isfinite(got) && got <= threshold;
    return c;
}

ClaimResult at_least(std::string claim, double got, double threshold) {
    ClaimResult c;
    c.claim = std::move(claim);
    c.expected = threshold;
    c.got = got;
    c.tol = 0.0;
    c.pass = std::isfinite(got) && got >= threshold;
    return c;
}

ClaimResult boolean(std::string claim, bool ok) {
    ClaimResult c;
    c.claim = std::move(claim);
    c.expected = 1.0;
    c.got = ok ? 1.0 : 0.0;
    c.tol = 0.0;
    c.pass = ok;
    return c;
}

GroupReport group_section4() {
    GroupReport rep;
    for (int n = 1; n <= 10; ++n) {
        DiscreteMeasure mu = section4_measure(n + 40);
        QuantizationResult got = optimal_quantizer_dp(mu, n, 2.0);
        QuantizationResult exact = section4_optimal(n);
        rep.claims.push_back(approx("quantization error V_" + std::to_string(n),
                                    exact.distortion, got.distortion,
                                    1e-6 * exact.distortion));
        double dev = std::numeric_limits<double>::infinity();
        if (got.points.size() == exact.points.size()) {
            dev = 0.0;
            for (std::size_t i = 0; i < got.points.size(); ++i)
                dev = std::max(dev, std::abs(got.points[i] - exact.points[i]));
        }
        rep.claims.push_back(
            approx("codebook deviation at n = " + std::to_string(n), 0.0, dev, 1e-9));
    }

    DiscreteMeasure mu = section4_measure(60);
    rep.claims.push_back(approx("mean of the preset measure", 7.0 / 15.0, mu.mean(), 1e-12));
    rep.claims.push_back(
        approx("variance of the preset measure", 8.0 / 1575.0, mu.variance(), 1e-12));

    std::vector<std::pair<double, double>> pairs;
    for (int n = 2; n <= 20; ++n)
        pairs.emplace_back(static_cast<double>(n), std::ldexp(1.0, 6 - 3 * n) / 1575.0);
    DimensionEstimate est = estimate_dimension(pairs, 2.0);
    rep.claims.push_back(
        at_most("dimension ratio at n = 20 stays below 0.15", est.ratios.back(), 0.15));
    bool decreasing = true;
    for (std::size_t i = 3; i + 1 < est.ratios.size(); ++i)
        decreasing = decreasing && est.ratios[i] > est.ratios[i + 1];
    rep.claims.push_back(boolean("dimension ratios strictly decrease from n = 5 on", decreasing));
    return rep;
}

GroupReport group_example46() {
    GroupReport rep;
    const double k = example46_normalizer();
    const double floor_c = 0.95 * k / 9.0;
    const double ceil_c = 1.05 * 16.0 * k / 9.0;
    double scaled_first = 0.0;
    double scaled_last = 0.0;
    for (int n : {50, 100, 150, 200}) {
        DiscreteMeasure mu = example46_measure(n + 60);
        QuantizationResult res = optimal_quantizer_dp(mu, n, 2.0);
        double nn = static_cast<double>(n);
        double enveloped = nn * nn * std::log(nn) * res.distortion;
        rep.claims.push_back(at_least(
            "n^2 log(n) V_n above the envelope floor at n = " + std::to_string(n), enveloped,
            floor_c));
        rep.claims.push_back(at_most(
            "n^2 log(n) V_n below the envelope ceiling at n = " + std::to_string(n), enveloped,
            ceil_c));
        if (n == 50) scaled_first = nn * nn * res.distortion;
        if (n == 200) scaled_last = nn * nn * res.distortion;
    }
    rep.claims.push_back(at_most("n^2 V_n at n = 200 under half its value at n = 50",
                                 scaled_last, 0.5 * scaled_first));
    return rep;
}

GroupReport group_cantor() {
    GroupReport rep;
    CondensationSystem sys = cantor_condensation_example();

    double l2_expected = 2.0 * std::log(0.5) / std::log(2.0 / 27.0);
    DimensionSolveResult l2 = solve_similarity_dimension({1.0 / 3.0, 1.0 / 3.0},
                                                         {1.0 / 3.0, 1.0 / 3.0}, 2.0);
    rep.claims.push_back(approx("similarity exponent l_2", l2_expected, l2.value, 1e-10));

    const auto& model = std::get<ConformalMeasureModel>(sys.nu());
    DimensionSolveResult k2 = solve_kr(model, 2.0);
    rep.claims.push_back(
        approx("pressure exponent k_2", std::log(2.0) / std::log(3.0), k2.value, 1e-10));

    SeparationReport sep = check_separation(sys);
    rep.claims.push_back(
        boolean("strong separation verified", sep.ssc_condensation && sep.ssc_conformal));

    TheoremBounds bounds = theorem1_bounds(sys, 2.0);
    double spread = bounds.upper ? *bounds.upper - bounds.lower
                                 : std::numeric_limits<double>::infinity();
    rep.claims.push_back(
        approx("bounds collapse when the Lipschitz bounds coincide", 0.0, spread, 1e-12));

    rep.claims.push_back(approx("exact affine mean", 0.5, exact_mean_affine(sys), 1e-12));
    return rep;
}

GroupReport group_antichain() {
    GroupReport rep;
    CondensationSystem sys = cantor_condensation_example();
    const long long psi_expected[3] = {12, 32, 80};
    DimensionSolveResult l2 = solve_similarity_dimension({1.0 / 3.0, 1.0 / 3.0},
                                                         {1.0 / 3.0, 1.0 / 3.0}, 2.0);
    const double exponent = l2.value / (2.0 + l2.value);

    for (int level = 1; level <= 3; ++level) {
        AntichainFamily fam = build_antichain_family(sys, 2.0, level);
        rep.claims.push_back(approx("antichain size at level " + std::to_string(level),
                                    std::ldexp(1.0, level + 1),
                                    static_cast<double>(fam.gamma.size()), 0.0));
        rep.claims.push_back(approx("codebook budget psi at level " + std::to_string(level),
                                    static_cast<double>(psi_expected[level - 1]),
                                    static_cast<double>(fam.psi_total), 0.0));
        bool maximal = verify_maximal_antichain(fam.gamma);
        for (const Antichain& g : fam.gamma_omega) maximal = maximal && verify_maximal_antichain(g);
        rep.claims.push_back(
            boolean("antichains maximal at level " + std::to_string(level), maximal));

        double cascade = 0.0;
        for (double lw : fam.gamma.log_weights) cascade += std::exp(lw * exponent);
        rep.claims.push_back(approx("cascade conservation at level " + std::to_string(level), 1.0,
                                    cascade, 1e-10));
    }
    return rep;
}

GroupReport group_lemma33(std::uint64_t seed) {
    GroupReport rep;
    CondensationSystem sys = cantor_condensation_example();
    const double bound_expected[3] = {19.0 / 729.0, 0.003302342122643902, 0.0003970337252865322};

    SampleBatch batch = sample_mu(sys, 1000000, /*depth=*/40, seed);
    for (int level = 1; level <= 3; ++level) {
        AntichainFamily fam = build_antichain_family(sys, 2.0, level);
        AntichainCodebook cb = codebook_from_antichain(sys, fam);
        rep.claims.push_back(approx("distortion bound at level " + std::to_string(level),
                                    bound_expected[level - 1], cb.bound,
                                    1e-9 * bound_expected[level - 1]));
        rep.claims.push_back(at_most("codebook size within budget at level " +
                                         std::to_string(level),
                                     static_cast<double>(cb.points.size()),
                                     static_cast<double>(fam.psi_total)));
        EmpiricalDistortion emp = empirical_distortion(batch, cb.points, 2.0);
        rep.claims.push_back(at_most("sampled distortion within bound (3 standard errors), level " +
                                         std::to_string(level),
                                     emp.value, cb.bound + 3.0 * emp.std_error));
    }
    return rep;
}

GroupReport group_sandwich() {
    GroupReport rep;

    CondensationSystem sys = cantor_condensation_example();
    const auto& bernoulli = std::get<ConformalMeasureModel>(sys.nu());
    double max_dev = 0.0;
    for (int n = 1; n <= 12; ++n) {
        SandwichCheck chk = verify_pressure_sandwich(bernoulli, 2.0, 0.5, n);
        max_dev = std::max(max_dev, std::abs(chk.middle / chk.lower - 1.0));
        max_dev = std::max(max_dev, std::abs(chk.middle / chk.upper - 1.0));
    }
    rep.claims.push_back(approx(
        "cylinder sums equal e^{n h(t)} for product weights, n <= 12", 0.0, max_dev, 1e-12));

    ConformalMeasureModel markov(
        {AffineContraction(1.0 / 3.0, 0.0), AffineContraction(1.0 / 4.0, 0.75)},
        MarkovChain{{4.0 / 7.0, 3.0 / 7.0}, {{0.7, 0.3}, {0.4, 0.6}}}, Interval{0.0, 1.0});
    DimensionSolveResult kr = solve_kr(markov, 2.0);
    rep.claims.push_back(approx("chain-weight exponent k_2", 0.5519455541368827, kr.value, 1e-10));
    double tstar = kr.value / (2.0 + kr.value);
    rep.claims.push_back(approx("zero crossing t*", 0.21628422018727644, tstar, 1e-10));

    for (double t : {0.3, tstar, 0.7}) {
        bool ok = true;
        for (int n = 1; n <= 12; ++n) ok = ok && verify_pressure_sandwich(markov, 2.0, t, n).ok;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "pressure sandwich holds for n <= 12 at t = %.6g", t);
        rep.claims.push_back(boolean(buf, ok));
    }

    SandwichCheck deep = verify_pressure_sandwich(markov, 2.0, tstar, 14);
    double h_emp = std::abs(std::log(deep.middle)) / 14.0;
    double envelope = 2.0 *
                      std::log(std::pow(markov.conformal_constant(), 2.0) *
                               markov.distortion_constant()) /
                      14.0;
    rep.claims.push_back(
        at_most("finite-depth pressure estimate within envelope at n = 14", h_emp, envelope));
    return rep;
}

}  // namespace

std::vector<GroupReport> run_reproduction(const std::string& which, std::uint64_t seed) {
    static const std::vector<std::string> names = {"section4", "example46", "cantor",
                                                   "antichain", "lemma33",  "sandwich"};
    auto run_one = [&](const std::string& name) {
        auto t0 = std::chrono::steady_clock::now();
        GroupReport rep;
        if (name == "section4") rep = group_section4();
        else if (name == "example46") rep = group_example46();
        else if (name == "cantor") rep = group_cantor();
        else if (name == "antichain") rep = group_antichain();
        else if (name == "lemma33") rep = group_lemma33(seed);
        else rep = group_sandwich();
        rep.group = name;
        rep.pass = std::all_of(rep.claims.begin(), rep.claims.end(),
                               [](const ClaimResult& c) { return c.pass; });
        rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return rep;
    };

    std::vector<GroupReport> out;
    if (which == "all") {
        for (const auto& name : names) out.push_back(run_one(name));
        return out;
    }
    if (std::find(names.begin(), names.end(), which) == names.end())
        throw std::invalid_argument(
            "unknown reproduction group '" + which +
            "' (expected section4, example46, cantor, antichain, lemma33, sandwich, or all)");
    out.push_back(run_one(which));
    return out;
}

nlohmann::json report_to_json(const std::vector<GroupReport>& reports) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& rep : reports) {
        nlohmann::json group;
        group["group"] = rep.group;
        group["pass"] = rep.pass;
        group["seconds"] = rep.seconds;
        group["claims"] = nlohmann::json::array();
        for (const auto& c : rep.claims)
            group["claims"].push_back(nlohmann::json{{"claim", c.claim},
                                                     {"expected", c.expected},
                                                     {"got", c.got},
                                                     {"tol", c.tol},
                                                     {"pass", c.pass}});
        doc.push_back(std::move(group));
    }
    return doc;
}

}  // namespace qdim

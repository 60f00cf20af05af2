#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdim/dimension.hpp"
#include "qdim/io.hpp"
#include "qdim/measure.hpp"
#include "qdim/presets.hpp"
#include "qdim/quantizer.hpp"
#include "qdim/reproduce.hpp"
#include "qdim/sampler.hpp"

namespace {

constexpr int kSchemaVersion = 1;
constexpr std::size_t kSampleCount = 100000;
constexpr int kDepthCap = 200;

struct NRange {
    int lo = 1;
    int hi = 1;
};

int parse_int(const std::string& s) {
    int out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument("not an integer: '" + s + "'");
    return out;
}

NRange parse_range(const std::string& s) {
    NRange range;
    auto pos = s.find("..");
    if (pos == std::string::npos) {
        range.lo = range.hi = parse_int(s);
    } else {
        range.lo = parse_int(s.substr(0, pos));
        range.hi = parse_int(s.substr(pos + 2));
    }
    if (range.lo < 1 || range.hi < range.lo)
        throw std::invalid_argument("bad n range '" + s + "' (want A..B with 1 <= A <= B)");
    return range;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out.good()) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void emit_json_doc(const nlohmann::json& doc, bool to_stdout, const std::string& out_dir,
                   const char* filename) {
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_text(std::filesystem::path(out_dir) / filename, doc.dump(2) + "\n");
    }
    if (to_stdout) std::cout << doc.dump(2) << "\n";
}

struct QuantizeArgs {
    std::string preset, measure_path, system_path, nrange = "1..1", out_dir;
    double r = 2.0;
    std::uint64_t seed = 0;
    int depth = 40;
    bool as_json = false;
};

int run_quantize(const QuantizeArgs& args) {
    const int sources = !args.preset.empty() + !args.measure_path.empty() +
                        !args.system_path.empty();
    if (sources != 1)
        throw std::invalid_argument("pick exactly one of --preset, --measure, --system");
    NRange range = parse_range(args.nrange);

    nlohmann::json config{{"command", "quantize"},       {"r", args.r},
                          {"n", {range.lo, range.hi}},   {"seed", args.seed},
                          {"depth", args.depth},         {"out", args.out_dir},
                          {"preset", args.preset},       {"measure", args.measure_path},
                          {"system", args.system_path}};

    std::vector<qdim::QuantizationResult> results;
    nlohmann::json sampling;

    std::function<qdim::DiscreteMeasure(int)> measure_for;
    if (args.preset == "section4") {
        measure_for = [](int n) { return qdim::section4_measure(n + 40); };
    } else if (args.preset == "example46") {
        measure_for = [](int n) { return qdim::example46_measure(n + 60); };
    } else if (!args.measure_path.empty()) {
        qdim::DiscreteMeasure mu = qdim::load_measure(args.measure_path);
        measure_for = [mu](int) { return mu; };
    } else if (args.preset.empty() || args.preset == "cantor-condensation") {
        qdim::CondensationSystem system = args.system_path.empty()
                                              ? qdim::cantor_condensation_example()
                                              : qdim::load_system(args.system_path);
        qdim::SampleBatch batch =
            qdim::sample_mu(system, kSampleCount, args.depth, args.seed, kDepthCap);
        std::vector<double> masses(batch.points.size(), 1.0 / batch.points.size());
        qdim::DiscreteMeasure empirical(batch.points, masses);
        sampling = {{"samples", batch.points.size()},
                    {"generator", batch.generator},
                    {"truncation_error_bound", batch.truncation_error_bound},
                    {"truncation_probability", batch.truncation_probability}};
        qdim::LloydOptions options;
        options.max_iterations = 2000;
        for (int n = range.lo; n <= range.hi; ++n)
            results.push_back(qdim::lloyd(empirical, n, args.r, nullptr, options).result);
    } else {
        throw std::invalid_argument("unknown preset '" + args.preset +
                                    "' (expected section4, example46, or cantor-condensation)");
    }
    if (measure_for)
        for (int n = range.lo; n <= range.hi; ++n)
            results.push_back(qdim::optimal_quantizer_dp(measure_for(n), n, args.r));

    std::ostringstream csv;
    qdim::write_results_csv(csv, results);

    nlohmann::json meta{{"schema_version", kSchemaVersion}, {"config", config}};
    if (!sampling.is_null()) meta["sampling"] = sampling;

    if (!args.out_dir.empty()) {
        std::filesystem::create_directories(args.out_dir);
        write_text(std::filesystem::path(args.out_dir) / "quantize.csv", csv.str());
        write_text(std::filesystem::path(args.out_dir) / "quantize_meta.json",
                   meta.dump(2) + "\n");
    }
    if (args.as_json) {
        nlohmann::json doc = meta;
        doc["results"] = nlohmann::json::array();
        for (const auto& res : results) doc["results"].push_back(qdim::result_to_json(res));
        std::cout << doc.dump(2) << "\n";
    } else if (args.out_dir.empty()) {
        std::cout << csv.str();
    } else {
        std::cout << "wrote " << (std::filesystem::path(args.out_dir) / "quantize.csv").string()
                  << "\n";
    }
    return 0;
}

struct SolveArgs {
    std::string preset, system_path, out_dir;
    double r = 2.0;
    double tol = 1e-12;
    bool as_json = false;
};

int run_solve(const SolveArgs& args) {
    if (args.preset.empty() == args.system_path.empty())
        throw std::invalid_argument("pick exactly one of --preset, --system");
    if (!args.preset.empty() && args.preset != "cantor-condensation")
        throw std::invalid_argument("solve needs a condensation preset (cantor-condensation)");
    qdim::CondensationSystem system = args.system_path.empty()
                                          ? qdim::cantor_condensation_example()
                                          : qdim::load_system(args.system_path);
    qdim::TheoremBounds bounds = qdim::theorem1_bounds(system, args.r);

    // Residual gate: re-evaluate the defining equations at the reported roots.
    std::vector<double> probs(system.probs().begin() + 1, system.probs().end());
    std::vector<double> lower_lips, upper_lips;
    for (int i = 1; i <= system.map_count(); ++i) {
        lower_lips.push_back(system.map(i).lower_lip);
        upper_lips.push_back(system.map(i).upper_lip);
    }
    for (const auto& lips : {lower_lips, upper_lips}) {
        auto sol = qdim::solve_similarity_dimension(probs, lips, args.r);
        if (std::abs(sol.residual) > args.tol)
            throw std::runtime_error("dimension residual " + fmt(sol.residual) +
                                     " exceeds tolerance " + fmt(args.tol));
    }

    nlohmann::json config{{"command", "dimension solve"}, {"r", args.r},
                          {"tol", args.tol},              {"preset", args.preset},
                          {"system", args.system_path},   {"out", args.out_dir}};
    nlohmann::json doc{{"schema_version", kSchemaVersion},
                       {"config", config},
                       {"d_r", bounds.d_r.value},
                       {"l_r", bounds.l_r.value},
                       {"k_r", bounds.k_r.value},
                       {"lower", bounds.lower},
                       {"upper", bounds.upper ? nlohmann::json(*bounds.upper)
                                              : nlohmann::json(nullptr)},
                       {"ssc_condensation", bounds.separation.ssc_condensation},
                       {"ssc_conformal", bounds.separation.ssc_conformal}};
    emit_json_doc(doc, args.as_json, args.out_dir, "dimension_solve.json");
    if (!args.as_json) {
        std::cout << "d_r   = " << fmt(bounds.d_r.value) << "\n"
                  << "l_r   = " << fmt(bounds.l_r.value) << "\n"
                  << "k_r   = " << fmt(bounds.k_r.value) << "\n"
                  << "lower = " << fmt(bounds.lower) << "\n"
                  << "upper = "
                  << (bounds.upper ? fmt(*bounds.upper) : std::string("unavailable (no SSC)"))
                  << "\n";
    }
    return 0;
}

struct EstimateArgs {
    std::string csv_path, out_dir;
    double r = 2.0;
    bool as_json = false;
};

int run_estimate(const EstimateArgs& args) {
    if (args.csv_path.empty()) throw std::invalid_argument("estimate needs --csv FILE");
    std::ifstream in(args.csv_path);
    if (!in.good()) throw std::invalid_argument("cannot open CSV: " + args.csv_path);
    auto pairs = qdim::read_pairs_csv(in);
    qdim::DimensionEstimate est = qdim::estimate_dimension(pairs, args.r);

    nlohmann::json config{{"command", "dimension estimate"},
                          {"r", args.r},
                          {"csv", args.csv_path},
                          {"out", args.out_dir}};
    nlohmann::json doc{{"schema_version", kSchemaVersion}, {"config", config}};
    doc["pairs"] = nlohmann::json::array();
    for (auto [n, v] : est.pairs) doc["pairs"].push_back({n, v});
    doc["ratios"] = est.ratios;
    doc["lower_est"] = est.lower_est;
    doc["upper_est"] = est.upper_est;
    doc["slope"] = est.slope;
    doc["excluded"] = est.excluded;
    emit_json_doc(doc, args.as_json, args.out_dir, "dimension_estimate.json");
    if (!args.as_json) {
        std::cout << "n, V_n, ratio\n";
        for (std::size_t i = 0; i < est.pairs.size(); ++i)
            std::cout << est.pairs[i].first << ", " << fmt(est.pairs[i].second) << ", "
                      << fmt(est.ratios[i]) << "\n";
        std::cout << "lower_est = " << fmt(est.lower_est) << "\n"
                  << "upper_est = " << fmt(est.upper_est) << "\n"
                  << "slope     = " << fmt(est.slope) << "\n";
        if (est.excluded > 0)
            std::cout << "warning: excluded " << est.excluded << " rows with V_n = 0\n";
    }
    return 0;
}

struct ReproduceArgs {
    std::string which = "all", out_dir;
    std::uint64_t seed = 0;
    bool as_json = false;
};

int run_reproduce(const ReproduceArgs& args) {
    auto reports = qdim::run_reproduction(args.which, args.seed);
    bool all_pass = true;
    for (const auto& rep : reports) all_pass = all_pass && rep.pass;

    nlohmann::json config{{"command", "reproduce"},
                          {"which", args.which},
                          {"seed", args.seed},
                          {"out", args.out_dir}};
    nlohmann::json doc{{"schema_version", kSchemaVersion},
                       {"config", config},
                       {"pass", all_pass},
                       {"groups", qdim::report_to_json(reports)}};
    emit_json_doc(doc, args.as_json, args.out_dir, "reproduce.json");
    if (!args.as_json) {
        for (const auto& rep : reports) {
            for (const auto& c : rep.claims)
                std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << rep.group << " :: " << c.claim
                          << " (expected " << fmt(c.expected) << ", got " << fmt(c.got)
                          << ", tol " << fmt(c.tol) << ")\n";
            std::cout << "group " << rep.group << ": " << (rep.pass ? "PASS" : "FAIL") << " ("
                      << fmt(rep.seconds) << " s)\n";
        }
        std::cout << "OVERALL: " << (all_pass ? "PASS" : "FAIL") << "\n";
    }
    return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"optimal quantization of discrete and condensation measures"};
    app.require_subcommand(1);

    QuantizeArgs qa;
    auto* quantize = app.add_subcommand("quantize", "compute V_n and codebooks over an n range");
    quantize->add_option("--preset", qa.preset, "section4, example46, or cantor-condensation");
    quantize->add_option("--measure", qa.measure_path, "discrete measure JSON file");
    quantize->add_option("--system", qa.system_path, "condensation system JSON file");
    quantize->add_option("--n", qa.nrange, "codebook sizes, A..B or a single integer");
    quantize->add_option("--r", qa.r, "distortion exponent")->check(CLI::PositiveNumber);
    quantize->add_option("--seed", qa.seed, "RNG seed for sampled runs");
    quantize->add_option("--depth", qa.depth, "coding depth for sampled runs")
        ->check(CLI::PositiveNumber);
    quantize->add_option("--out", qa.out_dir, "output directory");
    quantize->add_flag("--json", qa.as_json, "print a JSON document instead of CSV");

    auto* dimension = app.add_subcommand("dimension", "solve or estimate dimension quantities");
    dimension->require_subcommand(1);

    SolveArgs sa;
    auto* solve = dimension->add_subcommand("solve", "implicit-equation exponents and bounds");
    solve->add_option("--preset", sa.preset, "cantor-condensation");
    solve->add_option("--system", sa.system_path, "condensation system JSON file");
    solve->add_option("--r", sa.r, "distortion exponent")->check(CLI::PositiveNumber);
    solve->add_option("--tol", sa.tol, "residual tolerance")->check(CLI::PositiveNumber);
    solve->add_option("--out", sa.out_dir, "output directory");
    solve->add_flag("--json", sa.as_json, "print the JSON document");

    EstimateArgs ea;
    auto* estimate = dimension->add_subcommand("estimate", "finite-n ratios from a (n, V_n) CSV");
    estimate->add_option("--csv", ea.csv_path, "CSV produced by quantize");
    estimate->add_option("--r", ea.r, "distortion exponent")->check(CLI::PositiveNumber);
    estimate->add_option("--out", ea.out_dir, "output directory");
    estimate->add_flag("--json", ea.as_json, "print the JSON document");

    ReproduceArgs ra;
    auto* reproduce = app.add_subcommand("reproduce", "run the published-value checks");
    reproduce
        ->add_option("which", ra.which,
                     "section4, example46, cantor, antichain, lemma33, sandwich, or all")
        ->required();
    reproduce->add_option("--seed", ra.seed, "RNG seed for sampled checks");
    reproduce->add_option("--out", ra.out_dir, "output directory");
    reproduce->add_flag("--json", ra.as_json, "print the JSON report");

    try {
        app.parse(argc, argv);
        if (quantize->parsed()) return run_quantize(qa);
        if (solve->parsed()) return run_solve(sa);
        if (estimate->parsed()) return run_estimate(ea);
        if (reproduce->parsed()) return run_reproduce(ra);
        return 1;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

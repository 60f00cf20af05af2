#include "qdim/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qdim {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

std::vector<double> parse_real_array(const nlohmann::json& value, const char* what) {
    require(value.is_array(), std::string(what) + " must be an array");
    std::vector<double> out;
    out.reserve(value.size());
    for (const auto& item : value) out.push_back(parse_real(item));
    return out;
}

Interval parse_interval(const nlohmann::json& value, const char* what) {
    require(value.is_array() && value.size() == 2,
            std::string(what) + " must be a [lo, hi] pair");
    return {parse_real(value[0]), parse_real(value[1])};
}

AffineContraction map_from_json(const nlohmann::json& doc) {
    require(doc.is_object() && doc.contains("scale") && doc.contains("offset"),
            "a map needs scale and offset");
    double scale = parse_real(doc.at("scale"));
    double offset = parse_real(doc.at("offset"));
    if (doc.contains("a") || doc.contains("b")) {
        require(doc.contains("a") && doc.contains("b"),
                "Lipschitz bounds must be given as a pair (a and b)");
        return AffineContraction(scale, offset, parse_real(doc.at("a")), parse_real(doc.at("b")));
    }
    return AffineContraction(scale, offset);
}

nlohmann::json map_to_json(const AffineContraction& f) {
    nlohmann::json doc{{"scale", f.scale}, {"offset", f.offset}};
    if (f.lower_lip != std::abs(f.scale) || f.upper_lip != std::abs(f.scale)) {
        doc["a"] = f.lower_lip;
        doc["b"] = f.upper_lip;
    }
    return doc;
}

std::vector<AffineContraction> maps_from_json(const nlohmann::json& value) {
    require(value.is_array() && !value.empty(), "maps must be a nonempty array");
    std::vector<AffineContraction> maps;
    maps.reserve(value.size());
    for (const auto& item : value) maps.push_back(map_from_json(item));
    return maps;
}

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

double parse_real(const nlohmann::json& value) {
    if (value.is_number()) return value.get<double>();
    require(value.is_string(), "reals must be numbers or decimal strings");
    const std::string& s = value.get_ref<const std::string&>();
    double out = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    require(ec == std::errc() && ptr == end, "not a valid decimal real: '" + s + "'");
    return out;
}

nlohmann::json measure_to_json(const DiscreteMeasure& mu) {
    nlohmann::json doc;
    doc["points"] = mu.points();
    doc["masses"] = mu.masses();
    doc["tail_mass"] = mu.tail_mass();
    doc["tail_error_bound"] = mu.tail_error_bound();
    return doc;
}

DiscreteMeasure measure_from_json(const nlohmann::json& doc) {
    require(doc.is_object() && doc.contains("points") && doc.contains("masses"),
            "a measure needs points and masses");
    for (const auto& p : doc.at("points"))
        require(!p.is_array(), "unsupported dimension: points must be scalars");
    std::vector<double> points = parse_real_array(doc.at("points"), "points");
    std::vector<double> masses = parse_real_array(doc.at("masses"), "masses");
    double tail_mass = doc.contains("tail_mass") ? parse_real(doc.at("tail_mass")) : 0.0;
    double tail_bound =
        doc.contains("tail_error_bound") ? parse_real(doc.at("tail_error_bound")) : 0.0;
    return DiscreteMeasure(std::move(points), std::move(masses), tail_mass, tail_bound);
}

nlohmann::json system_to_json(const CondensationSystem& system) {
    nlohmann::json doc;
    doc["maps"] = nlohmann::json::array();
    for (int i = 1; i <= system.map_count(); ++i) doc["maps"].push_back(map_to_json(system.map(i)));
    doc["probs"] = system.probs();
    doc["interval"] = {system.bounding_interval().lo, system.bounding_interval().hi};

    nlohmann::json nu;
    if (const auto* model = std::get_if<ConformalMeasureModel>(&system.nu())) {
        nu["maps"] = nlohmann::json::array();
        for (const auto& g : model->maps()) nu["maps"].push_back(map_to_json(g));
        nu["interval"] = {model->support_interval().lo, model->support_interval().hi};
        nu["conformal_constant"] = model->conformal_constant();
        if (const auto* bern = std::get_if<BernoulliScheme>(&model->symbolic())) {
            nu["type"] = "bernoulli";
            nu["weights"] = bern->weights;
        } else {
            const auto& mk = std::get<MarkovChain>(model->symbolic());
            nu["type"] = "markov";
            nu["initial"] = mk.initial;
            nu["transition"] = mk.transition;
        }
    } else {
        const auto& mu = std::get<DiscreteMeasure>(system.nu());
        nu = measure_to_json(mu);
        nu["type"] = "discrete";
    }
    doc["nu"] = std::move(nu);
    return doc;
}

CondensationSystem system_from_json(const nlohmann::json& doc) {
    require(doc.is_object(), "system document must be an object");
    for (const char* key : {"maps", "probs", "nu", "interval"})
        require(doc.contains(key), std::string("system document needs '") + key + "'");

    std::vector<AffineContraction> maps = maps_from_json(doc.at("maps"));
    std::vector<double> probs = parse_real_array(doc.at("probs"), "probs");
    Interval bounding = parse_interval(doc.at("interval"), "interval");

    const auto& nu_doc = doc.at("nu");
    require(nu_doc.is_object() && nu_doc.contains("type"), "nu needs a type");
    const std::string type = nu_doc.at("type").get<std::string>();
    if (type == "discrete")
        return CondensationSystem(std::move(maps), std::move(probs), measure_from_json(nu_doc),
                                  bounding);

    require(type == "bernoulli" || type == "markov",
            "nu type must be bernoulli, markov, or discrete");
    std::vector<AffineContraction> gmaps = maps_from_json(nu_doc.at("maps"));
    Interval support = parse_interval(nu_doc.at("interval"), "nu interval");
    double c = nu_doc.contains("conformal_constant") ? parse_real(nu_doc.at("conformal_constant"))
                                                     : 1.0;
    SymbolicMeasure symbolic = [&]() -> SymbolicMeasure {
        if (type == "bernoulli")
            return BernoulliScheme{parse_real_array(nu_doc.at("weights"), "weights")};
        MarkovChain mk;
        mk.initial = parse_real_array(nu_doc.at("initial"), "initial");
        require(nu_doc.at("transition").is_array(), "transition must be an array of rows");
        for (const auto& row : nu_doc.at("transition"))
            mk.transition.push_back(parse_real_array(row, "transition row"));
        return mk;
    }();
    ConformalMeasureModel model(std::move(gmaps), std::move(symbolic), support, c);
    return CondensationSystem(std::move(maps), std::move(probs), std::move(model), bounding);
}

DiscreteMeasure load_measure(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open measure file: " + path);
    nlohmann::json doc;
    in >> doc;
    return measure_from_json(doc);
}

CondensationSystem load_system(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open system file: " + path);
    nlohmann::json doc;
    in >> doc;
    return system_from_json(doc);
}

nlohmann::json result_to_json(const QuantizationResult& result) {
    return nlohmann::json{{"n", result.n},
                          {"r", result.r},
                          {"points", result.points},
                          {"distortion", result.distortion},
                          {"tail_bound", result.tail_bound},
                          {"support_exhausted", result.support_exhausted}};
}

nlohmann::json antichain_to_json(const Antichain& gamma) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& word : gamma.members) doc.push_back(word);
    return doc;
}

void write_results_csv(std::ostream& out, const std::vector<QuantizationResult>& results) {
    out << "n,V_n,tail_bound,codebook_points\n";
    for (const auto& res : results) {
        out << res.n << ',' << format_real(res.distortion) << ',' << format_real(res.tail_bound);
        for (double p : res.points) out << ',' << format_real(p);
        out << '\n';
    }
}

std::vector<std::pair<double, double>> read_pairs_csv(std::istream& in) {
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), "empty CSV input");
    require(line.rfind("n,V_n", 0) == 0, "CSV header must start with 'n,V_n'");

    std::vector<std::pair<double, double>> pairs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        require(static_cast<bool>(std::getline(row, field, ',')), "missing n column");
        double n = 0.0, v = 0.0;
        auto parse_field = [&](const std::string& s, double& out_val) {
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out_val);
            require(ec == std::errc() && ptr == s.data() + s.size(),
                    "not a valid CSV number: '" + s + "'");
        };
        parse_field(field, n);
        require(static_cast<bool>(std::getline(row, field, ',')), "missing V_n column");
        parse_field(field, v);
        pairs.emplace_back(n, v);
    }
    return pairs;
}

}  // namespace qdim

#include "qdim/codes.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace qdim {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

void check_factor(double w) {
    require(w > 0.0 && w < 1.0, "word weight factors must lie in (0,1)");
}

}  // namespace

WordWeightModel WordWeightModel::product(const std::vector<double>& weights) {
    require(!weights.empty(), "weight vector must be nonempty");
    WordWeightModel m;
    m.alphabet_ = static_cast<int>(weights.size());
    m.log_first_.reserve(weights.size());
    for (double w : weights) {
        check_factor(w);
        m.log_first_.push_back(std::log(w));
    }
    m.log_step_.assign(weights.size(), m.log_first_);
    return m;
}

WordWeightModel WordWeightModel::chain(const std::vector<double>& first,
                                       const std::vector<std::vector<double>>& step) {
    require(!first.empty() && step.size() == first.size(), "chain dimensions mismatch");
    WordWeightModel m;
    m.alphabet_ = static_cast<int>(first.size());
    m.log_first_.reserve(first.size());
    for (double w : first) {
        check_factor(w);
        m.log_first_.push_back(std::log(w));
    }
    m.log_step_.resize(step.size());
    for (std::size_t i = 0; i < step.size(); ++i) {
        require(step[i].size() == first.size(), "chain step matrix must be square");
        m.log_step_[i].reserve(first.size());
        for (double w : step[i]) {
            check_factor(w);
            m.log_step_[i].push_back(std::log(w));
        }
    }
    return m;
}

double WordWeightModel::log_step(int prev, int j) const {
    require(j >= 1 && j <= alphabet_, "symbol out of range");
    if (prev == 0) return log_first_[static_cast<std::size_t>(j - 1)];
    require(prev >= 1 && prev <= alphabet_, "symbol out of range");
    return log_step_[static_cast<std::size_t>(prev - 1)][static_cast<std::size_t>(j - 1)];
}

double WordWeightModel::log_weight(const CodeString& word) const {
    double lw = 0.0;
    int prev = 0;
    for (int s : word) {
        lw += log_step(prev, s);
        prev = s;
    }
    return lw;
}

int Antichain::min_len() const {
    if (members.empty()) return 0;
    std::size_t m = members.front().size();
    for (const auto& w : members) m = std::min(m, w.size());
    return static_cast<int>(m);
}

int Antichain::max_len() const {
    std::size_t m = 0;
    for (const auto& w : members) m = std::max(m, w.size());
    return static_cast<int>(m);
}

double weight(const CodeString& word, const std::vector<double>& per_symbol) {
    double w = 1.0;
    for (int s : word) {
        require(s >= 1 && s <= static_cast<int>(per_symbol.size()), "symbol out of range");
        double f = per_symbol[static_cast<std::size_t>(s - 1)];
        check_factor(f);
        w *= f;
    }
    return w;
}

namespace {

// Depth-first expansion with an explicit stack. A node is visited only when
// its weight is still >= log_theta; children falling strictly below are
// emitted, the rest are pushed. Pushing children in reverse symbol order
// makes the emission order lexicographic.
Antichain expand(const WordWeightModel& model, double log_theta, double log_root) {
    require(std::isfinite(log_theta), "threshold must be positive");
    require(log_theta <= log_root, "threshold must not exceed the root weight");

    Antichain out;
    out.alphabet = model.alphabet();

    struct Node {
        CodeString word;
        double log_w;
    };
    std::vector<Node> stack;
    stack.push_back({{}, log_root});

    while (!stack.empty()) {
        Node node = std::move(stack.back());
        stack.pop_back();
        int prev = node.word.empty() ? 0 : node.word.back();
        for (int j = model.alphabet(); j >= 1; --j) {
            double clw = node.log_w + model.log_step(prev, j);
            CodeString child = node.word;
            child.push_back(j);
            if (clw < log_theta) {
                out.members.push_back(std::move(child));
                out.log_weights.push_back(clw - log_root);
            } else {
                stack.push_back({std::move(child), clw});
            }
        }
    }
    // The stack interleaves emissions and deferred subtrees, so restore
    // lexicographic order at the end.
    std::vector<std::size_t> order(out.members.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return out.members[a] < out.members[b];
    });
    Antichain sorted;
    sorted.alphabet = out.alphabet;
    sorted.members.reserve(out.members.size());
    sorted.log_weights.reserve(out.members.size());
    for (std::size_t idx : order) {
        sorted.members.push_back(std::move(out.members[idx]));
        sorted.log_weights.push_back(out.log_weights[idx]);
    }
    return sorted;
}

}  // namespace

Antichain build_gamma(const std::vector<double>& weights, double theta) {
    require(theta > 0.0, "threshold must be positive");
    require(theta <= 1.0, "threshold must not exceed the empty-word weight 1");
    return build_gamma(WordWeightModel::product(weights), std::log(theta));
}

Antichain build_gamma(const WordWeightModel& model, double log_theta) {
    require(log_theta <= 0.0, "threshold must not exceed the empty-word weight 1");
    require(std::isfinite(log_theta), "threshold must be positive");
    return expand(model, log_theta, 0.0);
}

std::vector<CodeString> build_phi(const Antichain& gamma) {
    std::set<CodeString> prefixes;
    for (const auto& w : gamma.members)
        for (std::size_t len = 0; len < w.size(); ++len)
            prefixes.insert(CodeString(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(len)));
    return {prefixes.begin(), prefixes.end()};
}

Antichain build_gamma_omega(double omega_weight, const std::vector<double>& nu_weights,
                            double theta) {
    require(theta > 0.0, "threshold must be positive");
    require(omega_weight > 0.0 && omega_weight <= 1.0, "prefix weight must lie in (0,1]");
    return build_gamma_omega(std::log(omega_weight), WordWeightModel::product(nu_weights),
                             std::log(theta));
}

Antichain build_gamma_omega(double log_omega_weight, const WordWeightModel& nu_model,
                            double log_theta) {
    require(log_omega_weight >= log_theta,
            "prefix weight below threshold: word is not a strict prefix of the antichain");
    return expand(nu_model, log_theta, log_omega_weight);
}

bool verify_maximal_antichain(const Antichain& gamma, int max_len_cap) {
    const int m = gamma.alphabet;
    require(m >= 1, "alphabet must be positive");
    if (gamma.members.empty()) return false;
    if (gamma.max_len() > max_len_cap)
        throw std::invalid_argument("antichain too deep for exhaustive verification");

    // Trie over the members; passing through or stopping at another member
    // while inserting is an incomparability violation.
    struct TrieNode {
        std::vector<int> child;
        bool terminal = false;
        explicit TrieNode(int alphabet) : child(static_cast<std::size_t>(alphabet), -1) {}
    };
    std::vector<TrieNode> trie;
    trie.emplace_back(m);
    for (const auto& word : gamma.members) {
        int node = 0;
        for (int s : word) {
            require(s >= 1 && s <= m, "symbol out of range");
            if (trie[static_cast<std::size_t>(node)].terminal) return false;
            int& slot = trie[static_cast<std::size_t>(node)].child[static_cast<std::size_t>(s - 1)];
            if (slot < 0) {
                slot = static_cast<int>(trie.size());
                trie.emplace_back(m);
            }
            node = slot;
        }
        auto& leaf = trie[static_cast<std::size_t>(node)];
        if (leaf.terminal) return false;  // duplicate member
        leaf.terminal = true;
    }

    // Coverage: below a member everything is covered; elsewhere every branch
    // must exist and be covered, otherwise some infinite word avoids Gamma.
    // A terminal with children would also be an incomparability violation.
    std::vector<int> stack{0};
    while (!stack.empty()) {
        int node = stack.back();
        stack.pop_back();
        const auto& t = trie[static_cast<std::size_t>(node)];
        if (t.terminal) {
            for (int c : t.child)
                if (c >= 0) return false;
            continue;
        }
        for (int c : t.child) {
            if (c < 0) return false;
            stack.push_back(c);
        }
    }
    return true;
}

long long psi(const Antichain& gamma, const std::vector<CodeString>& phi,
              const std::map<CodeString, Antichain>& gammas) {
    require(gammas.size() == phi.size(), "gamma(omega) map must be keyed exactly by phi");
    long long total = static_cast<long long>(gamma.size());
    for (const auto& omega : phi) {
        auto it = gammas.find(omega);
        require(it != gammas.end(), "gamma(omega) map must be keyed exactly by phi");
        total += static_cast<long long>(it->second.size());
    }
    return total;
}

double xi_r(const CondensationSystem& system, double r) {
    require(r > 0.0, "order r must be positive");
    const auto* model = std::get_if<ConformalMeasureModel>(&system.nu());
    require(model != nullptr, "antichain construction requires a conformal nu model");

    double xi = 1.0;
    for (int j = 1; j <= model->alphabet(); ++j)
        xi = std::min(xi, std::pow(model->ratio(j), r) * model->symbol_weight(j));
    for (int i = 1; i <= system.map_count(); ++i)
        xi = std::min(xi, system.prob(i) * std::pow(system.map(i).upper_lip, r));
    return xi;
}

AntichainFamily build_antichain_family(const CondensationSystem& system, double r, int level) {
    require(level >= 1, "level must be at least 1");
    const auto* model = std::get_if<ConformalMeasureModel>(&system.nu());
    require(model != nullptr, "antichain construction requires a conformal nu model");

    AntichainFamily fam;
    fam.level = level;
    fam.r = r;
    fam.xi = xi_r(system, r);
    fam.log_theta = static_cast<double>(level) * std::log(fam.xi);

    std::vector<double> system_weights;
    system_weights.reserve(static_cast<std::size_t>(system.map_count()));
    for (int i = 1; i <= system.map_count(); ++i)
        system_weights.push_back(system.prob(i) * std::pow(system.map(i).upper_lip, r));
    WordWeightModel system_model = WordWeightModel::product(system_weights);

    fam.gamma = build_gamma(system_model, fam.log_theta);
    fam.phi = build_phi(fam.gamma);

    WordWeightModel nu_model = [&] {
        const int m = model->alphabet();
        if (model->is_bernoulli()) {
            std::vector<double> c(static_cast<std::size_t>(m));
            for (int j = 1; j <= m; ++j)
                c[static_cast<std::size_t>(j - 1)] =
                    std::pow(model->ratio(j), r) * model->symbol_weight(j);
            return WordWeightModel::product(c);
        }
        const auto& mk = std::get<MarkovChain>(model->symbolic());
        std::vector<double> first(static_cast<std::size_t>(m));
        std::vector<std::vector<double>> step(static_cast<std::size_t>(m),
                                              std::vector<double>(static_cast<std::size_t>(m)));
        for (int j = 1; j <= m; ++j) {
            double sr = std::pow(model->ratio(j), r);
            first[static_cast<std::size_t>(j - 1)] = sr * mk.initial[static_cast<std::size_t>(j - 1)];
            for (int i = 1; i <= m; ++i)
                step[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] =
                    sr * mk.transition[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
        }
        return WordWeightModel::chain(first, step);
    }();

    fam.gamma_omega.reserve(fam.phi.size());
    fam.psi_total = static_cast<long long>(fam.gamma.size());
    for (const auto& omega : fam.phi) {
        double log_w = system_model.log_weight(omega);
        fam.gamma_omega.push_back(build_gamma_omega(log_w, nu_model, fam.log_theta));
        fam.psi_total += static_cast<long long>(fam.gamma_omega.back().size());
    }
    return fam;
}

}  // namespace qdim

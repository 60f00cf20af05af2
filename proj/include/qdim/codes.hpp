#pragma once

#include <map>
#include <vector>

#include "qdim/measure.hpp"

// Words over {1..M}, finite maximal antichains, and the threshold
// constructions used by the codebook bound: Gamma (over the system alphabet),
// Phi (its strict prefixes), Gamma(omega) (over the nu alphabet) and the
// budget psi. All weights are handled in log space so that thresholds like
// xi^n stay usable far past the double underflow point.

namespace qdim {

using CodeString = std::vector<int>;

// Multiplicative word weights, given either as one factor per symbol (the
// weight of a word is the product over its letters) or as a chain with exact
// first-symbol and step factors (used for Markov cylinder masses).
class WordWeightModel {
public:
    static WordWeightModel product(const std::vector<double>& weights);
    static WordWeightModel chain(const std::vector<double>& first,
                                 const std::vector<std::vector<double>>& step);

    int alphabet() const { return alphabet_; }
    // Log factor appended when a word ending in `prev` gains letter j;
    // prev = 0 denotes the empty word.
    double log_step(int prev, int j) const;
    double log_weight(const CodeString& word) const;

private:
    WordWeightModel() = default;
    int alphabet_ = 0;
    std::vector<double> log_first_;
    std::vector<std::vector<double>> log_step_;
};

struct Antichain {
    int alphabet = 0;
    std::vector<CodeString> members;    // lexicographic order
    std::vector<double> log_weights;    // parallel to members when built here

    std::size_t size() const { return members.size(); }
    int min_len() const;
    int max_len() const;
};

// Product weight of a word; empty word has weight 1.
double weight(const CodeString& word, const std::vector<double>& per_symbol);

// The threshold antichain { w : weight(w) < theta <= weight(parent of w) },
// built by depth-first expansion: keep splitting a word while its weight
// stays >= theta, emit on the first strict drop below. Requires
// theta in (0, 1]; theta = 1 yields the single-letter antichain.
Antichain build_gamma(const std::vector<double>& weights, double theta);
Antichain build_gamma(const WordWeightModel& model, double log_theta);

// Strict prefixes of the members, empty word included, sorted.
std::vector<CodeString> build_phi(const Antichain& gamma);

// Same construction with the word weight scaled by a fixed prefix weight:
// members satisfy omega_weight * c_tau < theta <= omega_weight * c_parent.
// Requires omega_weight >= theta.
Antichain build_gamma_omega(double omega_weight, const std::vector<double>& nu_weights,
                            double theta);
Antichain build_gamma_omega(double log_omega_weight, const WordWeightModel& nu_model,
                            double log_theta);

// True iff the members are pairwise prefix-incomparable and every word of the
// maximal member length extends exactly one member. Trie-based; refuses when
// the max length exceeds the exhaustion cap.
bool verify_maximal_antichain(const Antichain& gamma, int max_len_cap = 20);

// psi = |Gamma| + sum over omega in Phi of |Gamma(omega)|. The map must be
// keyed exactly by Phi.
long long psi(const Antichain& gamma, const std::vector<CodeString>& phi,
              const std::map<CodeString, Antichain>& gammas);

// The full construction for a condensation system at level n with threshold
// xi^n. Requires a conformal nu model (the construction uses the ratios s_j
// and the symbolic weights of nu).
struct AntichainFamily {
    int level = 0;
    double r = 2.0;
    double xi = 0.0;
    double log_theta = 0.0;
    Antichain gamma;
    std::vector<CodeString> phi;
    std::vector<Antichain> gamma_omega;  // parallel to phi
    long long psi_total = 0;
};

double xi_r(const CondensationSystem& system, double r);
AntichainFamily build_antichain_family(const CondensationSystem& system, double r, int level);

}  // namespace qdim

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace qdim {

// One reproduced claim. For equality claims `pass` means
// |got - expected| <= tol (tol is absolute). Threshold claims set tol to 0
// and state the direction in the claim text, with `expected` holding the
// threshold.
struct ClaimResult {
    std::string claim;
    double expected = 0.0;
    double got = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct GroupReport {
    std::string group;
    std::vector<ClaimResult> claims;
    bool pass = true;
    double seconds = 0.0;
};

// Runs one named group of reproduction checks, or every group for "all".
// Valid names: section4, example46, cantor, antichain, lemma33, sandwich,
// all. Anything else throws std::invalid_argument. The seed only affects
// groups that sample (lemma33); everything else is exact arithmetic.
std::vector<GroupReport> run_reproduction(const std::string& which, std::uint64_t seed = 0);

nlohmann::json report_to_json(const std::vector<GroupReport>& reports);

}  // namespace qdim

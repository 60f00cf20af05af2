#pragma once

#include <functional>
#include <vector>

#include "qdim/codes.hpp"
#include "qdim/measure.hpp"

// Distortion evaluation, the exact 1D optimal quantizer (dynamic programming
// over contiguous atom runs), Lloyd descent, and the antichain codebook with
// its distortion upper bound.

namespace qdim {

struct QuantizationResult {
    int n = 0;
    double r = 2.0;
    std::vector<double> points;      // sorted
    std::vector<double> boundaries;  // interior cell boundaries (midpoints)
    double distortion = 0.0;
    double tail_bound = 0.0;         // carried over from the measure
    bool support_exhausted = false;  // n exceeded the atom count
};

// Mean r-th power distance to the nearest codebook point. The measure's
// tail_error_bound is not added here; results carry it separately.
double distortion(const DiscreteMeasure& mu, const std::vector<double>& codebook, double r);

// Exact optimal n-point quantizer of a sorted atomic measure. Optimal cells
// in 1D are contiguous atom runs for r >= 1; the outer minimization is a
// dynamic program over split positions, O(n J^2), with ties broken toward the
// leftmost split. Cell costs and centroids use online (Welford) accumulation,
// which stays accurate when cell masses and positions span hundreds of orders
// of magnitude. For r != 2 the per-cell representative is found by
// golden-section search on the convex cell objective (tolerance 1e-12).
QuantizationResult optimal_quantizer_dp(const DiscreteMeasure& mu, int n, double r = 2.0);

struct LloydOptions {
    int max_iterations = 10000;
    double rel_tol = 1e-14;
};

struct LloydOutcome {
    QuantizationResult result;
    int iterations = 0;
    bool converged = false;
    std::vector<double> history;  // distortion after each update step
};

// Fixed-point iteration on the optimality conditions: Voronoi assignment
// (midpoint boundaries) alternating with per-cell representative updates.
// Distortion is non-increasing; iteration stops when the relative decrease
// falls below rel_tol. An empty cell is reseeded at the atom currently
// contributing the most distortion (deterministic; ties to the left). With
// init = nullptr the start is the deterministic mass-quantile configuration.
LloydOutcome lloyd(const DiscreteMeasure& mu, int n, double r = 2.0,
                   const std::vector<double>* init = nullptr, LloydOptions options = {});

struct AntichainCodebook {
    std::vector<double> points;  // sorted, deduplicated
    double bound = 0.0;          // distortion upper bound for the full measure
    long long psi_budget = 0;    // codebook size budget psi
};

// Picks a representative point inside the image cell: receives the composed
// affine map and the interval it is applied to.
using CellSelector = std::function<double(const AffineContraction&, const Interval&)>;

// Builds the two-part codebook attached to an antichain family: images of the
// bounding-interval midpoint under f_omega for omega in Gamma, and images of
// the support midpoint under f_omega o g_tau for omega in Phi, tau in
// Gamma(omega). Returns the codebook together with the proven bound
// d* (sum_Gamma p b^r + c sum_Phi sum p b^r s^r nu[tau]), where
// d* = max(diam K, diam C)^r. Requires both separation flags.
AntichainCodebook codebook_from_antichain(const CondensationSystem& system,
                                          const AntichainFamily& family);
AntichainCodebook codebook_from_antichain(const CondensationSystem& system,
                                          const AntichainFamily& family,
                                          const CellSelector& selector);

}  // namespace qdim

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qdim/measure.hpp"

// Implicit dimension equations and data-driven estimators. The three solved
// quantities: d_r and l_r from the moment equations over (p_i, a_i) resp.
// (p_i, b_i), and k_r = r t*/(1 - t*) where t* is the zero of the pressure
// function h. All solvers are plain bisection with bracket tolerance 1e-13.

namespace qdim {

struct DimensionSolveResult {
    double value = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double residual = 0.0;  // defining equation evaluated at value
    int iterations = 0;
    bool boundary = false;  // root sits at the domain edge (degenerate model)
};

// The unique s >= 0 with sum_i (p_i c_i^r)^(s/(r+s)) = 1. The left side is
// strictly decreasing from N at s = 0 toward sum p_i c_i^r < 1, so a root
// exists whenever N >= 2; N = 1 gives the boundary root s = 0.
DimensionSolveResult solve_similarity_dimension(const std::vector<double>& probs,
                                                const std::vector<double>& ratios, double r);

// Pressure function: Bernoulli h(t) = log sum_j (s_j^r t_j)^t evaluated
// exactly; Markov h(t) = log of the spectral radius of the matrix with
// entries (s_j^r P_ij)^t, by power iteration to 1e-13.
double h_of_t(const ConformalMeasureModel& model, double r, double t);

// Solves h(t*) = 0 on (0,1) and returns k_r = r t*/(1 - t*). If h < 0
// already at t -> 0 (single-symbol models) the boundary value 0 is reported.
DimensionSolveResult solve_kr(const ConformalMeasureModel& model, double r);

struct SandwichCheck {
    double lower = 0.0;
    double middle = 0.0;
    double upper = 0.0;
    bool ok = false;
};

// Exhaustively evaluates sum over |w| = n of (s_w^r nu[w])^t (exact cylinder
// masses) and checks e^{nh}(c^r L)^{-t} <= sum <= e^{nh}(c^r L)^t. Bernoulli
// models give exact equality. Enumeration refuses n > 16.
SandwichCheck verify_pressure_sandwich(const ConformalMeasureModel& model, double r, double t,
                                       int n);

struct TheoremBounds {
    DimensionSolveResult d_r;
    DimensionSolveResult l_r;
    DimensionSolveResult k_r;
    double lower = 0.0;                // max(d_r, k_r)
    std::optional<double> upper;       // max(l_r, k_r); absent without full separation
    SeparationReport separation;
};

// Dimension bounds for a condensation system: lower = max(d_r, k_r) always,
// upper = max(l_r, k_r) only when both separation flags hold. A discrete nu
// contributes k_r = 0 (finite support).
TheoremBounds theorem1_bounds(const CondensationSystem& system, double r);

struct DimensionEstimate {
    std::vector<std::pair<double, double>> pairs;  // retained (n, V_n)
    std::vector<double> ratios;                    // r log n / (-log V_n)
    double lower_est = 0.0;                        // min ratio over the last third
    double upper_est = 0.0;                        // max ratio over the last third
    double slope = 0.0;  // least-squares slope of r log n against -log V_n
    int excluded = 0;    // pairs dropped because V_n = 0
};

// Finite-data proxies for the asymptotic dimension: per-n ratios, their
// min/max over the last third of the data, and the regression slope (which
// recovers kappa exactly on V_n = C n^{-r/kappa}). Pairs with V_n = 0 are
// excluded; at least 3 positive pairs with non-increasing V are required.
DimensionEstimate estimate_dimension(std::vector<std::pair<double, double>> pairs, double r);

enum class CoefficientVerdict { diverging, vanishing, bounded_positive };

struct CoefficientEstimate {
    std::vector<double> values;  // n^{r/kappa} V_n
    double first_third_mean = 0.0;
    double last_third_mean = 0.0;
    CoefficientVerdict verdict = CoefficientVerdict::bounded_positive;
};

// Scaled sequence n^{r/kappa} V_n with a trend verdict: last-third over
// first-third mean above 10 reads diverging, below 0.1 vanishing, otherwise
// bounded-positive.
CoefficientEstimate estimate_coefficient(const std::vector<std::pair<double, double>>& pairs,
                                         double kappa, double r);

}  // namespace qdim

#pragma once

#include "qdim/measure.hpp"
#include "qdim/quantizer.hpp"

// The three worked examples shipped with the tool, exposed as presets:
// a geometric discrete distribution whose optimal quantizers are known in
// closed form, a heavy-tail discrete distribution with an n^-2 / log n error
// envelope, and a Cantor-type condensation system.

namespace qdim {

// Atom j sits at 3/5 - (2/5) 2^{-j} and carries mass 2^{-j}; the first J
// atoms are kept with tail mass 2^{-J} and distortion tail bound
// 2^{-J} (1/5)^2 (the support has diameter 1/5, order r = 2).
DiscreteMeasure section4_measure(int J);
double section4_atom(int j);

// Conditional mean of the tail block {a_k, a_k+1, ...}: 3/5 - (4/15) 2^{-k}.
double section4_block_mean(int k);

// Closed-form optimal n-point quantizer {a_1, ..., a_{n-1}, b_n} with
// distortion 2^{6-3n}/1575 (n >= 2; n = 1 gives {7/15} and 8/1575, which is
// the same power formula).
QuantizationResult section4_optimal(int n);

// Heavy-tail measure: atom j at 4 * 3^{j-1}, j = 3..J, with masses
// proportional to (2(j-1)log(j-1) + (j-2)) / (3^{2j}(j-1)(j-2)^3 log^2(j-1)),
// renormalized over the retained atoms. The tail fields report the dropped
// mass and a rigorous bound on its distortion contribution at r = 2.
DiscreteMeasure example46_measure(int J);
double example46_term(int j);        // unnormalized mass of atom j
double example46_normalizer();       // 1 / (full sum of the terms)
double example46_tail_sum(int J);    // upper bound on sum of 9^j * term(j), j > J

// Two maps x/3 and (x+2)/3 with weights 1/3 each, condensation weight 1/3 on
// a ratio-1/3 two-map Bernoulli(1/2,1/2) measure supported on [2/5, 3/5];
// bounding interval [0,1].
CondensationSystem cantor_condensation_example();

}  // namespace qdim

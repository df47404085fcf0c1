// closed_form.hpp
// Closed-form output statistics of two Fock states meeting on a beam
// splitter.
//
// Port convention: the input |K>_a|L>_b leaves as counts (p, q) where p is
// measured in the port that continues mode a when r = 0, so r = 0 is the
// identity on Delta and r = 1 sends Delta to -Delta. Delta_out = p - q.
//
// With x = -Delta_out, f(+/-)(y) = (S +/- y)/2, the single-sum law reads
//
//   p(Delta_out) = f+(x)! f-(x)! / (K! L!) * r^S * ((1-r)/r)^((Delta-x)/2)
//                  * [ sum_k C(L,k) C(K, f+(x)-k) ((r-1)/r)^k ]^2
//
// with k from max{0,(x-Delta)/2} to min{L, f+(x)}.

#pragma once

#include <optional>
#include <vector>

#include "homql/core_state.hpp"

namespace homql::closed_form {

struct Probability {
    double value = 0.0;
    std::optional<Rational> exact;
};

// One summand of the single sum, before squaring.
struct ClosedFormTerm {
    int k = 0;
    Rational value;
};

// Summation range of k for a given output site.
struct TermRange {
    int first = 0;
    int last = -1;
    bool empty() const { return last < first; }
};

TermRange term_range(const FockPair& pair, int delta_out);

// Exact summands for a rational reflectivity strictly inside (0,1).
std::vector<ClosedFormTerm> exact_terms(const FockPair& pair, const Rational& r, int delta_out);

Probability prob_delta_out(const FockPair& pair, const BeamSplitter& bs, int delta_out,
                           const NumericMode& mode = NumericMode::floating());

DeltaDistribution distribution(const FockPair& pair, const BeamSplitter& bs,
                               const NumericMode& mode = NumericMode::floating());

// Term-by-term expansion of the output state over (p, q), p + q = K + L.
JointCountDistribution amplitude_expansion(int k, int l, const BeamSplitter& bs,
                                           const NumericMode& mode = NumericMode::floating());

// Largest S evaluated through the direct floating sum; above it the Wigner
// recurrence is used.
inline constexpr int kDirectFloatLimit = 30;

}  // namespace homql::closed_form

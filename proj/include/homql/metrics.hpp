// metrics.hpp
// Moments of Delta_out and their exact laws, second-order HOM visibility,
// parity checks, distances and transfer fidelity.

#pragma once

#include <vector>

#include "homql/core_state.hpp"

namespace homql::metrics {

struct VisibilityReport {
    double value = 0.0;
    bool nonclassical = false;  // value > 1/2
};

double mean_delta(const DeltaDistribution& d);
double mean_delta(const DeltaMarginal& m);
double variance_delta(const DeltaDistribution& d);
double variance_delta(const DeltaMarginal& m);

// Delta (1 - 2r)
double predicted_mean(int total, int delta, double r);
// ((S^2 - Delta^2)/2 + S) * 4 r (1 - r)
double predicted_variance(int total, int delta, double r);
// Coefficient c in Var(Delta_out) = c theta^2 + O(theta^4): 4((S^2 - Delta^2)/2 + S).
double ballistic_coefficient(int total, int delta);

VisibilityReport visibility_fock(int n, int m, double r);
VisibilityReport visibility_from_moments(double g_ab, double g_aa, double g_bb, double r);

// Rational counterparts, for exact identities.
Rational exact_visibility_fock(int n, int m, const Rational& r);
Rational exact_visibility_from_moments(const Rational& g_ab, const Rational& g_aa,
                                       const Rational& g_bb, const Rational& r);

// Normally ordered moments <:n_a n_b:>, <:n_a^2:>, <:n_b^2:> of a product input.
struct NormalOrderedMoments {
    double g_ab = 0.0;
    double g_aa = 0.0;
    double g_bb = 0.0;
};

// Moments of a photon-number distribution pair (index = photon number).
NormalOrderedMoments product_moments(const std::vector<double>& pa, const std::vector<double>& pb);

// Boolean mask over n, m = 1..max_n (row n-1, column m-1): visibility > 1/2.
std::vector<std::vector<bool>> nonclassical_mask(int max_n, double r);

// Total probability mass at Delta_out whose parity differs from S.
double parity_violation(const DeltaDistribution& d);
double parity_violation(const DeltaMarginal& m, int total);
Rational exact_parity_violation(const DeltaDistribution& d);

double tv_distance(const DeltaMarginal& lhs, const DeltaMarginal& rhs);
double tv_distance(const DeltaDistribution& lhs, const DeltaDistribution& rhs);

// Probability of arriving at the mirrored site -Delta.
double transfer_fidelity(const DeltaDistribution& d, int delta);

}  // namespace homql::metrics

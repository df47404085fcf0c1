// binomial.hpp
// Binomial coefficients: exact integers from a cached Pascal triangle up to
// n = 200, log-gamma beyond.

#pragma once

#include <gmpxx.h>

namespace homql {

inline constexpr int kPascalRows = 200;

// Exact C(n,k); zero outside 0 <= k <= n.
mpz_class binomial_exact(int n, int k);
mpz_class factorial_exact(int n);

double binomial(int n, int k);
// log C(n,k); -inf outside the support.
double log_binomial(int n, int k);
double log_factorial(int n);

}  // namespace homql

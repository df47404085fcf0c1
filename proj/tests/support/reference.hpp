// reference.hpp
// Test-only oracles, written independently of the library code paths:
// Racah's explicit sum for Wigner small-d, photon-by-photon enumeration for
// distinguishable particles and for detector thinning, and exact binomial
// convolutions.

#pragma once

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace homql::testref {

using Q = mpq_class;

inline mpz_class fact(int n) {
    mpz_class f = 1;
    for (int i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

inline Q qpow(const Q& b, int e) {
    Q out = 1;
    for (int i = 0; i < e; ++i) {
        out *= b;
    }
    return out;
}

// |d^{S/2}_{m', m}(beta)|^2 with sin^2(beta/2) = r, for input counts (K, L)
// and output counts (p, q), p + q = K + L. Exact in r.
inline Q wigner_d_squared(int k, int l, int p, int q, const Q& r) {
    const int s = k + l;
    if (p + q != s || p < 0 || q < 0) {
        return 0;
    }
    const int lo = std::max(0, k - p);
    const int hi = std::min(k, q);
    if (lo > hi) {
        return 0;
    }
    const Q c2 = 1 - r;
    Q sum = 0;
    for (int j = lo; j <= hi; ++j) {
        Q t(mpz_class(1), fact(k - j) * fact(j) * fact(q - j) * fact(j + p - k));
        t *= qpow(c2, hi - j) * qpow(r, j - lo);
        sum += ((j + p - k) % 2 == 0) ? t : Q(-t);
    }
    Q out = sum * sum;
    out *= Q(fact(k) * fact(l) * fact(p) * fact(q));
    out *= qpow(c2, s + k - p - 2 * hi) * qpow(r, 2 * lo + p - k);
    out.canonicalize();
    return out;
}

// Delta_out -> probability for |K>|L>, exact.
inline std::map<int, Q> wigner_distribution(int k, int l, const Q& r) {
    std::map<int, Q> out;
    const int s = k + l;
    for (int p = 0; p <= s; ++p) {
        out[2 * p - s] = wigner_d_squared(k, l, p, s - p, r);
    }
    return out;
}

// Distinguishable photons: each of the `from_a` photons leaves through port p
// with 1 - r, each of the `from_b` photons with r. Every routing pattern is
// enumerated, so keep from_a + from_b small.
inline std::map<int, double> routed_classical(int from_a, int from_b, double r) {
    const int s = from_a + from_b;
    std::map<int, double> out;
    for (long mask = 0; mask < (1L << s); ++mask) {
        double w = 1.0;
        int p = 0;
        for (int i = 0; i < s; ++i) {
            const bool to_p = (mask >> i) & 1;
            const double stay = i < from_a ? 1.0 - r : r;
            w *= to_p ? stay : 1.0 - stay;
            p += to_p ? 1 : 0;
        }
        out[2 * p - s] += w;
    }
    return out;
}

// Exact convolution of Bin(from_a, 1-r) and Bin(from_b, r) on p, mapped to
// Delta_out = 2p - S.
inline std::map<int, Q> binomial_convolution(int from_a, int from_b, const Q& r) {
    auto pmf = [](int n, const Q& prob) {
        std::vector<Q> v(n + 1);
        for (int i = 0; i <= n; ++i) {
            mpz_class c;
            mpz_bin_uiui(c.get_mpz_t(), n, i);
            v[i] = Q(c) * qpow(prob, i) * qpow(1 - prob, n - i);
        }
        return v;
    };
    const auto a = pmf(from_a, 1 - r);
    const auto b = pmf(from_b, r);
    const int s = from_a + from_b;
    std::map<int, Q> out;
    for (int x = 0; x <= from_a; ++x) {
        for (int y = 0; y <= from_b; ++y) {
            out[2 * (x + y) - s] += a[x] * b[y];
        }
    }
    return out;
}

// Detector thinning by enumerating which photons are seen, per port.
inline std::map<std::pair<int, int>, double> thin_by_enumeration(
    const std::map<std::pair<int, int>, double>& joint, double eta) {
    std::map<std::pair<int, int>, double> out;
    for (const auto& [key, prob] : joint) {
        const auto [p, q] = key;
        const int n = p + q;
        for (long mask = 0; mask < (1L << n); ++mask) {
            double w = prob;
            int seen_p = 0;
            int seen_q = 0;
            for (int i = 0; i < n; ++i) {
                const bool seen = (mask >> i) & 1;
                w *= seen ? eta : 1.0 - eta;
                if (seen) {
                    (i < p ? seen_p : seen_q) += 1;
                }
            }
            out[{seen_p, seen_q}] += w;
        }
    }
    return out;
}

// Purity of the thinned source sum_j w_j^2, straight from the definition.
inline double direct_purity(int nominal, double eta) {
    double s = 0.0;
    for (int k = 0; k <= nominal; ++k) {
        const double c = std::exp(std::lgamma(nominal + 1.0) - std::lgamma(k + 1.0) - std::lgamma(nominal - k + 1.0));
        const double w = c * std::pow(eta, nominal - k) * std::pow(1.0 - eta, k);
        s += w * w;
    }
    return s;
}

}  // namespace homql::testref

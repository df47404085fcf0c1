#include "homql/metrics.hpp"

#include <cmath>
#include <set>

#include "homql/summation.hpp"

namespace homql::metrics {

namespace {

template <class Fn>
void for_each_site(const DeltaDistribution& d, Fn&& fn) {
    for (int delta_out : delta_lattice(d.total())) {
        fn(delta_out, d.at(delta_out));
    }
}

template <class Fn>
void for_each_site(const DeltaMarginal& m, Fn&& fn) {
    for (const auto& [delta_out, p] : m) {
        fn(delta_out, p);
    }
}

template <class Dist>
double mean_of(const Dist& d) {
    CompensatedSum s;
    for_each_site(d, [&](int x, double p) { s.add(static_cast<long double>(x) * p); });
    return static_cast<double>(s.value());
}

template <class Dist>
double variance_of(const Dist& d) {
    const long double mu = mean_of(d);
    CompensatedSum s;
    for_each_site(d, [&](int x, double p) {
        const long double dx = x - mu;
        s.add(dx * dx * p);
    });
    return static_cast<double>(s.value());
}

VisibilityReport report(double value) { return {value, value > 0.5}; }

}  // namespace

double mean_delta(const DeltaDistribution& d) { return mean_of(d); }
double mean_delta(const DeltaMarginal& m) { return mean_of(m); }
double variance_delta(const DeltaDistribution& d) { return variance_of(d); }
double variance_delta(const DeltaMarginal& m) { return variance_of(m); }

double predicted_mean(int total, int delta, double r) {
    (void)new_fock_pair(total, delta);
    return delta * (1.0 - 2.0 * r);
}

double predicted_variance(int total, int delta, double r) {
    (void)new_fock_pair(total, delta);
    const double spread = (static_cast<double>(total) * total - static_cast<double>(delta) * delta) / 2.0 + total;
    return spread * 4.0 * r * (1.0 - r);
}

double ballistic_coefficient(int total, int delta) {
    (void)new_fock_pair(total, delta);
    return 4.0 * ((static_cast<double>(total) * total - static_cast<double>(delta) * delta) / 2.0 + total);
}

VisibilityReport visibility_fock(int n, int m, double r) {
    if (n < 0 || m < 0 || n + m < 1) {
        throw DegenerateError("visibility needs n + m >= 1");
    }
    if (!(r > 0.0 && r < 1.0)) {
        throw RangeError("visibility needs 0 < r < 1");
    }
    return visibility_from_moments(static_cast<double>(n) * m, static_cast<double>(n) * (n - 1),
                                   static_cast<double>(m) * (m - 1), r);
}

VisibilityReport visibility_from_moments(double g_ab, double g_aa, double g_bb, double r) {
    const double t = 1.0 - r;
    const double rt = r * t;
    const double den = rt * (g_aa + g_bb) + (r * r + t * t) * g_ab;
    if (den == 0.0) {
        throw DegenerateError("visibility denominator vanishes");
    }
    return report(2.0 * rt * g_ab / den);
}

Rational exact_visibility_fock(int n, int m, const Rational& r) {
    if (n < 0 || m < 0 || n + m < 1) {
        throw DegenerateError("visibility needs n + m >= 1");
    }
    if (r <= 0 || r >= 1) {
        throw RangeError("visibility needs 0 < r < 1");
    }
    return exact_visibility_from_moments(Rational(n * m), Rational(n * (n - 1)), Rational(m * (m - 1)), r);
}

Rational exact_visibility_from_moments(const Rational& g_ab, const Rational& g_aa,
                                       const Rational& g_bb, const Rational& r) {
    const Rational t = 1 - r;
    const Rational rt = r * t;
    const Rational den = rt * (g_aa + g_bb) + (r * r + t * t) * g_ab;
    if (den == 0) {
        throw DegenerateError("visibility denominator vanishes");
    }
    Rational v = 2 * rt * g_ab / den;
    v.canonicalize();
    return v;
}

NormalOrderedMoments product_moments(const std::vector<double>& pa, const std::vector<double>& pb) {
    auto falling = [](const std::vector<double>& p, int order) {
        CompensatedSum s;
        for (std::size_t n = 0; n < p.size(); ++n) {
            double f = 1.0;
            for (int j = 0; j < order; ++j) {
                f *= static_cast<double>(n) - j;
            }
            s.add(static_cast<long double>(f) * p[n]);
        }
        return static_cast<double>(s.value());
    };
    return {falling(pa, 1) * falling(pb, 1), falling(pa, 2), falling(pb, 2)};
}

std::vector<std::vector<bool>> nonclassical_mask(int max_n, double r) {
    std::vector<std::vector<bool>> mask(static_cast<std::size_t>(max_n),
                                        std::vector<bool>(static_cast<std::size_t>(max_n), false));
    for (int n = 1; n <= max_n; ++n) {
        for (int m = 1; m <= max_n; ++m) {
            mask[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(m - 1)] =
                visibility_fock(n, m, r).nonclassical;
        }
    }
    return mask;
}

double parity_violation(const DeltaDistribution& d) { return parity_violation(d.to_marginal(), d.total()); }

double parity_violation(const DeltaMarginal& m, int total) {
    CompensatedSum s;
    for (const auto& [delta_out, p] : m) {
        if (((delta_out - total) % 2) != 0) {
            s.add(p);
        }
    }
    return static_cast<double>(s.value());
}

Rational exact_parity_violation(const DeltaDistribution& d) {
    Rational s = 0;
    for (const auto& [delta_out, q] : d.to_exact_marginal()) {
        if (((delta_out - d.total()) % 2) != 0) {
            s += q;
        }
    }
    return s;
}

double tv_distance(const DeltaMarginal& lhs, const DeltaMarginal& rhs) {
    std::set<int> keys;
    for (const auto& [k, v] : lhs) {
        keys.insert(k);
    }
    for (const auto& [k, v] : rhs) {
        keys.insert(k);
    }
    CompensatedSum s;
    for (int k : keys) {
        const auto a = lhs.find(k);
        const auto b = rhs.find(k);
        const double pa = a == lhs.end() ? 0.0 : a->second;
        const double pb = b == rhs.end() ? 0.0 : b->second;
        s.add(std::abs(pa - pb));
    }
    return 0.5 * static_cast<double>(s.value());
}

double tv_distance(const DeltaDistribution& lhs, const DeltaDistribution& rhs) {
    return tv_distance(lhs.to_marginal(), rhs.to_marginal());
}

double transfer_fidelity(const DeltaDistribution& d, int delta) { return d.at(-delta); }

}  // namespace homql::metrics

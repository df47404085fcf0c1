#include "homql/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "homql/binomial.hpp"
#include "homql/oracle.hpp"
#include "homql/summation.hpp"

namespace homql::closed_form {

namespace {

void require_on_lattice(const FockPair& pair, int delta_out) {
    if (!on_lattice(pair.total(), delta_out)) {
        throw LatticeError("delta_out=" + std::to_string(delta_out) + " is not on the S=" +
                           std::to_string(pair.total()) + " lattice");
    }
}

void require_exact_ok(const BeamSplitter& bs, const NumericMode& mode) {
    if (mode.is_exact() && !bs.is_rational()) {
        throw ModeError("ExactRational mode needs a rational reflectivity");
    }
}

// r in {0, 1}: identity or full swap.
std::optional<int> endpoint_target(const FockPair& pair, const BeamSplitter& bs) {
    if (bs.reflectivity() == 0.0) {
        return pair.delta();
    }
    if (bs.reflectivity() == 1.0) {
        return -pair.delta();
    }
    return std::nullopt;
}

// log of base^exponent with 0^0 = 1.
double log_pow(double log_base, int exponent) {
    return exponent == 0 ? 0.0 : exponent * log_base;
}

double direct_float(const FockPair& pair, double r, int delta_out) {
    const int total = pair.total();
    const int delta = pair.delta();
    const int k_modes = pair.mode_a();
    const int l_modes = pair.mode_b();
    const int x = -delta_out;
    const int fpx = (total + x) / 2;
    const int fmx = (total - x) / 2;

    const double log_r = std::log(r);
    const double log_t = std::log1p(-r);
    const double log_ratio = log_t - log_r;  // log((1-r)/r)

    // Half the log prefactor, so the summands are amplitude-sized.
    const double half_log_prefactor =
        0.5 * (log_factorial(fpx) + log_factorial(fmx) - log_factorial(k_modes) -
               log_factorial(l_modes) + total * log_r + ((delta - x) / 2) * log_ratio);

    const auto range = term_range(pair, delta_out);
    CompensatedSum sum;
    for (int k = range.first; k <= range.last; ++k) {
        const double log_mag = half_log_prefactor + log_binomial(l_modes, k) +
                               log_binomial(k_modes, fpx - k) + k * log_ratio;
        const long double term = std::exp(static_cast<long double>(log_mag));
        sum.add(k % 2 == 0 ? term : -term);
    }
    const long double amp = sum.value();
    return static_cast<double>(amp * amp);
}

std::vector<double> wigner_float(const FockPair& pair, double theta) {
    auto col = oracle::wigner_d_column(pair.total(), pair.delta(), oracle::rotation_angle(theta));
    for (auto& v : col) {
        v *= v;
    }
    return col;
}

}  // namespace

TermRange term_range(const FockPair& pair, int delta_out) {
    require_on_lattice(pair, delta_out);
    const int total = pair.total();
    const int x = -delta_out;
    TermRange range;
    range.first = std::max(0, (x - pair.delta()) / 2);
    range.last = std::min(pair.mode_b(), (total + x) / 2);
    return range;
}

std::vector<ClosedFormTerm> exact_terms(const FockPair& pair, const Rational& r, int delta_out) {
    if (r <= 0 || r >= 1) {
        throw DomainError("closed-form summands need 0 < r < 1");
    }
    const auto range = term_range(pair, delta_out);
    const int fpx = (pair.total() - delta_out) / 2;
    const Rational ratio = (r - 1) / r;
    std::vector<ClosedFormTerm> terms;
    Rational power = rational_pow(ratio, range.first < 0 ? 0 : range.first);
    for (int k = range.first; k <= range.last; ++k) {
        Rational binoms{binomial_exact(pair.mode_b(), k) * binomial_exact(pair.mode_a(), fpx - k)};
        terms.push_back({k, binoms * power});
        power *= ratio;
    }
    return terms;
}

Probability prob_delta_out(const FockPair& pair, const BeamSplitter& bs, int delta_out,
                           const NumericMode& mode) {
    require_on_lattice(pair, delta_out);
    require_exact_ok(bs, mode);

    if (auto target = endpoint_target(pair, bs)) {
        const bool hit = *target == delta_out;
        Probability p{hit ? 1.0 : 0.0, std::nullopt};
        if (mode.is_exact()) {
            p.exact = Rational(hit ? 1 : 0);
        }
        return p;
    }

    if (mode.is_exact()) {
        const Rational& r = bs.exact_reflectivity();
        const int x = -delta_out;
        const int fpx = (pair.total() + x) / 2;
        const int fmx = (pair.total() - x) / 2;
        Rational prefactor{factorial_exact(fpx) * factorial_exact(fmx),
                           factorial_exact(pair.mode_a()) * factorial_exact(pair.mode_b())};
        prefactor.canonicalize();
        prefactor *= rational_pow(r, pair.total());
        prefactor *= rational_pow((1 - r) / r, (pair.delta() - x) / 2);
        Rational sum = 0;
        for (const auto& term : exact_terms(pair, r, delta_out)) {
            sum += term.value;
        }
        Rational value = prefactor * sum * sum;
        return {to_double(value), value};
    }

    if (pair.total() > kDirectFloatLimit) {
        const auto probs = wigner_float(pair, bs.theta());
        return {probs[lattice_index(pair.total(), delta_out)], std::nullopt};
    }
    return {direct_float(pair, bs.reflectivity(), delta_out), std::nullopt};
}

DeltaDistribution distribution(const FockPair& pair, const BeamSplitter& bs,
                               const NumericMode& mode) {
    require_exact_ok(bs, mode);
    const int total = pair.total();
    if (mode.is_exact()) {
        std::vector<Rational> exact;
        exact.reserve(static_cast<std::size_t>(total) + 1);
        for (int d : delta_lattice(total)) {
            exact.push_back(*prob_delta_out(pair, bs, d, mode).exact);
        }
        return DeltaDistribution(total, std::move(exact));
    }

    std::vector<double> probs;
    if (endpoint_target(pair, bs) || total <= kDirectFloatLimit) {
        probs.reserve(static_cast<std::size_t>(total) + 1);
        for (int d : delta_lattice(total)) {
            probs.push_back(prob_delta_out(pair, bs, d, mode).value);
        }
    } else {
        probs = wigner_float(pair, bs.theta());
    }
    return DeltaDistribution(total, std::move(probs), std::max(mode.tolerance, 1e-15));
}

JointCountDistribution amplitude_expansion(int k_modes, int l_modes, const BeamSplitter& bs,
                                           const NumericMode& mode) {
    if (k_modes < 0 || l_modes < 0) {
        throw RangeError("mode occupations must be non-negative");
    }
    require_exact_ok(bs, mode);
    const int total = k_modes + l_modes;

    if (mode.is_exact()) {
        const Rational& r = bs.exact_reflectivity();
        const Rational t = 1 - r;
        // Path amplitude: C(K,k)C(L,l)(-1)^{K-k} sqrt(r)^{K-k+l} sqrt(1-r)^{L-l+k}.
        // For fixed p = k + l both exponents have fixed parity, so the odd
        // square roots factor out of the bucket and the rest stays rational.
        std::vector<Rational> bucket(static_cast<std::size_t>(total) + 1, Rational(0));
        for (int k = 0; k <= k_modes; ++k) {
            for (int l = 0; l <= l_modes; ++l) {
                const int p = k + l;
                const int er = k_modes - k + l;
                const int et = l_modes - l + k;
                Rational term{binomial_exact(k_modes, k) * binomial_exact(l_modes, l)};
                if ((k_modes - k) % 2 != 0) {
                    term = -term;
                }
                term *= rational_pow(r, er / 2) * rational_pow(t, et / 2);
                bucket[static_cast<std::size_t>(p)] += term;
            }
        }
        std::map<CountPair, Rational> entries;
        const mpz_class norm = factorial_exact(k_modes) * factorial_exact(l_modes);
        for (int p = 0; p <= total; ++p) {
            const int q = total - p;
            Rational prob = bucket[static_cast<std::size_t>(p)];
            prob *= prob;
            if ((k_modes + p) % 2 != 0) {
                prob *= r;
            }
            if ((l_modes + p) % 2 != 0) {
                prob *= t;
            }
            prob *= Rational(factorial_exact(p) * factorial_exact(q), norm);
            prob.canonicalize();
            entries[{p, q}] = prob;
        }
        return JointCountDistribution(std::move(entries));
    }

    const double r = bs.reflectivity();
    const double log_sr = 0.5 * std::log(r);
    const double log_st = 0.5 * std::log1p(-r);
    const double log_norm = log_factorial(k_modes) + log_factorial(l_modes);
    std::vector<CompensatedSum> bucket(static_cast<std::size_t>(total) + 1);
    for (int k = 0; k <= k_modes; ++k) {
        for (int l = 0; l <= l_modes; ++l) {
            const int p = k + l;
            const int q = total - p;
            const int er = k_modes - k + l;
            const int et = l_modes - l + k;
            if ((er > 0 && r == 0.0) || (et > 0 && r == 1.0)) {
                continue;
            }
            const double log_mag = log_binomial(k_modes, k) + log_binomial(l_modes, l) +
                                   log_pow(log_sr, er) + log_pow(log_st, et) +
                                   0.5 * (log_factorial(p) + log_factorial(q) - log_norm);
            const long double term = std::exp(static_cast<long double>(log_mag));
            bucket[static_cast<std::size_t>(p)].add((k_modes - k) % 2 == 0 ? term : -term);
        }
    }
    std::map<CountPair, double> entries;
    for (int p = 0; p <= total; ++p) {
        const long double amp = bucket[static_cast<std::size_t>(p)].value();
        entries[{p, total - p}] = static_cast<double>(amp * amp);
    }
    return JointCountDistribution(std::move(entries));
}

}  // namespace homql::closed_form

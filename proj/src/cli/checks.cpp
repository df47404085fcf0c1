#include "homql/cli/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "homql/channels.hpp"
#include "homql/closed_form.hpp"
#include "homql/metrics.hpp"
#include "homql/oracle.hpp"

namespace homql::cli {

Suite parse_suite(const std::string& text) {
    for (Suite s : all_suites()) {
        if (suite_name(s) == text) {
            return s;
        }
    }
    throw DomainError("unknown check suite '" + text + "'");
}

std::string suite_name(Suite s) {
    switch (s) {
        case Suite::Oracle: return "oracle";
        case Suite::Parity: return "parity";
        case Suite::Moments: return "moments";
        case Suite::Visibility: return "visibility";
        case Suite::Decoherence: return "decoherence";
    }
    return "?";
}

std::vector<Suite> all_suites() {
    return {Suite::Oracle, Suite::Parity, Suite::Moments, Suite::Visibility, Suite::Decoherence};
}

bool SuiteReport::passed() const {
    return std::all_of(results.begin(), results.end(), [](const CheckResult& c) { return c.passed; });
}

nlohmann::ordered_json SuiteReport::to_json() const {
    nlohmann::ordered_json j;
    j["suite"] = suite_name(suite);
    j["passed"] = passed();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : results) {
        nlohmann::ordered_json e;
        e["name"] = c.name;
        e["passed"] = c.passed;
        e["max_deviation"] = c.max_deviation;
        e["tolerance"] = c.tolerance;
        if (!c.detail.empty()) {
            e["detail"] = c.detail;
        }
        arr.push_back(std::move(e));
    }
    j["checks"] = std::move(arr);
    return j;
}

namespace {

const std::vector<std::string> kRationalGrid = {"1/10", "1/5", "1/2", "9/10"};

CheckResult bounded(std::string name, double dev, double tol, std::string detail = {}) {
    return {std::move(name), dev <= tol, dev, tol, std::move(detail)};
}

CheckResult exact(std::string name, long mismatches, std::string detail = {}) {
    return {std::move(name), mismatches == 0, static_cast<double>(mismatches), 0.0, std::move(detail)};
}

double max_abs_diff(const DeltaMarginal& a, const DeltaMarginal& b) {
    double dev = 0.0;
    for (const auto& [k, v] : a) {
        auto it = b.find(k);
        dev = std::max(dev, std::abs(v - (it == b.end() ? 0.0 : it->second)));
    }
    for (const auto& [k, v] : b) {
        if (!a.count(k)) {
            dev = std::max(dev, std::abs(v));
        }
    }
    return dev;
}

// --- oracle ------------------------------------------------------------------

SuiteReport oracle_suite() {
    SuiteReport rep{Suite::Oracle, {}};
    double cf_vs_or = 0.0;
    double ds_vs_or = 0.0;
    double cf_vs_ds = 0.0;
    for (int s = 0; s <= 30; ++s) {
        for (int delta : delta_lattice(s)) {
            const auto pair = new_fock_pair(s, delta);
            for (double r : {0.1, 0.2, 0.5, 0.9}) {
                const auto bs = BeamSplitter::from_reflectivity(r);
                const auto cf = closed_form::distribution(pair, bs).to_marginal();
                const auto ds = delta_marginal(closed_form::amplitude_expansion(pair.mode_a(), pair.mode_b(), bs));
                const auto orc = oracle::oracle_distribution(pair, bs).to_marginal();
                cf_vs_or = std::max(cf_vs_or, max_abs_diff(cf, orc));
                ds_vs_or = std::max(ds_vs_or, max_abs_diff(ds, orc));
                cf_vs_ds = std::max(cf_vs_ds, max_abs_diff(cf, ds));
            }
        }
    }
    rep.results.push_back(bounded("closed_form_vs_oracle", cf_vs_or, 1e-9, "S<=30"));
    rep.results.push_back(bounded("double_sum_vs_oracle", ds_vs_or, 1e-9, "S<=30"));
    rep.results.push_back(bounded("closed_form_vs_double_sum", cf_vs_ds, 1e-9, "S<=30"));

    long mismatches = 0;
    for (const auto& rt : kRationalGrid) {
        const auto bs = BeamSplitter::parse(rt);
        for (int s = 0; s <= 30; ++s) {
            for (int delta : delta_lattice(s)) {
                const auto pair = new_fock_pair(s, delta);
                const auto cf = closed_form::distribution(pair, bs, NumericMode::exact()).to_exact_marginal();
                const auto ds = exact_delta_marginal(
                    closed_form::amplitude_expansion(pair.mode_a(), pair.mode_b(), bs, NumericMode::exact()));
                for (const auto& [x, q] : cf) {
                    auto it = ds.find(x);
                    const Rational other = it == ds.end() ? Rational(0) : it->second;
                    if (q != other) {
                        ++mismatches;
                    }
                }
            }
        }
    }
    rep.results.push_back(exact("closed_form_equals_double_sum_exact", mismatches, "S<=30, rational r"));

    double high = 0.0;
    for (int s : {31, 40, 60, 100}) {
        for (int delta : {-s, -s + 2, s % 2, s - 2 * (s / 3)}) {
            const auto pair = new_fock_pair(s, delta);
            for (double r : {0.1, 0.2, 0.5, 0.9}) {
                const auto bs = BeamSplitter::from_reflectivity(r);
                high = std::max(high, max_abs_diff(closed_form::distribution(pair, bs).to_marginal(),
                                                   oracle::oracle_distribution(pair, bs).to_marginal()));
            }
        }
    }
    rep.results.push_back(bounded("recurrence_vs_oracle", high, 1e-9, "S in {31,40,60,100}"));
    return rep;
}

// --- parity ------------------------------------------------------------------

SuiteReport parity_suite() {
    SuiteReport rep{Suite::Parity, {}};
    long nonzero = 0;
    for (const auto& rt : kRationalGrid) {
        const auto bs = BeamSplitter::parse(rt);
        for (int s = 0; s <= 30; ++s) {
            for (int delta : delta_lattice(s)) {
                const auto pair = new_fock_pair(s, delta);
                const auto joint =
                    closed_form::amplitude_expansion(pair.mode_a(), pair.mode_b(), bs, NumericMode::exact());
                Rational off = 0;
                for (const auto& [x, q] : exact_delta_marginal(joint)) {
                    if ((x - s) % 2 != 0) {
                        off += q;
                    }
                }
                off += metrics::exact_parity_violation(closed_form::distribution(pair, bs, NumericMode::exact()));
                if (off != 0) {
                    ++nonzero;
                }
            }
        }
    }
    rep.results.push_back(exact("off_parity_mass_exact", nonzero, "S<=30, rational r"));

    double worst = 0.0;
    for (int s = 0; s <= 60; ++s) {
        for (int delta : delta_lattice(s)) {
            const auto pair = new_fock_pair(s, delta);
            for (double r : {0.1, 0.2, 0.5, 0.9}) {
                const auto bs = BeamSplitter::from_reflectivity(r);
                worst = std::max(worst, metrics::parity_violation(closed_form::distribution(pair, bs)));
                if (s <= 30) {
                    worst = std::max(worst, metrics::parity_violation(delta_marginal(closed_form::amplitude_expansion(
                                                                         pair.mode_a(), pair.mode_b(), bs)),
                                                                     s));
                }
            }
        }
    }
    rep.results.push_back(bounded("off_parity_mass_float", worst, 1e-12, "S<=60"));

    // |K>|K> on a balanced splitter: odd counts per port never occur.
    long odd = 0;
    const auto half = BeamSplitter::parse("1/2");
    for (int k = 0; k <= 15; ++k) {
        const auto d = closed_form::distribution(from_modes(k, k), half, NumericMode::exact());
        for (int x : delta_lattice(2 * k)) {
            if (((2 * k + x) / 2) % 2 != 0 && d.exact_at(x) != 0) {
                ++odd;
            }
        }
    }
    rep.results.push_back(exact("balanced_odd_counts_vanish", odd, "K=L<=15, r=1/2"));
    return rep;
}

// --- moments -----------------------------------------------------------------

SuiteReport moments_suite() {
    SuiteReport rep{Suite::Moments, {}};
    double mean_dev = 0.0;
    double var_dev = 0.0;
    for (int s = 0; s <= 60; ++s) {
        for (int delta : delta_lattice(s)) {
            const auto pair = new_fock_pair(s, delta);
            for (int i = 0; i <= 20; ++i) {
                const double r = i / 20.0;
                const auto d = closed_form::distribution(pair, BeamSplitter::from_reflectivity(r));
                mean_dev = std::max(mean_dev, std::abs(metrics::mean_delta(d) - metrics::predicted_mean(s, delta, r)));
                var_dev = std::max(var_dev,
                                   std::abs(metrics::variance_delta(d) - metrics::predicted_variance(s, delta, r)));
            }
        }
    }
    rep.results.push_back(bounded("mean_law", mean_dev, 1e-9, "S<=60, 21-point r grid"));
    rep.results.push_back(bounded("variance_law", var_dev, 1e-9, "S<=60, 21-point r grid"));

    double hand = 0.0;
    for (int i = 0; i <= 20; ++i) {
        const double r = i / 20.0;
        const double t = 1.0 - r;
        const auto bs = BeamSplitter::from_reflectivity(r);
        const auto one = closed_form::distribution(new_fock_pair(1, 1), bs);
        hand = std::max({hand, std::abs(one.at(1) - t), std::abs(one.at(-1) - r)});
        const auto hom = closed_form::distribution(new_fock_pair(2, 0), bs);
        hand = std::max({hand, std::abs(hom.at(0) - (t - r) * (t - r)), std::abs(hom.at(2) - 2 * r * t),
                         std::abs(hom.at(-2) - 2 * r * t)});
        const auto two = closed_form::distribution(new_fock_pair(2, 2), bs);
        hand = std::max({hand, std::abs(two.at(2) - t * t), std::abs(two.at(0) - 2 * r * t),
                         std::abs(two.at(-2) - r * r)});
    }
    rep.results.push_back(bounded("hand_enumeration_s1_s2", hand, 1e-15));

    double ballistic = 0.0;
    const double theta = 1e-4;
    const double r = std::sin(theta) * std::sin(theta);
    for (int s : {2, 10, 50}) {
        for (int delta : {0, -s + 2, -s}) {
            const double var = metrics::variance_delta(
                closed_form::distribution(new_fock_pair(s, delta), BeamSplitter::from_reflectivity(r)));
            const double c = metrics::ballistic_coefficient(s, delta);
            ballistic = std::max(ballistic, std::abs(var / (theta * theta) - c) / c);
        }
    }
    rep.results.push_back(bounded("ballistic_small_theta", ballistic, 1e-6, "relative, theta=1e-4"));
    return rep;
}

// --- visibility --------------------------------------------------------------

SuiteReport visibility_suite() {
    SuiteReport rep{Suite::Visibility, {}};
    long wrong = 0;
    for (int n = 1; n <= 50; ++n) {
        if (metrics::exact_visibility_fock(n, n, Rational(1, 2)) != 1 / (2 - Rational(1, n))) {
            ++wrong;
        }
    }
    rep.results.push_back(exact("balanced_identical_inputs", wrong, "v = 1/(2-1/n), n<=50"));

    long scale = 0;
    for (const Rational& c : {Rational(1, 2), Rational(81, 100), Rational(3, 7)}) {
        for (const Rational& r : {Rational(36, 100), Rational(1, 2), Rational(9, 10)}) {
            for (int n = 1; n <= 10; ++n) {
                for (int m = 1; m <= 10; ++m) {
                    const Rational gab(n * m), gaa(n * (n - 1)), gbb(m * (m - 1));
                    const Rational base = metrics::exact_visibility_from_moments(gab, gaa, gbb, r);
                    if (metrics::exact_visibility_from_moments(c * gab, c * gaa, c * gbb, r) != base) {
                        ++scale;
                    }
                }
            }
        }
    }
    rep.results.push_back(exact("moment_scaling_invariance", scale));

    double lossy = 0.0;
    for (int n = 1; n <= 8; ++n) {
        for (int m = 1; m <= 8; ++m) {
            for (double eta : {0.9, 0.6}) {
                std::vector<double> pa(n + 1), pb(m + 1);
                const channels::MixedFockSource a(n, eta), b(m, eta);
                for (int j = 0; j <= n; ++j) {
                    pa[j] = a.weight(j);
                }
                for (int j = 0; j <= m; ++j) {
                    pb[j] = b.weight(j);
                }
                const auto g = metrics::product_moments(pa, pb);
                const double v = metrics::visibility_from_moments(g.g_ab, g.g_aa, g.g_bb, 0.43).value;
                lossy = std::max(lossy, std::abs(v - metrics::visibility_fock(n, m, 0.43).value));
            }
        }
    }
    rep.results.push_back(bounded("mixed_source_invariance", lossy, 1e-12, "n,m<=8, r=0.43"));

    long mask_bad = 0;
    for (double r : {0.36, 0.43, 0.39, 0.45, 0.5}) {
        const int max_n = 50;
        const auto mask = metrics::nonclassical_mask(max_n, r);
        int prev_lo = 0;
        int prev_hi = 0;
        for (int n = 1; n <= max_n; ++n) {
            const auto& row = mask[n - 1];
            int lo = 0;
            int hi = 0;
            for (int m = 1; m <= max_n; ++m) {
                if (row[m - 1] != (metrics::visibility_fock(n, m, r).value > 0.5) ||
                    row[m - 1] != mask[m - 1][n - 1]) {
                    ++mask_bad;
                }
                if (row[m - 1]) {
                    if (lo == 0) {
                        lo = m;
                    } else if (m != hi + 1) {
                        ++mask_bad;  // not contiguous
                    }
                    hi = m;
                }
            }
            if (lo != 0 && prev_lo != 0 && (lo < prev_lo || hi < prev_hi)) {
                ++mask_bad;
            }
            if (lo != 0) {
                prev_lo = lo;
                prev_hi = hi;
            }
        }
    }
    rep.results.push_back(exact("nonclassical_mask_consistency", mask_bad, "r in {0.36,0.43,0.39,0.45,0.5}"));
    return rep;
}

// --- decoherence -------------------------------------------------------------

double binomial_pmf(int n, int k, double p) {
    if (p == 0.0) {
        return k == 0 ? 1.0 : 0.0;
    }
    if (p == 1.0) {
        return k == n ? 1.0 : 0.0;
    }
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * std::log(p) +
                    (n - k) * std::log1p(-p));
}

// Distinguishable photons: S-N enter a, N enter b, each routed independently.
DeltaMarginal classical_reference(int total, int n, double r) {
    DeltaMarginal out;
    for (int x = 0; x <= total - n; ++x) {
        for (int y = 0; y <= n; ++y) {
            const int p = x + y;
            out[2 * p - total] += binomial_pmf(total - n, x, 1.0 - r) * binomial_pmf(n, y, r);
        }
    }
    return out;
}

SuiteReport decoherence_suite() {
    SuiteReport rep{Suite::Decoherence, {}};
    const auto straight = channels::DistinguishabilityAngle::from_cos_squared(1);
    long diff = 0;
    for (const char* rt : {"1/10", "1/2"}) {
        const auto bs = BeamSplitter::parse(rt);
        for (int s = 0; s <= 20; ++s) {
            for (int n = 0; n <= s; ++n) {
                for (auto beam : {channels::RotatedBeam::A, channels::RotatedBeam::B}) {
                    const auto mixed = channels::decohere_distribution(s, n, straight, bs, NumericMode::exact(), beam);
                    const auto pure = closed_form::distribution(new_fock_pair(s, s - 2 * n), bs, NumericMode::exact());
                    if (mixed.exact() != pure.exact()) {
                        ++diff;
                    }
                }
            }
        }
    }
    rep.results.push_back(exact("indistinguishable_limit_exact", diff, "S<=20, r in {1/10,1/2}"));

    double tv = 0.0;
    const auto orth = channels::DistinguishabilityAngle::from_radians(std::numbers::pi / 2);
    for (auto [s, n, r] : {std::tuple{50, 25, 0.5}, std::tuple{20, 5, 0.3}, std::tuple{11, 8, 0.9}}) {
        for (auto beam : {channels::RotatedBeam::A, channels::RotatedBeam::B}) {
            const auto d = channels::decohere_distribution(s, n, orth, BeamSplitter::from_reflectivity(r),
                                                           NumericMode::floating(), beam);
            tv = std::max(tv, metrics::tv_distance(d.to_marginal(), classical_reference(s, n, r)));
        }
    }
    rep.results.push_back(bounded("distinguishable_limit_tv", tv, 1e-12));

    double brute = 0.0;
    for (int s = 0; s <= 6; ++s) {
        for (int n = 0; n <= s; ++n) {
            for (double y : {std::numbers::pi / 24, std::numbers::pi / 6, std::numbers::pi / 3, 1.0}) {
                for (double r : {0.2, 0.5}) {
                    for (auto beam : {channels::RotatedBeam::A, channels::RotatedBeam::B}) {
                        const auto angle = channels::DistinguishabilityAngle::from_radians(y);
                        const auto bs = BeamSplitter::from_reflectivity(r);
                        brute = std::max(
                            brute, max_abs_diff(channels::decohere_distribution(s, n, angle, bs,
                                                                                NumericMode::floating(), beam)
                                                    .to_marginal(),
                                                channels::four_mode_decohere_distribution(s, n, angle, bs, beam)
                                                    .to_marginal()));
                    }
                }
            }
        }
    }
    rep.results.push_back(bounded("four_mode_brute_force", brute, 1e-10, "S<=6"));
    return rep;
}

}  // namespace

SuiteReport run_suite(Suite suite) {
    switch (suite) {
        case Suite::Oracle: return oracle_suite();
        case Suite::Parity: return parity_suite();
        case Suite::Moments: return moments_suite();
        case Suite::Visibility: return visibility_suite();
        case Suite::Decoherence: return decoherence_suite();
    }
    throw DomainError("unhandled suite");
}

}  // namespace homql::cli

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "homql/channels.hpp"
#include "homql/closed_form.hpp"
#include "homql/metrics.hpp"
#include "reference.hpp"

using namespace homql;
using namespace homql::channels;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

double max_diff(const DeltaMarginal& a, const std::map<int, double>& b) {
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

}  // namespace

TEST_CASE("distinguishability angle") {
    CHECK(DistinguishabilityAngle::from_radians(0.0).exact_cos_squared() == Rational(1));
    CHECK(DistinguishabilityAngle::from_radians(kHalfPi).exact_cos_squared() == Rational(0));
    CHECK_FALSE(DistinguishabilityAngle::from_radians(0.3).exact_cos_squared().has_value());
    CHECK(DistinguishabilityAngle::from_cos_squared(Rational(1, 4)).radians() ==
          doctest::Approx(std::numbers::pi / 3));
    CHECK_THROWS_AS(DistinguishabilityAngle::from_radians(-0.1), RangeError);
    CHECK_THROWS_AS(DistinguishabilityAngle::from_radians(2.0), RangeError);
    CHECK_THROWS_AS(DistinguishabilityAngle::from_cos_squared(Rational(3, 2)), RangeError);
}

TEST_CASE("indistinguishable limit is the pure distribution") {
    const auto straight = DistinguishabilityAngle::from_radians(0.0);
    for (const char* rt : {"1/10", "1/2"}) {
        const auto bs = BeamSplitter::parse(rt);
        for (int s = 0; s <= 20; ++s) {
            for (int n = 0; n <= s; ++n) {
                const auto pure = closed_form::distribution(new_fock_pair(s, s - 2 * n), bs, NumericMode::exact());
                for (auto beam : {RotatedBeam::A, RotatedBeam::B}) {
                    CHECK(decohere_distribution(s, n, straight, bs, NumericMode::exact(), beam).exact() ==
                          pure.exact());
                }
            }
        }
    }
}

TEST_CASE("distinguishable limit routes photons independently") {
    const auto orth = DistinguishabilityAngle::from_radians(kHalfPi);
    for (int s = 0; s <= 12; ++s) {
        for (int n = 0; n <= s; ++n) {
            for (double r : {0.2, 0.5, 0.85}) {
                const auto d = decohere_distribution(s, n, orth, BeamSplitter::from_reflectivity(r));
                CHECK(max_diff(d.to_marginal(), testref::routed_classical(s - n, n, r)) < 1e-13);
            }
        }
    }
    const auto d = decohere_distribution(50, 25, orth, BeamSplitter::parse("1/2"), NumericMode::exact());
    const auto ref = testref::binomial_convolution(25, 25, Rational(1, 2));
    for (int x : delta_lattice(50)) {
        CHECK(d.exact_at(x) == ref.at(x));
    }
}

TEST_CASE("mixture construction matches four-mode evolution") {
    for (int s = 0; s <= 6; ++s) {
        for (int n = 0; n <= s; ++n) {
            for (double y : {0.1, std::numbers::pi / 6, 1.0, 1.4}) {
                for (double r : {0.3, 0.5}) {
                    for (auto beam : {RotatedBeam::A, RotatedBeam::B}) {
                        const auto angle = DistinguishabilityAngle::from_radians(y);
                        const auto bs = BeamSplitter::from_reflectivity(r);
                        const auto fast = decohere_distribution(s, n, angle, bs, NumericMode::floating(), beam);
                        const auto brute = four_mode_decohere_distribution(s, n, angle, bs, beam);
                        for (int x : delta_lattice(s)) {
                            CHECK(std::abs(fast.at(x) - brute.at(x)) < 1e-10);
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("partial distinguishability narrows the walk") {
    const auto bs = BeamSplitter::from_reflectivity(0.5);
    double prev_var = 1e9;
    double prev_edge = 2.0;
    for (double y : {0.0, std::numbers::pi / 24, std::numbers::pi / 6, std::numbers::pi / 3, kHalfPi}) {
        const auto d = decohere_distribution(50, 25, DistinguishabilityAngle::from_radians(y), bs);
        const double var = metrics::variance_delta(d);
        CHECK(var < prev_var);
        prev_var = var;
        double edge = 0.0;
        for (int x : delta_lattice(50)) {
            if (std::abs(x) >= 40) {
                edge += d.at(x);
            }
        }
        if (y > 0.2) {
            CHECK(edge < prev_edge);
        }
        prev_edge = edge;
        CHECK(metrics::parity_violation(d) == 0.0);
    }
    CHECK(prev_var == doctest::Approx(50.0));
}

TEST_CASE("only the relative polarization matters") {
    const auto y = DistinguishabilityAngle::from_radians(0.6);
    const auto bs = BeamSplitter::from_reflectivity(0.3);
    for (int n = 0; n <= 10; ++n) {
        const auto a = decohere_distribution(10, n, y, bs, NumericMode::floating(), RotatedBeam::A);
        const auto b = decohere_distribution(10, n, y, bs, NumericMode::floating(), RotatedBeam::B);
        CHECK(metrics::tv_distance(a, b) < 1e-14);
    }
    CHECK_THROWS_AS(decohere_distribution(4, 5, y, bs), RangeError);
}

TEST_CASE("vacuum splitting and convolution") {
    const auto d = vacuum_splitting(3, true, BeamSplitter::parse("1/4"), NumericMode::exact());
    CHECK(d.exact_at(3) == Rational(27, 64));
    CHECK(d.exact_at(-3) == Rational(1, 64));
    const auto e = vacuum_splitting(3, false, BeamSplitter::parse("1/4"), NumericMode::exact());
    CHECK(e.exact_at(3) == Rational(1, 64));
    const auto c = convolve(d, e);
    CHECK(c.total() == 6);
    double sum = 0.0;
    for (double p : c.probs()) {
        sum += p;
    }
    CHECK(sum == doctest::Approx(1.0));
}

TEST_CASE("mixed source weights and purity") {
    for (int k : {0, 1, 5, 10}) {
        for (double eta : {0.0, 0.3, 0.5, 0.9, 1.0}) {
            const MixedFockSource src(k, eta);
            double s = 0.0;
            for (int j = 0; j <= k; ++j) {
                s += src.weight(j);
            }
            CHECK(std::abs(s - 1.0) < 1e-14);
            CHECK(purity(src) == doctest::Approx(testref::direct_purity(k, eta)).epsilon(1e-13));
        }
    }
    CHECK(purity(MixedFockSource(7, 1.0)) == 1.0);
    CHECK(exact_purity(MixedFockSource(1, Rational(1, 2))) == Rational(1, 2));
    CHECK(MixedFockSource(3, 1.0).weight(3) == 1.0);
    CHECK_THROWS_AS(MixedFockSource(3, 1.2), RangeError);
    CHECK_THROWS_AS(MixedFockSource(3, 0.5).exact_weight(1), ModeError);
}

TEST_CASE("purity solver") {
    CHECK(eta_for_purity(5, 0.83) == doctest::Approx(0.98058085455763895563).epsilon(1e-11));
    CHECK(eta_for_purity(10, 0.21) == doctest::Approx(0.76487529254616806557).epsilon(1e-11));
    CHECK(eta_for_purity(10, 0.41) == doctest::Approx(0.93785455802781982594).epsilon(1e-11));
    CHECK(eta_for_purity(4, 1.0) == 1.0);
    CHECK(eta_for_purity(1, 0.5) == doctest::Approx(0.5));
    CHECK_THROWS_AS(eta_for_purity(5, 0.21), NoSolution);
    CHECK_THROWS_AS(eta_for_purity(5, 1.2), NoSolution);
    for (double target : {0.3, 0.47, 0.83}) {
        const double eta = eta_for_joint_purity(5, 5, target);
        const double p = testref::direct_purity(5, eta);
        CHECK(std::abs(p * p - target) < 1e-10);
    }
}

TEST_CASE("mixed distribution") {
    const auto half = BeamSplitter::parse("1/2");
    const auto j = mixed_distribution(MixedFockSource(1, Rational(1, 2)), MixedFockSource(1, Rational(1, 2)), half,
                                      NumericMode::exact());
    CHECK(j.exact().at({2, 0}) == Rational(1, 8));
    CHECK(j.exact().at({0, 2}) == Rational(1, 8));
    CHECK(j.exact().at({1, 0}) == Rational(1, 4));
    CHECK(j.exact().at({0, 1}) == Rational(1, 4));
    CHECK(j.exact().at({0, 0}) == Rational(1, 4));
    CHECK(j.exact().count({1, 1}) ? j.exact().at({1, 1}) == 0 : true);

    const auto f = mixed_distribution(MixedFockSource(1, 0.5), MixedFockSource(1, 0.5), half);
    CHECK(f.at(1, 1) < 1e-16);
    CHECK(f.at(1, 0) == doctest::Approx(0.25));

    for (double r : {0.2, 0.5}) {
        const auto bs = BeamSplitter::from_reflectivity(r);
        const auto pure = mixed_distribution(MixedFockSource(3, 1.0), MixedFockSource(4, 1.0), bs);
        const auto direct = closed_form::amplitude_expansion(3, 4, bs);
        for (const auto& [key, p] : direct.entries()) {
            CHECK(std::abs(pure.at(key.first, key.second) - p) < 1e-12);
        }
    }

    for (int k = 0; k <= 10; ++k) {
        for (int l = 0; l <= 10; l += 3) {
            const auto m = mixed_distribution(MixedFockSource(k, 0.77), MixedFockSource(l, 0.77),
                                              BeamSplitter::from_reflectivity(0.35));
            CHECK(std::abs(m.total_mass() - 1.0) < 1e-12);
        }
    }
    const auto lossy = delta_marginal(
        mixed_distribution(MixedFockSource(5, 0.9), MixedFockSource(5, 0.9), BeamSplitter::from_reflectivity(0.5)));
    CHECK(metrics::parity_violation(lossy, 10) > 1e-3);
}

TEST_CASE("detector thinning") {
    const JointCountDistribution single(std::map<CountPair, double>{{{1, 0}, 1.0}});
    const auto a = apply_detector_loss(single, Detector{0.8, 1});
    CHECK(a.at(1, 0) == doctest::Approx(0.8));
    CHECK(a.at(0, 0) == doctest::Approx(0.2));

    const JointCountDistribution pair(std::map<CountPair, double>{{{2, 0}, 1.0}});
    const auto b = apply_detector_loss(pair, Detector{0.9, 1});
    CHECK(b.at(2, 0) == doctest::Approx(0.81));
    CHECK(b.at(1, 0) == doctest::Approx(0.18));
    CHECK(b.at(0, 0) == doctest::Approx(0.01));

    const auto joint = closed_form::amplitude_expansion(3, 4, BeamSplitter::from_reflectivity(0.3));
    CHECK(apply_detector_loss(joint, Detector{1.0, 1}).entries() == joint.entries());
    for (double eta : {0.95, 0.8, 0.5}) {
        const auto thinned = apply_detector_loss(joint, Detector{eta, 1});
        CHECK(std::abs(thinned.total_mass() - 1.0) < 1e-12);
        const auto ref = testref::thin_by_enumeration(joint.entries(), eta);
        for (const auto& [key, p] : ref) {
            CHECK(std::abs(thinned.at(key.first, key.second) - p) < 1e-14);
        }
    }
    CHECK_THROWS_AS(apply_detector_loss(joint, Detector{0.0, 1}), RangeError);
    CHECK_THROWS_AS(apply_detector_loss(joint, Detector{1.0, 0}), RangeError);
}

TEST_CASE("count resolution bins") {
    const DeltaMarginal hom{{-2, 0.5}, {2, 0.5}};
    CHECK(bin_resolution(hom, 1) == std::map<int, double>{{-2, 0.5}, {2, 0.5}});
    CHECK(bin_resolution(hom, 10) == std::map<int, double>{{0, 1.0}});
    CHECK(bin_resolution(DeltaMarginal{{5, 1.0}}, 10) == std::map<int, double>{{10, 1.0}});
    CHECK(bin_resolution(DeltaMarginal{{-5, 1.0}}, 10) == std::map<int, double>{{0, 1.0}});
    CHECK_THROWS_AS(bin_resolution(hom, 0), RangeError);

    const auto d = closed_form::distribution(new_fock_pair(50, 0), BeamSplitter::from_reflectivity(0.5));
    const auto bins = bin_resolution(d.to_marginal(), 20);
    CHECK(bins.at(40) > bins.at(0));
    CHECK(bins.at(-40) > bins.at(0));
    CHECK(bins.at(60) == d.at(50));
    CHECK(std::abs(bins.at(40) + bins.at(60) - d.at(30) - bins.at(-40)) < 1e-12);
    for (const auto& [b, p] : bins) {
        CHECK(p > 0.0);
    }
}

TEST_CASE("two-polarization product walk") {
    const auto point_h = closed_form::distribution(new_fock_pair(3, 1), BeamSplitter::from_reflectivity(0.0));
    const auto point_v = closed_form::distribution(new_fock_pair(4, -2), BeamSplitter::from_reflectivity(0.0));
    const auto g = product_2d(point_h, point_v);
    CHECK(g.at({1, -2}) == 1.0);

    const auto hom = closed_form::distribution(new_fock_pair(2, 0), BeamSplitter::parse("1/2"));
    const auto hh = product_2d(hom, hom);
    for (int a : {-2, 2}) {
        for (int b : {-2, 2}) {
            CHECK(hh.at({a, b}) == doctest::Approx(0.25));
        }
    }

    const auto h = closed_form::distribution(new_fock_pair(10, 0), BeamSplitter::from_reflectivity(0.5));
    const auto v = closed_form::distribution(new_fock_pair(10, -4), BeamSplitter::from_reflectivity(0.2));
    const auto grid = product_2d(h, v);
    for (int x : delta_lattice(10)) {
        double row = 0.0;
        double col = 0.0;
        for (int y : delta_lattice(10)) {
            row += grid.at({x, y});
            col += grid.at({y, x});
        }
        CHECK(std::abs(row - h.at(x)) < 1e-15);
        CHECK(std::abs(col - v.at(x)) < 1e-15);
    }
}

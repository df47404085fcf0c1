#include "homql/channels.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <unordered_map>
#include <vector>

#include <Eigen/Eigenvalues>

#include "homql/binomial.hpp"
#include "homql/closed_form.hpp"
#include "homql/summation.hpp"

namespace homql::channels {

// --- DistinguishabilityAngle -----------------------------------------------

DistinguishabilityAngle DistinguishabilityAngle::from_radians(double y) {
    constexpr double half_pi = std::numbers::pi / 2.0;
    if (!(y >= 0.0 && y <= half_pi)) {
        throw RangeError("distinguishability angle must lie in [0, pi/2]");
    }
    DistinguishabilityAngle out;
    out.y_ = y;
    if (y == 0.0) {
        out.cos2_ = Rational(1);
    } else if (y == half_pi) {
        out.cos2_ = Rational(0);
    }
    return out;
}

DistinguishabilityAngle DistinguishabilityAngle::from_cos_squared(const Rational& c) {
    if (c < 0 || c > 1) {
        throw RangeError("cos^2 y must lie in [0,1]");
    }
    DistinguishabilityAngle out;
    out.cos2_ = c;
    out.y_ = std::acos(std::sqrt(to_double(c)));
    return out;
}

double DistinguishabilityAngle::cos_squared() const {
    if (cos2_) {
        return to_double(*cos2_);
    }
    const double c = std::cos(y_);
    return c * c;
}

// --- helpers -----------------------------------------------------------------

namespace {

template <class T>
T power(const T& base, int exponent) {
    if constexpr (std::is_same_v<T, Rational>) {
        return rational_pow(base, exponent);
    } else {
        return exponent == 0 ? T(1) : std::pow(base, exponent);
    }
}

template <class T>
T binom_as(int n, int k) {
    if constexpr (std::is_same_v<T, Rational>) {
        return Rational(binomial_exact(n, k));
    } else {
        return binomial(n, k);
    }
}

template <class T>
std::vector<T> values_of(const DeltaDistribution& d) {
    if constexpr (std::is_same_v<T, Rational>) {
        return d.exact();
    } else {
        return d.probs();
    }
}

template <class T>
DeltaDistribution make_distribution(int total, std::vector<T> values, double tolerance) {
    if constexpr (std::is_same_v<T, Rational>) {
        return DeltaDistribution(total, std::move(values));
    } else {
        return DeltaDistribution(total, std::move(values), tolerance);
    }
}

template <class T>
std::vector<T> convolve_values(const std::vector<T>& lhs, const std::vector<T>& rhs) {
    std::vector<T> out(lhs.size() + rhs.size() - 1, T(0));
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        if (lhs[i] == 0) {
            continue;
        }
        for (std::size_t j = 0; j < rhs.size(); ++j) {
            out[i + j] += lhs[i] * rhs[j];
        }
    }
    return out;
}

template <class T>
std::vector<T> binomial_splitting(int photons, const T& stay) {
    // Index j = photons that end in the p port: Delta_out = 2j - M.
    std::vector<T> out(static_cast<std::size_t>(photons) + 1);
    const T leave = T(1) - stay;
    for (int j = 0; j <= photons; ++j) {
        out[static_cast<std::size_t>(j)] =
            binom_as<T>(photons, j) * power(stay, j) * power(leave, photons - j);
    }
    return out;
}

template <class T>
DeltaDistribution decohere_impl(int total, int n, const T& cos2, const BeamSplitter& bs,
                                const NumericMode& mode, RotatedBeam rotated) {
    const int rotated_photons = rotated == RotatedBeam::A ? total - n : n;
    const int other_photons = total - rotated_photons;
    const T sin2 = T(1) - cos2;
    std::vector<T> acc(static_cast<std::size_t>(total) + 1, T(0));
    // Mixture over the number of photons left in the shared polarization.
    for (int shared = 0; shared <= rotated_photons; ++shared) {
        const T weight = binom_as<T>(rotated_photons, shared) * power(cos2, shared) *
                         power(sin2, rotated_photons - shared);
        if (weight == 0) {
            continue;
        }
        const FockPair interfering = rotated == RotatedBeam::A
                                         ? from_modes(shared, other_photons)
                                         : from_modes(other_photons, shared);
        const auto pure = closed_form::distribution(interfering, bs, mode);
        const auto lone = vacuum_splitting(rotated_photons - shared, rotated == RotatedBeam::A, bs, mode);
        const auto mixed = convolve_values(values_of<T>(pure), values_of<T>(lone));
        for (std::size_t i = 0; i < acc.size(); ++i) {
            acc[i] += weight * mixed[i];
        }
    }
    return make_distribution(total, std::move(acc), std::max(mode.tolerance, 1e-15));
}

}  // namespace

DeltaDistribution vacuum_splitting(int photons, bool from_a, const BeamSplitter& bs,
                                   const NumericMode& mode) {
    if (photons < 0) {
        throw RangeError("photon number must be non-negative");
    }
    if (mode.is_exact()) {
        const Rational& r = bs.exact_reflectivity();
        return DeltaDistribution(photons, binomial_splitting<Rational>(photons, from_a ? 1 - r : r));
    }
    const double r = bs.reflectivity();
    return DeltaDistribution(photons, binomial_splitting<double>(photons, from_a ? 1.0 - r : r),
                             std::max(mode.tolerance, 1e-15));
}

DeltaDistribution convolve(const DeltaDistribution& lhs, const DeltaDistribution& rhs) {
    const int total = lhs.total() + rhs.total();
    if (lhs.has_exact() && rhs.has_exact()) {
        return DeltaDistribution(total, convolve_values(lhs.exact(), rhs.exact()));
    }
    return DeltaDistribution(total, convolve_values(lhs.probs(), rhs.probs()));
}

DeltaDistribution decohere_distribution(int total, int n, const DistinguishabilityAngle& y,
                                        const BeamSplitter& bs, const NumericMode& mode,
                                        RotatedBeam rotated) {
    if (total < 0 || n < 0 || n > total) {
        throw RangeError("need 0 <= N <= S");
    }
    if (mode.is_exact()) {
        if (!y.exact_cos_squared()) {
            throw ModeError("ExactRational mode needs an exact cos^2 y");
        }
        if (!bs.is_rational()) {
            throw ModeError("ExactRational mode needs a rational reflectivity");
        }
        return decohere_impl<Rational>(total, n, *y.exact_cos_squared(), bs, mode, rotated);
    }
    return decohere_impl<double>(total, n, y.cos_squared(), bs, mode, rotated);
}

// --- four-mode brute force -------------------------------------------------

namespace {

// Modes: 0 = a_H, 1 = a_V, 2 = b_H, 3 = b_V.
using Occupation = std::array<int, 4>;

struct OccupationHash {
    std::size_t operator()(const Occupation& o) const {
        std::size_t h = 0;
        for (int v : o) {
            h = h * 131 + static_cast<std::size_t>(v);
        }
        return h;
    }
};

using FockVector = std::unordered_map<Occupation, double, OccupationHash>;

FockVector apply_creation(const FockVector& state, const std::array<double, 4>& coeffs) {
    FockVector out;
    for (const auto& [occ, amp] : state) {
        for (std::size_t mode = 0; mode < 4; ++mode) {
            if (coeffs[mode] == 0.0) {
                continue;
            }
            Occupation next = occ;
            ++next[mode];
            out[next] += amp * coeffs[mode] * std::sqrt(static_cast<double>(next[mode]));
        }
    }
    return out;
}

}  // namespace

DeltaDistribution four_mode_decohere_distribution(int total, int n, const DistinguishabilityAngle& y,
                                                  const BeamSplitter& bs, RotatedBeam rotated) {
    if (total < 0 || n < 0 || n > total) {
        throw RangeError("need 0 <= N <= S");
    }
    const double c = std::sqrt(y.cos_squared());
    const double s = std::sqrt(1.0 - y.cos_squared());
    const int a_photons = total - n;
    const int b_photons = n;

    // Literal input: (a_H^dag)^{S-N} (cos y b_H^dag + sin y b_V^dag)^N |0>, or the
    // rotation on a when beam A is the rotated one.
    const std::array<double, 4> a_create =
        rotated == RotatedBeam::A ? std::array<double, 4>{c, s, 0.0, 0.0}
                                  : std::array<double, 4>{1.0, 0.0, 0.0, 0.0};
    const std::array<double, 4> b_create =
        rotated == RotatedBeam::B ? std::array<double, 4>{0.0, 0.0, c, s}
                                  : std::array<double, 4>{0.0, 0.0, 1.0, 0.0};
    FockVector state{{Occupation{0, 0, 0, 0}, 1.0}};
    for (int i = 0; i < a_photons; ++i) {
        state = apply_creation(state, a_create);
    }
    for (int i = 0; i < b_photons; ++i) {
        state = apply_creation(state, b_create);
    }
    const double norm = std::exp(-0.5 * (log_factorial(a_photons) + log_factorial(b_photons)));

    // Basis of the fixed-total sector.
    std::vector<Occupation> basis;
    std::unordered_map<Occupation, Eigen::Index, OccupationHash> index;
    for (int n0 = 0; n0 <= total; ++n0) {
        for (int n1 = 0; n0 + n1 <= total; ++n1) {
            for (int n2 = 0; n0 + n1 + n2 <= total; ++n2) {
                Occupation o{n0, n1, n2, total - n0 - n1 - n2};
                index[o] = static_cast<Eigen::Index>(basis.size());
                basis.push_back(o);
            }
        }
    }
    const auto dim = static_cast<Eigen::Index>(basis.size());

    // H = a_H^dag b_H + b_H^dag a_H + a_V^dag b_V + b_V^dag a_V
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        const auto& o = basis[static_cast<std::size_t>(col)];
        for (int pol = 0; pol < 2; ++pol) {
            const int a = pol;
            const int b = pol + 2;
            if (o[static_cast<std::size_t>(b)] > 0) {
                Occupation t = o;
                const double amp = std::sqrt(static_cast<double>(t[b]) * (t[a] + 1));
                --t[static_cast<std::size_t>(b)];
                ++t[static_cast<std::size_t>(a)];
                h(index.at(t), col) += amp;
            }
            if (o[static_cast<std::size_t>(a)] > 0) {
                Occupation t = o;
                const double amp = std::sqrt(static_cast<double>(t[a]) * (t[b] + 1));
                --t[static_cast<std::size_t>(a)];
                ++t[static_cast<std::size_t>(b)];
                h(index.at(t), col) += amp;
            }
        }
    }

    Eigen::VectorXd psi0 = Eigen::VectorXd::Zero(dim);
    for (const auto& [occ, amp] : state) {
        psi0[index.at(occ)] = amp * norm;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    const Eigen::MatrixXd& v = solver.eigenvectors();
    const Eigen::VectorXd proj = v.transpose() * psi0;
    Eigen::VectorXcd rotated_coeffs(dim);
    const double theta = bs.theta();
    for (Eigen::Index k = 0; k < dim; ++k) {
        rotated_coeffs[k] = std::polar(1.0, -theta * solver.eigenvalues()[k]) * proj[k];
    }
    const Eigen::VectorXcd psi = v.cast<std::complex<double>>() * rotated_coeffs;

    std::vector<double> probs(static_cast<std::size_t>(total) + 1, 0.0);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const auto& o = basis[static_cast<std::size_t>(i)];
        const int delta_out = (o[0] + o[1]) - (o[2] + o[3]);
        probs[lattice_index(total, delta_out)] += std::norm(psi[i]);
    }
    return DeltaDistribution(total, std::move(probs));
}

// --- MixedFockSource --------------------------------------------------------

MixedFockSource::MixedFockSource(int nominal, double eta) : nominal_(nominal), eta_(eta) {
    if (nominal < 0) {
        throw RangeError("nominal photon number must be non-negative");
    }
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw RangeError("eta must lie in [0,1]");
    }
}

MixedFockSource::MixedFockSource(int nominal, const Rational& eta)
    : MixedFockSource(nominal, to_double(eta)) {
    exact_eta_ = eta;
}

double MixedFockSource::weight(int photons) const {
    if (photons < 0 || photons > nominal_) {
        return 0.0;
    }
    const int lost = nominal_ - photons;
    return binomial(nominal_, lost) * (photons == 0 ? 1.0 : std::pow(eta_, photons)) *
           (lost == 0 ? 1.0 : std::pow(1.0 - eta_, lost));
}

Rational MixedFockSource::exact_weight(int photons) const {
    if (!exact_eta_) {
        throw ModeError("source has no exact eta");
    }
    if (photons < 0 || photons > nominal_) {
        return 0;
    }
    const int lost = nominal_ - photons;
    return Rational(binomial_exact(nominal_, lost)) * rational_pow(*exact_eta_, photons) *
           rational_pow(1 - *exact_eta_, lost);
}

JointCountDistribution mixed_distribution(const MixedFockSource& a, const MixedFockSource& b,
                                          const BeamSplitter& bs, const NumericMode& mode) {
    if (mode.is_exact()) {
        if (!a.exact_eta() || !b.exact_eta()) {
            throw ModeError("ExactRational mode needs exact eta on both sources");
        }
        std::map<CountPair, Rational> acc;
        for (int j = 0; j <= a.nominal(); ++j) {
            const Rational wa = a.exact_weight(j);
            if (wa == 0) {
                continue;
            }
            for (int k = 0; k <= b.nominal(); ++k) {
                const Rational w = wa * b.exact_weight(k);
                if (w == 0) {
                    continue;
                }
                const auto joint = closed_form::amplitude_expansion(j, k, bs, mode);
                for (const auto& [key, prob] : joint.exact()) {
                    acc[key] += w * prob;
                }
            }
        }
        return JointCountDistribution(std::move(acc));
    }

    // Fixed (j, k) order keeps the float reduction reproducible.
    std::map<CountPair, CompensatedSum> acc;
    for (int j = 0; j <= a.nominal(); ++j) {
        const double wa = a.weight(j);
        if (wa == 0.0) {
            continue;
        }
        for (int k = 0; k <= b.nominal(); ++k) {
            const double w = wa * b.weight(k);
            if (w == 0.0) {
                continue;
            }
            const int total = j + k;
            const auto dist = closed_form::distribution(from_modes(j, k), bs, mode);
            for (int d : delta_lattice(total)) {
                const int p = (total + d) / 2;
                acc[{p, total - p}].add(static_cast<long double>(w) * dist.at(d));
            }
        }
    }
    std::map<CountPair, double> entries;
    for (const auto& [key, sum] : acc) {
        entries[key] = static_cast<double>(sum.value());
    }
    return JointCountDistribution(std::move(entries));
}

double purity(const MixedFockSource& src) {
    CompensatedSum s;
    for (int j = 0; j <= src.nominal(); ++j) {
        const double w = src.weight(j);
        s.add(static_cast<long double>(w) * w);
    }
    return static_cast<double>(s.value());
}

Rational exact_purity(const MixedFockSource& src) {
    Rational s = 0;
    for (int j = 0; j <= src.nominal(); ++j) {
        const Rational w = src.exact_weight(j);
        s += w * w;
    }
    return s;
}

namespace {

template <class Fn>
double bisect_purity(Fn&& purity_at, double target, double tolerance) {
    constexpr int kProbes = 64;
    double prev = purity_at(0.5);
    for (int i = 1; i <= kProbes; ++i) {
        const double cur = purity_at(0.5 + 0.5 * i / kProbes);
        if (cur < prev - 1e-15) {
            throw DomainError("purity is not monotone in eta on [1/2, 1]");
        }
        prev = cur;
    }
    const double lo_val = purity_at(0.5);
    const double hi_val = purity_at(1.0);
    if (target < lo_val || target > hi_val) {
        throw NoSolution("purity " + std::to_string(target) + " outside achievable range [" +
                         std::to_string(lo_val) + ", " + std::to_string(hi_val) + "]");
    }
    if (target == hi_val) {
        return 1.0;
    }
    double lo = 0.5;
    double hi = 1.0;
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (purity_at(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double eta_for_purity(int nominal, double target, double tolerance) {
    if (nominal < 0) {
        throw RangeError("nominal photon number must be non-negative");
    }
    if (nominal == 0) {
        if (target != 1.0) {
            throw NoSolution("a vacuum source always has purity 1");
        }
        return 1.0;
    }
    return bisect_purity([nominal](double eta) { return purity(MixedFockSource(nominal, eta)); },
                         target, tolerance);
}

double eta_for_joint_purity(int nominal_a, int nominal_b, double target, double tolerance) {
    if (nominal_a < 0 || nominal_b < 0) {
        throw RangeError("nominal photon numbers must be non-negative");
    }
    if (nominal_a == 0 && nominal_b == 0) {
        if (target != 1.0) {
            throw NoSolution("a vacuum input always has purity 1");
        }
        return 1.0;
    }
    return bisect_purity(
        [=](double eta) {
            return purity(MixedFockSource(nominal_a, eta)) * purity(MixedFockSource(nominal_b, eta));
        },
        target, tolerance);
}

// --- detection ---------------------------------------------------------------

void Detector::validate() const {
    if (!(efficiency > 0.0 && efficiency <= 1.0)) {
        throw RangeError("detector efficiency must lie in (0,1]");
    }
    if (resolution < 1) {
        throw RangeError("detector resolution must be a positive count");
    }
}

JointCountDistribution apply_detector_loss(const JointCountDistribution& joint, const Detector& det) {
    det.validate();
    if (det.efficiency == 1.0) {
        return joint;
    }
    const double eta = det.efficiency;
    auto thin = [eta](int n) {
        std::vector<double> w(static_cast<std::size_t>(n) + 1);
        for (int k = 0; k <= n; ++k) {
            w[static_cast<std::size_t>(k)] =
                binomial(n, k) * std::pow(eta, k) * std::pow(1.0 - eta, n - k);
        }
        return w;
    };
    std::map<CountPair, CompensatedSum> acc;
    for (const auto& [key, prob] : joint.entries()) {
        if (prob == 0.0) {
            continue;
        }
        const auto wp = thin(key.first);
        const auto wq = thin(key.second);
        for (int p = 0; p <= key.first; ++p) {
            for (int q = 0; q <= key.second; ++q) {
                acc[{p, q}].add(static_cast<long double>(prob) * wp[static_cast<std::size_t>(p)] *
                                wq[static_cast<std::size_t>(q)]);
            }
        }
    }
    std::map<CountPair, double> entries;
    for (const auto& [key, sum] : acc) {
        entries[key] = static_cast<double>(sum.value());
    }
    return JointCountDistribution(std::move(entries));
}

std::map<int, double> bin_resolution(const DeltaMarginal& marginal, int width) {
    if (width < 1) {
        throw RangeError("bin width must be positive");
    }
    auto floor_div = [](int num, int den) {
        int q = num / den;
        if ((num % den != 0) && ((num < 0) != (den < 0))) {
            --q;
        }
        return q;
    };
    std::map<int, double> bins;
    for (const auto& [delta, prob] : marginal) {
        const int b = floor_div(2 * delta + width, 2 * width);
        bins[b * width] += prob;
    }
    return bins;
}

// --- product walk ------------------------------------------------------------

Grid2D product_2d(const DeltaDistribution& horizontal, const DeltaDistribution& vertical) {
    Grid2D grid;
    const auto hl = delta_lattice(horizontal.total());
    const auto vl = delta_lattice(vertical.total());
    for (int dh : hl) {
        for (int dv : vl) {
            grid[{dh, dv}] = horizontal.at(dh) * vertical.at(dv);
        }
    }
    return grid;
}

}  // namespace homql::channels

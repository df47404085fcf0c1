// core_state.hpp
// Domain types shared by every part of the library: two-mode Fock inputs,
// beam splitters, output distributions over the population-difference
// lattice and joint photon-count tables.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace homql {

using Rational = mpq_class;

// --- errors ---------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParityMismatch : public Error { using Error::Error; };
class RangeError : public Error { using Error::Error; };
class LatticeError : public Error { using Error::Error; };
class ModeError : public Error { using Error::Error; };
class DomainError : public Error { using Error::Error; };
class DegenerateError : public Error { using Error::Error; };
class NoSolution : public Error { using Error::Error; };
class NormalizationError : public Error { using Error::Error; };

// --- numeric mode ---------------------------------------------------------

inline constexpr double kDefaultTolerance = 1e-10;
// Float-mode probabilities below this are flushed to exact zero.
inline constexpr double kFlushToZero = 1e-300;

struct NumericMode {
    enum class Kind { ExactRational, Float };

    Kind kind = Kind::Float;
    double tolerance = kDefaultTolerance;

    static NumericMode exact() { return {Kind::ExactRational, 0.0}; }
    static NumericMode floating(double tol = kDefaultTolerance) { return {Kind::Float, tol}; }

    bool is_exact() const { return kind == Kind::ExactRational; }
};

// --- FockPair -------------------------------------------------------------

// |K>_a |L>_b, stored as total S = K + L and difference delta = K - L.
class FockPair {
public:
    int total() const { return total_; }
    int delta() const { return delta_; }
    int mode_a() const { return (total_ + delta_) / 2; }  // K
    int mode_b() const { return (total_ - delta_) / 2; }  // L, also N in |S-N>|N>

    friend bool operator==(const FockPair&, const FockPair&) = default;

private:
    FockPair(int s, int d) : total_(s), delta_(d) {}
    friend FockPair new_fock_pair(int, int);
    friend FockPair from_modes(int, int);

    int total_ = 0;
    int delta_ = 0;
};

FockPair new_fock_pair(int total, int delta);
FockPair from_modes(int k, int l);

// --- BeamSplitter ---------------------------------------------------------

// Reflectivity r in [0,1]; r = sin^2(theta). Transmissivity is always 1 - r.
class BeamSplitter {
public:
    static BeamSplitter from_reflectivity(double r);
    static BeamSplitter from_rational(const Rational& r);
    // Accepts "0.25" or "1/4"; fractions keep an exact rational form.
    static BeamSplitter parse(std::string_view text);

    double reflectivity() const { return r_; }
    double transmissivity() const { return 1.0 - r_; }
    double theta() const;
    const std::optional<Rational>& rational_form() const { return exact_; }
    bool is_rational() const { return exact_.has_value(); }
    const Rational& exact_reflectivity() const;

private:
    BeamSplitter() = default;
    double r_ = 0.0;
    std::optional<Rational> exact_;
};

// --- lattice --------------------------------------------------------------

// {-S, -S+2, ..., S}
std::vector<int> delta_lattice(int total);

inline bool on_lattice(int total, int delta) {
    return total >= 0 && delta >= -total && delta <= total && ((total - delta) % 2 == 0);
}

inline std::size_t lattice_index(int total, int delta) {
    return static_cast<std::size_t>((delta + total) / 2);
}

// Sparse-by-key marginal over Delta_out; used when totals vary (losses) or
// when exporting the full integer range including off-parity sites.
using DeltaMarginal = std::map<int, double>;
using ExactDeltaMarginal = std::map<int, Rational>;

// --- DeltaDistribution ----------------------------------------------------

// Dense probability vector over delta_lattice(S). Carries the exact rational
// values as well when it was produced in ExactRational mode.
class DeltaDistribution {
public:
    DeltaDistribution(int total, std::vector<double> probs, double tolerance = kDefaultTolerance);
    explicit DeltaDistribution(int total, std::vector<Rational> exact);

    int total() const { return total_; }
    std::size_t size() const { return probs_.size(); }
    const std::vector<double>& probs() const { return probs_; }
    bool has_exact() const { return exact_.has_value(); }
    const std::vector<Rational>& exact() const;

    // Probability at any integer Delta_out; zero off the lattice.
    double at(int delta_out) const;
    Rational exact_at(int delta_out) const;

    // Dense map over every integer in [-S, S] (off-parity entries are zeros).
    DeltaMarginal to_marginal() const;
    ExactDeltaMarginal to_exact_marginal() const;

private:
    int total_;
    std::vector<double> probs_;
    std::optional<std::vector<Rational>> exact_;
};

// --- JointCountDistribution -----------------------------------------------

using CountPair = std::pair<int, int>;

class JointCountDistribution {
public:
    JointCountDistribution() = default;
    explicit JointCountDistribution(std::map<CountPair, double> entries);
    explicit JointCountDistribution(std::map<CountPair, Rational> exact);

    const std::map<CountPair, double>& entries() const { return entries_; }
    bool has_exact() const { return exact_.has_value(); }
    const std::map<CountPair, Rational>& exact() const;

    double at(int p, int q) const;
    double total_mass() const;

private:
    std::map<CountPair, double> entries_;
    std::optional<std::map<CountPair, Rational>> exact_;
};

DeltaMarginal delta_marginal(const JointCountDistribution& joint);
ExactDeltaMarginal exact_delta_marginal(const JointCountDistribution& joint);

// Embeds a marginal whose support lies on the S lattice into a dense
// distribution; throws LatticeError for any off-lattice support.
DeltaDistribution to_distribution(int total, const DeltaMarginal& marginal,
                                  double tolerance = kDefaultTolerance);

// Exact-rational helpers.
Rational parse_rational(std::string_view text);
double to_double(const Rational& q);
Rational rational_pow(const Rational& base, int exponent);

}  // namespace homql

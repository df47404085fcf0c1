#include "homql/core_state.hpp"

#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

namespace homql {

FockPair new_fock_pair(int total, int delta) {
    if (total < 0) {
        throw RangeError("total photon number must be non-negative, got " + std::to_string(total));
    }
    if (std::abs(delta) > total) {
        throw RangeError("|delta| = " + std::to_string(std::abs(delta)) + " exceeds S = " +
                         std::to_string(total));
    }
    if ((total - delta) % 2 != 0) {
        throw ParityMismatch("S - delta must be even (S=" + std::to_string(total) +
                             ", delta=" + std::to_string(delta) + ")");
    }
    return FockPair(total, delta);
}

FockPair from_modes(int k, int l) {
    if (k < 0 || l < 0) {
        throw RangeError("mode occupations must be non-negative");
    }
    return FockPair(k + l, k - l);
}

// --- BeamSplitter ---------------------------------------------------------

BeamSplitter BeamSplitter::from_reflectivity(double r) {
    if (!(r >= 0.0 && r <= 1.0)) {
        throw RangeError("reflectivity must lie in [0,1], got " + std::to_string(r));
    }
    BeamSplitter bs;
    bs.r_ = r;
    return bs;
}

BeamSplitter BeamSplitter::from_rational(const Rational& r) {
    if (r < 0 || r > 1) {
        throw RangeError("reflectivity must lie in [0,1], got " + r.get_str());
    }
    BeamSplitter bs;
    bs.exact_ = r;
    bs.exact_->canonicalize();
    bs.r_ = to_double(*bs.exact_);
    return bs;
}

BeamSplitter BeamSplitter::parse(std::string_view text) {
    return from_rational(parse_rational(text));
}

double BeamSplitter::theta() const { return std::asin(std::sqrt(r_)); }

const Rational& BeamSplitter::exact_reflectivity() const {
    if (!exact_) {
        throw ModeError("beam splitter has no exact rational reflectivity");
    }
    return *exact_;
}

// --- lattice --------------------------------------------------------------

std::vector<int> delta_lattice(int total) {
    if (total < 0) {
        throw RangeError("total photon number must be non-negative");
    }
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(total) + 1);
    for (int d = -total; d <= total; d += 2) {
        out.push_back(d);
    }
    return out;
}

// --- DeltaDistribution ----------------------------------------------------

namespace {

void flush_denormals(std::vector<double>& probs) {
    for (auto& p : probs) {
        if (std::abs(p) < kFlushToZero) {
            p = 0.0;
        }
    }
}

}  // namespace

DeltaDistribution::DeltaDistribution(int total, std::vector<double> probs, double tolerance)
    : total_(total), probs_(std::move(probs)) {
    if (total_ < 0 || probs_.size() != static_cast<std::size_t>(total_) + 1) {
        throw RangeError("distribution length must be S+1");
    }
    flush_denormals(probs_);
    double sum = 0.0;
    for (double p : probs_) {
        // Rounding can leave tiny negative residue from cancellation.
        if (p < -tolerance) {
            throw NormalizationError("negative probability " + std::to_string(p));
        }
        sum += p;
    }
    for (auto& p : probs_) {
        if (p < 0.0) {
            p = 0.0;
        }
    }
    if (std::abs(sum - 1.0) > tolerance) {
        throw NormalizationError("distribution sums to " + std::to_string(sum));
    }
}

DeltaDistribution::DeltaDistribution(int total, std::vector<Rational> exact) : total_(total) {
    if (total_ < 0 || exact.size() != static_cast<std::size_t>(total_) + 1) {
        throw RangeError("distribution length must be S+1");
    }
    Rational sum = 0;
    probs_.reserve(exact.size());
    for (const auto& q : exact) {
        if (q < 0) {
            throw NormalizationError("negative probability " + q.get_str());
        }
        sum += q;
        probs_.push_back(to_double(q));
    }
    if (sum != 1) {
        throw NormalizationError("exact distribution sums to " + sum.get_str());
    }
    exact_ = std::move(exact);
}

const std::vector<Rational>& DeltaDistribution::exact() const {
    if (!exact_) {
        throw ModeError("distribution carries no exact values");
    }
    return *exact_;
}

double DeltaDistribution::at(int delta_out) const {
    if (!on_lattice(total_, delta_out)) {
        return 0.0;
    }
    return probs_[lattice_index(total_, delta_out)];
}

Rational DeltaDistribution::exact_at(int delta_out) const {
    const auto& ex = exact();
    if (!on_lattice(total_, delta_out)) {
        return 0;
    }
    return ex[lattice_index(total_, delta_out)];
}

DeltaMarginal DeltaDistribution::to_marginal() const {
    DeltaMarginal m;
    for (int d = -total_; d <= total_; ++d) {
        m[d] = at(d);
    }
    return m;
}

ExactDeltaMarginal DeltaDistribution::to_exact_marginal() const {
    ExactDeltaMarginal m;
    for (int d = -total_; d <= total_; ++d) {
        m[d] = exact_at(d);
    }
    return m;
}

// --- JointCountDistribution -----------------------------------------------

JointCountDistribution::JointCountDistribution(std::map<CountPair, double> entries)
    : entries_(std::move(entries)) {
    for (auto& [key, p] : entries_) {
        if (key.first < 0 || key.second < 0) {
            throw RangeError("photon counts must be non-negative");
        }
        if (std::abs(p) < kFlushToZero) {
            p = 0.0;
        }
        if (p < 0.0) {
            if (p < -kDefaultTolerance) {
                throw NormalizationError("negative joint probability");
            }
            p = 0.0;
        }
    }
}

JointCountDistribution::JointCountDistribution(std::map<CountPair, Rational> exact) {
    for (const auto& [key, q] : exact) {
        if (key.first < 0 || key.second < 0) {
            throw RangeError("photon counts must be non-negative");
        }
        if (q < 0) {
            throw NormalizationError("negative joint probability");
        }
        entries_[key] = to_double(q);
    }
    exact_ = std::move(exact);
}

const std::map<CountPair, Rational>& JointCountDistribution::exact() const {
    if (!exact_) {
        throw ModeError("joint distribution carries no exact values");
    }
    return *exact_;
}

double JointCountDistribution::at(int p, int q) const {
    auto it = entries_.find({p, q});
    return it == entries_.end() ? 0.0 : it->second;
}

double JointCountDistribution::total_mass() const {
    double s = 0.0;
    for (const auto& [key, p] : entries_) {
        s += p;
    }
    return s;
}

DeltaMarginal delta_marginal(const JointCountDistribution& joint) {
    DeltaMarginal m;
    for (const auto& [key, p] : joint.entries()) {
        m[key.first - key.second] += p;
    }
    return m;
}

ExactDeltaMarginal exact_delta_marginal(const JointCountDistribution& joint) {
    ExactDeltaMarginal m;
    for (const auto& [key, q] : joint.exact()) {
        m[key.first - key.second] += q;
    }
    return m;
}

DeltaDistribution to_distribution(int total, const DeltaMarginal& marginal, double tolerance) {
    std::vector<double> probs(static_cast<std::size_t>(total) + 1, 0.0);
    for (const auto& [d, p] : marginal) {
        if (!on_lattice(total, d)) {
            if (p != 0.0) {
                throw LatticeError("mass at delta_out=" + std::to_string(d) +
                                   " lies off the S=" + std::to_string(total) + " lattice");
            }
            continue;
        }
        probs[lattice_index(total, d)] += p;
    }
    return DeltaDistribution(total, std::move(probs), tolerance);
}

// --- rationals ------------------------------------------------------------

Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto bad = [&] { return DomainError("cannot parse '" + s + "' as a number"); };
    if (s.empty()) {
        throw bad();
    }
    if (auto slash = s.find('/'); slash != std::string::npos) {
        Rational q;
        try {
            mpz_class num(s.substr(0, slash), 10);
            mpz_class den(s.substr(slash + 1), 10);
            if (den == 0) {
                throw bad();
            }
            q = Rational(num, den);
        } catch (const std::invalid_argument&) {
            throw bad();
        }
        q.canonicalize();
        return q;
    }

    // Decimal literal, optionally with exponent: read it as the exact rational it denotes.
    std::size_t i = 0;
    bool negative = false;
    if (s[i] == '+' || s[i] == '-') {
        negative = s[i] == '-';
        ++i;
    }
    std::string digits;
    int scale = 0;
    bool seen_dot = false;
    bool any_digit = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            any_digit = true;
            if (seen_dot) {
                ++scale;
            }
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else {
            break;
        }
    }
    if (!any_digit) {
        throw bad();
    }
    int exponent = 0;
    if (i < s.size()) {
        if (s[i] != 'e' && s[i] != 'E') {
            throw bad();
        }
        try {
            std::size_t used = 0;
            exponent = std::stoi(s.substr(i + 1), &used);
            if (i + 1 + used != s.size()) {
                throw bad();
            }
        } catch (const std::logic_error&) {
            throw bad();
        }
    }
    Rational q{mpz_class(digits, 10)};
    q *= rational_pow(Rational(10), exponent - scale);
    if (negative) {
        q = -q;
    }
    q.canonicalize();
    return q;
}

double to_double(const Rational& q) { return q.get_d(); }

Rational rational_pow(const Rational& base, int exponent) {
    if (exponent < 0) {
        if (base == 0) {
            throw DomainError("zero raised to a negative power");
        }
        Rational inv = 1 / base;
        return rational_pow(inv, -exponent);
    }
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
    Rational out(num, den);
    out.canonicalize();
    return out;
}

}  // namespace homql

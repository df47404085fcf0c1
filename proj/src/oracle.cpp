#include "homql/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <shared_mutex>

#include <Eigen/Eigenvalues>

#include "homql/summation.hpp"

namespace homql::oracle {

double AmplitudeVector::norm_squared() const {
    CompensatedSum s;
    for (const auto& a : amplitudes) {
        s.add(std::norm(a));
    }
    return static_cast<double>(s.value());
}

std::complex<double> AmplitudeVector::at(int delta_out) const {
    if (!on_lattice(total, delta_out)) {
        return {0.0, 0.0};
    }
    return amplitudes[lattice_index(total, delta_out)];
}

double hopping_amplitude(int total, int delta) {
    if (!on_lattice(total, delta) || delta < -total + 2) {
        throw LatticeError("no lattice edge between delta=" + std::to_string(delta) + " and " +
                           std::to_string(delta - 2) + " for S=" + std::to_string(total));
    }
    return 0.5 * std::sqrt(static_cast<double>(total + delta) * (total - delta + 2));
}

TridiagonalHamiltonian build_hamiltonian(int total) {
    if (total < 0) {
        throw RangeError("total photon number must be non-negative");
    }
    TridiagonalHamiltonian h;
    h.total = total;
    h.off_diagonal.reserve(static_cast<std::size_t>(total));
    // Edge i joins Delta = 2i - S and Delta = 2i - S + 2.
    for (int i = 0; i < total; ++i) {
        h.off_diagonal.push_back(hopping_amplitude(total, 2 * i - total + 2));
    }
    return h;
}

namespace {

struct Eigensystem {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;  // columns are eigenvectors
};

std::shared_ptr<const Eigensystem> decompose(int total) {
    static std::shared_mutex mutex;
    static std::map<int, std::shared_ptr<const Eigensystem>> cache;
    {
        std::shared_lock lock(mutex);
        if (auto it = cache.find(total); it != cache.end()) {
            return it->second;
        }
    }
    const auto h = build_hamiltonian(total);
    const auto n = static_cast<Eigen::Index>(h.dimension());
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(std::max<Eigen::Index>(n - 1, 0));
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        sub[i] = h.off_diagonal[static_cast<std::size_t>(i)];
    }
    auto sys = std::make_shared<Eigensystem>();
    if (n == 1) {
        sys->values = Eigen::VectorXd::Zero(1);
        sys->vectors = Eigen::MatrixXd::Identity(1, 1);
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
        solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        if (solver.info() != Eigen::Success) {
            throw DomainError("tridiagonal eigensolver failed for S=" + std::to_string(total));
        }
        sys->values = solver.eigenvalues();
        sys->vectors = solver.eigenvectors();
    }
    std::unique_lock lock(mutex);
    auto [it, inserted] = cache.emplace(total, std::move(sys));
    return it->second;
}

}  // namespace

std::vector<double> spectrum(int total) {
    const auto sys = decompose(total);
    return {sys->values.data(), sys->values.data() + sys->values.size()};
}

AmplitudeVector evolve(const FockPair& pair, double theta) {
    const int total = pair.total();
    const auto sys = decompose(total);
    const auto n = sys->values.size();
    const auto start = static_cast<Eigen::Index>(lattice_index(total, pair.delta()));

    // psi = V diag(exp(-i theta lambda)) V^T e_start
    std::vector<std::complex<double>> phase(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        const double lam = sys->values[k];
        phase[static_cast<std::size_t>(k)] =
            std::polar(1.0, -theta * lam) * sys->vectors(start, k);
    }
    AmplitudeVector out;
    out.total = total;
    out.amplitudes.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        std::complex<double> acc{0.0, 0.0};
        for (Eigen::Index k = 0; k < n; ++k) {
            acc += sys->vectors(i, k) * phase[static_cast<std::size_t>(k)];
        }
        out.amplitudes[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

// --- Wigner small-d -------------------------------------------------------

namespace {

constexpr double kRescaleAbove = 1e200;
constexpr double kRescaleBy = 1e-200;

bool valid_spin_label(int two_s, int two_m) {
    return two_s >= 0 && std::abs(two_m) <= two_s && ((two_s - two_m) % 2 == 0);
}

}  // namespace

std::vector<double> wigner_d_column(int two_s, int two_m2, double alpha) {
    if (!valid_spin_label(two_s, two_m2)) {
        throw DomainError("invalid spin labels two_s=" + std::to_string(two_s) +
                          ", two_m=" + std::to_string(two_m2));
    }
    const auto n = static_cast<std::size_t>(two_s) + 1;
    std::vector<double> col(n, 0.0);

    // Reduce alpha to [0, 2pi); each 2pi shift multiplies by (-1)^{2s}.
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double beta = std::fmod(alpha, 2.0 * two_pi);
    if (beta < 0.0) {
        beta += 2.0 * two_pi;
    }
    double overall = 1.0;
    if (beta >= two_pi) {
        beta -= two_pi;
        if (two_s % 2 != 0) {
            overall = -1.0;
        }
    }

    const std::size_t own = static_cast<std::size_t>((two_m2 + two_s) / 2);
    if (beta == 0.0 || n == 1) {
        col[own] = overall;
        return col;
    }

    const double sb = std::sin(beta);
    const double cb = std::cos(beta);
    auto mp2 = [&](std::size_t i) { return -two_s + 2 * static_cast<int>(i); };
    // Raising / lowering matrix elements of J_x (times 2) in doubled labels.
    auto up = [&](std::size_t i) {
        const int m = mp2(i);
        return 0.5 * std::sqrt(static_cast<double>(two_s + m + 2) * (two_s - m));
    };
    auto down = [&](std::size_t i) {
        const int m = mp2(i);
        return 0.5 * std::sqrt(static_cast<double>(two_s - m + 2) * (two_s + m));
    };
    auto diag = [&](std::size_t i) { return (two_m2 - mp2(i) * cb) / sb; };

    // Oscillatory band: where the recurrence is locally neutral.
    std::size_t lo = n;
    std::size_t hi = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double c = diag(i);
        if (c * c < 4.0 * up(i) * down(i)) {
            lo = std::min(lo, i);
            hi = std::max(hi, i);
        }
    }
    if (lo > hi) {
        // No band: the column is a sharp peak; match at the classical centre.
        const double centre = (two_m2 * cb + two_s) / 2.0;
        const auto c = static_cast<std::size_t>(std::clamp(std::lround(centre), 0L, static_cast<long>(n - 1)));
        lo = hi = c;
    }

    // Upward from m' = -s through the left tail into the band.
    std::vector<double> upward(n, 0.0);
    upward[0] = 1.0;
    for (std::size_t i = 0; i < hi; ++i) {
        const double prev = i > 0 ? upward[i - 1] : 0.0;
        upward[i + 1] = (diag(i) * upward[i] - down(i) * prev) / up(i);
        if (std::abs(upward[i + 1]) > kRescaleAbove) {
            for (std::size_t k = 0; k <= i + 1; ++k) {
                upward[k] *= kRescaleBy;
            }
        }
    }

    // Downward from m' = +s through the right tail into the band.
    std::vector<double> downward(n, 0.0);
    downward[n - 1] = 1.0;
    for (std::size_t i = n - 1; i > lo; --i) {
        const double next = i + 1 < n ? downward[i + 1] : 0.0;
        downward[i - 1] = (diag(i) * downward[i] - up(i) * next) / down(i);
        if (std::abs(downward[i - 1]) > kRescaleAbove) {
            for (std::size_t k = i - 1; k < n; ++k) {
                downward[k] *= kRescaleBy;
            }
        }
    }

    // Least-squares match of the two passes over the band.
    long double num = 0.0L;
    long double den = 0.0L;
    for (std::size_t i = lo; i <= hi; ++i) {
        num += static_cast<long double>(upward[i]) * downward[i];
        den += static_cast<long double>(downward[i]) * downward[i];
    }
    const double scale = den > 0.0L ? static_cast<double>(num / den) : 0.0;
    const std::size_t split = (lo + hi) / 2;
    for (std::size_t i = 0; i < n; ++i) {
        col[i] = i <= split ? upward[i] : scale * downward[i];
    }

    double peak = 0.0;
    for (double v : col) {
        peak = std::max(peak, std::abs(v));
    }
    CompensatedSum norm;
    for (double v : col) {
        norm.add(static_cast<long double>(v / peak) * (v / peak));
    }
    const double inv = 1.0 / (peak * std::sqrt(static_cast<double>(norm.value())));
    // d_{-s,m}(beta) = sqrt(C) cos^{s-m}(beta/2) sin^{s+m}(beta/2), sin(beta/2) > 0 here.
    const int s_minus_m = (two_s - two_m2) / 2;
    double sign = overall;
    if (std::cos(beta / 2.0) < 0.0 && (s_minus_m % 2 != 0)) {
        sign = -sign;
    }
    for (auto& v : col) {
        v *= sign * inv;
        if (std::abs(v) < kFlushToZero) {
            v = 0.0;
        }
    }
    return col;
}

double wigner_d(int two_s, int two_m1, int two_m2, double alpha) {
    if (!valid_spin_label(two_s, two_m1) || !valid_spin_label(two_s, two_m2)) {
        throw DomainError("invalid spin labels for d^" + std::to_string(two_s) + "/2");
    }
    const auto col = wigner_d_column(two_s, two_m2, alpha);
    return col[static_cast<std::size_t>((two_m1 + two_s) / 2)];
}

DeltaDistribution oracle_distribution(const FockPair& pair, const BeamSplitter& bs) {
    const auto psi = evolve(pair, bs.theta());
    std::vector<double> probs;
    probs.reserve(psi.amplitudes.size());
    for (const auto& a : psi.amplitudes) {
        probs.push_back(std::norm(a));
    }
    return DeltaDistribution(pair.total(), std::move(probs));
}

}  // namespace homql::oracle

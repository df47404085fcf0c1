#include "homql/binomial.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace homql {

namespace {

struct PascalTriangle {
    std::vector<std::vector<mpz_class>> rows;
    std::vector<std::vector<double>> logs;

    PascalTriangle() {
        rows.resize(kPascalRows + 1);
        logs.resize(kPascalRows + 1);
        for (int n = 0; n <= kPascalRows; ++n) {
            auto& row = rows[static_cast<std::size_t>(n)];
            row.resize(static_cast<std::size_t>(n) + 1);
            row.front() = 1;
            row.back() = 1;
            for (int k = 1; k < n; ++k) {
                const auto& prev = rows[static_cast<std::size_t>(n - 1)];
                row[static_cast<std::size_t>(k)] =
                    prev[static_cast<std::size_t>(k - 1)] + prev[static_cast<std::size_t>(k)];
            }
            auto& lrow = logs[static_cast<std::size_t>(n)];
            lrow.reserve(row.size());
            for (const auto& c : row) {
                // mpz -> long double via mantissa/exponent keeps large rows finite.
                long exp = 0;
                double mant = mpz_get_d_2exp(&exp, c.get_mpz_t());
                lrow.push_back(std::log(mant) + static_cast<double>(exp) * std::log(2.0));
            }
        }
    }
};

// Built once on first use; read-only afterwards.
const PascalTriangle& pascal() {
    static const PascalTriangle table;
    return table;
}

}  // namespace

mpz_class binomial_exact(int n, int k) {
    if (n < 0 || k < 0 || k > n) {
        return 0;
    }
    if (n <= kPascalRows) {
        return pascal().rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
    }
    mpz_class out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return out;
}

mpz_class factorial_exact(int n) {
    mpz_class out;
    mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n < 0 ? 0 : n));
    return out;
}

double binomial(int n, int k) {
    if (n < 0 || k < 0 || k > n) {
        return 0.0;
    }
    if (n <= kPascalRows) {
        return pascal().rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)].get_d();
    }
    return std::exp(log_binomial(n, k));
}

double log_binomial(int n, int k) {
    if (n < 0 || k < 0 || k > n) {
        return -std::numeric_limits<double>::infinity();
    }
    if (n <= kPascalRows) {
        return pascal().logs[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
    }
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

}  // namespace homql

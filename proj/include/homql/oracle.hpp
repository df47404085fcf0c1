// oracle.hpp
// Brute-force ground truth for the leap. The beam splitter restricted to the
// fixed-S sector is a symmetric tridiagonal hopping matrix on the Delta
// lattice; exponentiating it gives the output amplitudes directly. The same
// amplitudes are Wigner small-d elements of a spin-S/2 rotation by 2*theta.

#pragma once

#include <complex>
#include <vector>

#include "homql/core_state.hpp"

namespace homql::oracle {

struct TridiagonalHamiltonian {
    int total = 0;
    // off_diagonal[i] couples lattice sites i and i+1 (Delta = 2i-S and 2i-S+2).
    std::vector<double> off_diagonal;

    std::size_t dimension() const { return static_cast<std::size_t>(total) + 1; }
};

struct AmplitudeVector {
    int total = 0;
    std::vector<std::complex<double>> amplitudes;  // indexed by lattice_index

    double norm_squared() const;
    std::complex<double> at(int delta_out) const;
};

// Jump amplitude between Delta and Delta-2: sqrt((S+Delta)(S-Delta+2)) / 2.
double hopping_amplitude(int total, int delta);

TridiagonalHamiltonian build_hamiltonian(int total);

// Eigenvalues of the hopping matrix, ascending.
std::vector<double> spectrum(int total);

// exp(-i theta H)|Delta> via the cached eigendecomposition.
AmplitudeVector evolve(const FockPair& pair, double theta);

// Spin rotation angle for a beam splitter with r = sin^2(theta).
inline double rotation_angle(double theta) { return 2.0 * theta; }

// d^{s}_{m1,m2}(alpha) with s = two_s/2 etc. (Condon-Shortley / Rose convention).
double wigner_d(int two_s, int two_m1, int two_m2, double alpha);

// Whole column d^{s}_{m1, m2}(alpha) for m1 = -s..s, computed by a three-term
// recurrence run inward from both edges and matched in the oscillatory band.
std::vector<double> wigner_d_column(int two_s, int two_m2, double alpha);

DeltaDistribution oracle_distribution(const FockPair& pair, const BeamSplitter& bs);

}  // namespace homql::oracle

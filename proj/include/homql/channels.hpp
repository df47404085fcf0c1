// channels.hpp
// Imperfections and extensions on top of the pure leap: partial
// distinguishability, mixed (thinned) Fock sources, lossy detectors with
// finite count resolution, and the two-polarization product walk.

#pragma once

#include <map>
#include <optional>
#include <utility>

#include "homql/core_state.hpp"

namespace homql::channels {

// Polarization rotation angle y in [0, pi/2] applied to one input beam.
class DistinguishabilityAngle {
public:
    static DistinguishabilityAngle from_radians(double y);
    // Exact form, cos^2 y = c in [0,1]; enables ExactRational evaluation.
    static DistinguishabilityAngle from_cos_squared(const Rational& c);

    double radians() const { return y_; }
    double cos_squared() const;
    const std::optional<Rational>& exact_cos_squared() const { return cos2_; }

private:
    double y_ = 0.0;
    std::optional<Rational> cos2_;
};

// Which input beam carries the rotated polarization. A holds S-N photons,
// B holds N.
enum class RotatedBeam { A, B };

DeltaDistribution decohere_distribution(int total, int n, const DistinguishabilityAngle& y,
                                        const BeamSplitter& bs,
                                        const NumericMode& mode = NumericMode::floating(),
                                        RotatedBeam rotated = RotatedBeam::A);

// Coherent evolution of the same input on all four modes (two ports x two
// polarizations). Dense in C(S+3,3) basis states; meant for small S.
DeltaDistribution four_mode_decohere_distribution(int total, int n,
                                                  const DistinguishabilityAngle& y,
                                                  const BeamSplitter& bs,
                                                  RotatedBeam rotated = RotatedBeam::A);

// Distribution of Delta_out for M photons entering one port with the other
// port empty (independent binomial splitting). from_a selects the entry port.
DeltaDistribution vacuum_splitting(int photons, bool from_a, const BeamSplitter& bs,
                                   const NumericMode& mode = NumericMode::floating());

// Discrete convolution on Delta: the result lives on the (S1+S2) lattice.
DeltaDistribution convolve(const DeltaDistribution& lhs, const DeltaDistribution& rhs);

// --- mixed sources ---------------------------------------------------------

// rho = sum_k C(K,k) eta^{K-k} (1-eta)^k |K-k><K-k| : each photon survives with eta.
class MixedFockSource {
public:
    MixedFockSource(int nominal, double eta);
    MixedFockSource(int nominal, const Rational& eta);

    int nominal() const { return nominal_; }
    double eta() const { return eta_; }
    const std::optional<Rational>& exact_eta() const { return exact_eta_; }

    // Weight of the component with j photons, j = 0..K.
    double weight(int photons) const;
    Rational exact_weight(int photons) const;

private:
    int nominal_;
    double eta_;
    std::optional<Rational> exact_eta_;
};

JointCountDistribution mixed_distribution(const MixedFockSource& a, const MixedFockSource& b,
                                          const BeamSplitter& bs,
                                          const NumericMode& mode = NumericMode::floating());

double purity(const MixedFockSource& src);
Rational exact_purity(const MixedFockSource& src);

// Bisection on eta in [1/2, 1] for sum_k w_k^2 = target.
double eta_for_purity(int nominal, double target, double tolerance = 1e-12);

// Same, for the two-mode input rho_K (x) rho_L sharing one eta.
double eta_for_joint_purity(int nominal_a, int nominal_b, double target, double tolerance = 1e-12);

// --- detection -------------------------------------------------------------

struct Detector {
    double efficiency = 1.0;  // in (0, 1]
    int resolution = 1;       // count bin width

    void validate() const;
};

JointCountDistribution apply_detector_loss(const JointCountDistribution& joint, const Detector& det);

// Contiguous bins of the given width; bin b covers [b*w - w/2, b*w + w/2) and
// is keyed by its centre b*w. Ties at edges go to the higher bin.
std::map<int, double> bin_resolution(const DeltaMarginal& marginal, int width);

// --- two polarizations -----------------------------------------------------

using Grid2D = std::map<std::pair<int, int>, double>;

Grid2D product_2d(const DeltaDistribution& horizontal, const DeltaDistribution& vertical);

}  // namespace homql::channels

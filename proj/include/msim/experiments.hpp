#pragma once

#include <array>
#include <numbers>

#include "msim/optics.hpp"
#include "msim/states.hpp"

namespace msim {

inline const Complex kEqualAmplitude{1.0 / std::numbers::sqrt2, 0.0};

/// Coincidence probabilities; index 1 is each photon's first detector
/// (first output port of its beam splitter).
struct JointDistribution {
  double p11 = 0.0;
  double p12 = 0.0;
  double p21 = 0.0;
  double p22 = 0.0;

  /// Validates each entry in [0, 1] and unit sum within kTolExact.
  static JointDistribution make(double p11, double p12, double p21, double p22);
  /// Born-rule distribution of a two-photon state on 2 x 2 detector modes.
  static JointDistribution from_state(const StateVector& out);

  double agreement() const { return p11 + p22; }
  double disagreement() const { return p12 + p21; }
  /// (p(detector 1), p(detector 2)) seen by one side alone.
  std::array<double, 2> marginal(Side side) const;
};

struct CorrelationValue {
  double e = 0.0;

  static CorrelationValue from(const JointDistribution& d) { return {d.agreement() - d.disagreement()}; }
};

JointDistribution rto_joint(PhaseSettings settings, Complex c1 = kEqualAmplitude,
                            Complex c2 = kEqualAmplitude);

CorrelationValue rto_correlation(PhaseSettings settings, Complex c1 = kEqualAmplitude,
                                 Complex c2 = kEqualAmplitude);

std::array<double, 2> singles_marginals(PhaseSettings settings, Complex c1, Complex c2, Side side);

struct ChshResult {
  std::array<double, 4> angles{};        // a, a', b, b'
  std::array<double, 4> correlations{};  // E(a,b), E(a,b'), E(a',b), E(a',b')
  double value = 0.0;

  bool violates() const { return value > 2.0; }
};

/// S = E(a,b) + E(a,b') + E(a',b) - E(a',b'), with phi_S taking the a angles
/// and phi_A the b angles.
ChshResult chsh_terms(double a, double a_prime, double b, double b_prime,
                      Complex c1 = kEqualAmplitude, Complex c2 = kEqualAmplitude);

double chsh(double a, double a_prime, double b, double b_prime);

/// Standard settings for the maximal violation.
inline constexpr std::array<double, 4> kChshOptimalAngles{0.0, std::numbers::pi / 2,
                                                          std::numbers::pi / 4,
                                                          -std::numbers::pi / 4};

/// Single-photon fringe visibility of S, read from the off-diagonal of its
/// reduced state in the measurement state with detector overlap gamma.
double fringe_visibility(DetectorOverlap gamma, Complex c1 = kEqualAmplitude,
                         Complex c2 = kEqualAmplitude);

/// Induced-coherence set-up with a barrier of the given amplitude
/// transmission in the idler path, modelled as a which-path overlap.
double zwm_scan(double barrier_transmission, Complex c1 = kEqualAmplitude,
                Complex c2 = kEqualAmplitude);

struct SinglesFringe {
  double p_s = 0.0;  // P(detector 1) for photon S
  double p_a = 0.0;  // P(detector 1) for photon A
};

/// The RTO circuit driven by a product of two single-photon path superpositions.
SinglesFringe unentangled_control(PhaseSettings settings);

/// Both photons in (|solid> + |dashed>)/sqrt2, independently.
StateVector unentangled_source();

/// Ideal measurement state c1|solid,solid> + c2|dashed,dashed> on the mode space.
StateVector entangled_source(Complex c1 = kEqualAmplitude, Complex c2 = kEqualAmplitude);

/// Visibility (max - min)/(max + min) of one side's detector-1 singles rate as
/// its own phase is swept through the RTO circuit, remote phase held at 0.
double singles_visibility(const StateVector& source, Side side);

}  // namespace msim

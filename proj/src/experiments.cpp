#include "msim/experiments.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace msim {

namespace {

constexpr Dims kModes{2, 2};

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

}  // namespace

JointDistribution JointDistribution::make(double p11, double p12, double p21, double p22) {
  for (double p : {p11, p12, p21, p22})
    if (!is_probability(p))
      throw std::invalid_argument("joint probability " + std::to_string(p) + " outside [0, 1]");
  const double sum = p11 + p12 + p21 + p22;
  if (std::abs(sum - 1.0) > kTolExact)
    throw std::invalid_argument("joint distribution sums to " + std::to_string(sum));
  return JointDistribution{p11, p12, p21, p22};
}

JointDistribution JointDistribution::from_state(const StateVector& out) {
  if (out.dim() != kModes.total())
    throw std::invalid_argument("joint distribution needs a 2x2-mode two-photon state");
  std::array<double, 4> p{};
  double total = 0.0;
  for (std::size_t k = 0; k < 4; ++k) total += p[k] = std::norm(out[k]);
  for (double& x : p) x /= total;
  return make(p[0], p[1], p[2], p[3]);
}

std::array<double, 2> JointDistribution::marginal(Side side) const {
  if (side == Side::S) return {p11 + p12, p21 + p22};
  return {p11 + p21, p12 + p22};
}

StateVector entangled_source(Complex c1, Complex c2) {
  make_superposition(c1, c2);
  CVector v = CVector::Zero(4);
  v(kSolid * 2 + kSolid) = c1;
  v(kDashed * 2 + kDashed) = c2;
  return StateVector(std::move(v));
}

StateVector unentangled_source() {
  const StateVector single = make_superposition(kEqualAmplitude, kEqualAmplitude);
  return tensor(single, single);
}

JointDistribution rto_joint(PhaseSettings settings, Complex c1, Complex c2) {
  return JointDistribution::from_state(build_rto_circuit(settings).apply(entangled_source(c1, c2)));
}

CorrelationValue rto_correlation(PhaseSettings settings, Complex c1, Complex c2) {
  return CorrelationValue::from(rto_joint(settings, c1, c2));
}

std::array<double, 2> singles_marginals(PhaseSettings settings, Complex c1, Complex c2, Side side) {
  return rto_joint(settings, c1, c2).marginal(side);
}

ChshResult chsh_terms(double a, double a_prime, double b, double b_prime, Complex c1, Complex c2) {
  ChshResult r;
  r.angles = {a, a_prime, b, b_prime};
  r.correlations = {rto_correlation({a, b}, c1, c2).e, rto_correlation({a, b_prime}, c1, c2).e,
                    rto_correlation({a_prime, b}, c1, c2).e,
                    rto_correlation({a_prime, b_prime}, c1, c2).e};
  r.value = r.correlations[0] + r.correlations[1] + r.correlations[2] - r.correlations[3];
  return r;
}

double chsh(double a, double a_prime, double b, double b_prime) {
  return chsh_terms(a, a_prime, b, b_prime).value;
}

double fringe_visibility(DetectorOverlap gamma, Complex c1, Complex c2) {
  const DensityOperator rho = local_state(make_measurement_state(c1, c2, gamma), Side::S);
  // For a two-path state the fringe visibility is 2|rho_12|.
  return 2.0 * std::abs(rho(0, 1));
}

double zwm_scan(double barrier_transmission, Complex c1, Complex c2) {
  if (!std::isfinite(barrier_transmission) || barrier_transmission < 0.0 ||
      barrier_transmission > 1.0)
    throw std::invalid_argument("barrier transmission must lie in [0, 1]");
  return fringe_visibility(DetectorOverlap(Complex{barrier_transmission, 0.0}), c1, c2);
}

SinglesFringe unentangled_control(PhaseSettings settings) {
  const JointDistribution d =
      JointDistribution::from_state(build_rto_circuit(settings).apply(unentangled_source()));
  return {d.marginal(Side::S)[0], d.marginal(Side::A)[0]};
}

double singles_visibility(const StateVector& source, Side side) {
  // A local phase enters one amplitude linearly, so the detector-1 rate is
  // exactly m + b cos(phi) + c sin(phi); four quadrature samples recover it.
  std::array<double, 4> p{};
  for (std::size_t k = 0; k < 4; ++k) {
    const double phi = static_cast<double>(k) * std::numbers::pi / 2.0;
    const PhaseSettings settings = side == Side::S ? PhaseSettings{phi, 0.0} : PhaseSettings{0.0, phi};
    p[k] = JointDistribution::from_state(build_rto_circuit(settings).apply(source)).marginal(side)[0];
  }
  const double mean = 0.25 * (p[0] + p[1] + p[2] + p[3]);
  const double amplitude = std::hypot(0.5 * (p[0] - p[2]), 0.5 * (p[1] - p[3]));
  return mean > 0.0 ? amplitude / mean : 0.0;
}

}  // namespace msim

#include "msim/optics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace msim {

ModeUnitary::ModeUnitary(CMatrix u) : u_(std::move(u)) {
  if (u_.rows() != u_.cols() || u_.rows() == 0)
    throw std::invalid_argument("mode unitary must be square and non-empty");
  if (dim() > kMaxDim) throw std::length_error("mode unitary exceeds maximum dimension");
  if (!(u_.real().allFinite() && u_.imag().allFinite()))
    throw std::invalid_argument("mode unitary entries must be finite");
  const double dev = unitarity_deviation(u_);
  if (dev > kTolNorm)
    throw std::invalid_argument("matrix is not unitary (deviation " + std::to_string(dev) + ")");
}

ModeUnitary ModeUnitary::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return ModeUnitary(CMatrix::Identity(n, n));
}

StateVector ModeUnitary::apply(const StateVector& psi) const {
  if (psi.dim() != dim()) throw std::invalid_argument("state and unitary dimensions differ");
  return StateVector(u_ * psi.amps());
}

ModeUnitary ModeUnitary::operator*(const ModeUnitary& rhs) const {
  if (rhs.dim() != dim()) throw std::invalid_argument("cannot compose unitaries of different size");
  return ModeUnitary(u_ * rhs.u_);
}

PhaseSettings::PhaseSettings(double s, double a) : phi_s(s), phi_a(a) {
  if (!std::isfinite(s) || !std::isfinite(a))
    throw std::invalid_argument("phase settings must be finite");
}

double wrap_phase(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(phi, two_pi);
  if (w < 0.0) w += two_pi;
  return w >= two_pi ? 0.0 : w;
}

PhaseSettings PhaseSettings::canonical() const {
  return PhaseSettings(wrap_phase(phi_s), wrap_phase(phi_a));
}

ModeUnitary beam_splitter_5050() {
  const double h = 1.0 / std::numbers::sqrt2;
  CMatrix b(2, 2);
  b << Complex{h, 0.0}, Complex{0.0, h},  //
      Complex{0.0, h}, Complex{h, 0.0};
  return ModeUnitary(std::move(b));
}

ModeUnitary phase_shifter(double phi, std::size_t branch, std::size_t modes) {
  if (!std::isfinite(phi)) throw std::invalid_argument("phase must be finite");
  if (branch >= modes) throw std::invalid_argument("phase shifter branch out of range");
  const auto n = static_cast<Eigen::Index>(modes);
  CMatrix p = CMatrix::Identity(n, n);
  p(static_cast<Eigen::Index>(branch), static_cast<Eigen::Index>(branch)) = std::polar(1.0, phi);
  return ModeUnitary(std::move(p));
}

ModeUnitary embed_local(const ModeUnitary& u, Side side, Dims dims) {
  if (u.dim() != dims.of(side))
    throw std::invalid_argument(std::string("embed_local: unitary does not match side ") +
                                to_string(side) + " dimension");
  if (dims.total() > kMaxDim) throw std::length_error("embedded dimension exceeds maximum");
  const auto other = static_cast<Eigen::Index>(side == Side::S ? dims.a : dims.s);
  const CMatrix eye = CMatrix::Identity(other, other);
  const CMatrix& left = side == Side::S ? u.matrix() : eye;
  const CMatrix& right = side == Side::S ? eye : u.matrix();
  CMatrix out(left.rows() * right.rows(), left.cols() * right.cols());
  for (Eigen::Index i = 0; i < left.rows(); ++i)
    for (Eigen::Index j = 0; j < left.cols(); ++j)
      out.block(i * right.rows(), j * right.cols(), right.rows(), right.cols()) = left(i, j) * right;
  return ModeUnitary(std::move(out));
}

ModeUnitary build_rto_circuit(PhaseSettings settings) {
  const Dims modes{2, 2};
  const ModeUnitary bs = beam_splitter_5050();
  const ModeUnitary splitters = embed_local(bs, Side::S, modes) * embed_local(bs, Side::A, modes);
  const ModeUnitary phases =
      embed_local(phase_shifter(settings.phi_s + kRtoCalibrationPhase, kSolid), Side::S, modes) *
      embed_local(phase_shifter(settings.phi_a, kDashed), Side::A, modes);
  return splitters * phases;
}

}  // namespace msim

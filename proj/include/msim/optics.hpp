#pragma once

#include <numbers>

#include "msim/qmath.hpp"

namespace msim {

/// Unitary acting on optical path modes (single photon: one amplitude per mode).
class ModeUnitary {
 public:
  /// Throws unless `u` is square, within kMaxDim and unitary to kTolNorm.
  explicit ModeUnitary(CMatrix u);

  static ModeUnitary identity(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(u_.rows()); }
  const CMatrix& matrix() const { return u_; }

  StateVector apply(const StateVector& psi) const;

  /// Composition: (*this * rhs) applies rhs first.
  ModeUnitary operator*(const ModeUnitary& rhs) const;

 private:
  CMatrix u_;
};

/// Interferometer phase settings for photons S and A (radians).
struct PhaseSettings {
  double phi_s = 0.0;
  double phi_a = 0.0;

  PhaseSettings() = default;
  PhaseSettings(double s, double a);

  /// Settings wrapped into [0, 2pi); reporting only.
  PhaseSettings canonical() const;
};

double wrap_phase(double phi);

/// Fixed phase on the S solid arm that puts correlation +1 at phi_S = phi_A = 0.
/// Absorbs the beam-splitter and mirror phase conventions.
inline constexpr double kRtoCalibrationPhase = std::numbers::pi;

/// Mode indices within each photon's two-mode space.
inline constexpr std::size_t kSolid = 0;
inline constexpr std::size_t kDashed = 1;

/// Symmetric 50:50 splitter (1/sqrt2) [[1, i], [i, 1]].
ModeUnitary beam_splitter_5050();

/// Diagonal unitary with e^{i phi} on `branch` and 1 on the other modes.
ModeUnitary phase_shifter(double phi, std::size_t branch, std::size_t modes = 2);

/// u (x) I for side S, I (x) u for side A.
ModeUnitary embed_local(const ModeUnitary& u, Side side, Dims dims);

/// Two-photon interferometer on (S solid, S dashed) (x) (A solid, A dashed):
/// phase shifts first, then a beam splitter per photon. phi_S (plus the
/// calibration phase) sits on S's solid arm and phi_A on A's dashed arm, so
/// each local phase lengthens a different branch of the pair state.
ModeUnitary build_rto_circuit(PhaseSettings settings);

}  // namespace msim

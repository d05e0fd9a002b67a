#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "msim/stochastics.hpp"

namespace msim {

enum class AuditMode { Exact, Sampled };

const char* to_string(AuditMode mode);

/// Exact audits compare marginal probabilities directly.
inline constexpr double kExactAuditTolerance = 1e-12;
/// Sampled audits measure deviations in pooled standard errors.
inline constexpr double kSampledAuditSigma = 5.0;
inline constexpr std::uint64_t kMinAuditTrials = 100;

/// Outcome of checking that one side's singles do not move with the remote phase.
struct AuditReport {
  Side side = Side::A;
  AuditMode mode = AuditMode::Exact;
  double local_phase = 0.0;
  std::vector<double> grid;  // remote phase values
  /// Per grid point: local detector-1 probability (exact) or frequency (sampled).
  std::vector<double> local_p1;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::uint64_t trials_per_point = 0;  // sampled mode only
  std::uint64_t seed = 0;              // sampled mode only

  bool pass() const { return max_deviation <= tolerance; }
};

/// Joint coincidence distribution as a function of the remote phase.
using JointSource = std::function<JointDistribution(double remote_phase)>;

/// The ideal measurement state through the RTO circuit, with the audited side
/// held at `local_phase`.
JointSource rto_source(Side side, double local_phase, Complex c1, Complex c2);

/// Max pairwise l-infinity distance between the side's marginal vectors over the grid.
AuditReport audit_exact(Side side, std::span<const double> remote_grid, const JointSource& source);

AuditReport audit_exact(Side side, double local_phase, std::span<const double> remote_grid,
                        Complex c1 = kEqualAmplitude, Complex c2 = kEqualAmplitude);

/// Samples `trials_per_point` coincidences at each grid point (stream i of
/// `seed` for point i) and reports the largest two-proportion z statistic,
/// using the pooled standard error, between any two points.
AuditReport audit_sampled(Side side, std::span<const double> remote_grid,
                          std::uint64_t trials_per_point, std::uint64_t seed,
                          const JointSource& source);

AuditReport audit_sampled(Side side, std::span<const double> remote_grid,
                          std::uint64_t trials_per_point, std::uint64_t seed,
                          Complex c1 = kEqualAmplitude, Complex c2 = kEqualAmplitude);

/// n evenly spaced points over [start, stop], endpoints included; n == 1 gives {start}.
std::vector<double> linspace(double start, double stop, std::size_t n);

}  // namespace msim

#include "msim/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace msim {

namespace {

void require_grid(std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("audit grid must not be empty");
  for (double phi : grid)
    if (!std::isfinite(phi)) throw std::invalid_argument("audit grid values must be finite");
}

double two_proportion_z(std::uint64_t k1, std::uint64_t k2, std::uint64_t n1, std::uint64_t n2) {
  const double f1 = static_cast<double>(k1) / static_cast<double>(n1);
  const double f2 = static_cast<double>(k2) / static_cast<double>(n2);
  const double pooled = static_cast<double>(k1 + k2) / static_cast<double>(n1 + n2);
  const double se = std::sqrt(pooled * (1.0 - pooled) *
                              (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
  const double diff = std::abs(f1 - f2);
  if (se == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / se;
}

}  // namespace

const char* to_string(AuditMode mode) { return mode == AuditMode::Exact ? "exact" : "sampled"; }

JointSource rto_source(Side side, double local_phase, Complex c1, Complex c2) {
  make_superposition(c1, c2);
  return [=](double remote) {
    const PhaseSettings settings =
        side == Side::S ? PhaseSettings{local_phase, remote} : PhaseSettings{remote, local_phase};
    return rto_joint(settings, c1, c2);
  };
}

AuditReport audit_exact(Side side, std::span<const double> remote_grid, const JointSource& source) {
  require_grid(remote_grid);
  AuditReport report;
  report.side = side;
  report.mode = AuditMode::Exact;
  report.tolerance = kExactAuditTolerance;
  report.grid.assign(remote_grid.begin(), remote_grid.end());

  std::vector<std::array<double, 2>> marginals;
  marginals.reserve(remote_grid.size());
  for (double phi : remote_grid) {
    marginals.push_back(source(phi).marginal(side));
    report.local_p1.push_back(marginals.back()[0]);
  }
  for (std::size_t i = 0; i < marginals.size(); ++i)
    for (std::size_t j = i + 1; j < marginals.size(); ++j)
      for (std::size_t k = 0; k < 2; ++k)
        report.max_deviation =
            std::max(report.max_deviation, std::abs(marginals[i][k] - marginals[j][k]));
  return report;
}

AuditReport audit_exact(Side side, double local_phase, std::span<const double> remote_grid,
                        Complex c1, Complex c2) {
  AuditReport report = audit_exact(side, remote_grid, rto_source(side, local_phase, c1, c2));
  report.local_phase = local_phase;
  return report;
}

AuditReport audit_sampled(Side side, std::span<const double> remote_grid,
                          std::uint64_t trials_per_point, std::uint64_t seed,
                          const JointSource& source) {
  require_grid(remote_grid);
  if (trials_per_point < kMinAuditTrials)
    throw std::invalid_argument("sampled audit needs at least " + std::to_string(kMinAuditTrials) +
                                " trials per grid point");
  AuditReport report;
  report.side = side;
  report.mode = AuditMode::Sampled;
  report.tolerance = kSampledAuditSigma;
  report.trials_per_point = trials_per_point;
  report.seed = seed;
  report.grid.assign(remote_grid.begin(), remote_grid.end());

  std::vector<std::uint64_t> hits;
  hits.reserve(remote_grid.size());
  for (std::size_t i = 0; i < remote_grid.size(); ++i) {
    const EventTally tally =
        sample_events(source(remote_grid[i]), trials_per_point, derive_stream_seed(seed, i));
    hits.push_back(tally.detector1(side));
    report.local_p1.push_back(static_cast<double>(hits.back()) /
                              static_cast<double>(trials_per_point));
  }
  // Two-outcome marginals: both components move together, so one z per pair.
  for (std::size_t i = 0; i < hits.size(); ++i)
    for (std::size_t j = i + 1; j < hits.size(); ++j)
      report.max_deviation = std::max(
          report.max_deviation, two_proportion_z(hits[i], hits[j], trials_per_point, trials_per_point));
  return report;
}

AuditReport audit_sampled(Side side, std::span<const double> remote_grid,
                          std::uint64_t trials_per_point, std::uint64_t seed, Complex c1,
                          Complex c2) {
  return audit_sampled(side, remote_grid, trials_per_point, seed, rto_source(side, 0.0, c1, c2));
}

std::vector<double> linspace(double start, double stop, std::size_t n) {
  if (n == 0) throw std::invalid_argument("linspace needs at least one point");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = start;
    return out;
  }
  const double step = (stop - start) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = start + step * static_cast<double>(i);
  out.back() = stop;
  return out;
}

}  // namespace msim

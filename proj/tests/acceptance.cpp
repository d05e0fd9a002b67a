// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "msim/audit.hpp"
#include "msim/experiments.hpp"
#include "msim/states.hpp"
#include "msim/stochastics.hpp"

namespace {

using namespace msim;

constexpr double kPi = std::numbers::pi;
constexpr std::array<std::uint64_t, 3> kGoldenSeeds{1, 7, 42};
constexpr int kPropertyDraws = 1000;

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Accumulates the worst value of a metric against its threshold.
struct Worst {
  double value = 0.0;
  void update(double v) { value = std::max(value, std::isnan(v) ? INFINITY : v); }
};

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

std::pair<Complex, Complex> random_amplitudes(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double theta = unit(rng) * kPi / 2.0;
  return {std::polar(std::cos(theta), 2.0 * kPi * unit(rng)), std::polar(std::sin(theta), 2.0 * kPi * unit(rng))};
}

Outcome correlation_fringe() {
  const auto start = Clock::now();
  Worst err;
  for (double phi_a : {0.0, 1.3, -2.1})
    for (double d : linspace(0.0, 2.0 * kPi, 25)) err.update(std::abs(rto_correlation({d + phi_a, phi_a}).e - std::cos(d)));
  Worst anchors;
  anchors.update(std::abs(rto_correlation({0.0, 0.0}).e - 1.0));
  anchors.update(std::abs(rto_correlation({kPi / 2, 0.0}).e - 0.0));
  anchors.update(std::abs(rto_correlation({kPi, 0.0}).e + 1.0));
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return {err.value <= 1e-12 && anchors.value <= 1e-12 && seconds < 1.0,
          fmt("max |E - cos| = %.3g, anchor error %.3g", err.value, anchors.value) + fmt(", %.3f s", seconds)};
}

Outcome agreement_mapping() {
  const JointDistribution plus = rto_joint({kPi / 3, 0.0});
  const JointDistribution minus = rto_joint({2 * kPi / 3, 0.0});
  const double e_plus = CorrelationValue::from(plus).e;
  const double e_minus = CorrelationValue::from(minus).e;
  const bool ok = std::abs(e_plus - 0.5) <= 1e-12 && std::abs(plus.agreement() - 0.75) <= 1e-12 &&
                  std::abs(e_minus + 0.5) <= 1e-12 && std::abs(minus.disagreement() - 0.75) <= 1e-12;
  return {ok, fmt("E=+0.5 -> agree %.15g; ", plus.agreement()) + fmt("E=-0.5 -> disagree %.15g", minus.disagreement())};
}

Outcome no_signaling() {
  const auto grid = linspace(0.0, 2.0 * kPi, 25);
  Worst exact;
  for (Side side : {Side::S, Side::A})
    for (double local : grid) {
      const AuditReport r = audit_exact(side, local, grid);
      exact.update(r.pass() ? r.max_deviation : INFINITY);
    }
  Worst sigma;
  for (Side side : {Side::S, Side::A})
    for (std::uint64_t seed : kGoldenSeeds) {
      const AuditReport r = audit_sampled(side, grid, 100000, seed);
      sigma.update(r.pass() ? r.max_deviation : INFINITY);
    }
  return {exact.value <= 1e-12 && sigma.value <= 5.0,
          fmt("exact 25x25 max dev %.3g; sampled max %.3f sigma (N=1e5)", exact.value, sigma.value)};
}

Outcome local_mixtures() {
  std::mt19937_64 rng(101);
  Worst diag_err;
  Worst offdiag;
  auto check = [&](Complex c1, Complex c2) {
    const BipartitePureState ms = make_measurement_state(c1, c2);
    for (Side side : {Side::S, Side::A}) {
      const DensityOperator rho = local_state(ms, side);
      diag_err.update(std::abs(rho(0, 0) - std::norm(c1)));
      diag_err.update(std::abs(rho(1, 1) - std::norm(c2)));
      offdiag.update(coherence(rho));
    }
  };
  check(0.6, 0.8);
  for (int k = 0; k < kPropertyDraws; ++k) {
    const auto [c1, c2] = random_amplitudes(rng);
    check(c1, c2);
  }
  const BipartitePureState degenerate = make_measurement_state(kEqualAmplitude, kEqualAmplitude);
  Worst half;
  for (Side side : {Side::S, Side::A})
    half.update((local_state(degenerate, side).matrix() - 0.5 * CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff());
  return {diag_err.value <= 1e-12 && offdiag.value <= 1e-12 && half.value <= 1e-12,
          fmt("diag err %.3g, off-diagonal mass %.3g", diag_err.value, offdiag.value) +
              fmt(", |rho - I/2| %.3g", half.value)};
}

Outcome schmidt_structure() {
  std::mt19937_64 rng(103);
  Worst coeff_err;
  int flag_mismatches = 0;
  auto check = [&](Complex c1, Complex c2) {
    const SchmidtForm f = schmidt(make_measurement_state(c1, c2));
    const double hi = std::max(std::abs(c1), std::abs(c2));
    const double lo = std::min(std::abs(c1), std::abs(c2));
    coeff_err.update(std::abs(f.coeffs[0] - hi));
    coeff_err.update(std::abs((f.rank() > 1 ? f.coeffs[1] : 0.0) - lo));
    if (f.degenerate != (std::abs(hi - lo) < kTolNorm)) ++flag_mismatches;
  };
  check(0.6, 0.8);
  check(kEqualAmplitude, kEqualAmplitude);
  check(std::sqrt(0.5 + 1e-11), std::sqrt(0.5 - 1e-11));
  check(std::sqrt(0.5 + 1e-6), std::polar(std::sqrt(0.5 - 1e-6), 1.0));
  for (int k = 0; k < kPropertyDraws; ++k) {
    const auto [c1, c2] = random_amplitudes(rng);
    check(c1, c2);
  }
  const bool degenerate_flagged = schmidt(make_measurement_state(kEqualAmplitude, kEqualAmplitude)).degenerate;
  const bool distinct_clear = !schmidt(make_measurement_state(0.6, 0.8)).degenerate;
  return {coeff_err.value <= 1e-9 && flag_mismatches == 0 && degenerate_flagged && distinct_clear,
          fmt("max coeff err %.3g, flag mismatches %.0f", coeff_err.value, flag_mismatches)};
}

Outcome quarter_wave() {
  const double before = rto_correlation({0.0, 0.0}).e;
  const double after_s = rto_correlation({kPi / 2, 0.0}).e;
  const double after_a = rto_correlation({0.0, kPi / 2}).e;
  const bool ok = std::abs(before - 1.0) <= 1e-12 && std::abs(after_s) <= 1e-12 && std::abs(after_a) <= 1e-12;
  return {ok, fmt("E: +1 -> %.3g (phi_S + pi/2), ", after_s) + fmt("%.3g (phi_A + pi/2)", after_a)};
}

Outcome chsh_violation() {
  const double s = chsh(kChshOptimalAngles[0], kChshOptimalAngles[1], kChshOptimalAngles[2], kChshOptimalAngles[3]);
  const double err = std::abs(s - 2.0 * std::numbers::sqrt2);
  return {err <= 1e-9 && s > 2.0, fmt("S = %.15g, |S - 2 sqrt2| = %.3g", s, err)};
}

Outcome which_path() {
  const double v0 = fringe_visibility(DetectorOverlap(0.0));
  const double control = singles_visibility(unentangled_source(), Side::S);
  const double entangled = singles_visibility(entangled_source(), Side::S);
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Worst err;
  for (int k = 0; k < kPropertyDraws; ++k) {
    const auto [c1, c2] = random_amplitudes(rng);
    const Complex gamma = std::polar(unit(rng), 2.0 * kPi * unit(rng));
    // Oracle: off-diagonal of Tr_A |psi><psi| summed by hand, 2|rho_12|.
    const CVector psi = make_measurement_state(c1, c2, DetectorOverlap(gamma)).vector().amps();
    const Complex rho12 = psi(0) * std::conj(psi(2)) + psi(1) * std::conj(psi(3));
    err.update(std::abs(fringe_visibility(DetectorOverlap(gamma), c1, c2) - 2.0 * std::abs(rho12)));
    err.update(std::abs(fringe_visibility(DetectorOverlap(gamma), c1, c2) -
                        2.0 * std::abs(c1) * std::abs(c2) * std::abs(gamma)));
  }
  const bool ok = std::abs(v0) <= 1e-12 && std::abs(control - 1.0) <= 1e-12 && entangled <= 1e-12 && err.value <= 1e-12;
  return {ok, fmt("V(gamma=0) = %.3g, control singles V = %.15g", v0, control) +
                  fmt(", entangled singles V = %.3g, interior err %.3g", entangled, err.value)};
}

Outcome zwm_endpoints() {
  const double blocked = zwm_scan(0.0);
  const double open = zwm_scan(1.0);
  return {std::abs(blocked) <= 1e-12 && std::abs(open - 1.0) <= 1e-12,
          fmt("transmission 0 -> V %.3g, transmission 1 -> V %.15g", blocked, open)};
}

Outcome monte_carlo() {
  const auto grid = linspace(0.0, 2.0 * kPi, 25);
  int violations = 0;
  double worst_ratio = 0.0;
  for (std::uint64_t seed : kGoldenSeeds)
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const JointDistribution d = rto_joint({grid[i], 0.0});
      const double exact = CorrelationValue::from(d).e;
      const EstimatedCorrelation est = estimate_correlation(sample_events(d, 100000, derive_stream_seed(seed, i)));
      const double diff = std::abs(est.e_hat - exact);
      // E = +-1 samples without error and has zero stderr.
      const bool ok = est.stderr_ > 0.0 ? diff < 4.0 * est.stderr_ : diff <= kTolExact;
      if (!ok) ++violations;
      if (est.stderr_ > 0.0) worst_ratio = std::max(worst_ratio, diff / est.stderr_);
    }
  return {violations == 0, fmt("worst |E_hat - E| = %.3f stderr, violations %.0f", worst_ratio, violations)};
}

Outcome property_suites() {
  std::mt19937_64 rng(109);
  std::uniform_real_distribution<double> angle(-2.0 * kPi, 2.0 * kPi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal;
  auto random_state = [&](std::size_t n) {
    CVector v(static_cast<Eigen::Index>(n));
    for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = Complex{normal(rng), normal(rng)};
    return StateVector(v / v.norm());
  };
  Worst unitarity;
  Worst herm;
  Worst trace;
  double min_eig = 0.0;
  Worst roundtrip;
  for (int k = 0; k < kPropertyDraws; ++k) {
    unitarity.update(unitarity_deviation(build_rto_circuit({angle(rng), angle(rng)}).matrix()));

    const auto [c1, c2] = random_amplitudes(rng);
    const BipartitePureState ms = make_measurement_state(c1, c2, DetectorOverlap(std::polar(unit(rng), angle(rng))));
    for (Side side : {Side::S, Side::A}) {
      const ValidationReport r = validate(local_state(ms, side).matrix());
      herm.update(r.hermiticity_deviation);
      trace.update(r.trace_deviation);
      min_eig = std::min(min_eig, r.min_eigenvalue);
    }

    const StateVector v = random_state(2 + static_cast<std::size_t>(k % 3));
    const StateVector w = random_state(2 + static_cast<std::size_t>((k / 3) % 3));
    const DensityOperator reduced = partial_trace(outer(tensor(v, w)), {v.dim(), w.dim()}, Side::S);
    roundtrip.update((reduced.matrix() - outer(v).matrix()).cwiseAbs().maxCoeff());
    const DensityOperator reduced_a = partial_trace(outer(tensor(v, w)), {v.dim(), w.dim()}, Side::A);
    roundtrip.update((reduced_a.matrix() - outer(w).matrix()).cwiseAbs().maxCoeff());
  }
  const bool ok = unitarity.value <= 1e-9 && herm.value <= 1e-9 && trace.value <= 1e-9 && min_eig >= -1e-10 &&
                  roundtrip.value <= 1e-12;
  return {ok, fmt("%.0f draws: unitarity %.3g", kPropertyDraws, unitarity.value) +
                  fmt(", herm %.3g, trace %.3g", herm.value, trace.value) +
                  fmt(", min eig %.3g, round trip %.3g", min_eig, roundtrip.value)};
}

}  // namespace

int main() {
  const auto start = Clock::now();
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1  correlation fringe", correlation_fringe},
      {"2  agreement mapping", agreement_mapping},
      {"3  singles flatness / no-signaling", no_signaling},
      {"4  local mixtures", local_mixtures},
      {"5  Schmidt coefficients and degeneracy", schmidt_structure},
      {"6  quarter-wave shift", quarter_wave},
      {"7  CHSH", chsh_violation},
      {"8  which-path complementarity", which_path},
      {"9  ZWM endpoints", zwm_endpoints},
      {"10 Monte-Carlo consistency", monte_carlo},
      {"11 property suites", property_suites},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %-40s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  const bool fast = seconds < 30.0;
  if (!fast) ++failures;
  std::printf("[%s] %-40s %.2f s (limit 30 s)\n", fast ? "PASS" : "FAIL", "10 suite runtime", seconds);
  std::printf("%s: %d failure(s)\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}

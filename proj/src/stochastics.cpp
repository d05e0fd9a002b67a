#include "msim/stochastics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace msim {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double unit_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t task) {
  std::uint64_t state = seed;
  const std::uint64_t base = splitmix64(state);
  state = base ^ (task * 0xD1B54A32D192ED03ULL);
  return splitmix64(state);
}

EventTally& EventTally::operator+=(const EventTally& other) {
  for (std::size_t k = 0; k < counts.size(); ++k) counts[k] += other.counts[k];
  trials += other.trials;
  return *this;
}

EventTally sample_events(const JointDistribution& dist, std::uint64_t trials, std::uint64_t seed) {
  // Re-validate: the struct is an aggregate and may have been filled by hand.
  const JointDistribution d = JointDistribution::make(dist.p11, dist.p12, dist.p21, dist.p22);
  const double c11 = d.p11;
  const double c12 = c11 + d.p12;
  const double c21 = c12 + d.p21;

  EventTally tally;
  tally.trials = trials;
  tally.seed = seed;
  std::uint64_t state = seed;
  std::mt19937_64 gen(splitmix64(state));
  for (std::uint64_t t = 0; t < trials; ++t) {
    const double u = unit_uniform(gen);
    const std::size_t outcome = u < c11 ? 0 : u < c12 ? 1 : u < c21 ? 2 : 3;
    ++tally.counts[outcome];
  }
  return tally;
}

EstimatedCorrelation estimate_correlation(const EventTally& tally) {
  if (tally.trials == 0) throw std::invalid_argument("cannot estimate correlation from zero trials");
  const auto n = static_cast<double>(tally.trials);
  const double agree = static_cast<double>(tally.n11() + tally.n22());
  const double disagree = static_cast<double>(tally.n12() + tally.n21());
  const double e = (agree - disagree) / n;
  return {e, std::sqrt(std::max(0.0, 1.0 - e * e) / n)};
}

double chi_square(const EventTally& tally, const JointDistribution& dist) {
  const std::array<double, 4> p{dist.p11, dist.p12, dist.p21, dist.p22};
  const auto n = static_cast<double>(tally.trials);
  double chi2 = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    if (p[k] <= 0.0) continue;
    const double expected = n * p[k];
    const double diff = static_cast<double>(tally.counts[k]) - expected;
    chi2 += diff * diff / expected;
  }
  return chi2;
}

}  // namespace msim

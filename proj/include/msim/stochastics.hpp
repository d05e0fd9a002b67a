#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "msim/experiments.hpp"

namespace msim {

/// Sampling contract. std::mt19937_64 output is fixed by the C++ standard;
/// uniforms take its top 53 bits, and stream seeds come from SplitMix64, so
/// tallies are bit-identical on every conforming platform. Bump the version
/// whenever any of those three pieces changes.
inline constexpr std::string_view kPrngAlgorithm = "mt19937_64+splitmix64";
inline constexpr int kPrngVersion = 1;

/// Seed for independent stream `task` of a run seeded with `seed`.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t task);

/// Coincidence counts in outcome order (11, 12, 21, 22).
struct EventTally {
  std::array<std::uint64_t, 4> counts{};
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;

  std::uint64_t n11() const { return counts[0]; }
  std::uint64_t n12() const { return counts[1]; }
  std::uint64_t n21() const { return counts[2]; }
  std::uint64_t n22() const { return counts[3]; }

  /// Detector-1 count seen by one side alone.
  std::uint64_t detector1(Side side) const {
    return side == Side::S ? counts[0] + counts[1] : counts[0] + counts[2];
  }

  EventTally& operator+=(const EventTally& other);
};

struct EstimatedCorrelation {
  double e_hat = 0.0;
  double stderr_ = 0.0;
};

/// Multinomial draw of `trials` coincidences by inverse CDF over (11, 12, 21, 22).
EventTally sample_events(const JointDistribution& dist, std::uint64_t trials, std::uint64_t seed);

/// E_hat = (n11 + n22 - n12 - n21) / N with stderr sqrt((1 - E_hat^2) / N).
EstimatedCorrelation estimate_correlation(const EventTally& tally);

/// Pearson chi-square of a tally against the distribution it was drawn from.
/// Outcomes with zero probability are skipped.
double chi_square(const EventTally& tally, const JointDistribution& dist);

}  // namespace msim

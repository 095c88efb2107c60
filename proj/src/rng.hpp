#pragma once

#include <cstdint>
#include <random>

namespace wcgpr::detail {

// Independent engines per (seed, stream) pair.
inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
  return std::mt19937_64(seq);
}

enum Stream : std::uint32_t {
  kDrivingNoise = 0x5a17,
  kMeasurementNoise = 0x0e75,
  kTrainingIndices = 0x1d3c,
  kValidationSubset = 0x7a11,
};

}  // namespace wcgpr::detail

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace sparsekit {

using Rng = std::mt19937_64;

/// count i.i.d. indices with P(i) = w_i / sum(w). Throws
/// Error(kInvalidArgument) for negative, non-finite or all-zero weights.
std::vector<int> sample_batch(const std::vector<double>& weights, std::int64_t count,
                              Rng& rng);

/// Independent child seed for stream `stream` of a run seeded with `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace sparsekit

#include "sparsekit/sampling.hpp"

#include <cmath>

#include "sparsekit/error.hpp"

namespace sparsekit {

std::vector<int> sample_batch(const std::vector<double>& weights,
                              std::int64_t count, Rng& rng) {
  if (count < 1) {
    throw Error(ErrorCode::kInvalidArgument, "sample count must be >= 1");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sampling weights must be finite and non-negative");
    }
    total += w;
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sampling weights are all zero");
  }
  std::discrete_distribution<int> pick(weights.begin(), weights.end());
  std::vector<int> out(static_cast<std::size_t>(count));
  for (auto& i : out) i = pick(rng);
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base ^ splitmix64(stream));
}

}  // namespace sparsekit

#include "rng.hpp"

#include <cmath>
#include <numbers>

namespace qfc {

namespace {
constexpr std::uint64_t kPhi = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += kPhi;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

GaussianStream::GaussianStream(std::uint64_t master_seed,
                               std::uint64_t stream_id)
    : key(splitmix64(splitmix64(master_seed) + stream_id * kPhi)) {}

double GaussianStream::normal(std::uint64_t index) const {
  const std::uint64_t a = splitmix64(key + (2 * index) * kPhi);
  const std::uint64_t b = splitmix64(key + (2 * index + 1) * kPhi);
  // u1 in (0,1] keeps the log finite; u2 in [0,1).
  const double u1 = static_cast<double>((a >> 11) + 1) * 0x1.0p-53;
  const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace qfc

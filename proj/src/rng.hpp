#pragma once

#include <cstdint>

namespace qfc {

// splitmix64 finalizer; the stream below samples its output sequence.
std::uint64_t splitmix64(std::uint64_t z);

// Counter-based N(0,1) stream: normal(i) is a pure function of
// (master_seed, stream_id, i), so trajectories are reproducible under any
// thread assignment and any noise can be re-read at random access.
struct GaussianStream {
  std::uint64_t key;
  GaussianStream(std::uint64_t master_seed, std::uint64_t stream_id);
  double normal(std::uint64_t index) const;
  double wiener(std::uint64_t index, double sqrt_dt) const {
    return normal(index) * sqrt_dt;
  }
};

}  // namespace qfc

#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace digestlab {

// Pinned pseudorandom stream: std::mt19937_64 seeded with the spec seed,
// 53-bit uniforms from the top bits, Box-Muller pairs for normals. The same
// seed always yields the same sequence on every platform.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed);
  double uniform();  // in (0, 1)
  double normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace digestlab

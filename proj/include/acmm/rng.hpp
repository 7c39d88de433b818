#pragma once

#include "acmm/types.hpp"

#include <cstdint>
#include <vector>

namespace acmm {

// Counter-based generator: value i of stream `seed` is a pure function of
// (seed, i), so results do not depend on platform or call interleaving.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  double normal();
  // Uniform integer in [0, n).
  int below(int n);

  static std::uint64_t mix(std::uint64_t x);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

Matrix random_normal(int rows, int cols, Rng& rng);
// Standard normal entries rescaled to Frobenius norm `norm`.
Matrix random_with_norm(int rows, int cols, double norm, Rng& rng);
// k distinct sorted indices from [0, n).
Subset random_subset(int n, int k, Rng& rng);

}  // namespace acmm

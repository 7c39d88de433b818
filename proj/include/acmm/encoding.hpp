#pragma once

#include <Eigen/Dense>

#include <vector>

namespace acmm::detail {

// sum_t blocks[t] * x^exponents[t], powers by repeated multiplication so the
// MatDot and PolyDot encoders produce identical bits for identical exponents.
template <class T, class Block>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> weighted_sum(const std::vector<const Block*>& blocks,
                                                              const std::vector<int>& exponents, const T& x) {
  using M = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  M out = M::Zero(blocks.front()->rows(), blocks.front()->cols());
  for (std::size_t t = 0; t < blocks.size(); ++t) {
    T w(1);
    for (int e = 0; e < exponents[t]; ++e) w *= x;
    out += blocks[t]->template cast<T>() * w;
  }
  return out;
}

}  // namespace acmm::detail

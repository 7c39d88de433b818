#include "acmm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace acmm {

std::uint64_t Rng::mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed) ^ mix(~stream)) {}

std::uint64_t Rng::next_u64() { return mix(key_ + 0x632be59bd9b4e019ULL * ++counter_); }

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

int Rng::below(int n) {
  // Lemire's multiply-shift; the bias is < n / 2^64.
  return static_cast<int>((static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned>(n)) >> 64);
}

Matrix random_normal(int rows, int cols, Rng& rng) {
  Matrix M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = rng.normal();
  return M;
}

Matrix random_with_norm(int rows, int cols, double norm, Rng& rng) {
  Matrix M = random_normal(rows, cols, rng);
  const double f = M.norm();
  if (f > 0) M *= norm / f;
  return M;
}

Subset random_subset(int n, int k, Rng& rng) {
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
  Subset s(idx.begin(), idx.begin() + k);
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace acmm

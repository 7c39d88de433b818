#include "acmm/errors.hpp"
#include "acmm/types.hpp"

#include <cmath>
#include <fmt/format.h>

namespace acmm {

void CodeParams::validate() const {
  if (m < 1 || p < 1 || q < 1) throw ParameterViolation("m, p, q must be positive");
  if (p * q != m) throw ParameterViolation(fmt::format("p*q = {} does not equal m = {}", p * q, m));
  if (P < 1) throw ParameterViolation("P must be positive");
  if (k < 1 || k > P) throw ParameterViolation(fmt::format("k = {} outside [1, P = {}]", k, P));
  if (!(epsilon > 0) || !std::isfinite(epsilon)) throw ParameterViolation("epsilon must be positive");
  if (!(eta > 0) || !std::isfinite(eta)) throw ParameterViolation("eta must be positive");
}

CodeParams CodeParams::matdot(int m, int P, int k, double epsilon, double eta) {
  CodeParams c{m, 1, m, P, k, epsilon, eta};
  c.validate();
  return c;
}

CodeParams CodeParams::polydot(int p, int q, int P, int k, double epsilon, double eta) {
  CodeParams c{p * q, p, q, P, k, epsilon, eta};
  c.validate();
  return c;
}

std::string to_string(const CodeParams& c) {
  return fmt::format("m={} p={} q={} P={} k={} eps={:g} eta={:g}", c.m, c.p, c.q, c.P, c.k, c.epsilon, c.eta);
}

}  // namespace acmm

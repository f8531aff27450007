#pragma once

// Shared helpers for the unit tests: a seeded generator for property checks
// and a relative-error helper.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "lpai/qdyn.hpp"

namespace lpai::test {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

  qdyn::TwoLevelState state() {
    return {qdyn::Complex{normal(), normal()}, qdyn::Complex{normal(), normal()}};
  }

  qdyn::BlochAxis axis() {
    const double x = normal(), y = normal(), z = normal();
    const double n = std::sqrt(x * x + y * y + z * z);
    return {x / n, y / n, z / n};
  }

  /// a I + b sigma_x + c sigma_y + d sigma_z with real coefficients.
  qdyn::Operator2 hermitian() {
    using qdyn::Operator2;
    return Operator2::identity() * normal() + Operator2::pauli_x() * normal() +
           Operator2::pauli_y() * normal() + Operator2::pauli_z() * normal();
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace lpai::test

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace csdiag {

// Reduction hit a (near-)isotropic Householder vector: |<v,v>_*| vanished
// relative to the Euclidean scale of v.
class IsotropicBreakdown : public std::runtime_error {
 public:
  explicit IsotropicBreakdown(std::size_t step_index = 0)
      : std::runtime_error("isotropic Householder vector at reduction step " +
                           std::to_string(step_index)),
        step(step_index) {}
  std::size_t step;
};

// A Jacobi/Givens rotation radicand c^2-denominator became isotropic.
class RotationBreakdown : public std::runtime_error {
 public:
  explicit RotationBreakdown(std::size_t pivot_index = 0)
      : std::runtime_error("isotropic rotation radicand at pivot " +
                           std::to_string(pivot_index)),
        position(pivot_index) {}
  std::size_t position;
};

// An eigenvalue exceeded its sweep budget.
class NoConvergence : public std::runtime_error {
 public:
  explicit NoConvergence(std::size_t eigen_index = 0)
      : std::runtime_error("no convergence for eigenvalue index " +
                           std::to_string(eigen_index)),
        index(eigen_index) {}
  std::size_t index;
};

class NonFiniteError : public std::runtime_error {
 public:
  explicit NonFiniteError(const std::string& what_arg)
      : std::runtime_error(what_arg) {}
};

}  // namespace csdiag

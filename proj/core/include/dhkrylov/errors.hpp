#pragma once

#include <stdexcept>
#include <string>

namespace dhk {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Incompatible or non-square shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A matrix lacks a required symmetry (Hermitian, skew-Hermitian).
class StructureError : public Error {
 public:
  using Error::Error;
};

/// A precondition on definiteness or invertibility does not hold.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Invalid model parameters passed to a generator.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// A rank decision found a deficient matrix where full rank was required.
class RankError : public Error {
 public:
  explicit RankError(const std::string& what, long numerical_rank = -1)
      : Error(what), numerical_rank_(numerical_rank) {}
  long numerical_rank() const noexcept { return numerical_rank_; }

 private:
  long numerical_rank_;
};

/// Initial value violates the algebraic constraints of a DAE.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// An intermediate quantity contradicts the theory (e.g. singular Schur
/// complement); carries the offending block index.
class DiagnosticsError : public Error {
 public:
  DiagnosticsError(const std::string& what, long block)
      : Error(what), block_(block) {}
  long block() const noexcept { return block_; }

 private:
  long block_;
};

/// Iterative solve failed to reach its tolerance where convergence was
/// required by the caller.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dhk

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chol {

// Every failure the library reports carries one of these categories. The CLI
// maps categories onto exit codes (see cli.hpp).
enum class ErrorKind {
  InvalidArgument,
  ShapeMismatch,
  CapacityExceeded,
  DivisionByZero,
  IncompatibleGroup,
  NotInOpenOrbit,
  ResidualNotConstant,
  ResidualTooLarge,
  NotInvariant,
  NotBlockTriangular,
  InvarianceViolated,
  NotConstant,
  SingularLambda,
  PathHitsVariety,
  RelationViolated,
  SamplingTooCoarse,
  ClosureFailed,
  MalformedInput,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::vector<int> indices = {})
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        indices_(std::move(indices)) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Positional payload, e.g. (j) for NotInvariant or (i, j) for
  // NotBlockTriangular. Empty when the category has none.
  const std::vector<int>& indices() const noexcept { return indices_; }

 private:
  ErrorKind kind_;
  std::vector<int> indices_;
};

// Which family of leading minors failed: A^(k) or hat(A)^(k).
enum class MinorFamily { Plain, Hat };

std::string_view to_string(MinorFamily family);

class NotInOpenOrbit : public Error {
 public:
  NotInOpenOrbit(MinorFamily family, int k, double magnitude);

  MinorFamily family() const noexcept { return family_; }
  int index() const noexcept { return index_; }
  double magnitude() const noexcept { return magnitude_; }

 private:
  MinorFamily family_;
  int index_;
  double magnitude_;
};

}  // namespace chol

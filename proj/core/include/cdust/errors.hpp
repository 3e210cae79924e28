#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cdust {

/// Argument outside the mathematical domain of an operation (e.g. alpha >= 1/2).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A call whose parameters violate a stated hypothesis; nothing was computed.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A request that would exceed a configured size budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grids whose bounds cannot be reconciled.
class IncompatibleGridsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed BGR/CAD input.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point whose ring cannot be resolved at the requested depth.
class UndeterminedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure of a pipeline stage; `index()` names the annulus involved (0 when
/// not tied to one).
class ConstructionError : public std::runtime_error {
 public:
  ConstructionError(const std::string& what, std::size_t index)
      : std::runtime_error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class PlacementError : public ConstructionError {
 public:
  using ConstructionError::ConstructionError;
};

class AssemblyError : public ConstructionError {
 public:
  using ConstructionError::ConstructionError;
};

}  // namespace cdust

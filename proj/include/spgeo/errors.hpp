#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spgeo {

enum class ErrorKind {
  DimensionMismatch,
  InvalidArgument,
  NonFinite,
  Overflow,
  NotSymmetric,
  NotPositiveDefinite,
  NotUnitaryJ,
  BranchAmbiguity,
  Singular,
  NotSymplectic,
  NotInAlgebra,
  NotTangent,
  SingularProjectionSystem,
  GridTooCoarse,
  UnknownSuite,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::NotUnitaryJ: return "NotUnitaryJ";
    case ErrorKind::BranchAmbiguity: return "BranchAmbiguity";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::NotSymplectic: return "NotSymplectic";
    case ErrorKind::NotInAlgebra: return "NotInAlgebra";
    case ErrorKind::NotTangent: return "NotTangent";
    case ErrorKind::SingularProjectionSystem: return "SingularProjectionSystem";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::UnknownSuite: return "UnknownSuite";
  }
  return "Unknown";
}

/// True for failures caused by the numbers themselves (conditioning, branch
/// cuts, singularity) rather than by malformed input.
constexpr bool is_numeric(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Overflow:
    case ErrorKind::BranchAmbiguity:
    case ErrorKind::Singular:
    case ErrorKind::SingularProjectionSystem:
    case ErrorKind::NotPositiveDefinite:
    case ErrorKind::NonFinite:
      return true;
    default:
      return false;
  }
}

class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw GeometryError(kind, what);
}

}  // namespace spgeo

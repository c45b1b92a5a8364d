#pragma once

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spgeo/errors.hpp"
#include "spgeo/matfun.hpp"
#include "spgeo/sympgroup.hpp"

namespace spgeo {

/// Which membership predicate the node values satisfy.
enum class ManifoldTag { symplectic, positive, unitary_j, tangent };

constexpr std::string_view to_string(ManifoldTag tag) {
  switch (tag) {
    case ManifoldTag::symplectic: return "symplectic";
    case ManifoldTag::positive: return "positive";
    case ManifoldTag::unitary_j: return "unitary_j";
    case ManifoldTag::tangent: return "tangent";
  }
  return "tangent";
}

inline constexpr Eigen::Index kMinIntervals = 4;

/// Matrix-valued path sampled at t_i = i / N, i = 0..N.
class SampledCurve {
 public:
  static SampledCurve from_values(std::vector<RealMatrix> values, ManifoldTag tag,
                                  const SpectralTolerance& tol = {}) {
    if (values.size() < static_cast<std::size_t>(kMinIntervals + 1)) {
      fail(ErrorKind::GridTooCoarse, "curve needs at least " + std::to_string(kMinIntervals + 1) +
                                         " nodes, got " + std::to_string(values.size()));
    }
    const Eigen::Index d = values.front().rows();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const RealMatrix& m = values[i];
      if (m.rows() != d || m.cols() != d) {
        fail(ErrorKind::DimensionMismatch, "curve node " + std::to_string(i) + " has wrong shape");
      }
      check_real_matrix(m);
      try {
        switch (tag) {
          case ManifoldTag::symplectic: (void)SymplecticElement::from_matrix(m, tol); break;
          case ManifoldTag::positive: (void)PositiveSymplectic::from_matrix(m, tol); break;
          case ManifoldTag::unitary_j: (void)UnitaryJ::from_matrix(m, tol); break;
          case ManifoldTag::tangent: break;
        }
      } catch (const GeometryError& e) {
        fail(e.kind(), "curve node " + std::to_string(i) + ": " + e.what());
      }
    }
    return SampledCurve(std::move(values), tag);
  }

  [[nodiscard]] const std::vector<RealMatrix>& values() const noexcept { return values_; }
  [[nodiscard]] const RealMatrix& operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] ManifoldTag tag() const noexcept { return tag_; }
  [[nodiscard]] Eigen::Index intervals() const noexcept {
    return static_cast<Eigen::Index>(values_.size()) - 1;
  }
  [[nodiscard]] std::size_t nodes() const noexcept { return values_.size(); }
  [[nodiscard]] double step() const noexcept { return 1.0 / static_cast<double>(intervals()); }
  [[nodiscard]] double param(std::size_t i) const noexcept {
    return static_cast<double>(i) / static_cast<double>(intervals());
  }
  [[nodiscard]] Eigen::Index dim() const noexcept { return values_.front().rows(); }

 private:
  SampledCurve(std::vector<RealMatrix> v, ManifoldTag tag) : values_(std::move(v)), tag_(tag) {}
  std::vector<RealMatrix> values_;
  ManifoldTag tag_;
};

/// First derivative at every node: central differences inside, second-order
/// one-sided differences at the two ends.
inline std::vector<RealMatrix> differentiate(std::span<const RealMatrix> f, double h) {
  const std::size_t n = f.size();
  if (n < 3) fail(ErrorKind::GridTooCoarse, "differentiate needs at least 3 nodes");
  std::vector<RealMatrix> df(n);
  df[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) df[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  df[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return df;
}

/// Composite Simpson for an even number of intervals, trapezoid otherwise.
inline double integrate(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  const std::size_t intervals = n - 1;
  double sum = 0.0;
  if (intervals % 2 == 0) {
    sum = f[0] + f[n - 1];
    for (std::size_t i = 1; i < n - 1; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
    return sum * h / 3.0;
  }
  sum = 0.5 * (f[0] + f[n - 1]);
  for (std::size_t i = 1; i < n - 1; ++i) sum += f[i];
  return sum * h;
}

}  // namespace spgeo

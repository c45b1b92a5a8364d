#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "spgeo/errors.hpp"
#include "spgeo/matfun.hpp"
#include "spgeo/metrics.hpp"
#include "spgeo/random.hpp"
#include "spgeo/sampled_curve.hpp"
#include "spgeo/sympgroup.hpp"

namespace spgeo {

inline constexpr Eigen::Index kDefaultGrid = 64;

namespace detail {

inline void require_grid(Eigen::Index n) {
  if (n < kMinIntervals) {
    fail(ErrorKind::GridTooCoarse, "grid needs N >= " + std::to_string(kMinIntervals));
  }
}

template <typename F>
std::vector<RealMatrix> tabulate(Eigen::Index n, F&& f) {
  require_grid(n);
  std::vector<RealMatrix> values;
  values.reserve(static_cast<std::size_t>(n + 1));
  for (Eigen::Index i = 0; i <= n; ++i) {
    values.push_back(f(static_cast<double>(i) / static_cast<double>(n)));
  }
  return values;
}

inline bool lies_in_group(ManifoldTag tag) { return tag != ManifoldTag::tangent; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Closed-form geodesics on a grid
// ---------------------------------------------------------------------------

inline SampledCurve sample_left(const SymplecticElement& g0, const SpAlgebraElement& v0,
                                Eigen::Index n, const SpectralTolerance& tol = {}) {
  const RealMatrix vt = v0.matrix().transpose();
  const RealMatrix w = v0.matrix() - vt;
  auto values = detail::tabulate(n, [&](double t) -> RealMatrix {
    return g0.matrix() * expm(t * vt) * expm(t * w);
  });
  return SampledCurve::from_values(std::move(values), ManifoldTag::symplectic, tol);
}

/// The exact velocity field of sample_left on the same grid.
inline SampledCurve sample_left_velocity(const SymplecticElement& g0, const SpAlgebraElement& v0,
                                         Eigen::Index n) {
  auto values = detail::tabulate(n, [&](double t) { return exp_left_velocity(g0, v0, t); });
  return SampledCurve::from_values(std::move(values), ManifoldTag::tangent);
}

inline SampledCurve sample_positive(const PositiveSymplectic& p, const PositiveSymplectic& q,
                                    Eigen::Index n, const SpectralTolerance& tol = {}) {
  const PositiveGeodesic geo(p, q, tol);
  auto values = detail::tabulate(n, [&](double t) { return geo.matrix_at(t); });
  return SampledCurve::from_values(std::move(values), ManifoldTag::positive, tol);
}

inline SampledCurve sample_polar(const SymplecticElement& p, const SymplecticElement& q,
                                 Eigen::Index n, const SpectralTolerance& tol = {}) {
  const PolarGeodesic geo(p, q, tol);
  auto values = detail::tabulate(n, [&](double t) { return geo.matrix_at(t); });
  return SampledCurve::from_values(std::move(values), ManifoldTag::symplectic, tol);
}

/// Tabulates the closed-form geodesic of `kind`:
///   left_invariant: start = g0, second = initial velocity v0 in sp
///   positive_cone:  start = p, second = q (both in Sp+)
///   polar_product:  start = p, second = q (both in Sp)
/// The ambient metric has no closed-form geodesic and is rejected.
inline SampledCurve sample_closed_form(MetricKind kind, const RealMatrix& start,
                                       const RealMatrix& second, Eigen::Index n,
                                       const SpectralTolerance& tol = {}) {
  switch (kind) {
    case MetricKind::left_invariant:
      return sample_left(SymplecticElement::from_matrix(start, tol),
                         SpAlgebraElement::from_matrix(second, Parity::general, tol), n, tol);
    case MetricKind::positive_cone:
      return sample_positive(PositiveSymplectic::from_matrix(start, tol),
                             PositiveSymplectic::from_matrix(second, tol), n, tol);
    case MetricKind::polar_product:
      return sample_polar(SymplecticElement::from_matrix(start, tol),
                          SymplecticElement::from_matrix(second, tol), n, tol);
    case MetricKind::positive_ambient:
      break;
  }
  fail(ErrorKind::InvalidArgument, "the ambient metric has no closed-form geodesic");
}

// ---------------------------------------------------------------------------
// Length
// ---------------------------------------------------------------------------

/// Speed of the curve at every node under `kind`.
inline std::vector<double> curve_speeds(const SampledCurve& curve, MetricKind kind,
                                        const SpectralTolerance& tol = {}) {
  if (curve.intervals() < kMinIntervals) fail(ErrorKind::GridTooCoarse, "curve too coarse");
  const double h = curve.step();
  const std::size_t n = curve.nodes();
  std::vector<double> speed(n);
  switch (kind) {
    case MetricKind::left_invariant: {
      if (!detail::lies_in_group(curve.tag())) {
        fail(ErrorKind::InvalidArgument, "left-invariant length needs a curve in Sp");
      }
      const auto vel = differentiate(curve.values(), h);
      for (std::size_t i = 0; i < n; ++i) {
        speed[i] = hs_norm(symplectic_inverse_matrix(curve[i]) * vel[i]);
      }
      break;
    }
    case MetricKind::positive_cone:
    case MetricKind::positive_ambient: {
      if (curve.tag() != ManifoldTag::positive) {
        fail(ErrorKind::InvalidArgument, "positive-cone length needs a curve in Sp+");
      }
      const auto vel = differentiate(curve.values(), h);
      for (std::size_t i = 0; i < n; ++i) {
        const RealMatrix v = 0.5 * (vel[i] + vel[i].transpose());
        if (kind == MetricKind::positive_ambient) {
          speed[i] = hs_norm(v);
        } else {
          const RealMatrix w = inv_sqrtm_spd(curve[i], tol);
          speed[i] = hs_norm(w * v * w);
        }
      }
      break;
    }
    case MetricKind::polar_product: {
      if (!detail::lies_in_group(curve.tag())) {
        fail(ErrorKind::InvalidArgument, "polar length needs a curve in Sp");
      }
      std::vector<RealMatrix> us(n), ps(n);
      for (std::size_t i = 0; i < n; ++i) {
        PolarFactors f = polar_decompose(curve[i], tol);
        us[i] = std::move(f.unitary);
        ps[i] = std::move(f.positive);
      }
      const auto du = differentiate(us, h);
      const auto dp = differentiate(ps, h);
      for (std::size_t i = 0; i < n; ++i) {
        const double a = hs_norm(du[i]);
        const RealMatrix w = inv_sqrtm_spd(ps[i], tol);
        const double b = hs_norm(w * (0.5 * (dp[i] + dp[i].transpose())) * w);
        speed[i] = std::sqrt(a * a + b * b);
      }
      break;
    }
  }
  return speed;
}

/// Integral of the speed: velocities by second-order finite differences,
/// composite Simpson for even N (trapezoid for odd N). O(h^2) overall.
inline double curve_length(const SampledCurve& curve, MetricKind kind,
                           const SpectralTolerance& tol = {}) {
  const auto speed = curve_speeds(curve, kind, tol);
  return integrate(speed, curve.step());
}

// ---------------------------------------------------------------------------
// Endpoint-fixed perturbations
// ---------------------------------------------------------------------------

/// Node-wise variation by E(t) = exp(amplitude sin(pi t) direction):
/// alpha E for curves in Sp, E alpha E^T for curves in Sp+. Endpoints are
/// copied unchanged.
inline SampledCurve perturb_curve(const SampledCurve& curve, const SpAlgebraElement& direction,
                                  double amplitude, const SpectralTolerance& tol = {}) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    fail(ErrorKind::InvalidArgument, "amplitude must be finite and >= 0");
  }
  const RealMatrix& d = direction.matrix();
  detail::require_same_shape(curve[0], d, "perturbation direction");
  const bool positive = curve.tag() == ManifoldTag::positive;
  if (!positive && curve.tag() != ManifoldTag::symplectic && curve.tag() != ManifoldTag::unitary_j) {
    fail(ErrorKind::InvalidArgument, "cannot perturb a tangent field");
  }
  std::vector<RealMatrix> values(curve.values());
  if (amplitude == 0.0) {
    return SampledCurve::from_values(std::move(values), curve.tag(), tol);
  }
  const std::size_t n = curve.nodes();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double s = amplitude * std::sin(std::numbers::pi * curve.param(i));
    const RealMatrix e = expm(s * d);
    if (positive) {
      RealMatrix m = e * curve[i] * e.transpose();
      values[i] = 0.5 * (m + m.transpose());
    } else {
      values[i] = curve[i] * e;
    }
  }
  // A right-multiplied unitary curve leaves U(H_J); it is still a curve in Sp.
  const ManifoldTag tag = positive ? ManifoldTag::positive : ManifoldTag::symplectic;
  return SampledCurve::from_values(std::move(values), tag, tol);
}

/// As above with a random general sp direction of unit 2-norm drawn from `seed`.
inline SampledCurve perturb_curve(const SampledCurve& curve, double amplitude, std::uint64_t seed,
                                  const SpectralTolerance& tol = {}) {
  const auto direction = random_sp_algebra(curve.dim() / 2, Parity::general, 1.0, seed);
  return perturb_curve(curve, direction, amplitude, tol);
}

}  // namespace spgeo

#pragma once

// The four Riemannian structures on Sp and its positive cone:
//   left-invariant   I(g, v)      = ||g^{-1} v||_2
//   positive cone    p(a, x)      = ||a^{-1/2} x a^{-1/2}||_2
//   positive ambient p_amb(a, x)  = ||x||_2 on the tangent space of Sp+
//   polar product    P((u,P),(x,y)) = (||x||_2^2 + p(P, y)^2)^{1/2}

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "spgeo/errors.hpp"
#include "spgeo/matfun.hpp"
#include "spgeo/sampled_curve.hpp"
#include "spgeo/sympgroup.hpp"

namespace spgeo {

enum class MetricKind { left_invariant, positive_cone, positive_ambient, polar_product };

constexpr std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::left_invariant: return "left_invariant";
    case MetricKind::positive_cone: return "positive_cone";
    case MetricKind::positive_ambient: return "positive_ambient";
    case MetricKind::polar_product: return "polar_product";
  }
  return "left_invariant";
}

namespace detail {

inline void require_symmetric(const RealMatrix& x, const SpectralTolerance& tol, const char* what) {
  const double asym = hs_norm(x - x.transpose());
  if (asym > tol.membership_tol * (1.0 + hs_norm(x))) {
    fail(ErrorKind::NotSymmetric, std::string(what) + " asymmetry " + std::to_string(asym));
  }
}

inline RealMatrix commutator(const RealMatrix& a, const RealMatrix& b) { return a * b - b * a; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Left-invariant metric
// ---------------------------------------------------------------------------

/// g^{-1} v, after checking that it lies in sp.
inline RealMatrix pull_back_tangent(const SymplecticElement& g, const RealMatrix& v,
                                    const SpectralTolerance& tol = {}) {
  detail::require_same_shape(g.matrix(), v, "tangent vector");
  RealMatrix x = symplectic_inverse_matrix(g.matrix()) * v;
  const auto check = is_sp_algebra(x, ComplexStructure(g.half_dim()), tol);
  if (!check.pass) {
    fail(ErrorKind::NotTangent, "g^{-1} v has algebra residual " + std::to_string(check.residual));
  }
  return x;
}

inline double metric_left(const SymplecticElement& g, const RealMatrix& v,
                          const SpectralTolerance& tol = {}) {
  return hs_norm(pull_back_tangent(g, v, tol));
}

/// alpha(t) = g0 e^{t v0^T} e^{t (v0 - v0^T)}.
inline SymplecticElement exp_left(const SymplecticElement& g0, const SpAlgebraElement& v0, double t,
                                  const SpectralTolerance& tol = {}) {
  const RealMatrix& v = v0.matrix();
  detail::require_same_shape(g0.matrix(), v, "exp_left");
  const RealMatrix vt = v.transpose();
  return SymplecticElement::from_matrix(g0.matrix() * expm(t * vt) * expm(t * (v - vt)), tol);
}

/// Exact velocity of exp_left: g0 e^{t v0^T} v0 e^{t (v0 - v0^T)}.
inline RealMatrix exp_left_velocity(const SymplecticElement& g0, const SpAlgebraElement& v0,
                                    double t) {
  const RealMatrix& v = v0.matrix();
  const RealMatrix vt = v.transpose();
  return g0.matrix() * expm(t * vt) * v * expm(t * (v - vt));
}

/// Gamma_g(v, w) = g (xy + yx + x^T y + y^T x - x y^T - y x^T) / 2 with
/// x = g^{-1} v, y = g^{-1} w.
inline RealMatrix christoffel_left(const SymplecticElement& g, const RealMatrix& v,
                                   const RealMatrix& w, const SpectralTolerance& tol = {}) {
  const RealMatrix x = pull_back_tangent(g, v, tol);
  const RealMatrix y = pull_back_tangent(g, w, tol);
  const RealMatrix xt = x.transpose();
  const RealMatrix yt = y.transpose();
  return 0.5 * g.matrix() * (x * y + y * x + xt * y + yt * x - x * yt - y * xt);
}

/// Metric spray F_g(v) = v g^{-1} v + g v^T (g g^T)^{-1} v - v v^T (g^T)^{-1},
/// evaluated with general LU inverses.
inline RealMatrix spray_left(const SymplecticElement& g, const RealMatrix& v) {
  const RealMatrix& gm = g.matrix();
  detail::require_same_shape(gm, v, "spray_left");
  const auto lu = gm.partialPivLu();
  const RealMatrix g_inv = lu.inverse();
  const RealMatrix ggt_inv = (gm * gm.transpose()).partialPivLu().inverse();
  return v * g_inv * v + gm * v.transpose() * ggt_inv * v - v * v.transpose() * g_inv.transpose();
}

/// Covariant derivative values at the interior nodes i = 1..N-1.
struct InteriorField {
  std::vector<RealMatrix> values;  // values[k] belongs to node k + 1
  std::vector<RealMatrix> base;    // curve value at the same node

  [[nodiscard]] double max_norm() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, hs_norm(v));
    return m;
  }

  /// Largest algebra residual of alpha^{-1} D_t eta over the nodes.
  [[nodiscard]] double max_tangency_residual() const {
    double m = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
      const RealMatrix x = symplectic_inverse_matrix(base[k]) * values[k];
      const ComplexStructure j(x.rows() / 2);
      m = std::max(m, is_sp_algebra(x, j).residual);
    }
    return m;
  }
};

/// alpha (mu' + ([beta, mu] + [beta, mu^T] + [mu, beta^T]) / 2) with
/// beta = alpha^{-1} alpha', mu = alpha^{-1} eta, derivatives by central
/// differences.
inline InteriorField covariant_derivative_left(const SampledCurve& curve, const SampledCurve& field) {
  if (curve.tag() != ManifoldTag::symplectic) {
    fail(ErrorKind::InvalidArgument, "covariant derivative needs a curve in Sp");
  }
  if (curve.nodes() != field.nodes() || curve.dim() != field.dim()) {
    fail(ErrorKind::DimensionMismatch, "curve and field grids differ");
  }
  if (curve.intervals() < kMinIntervals) fail(ErrorKind::GridTooCoarse, "need >= 5 nodes");
  const double h = curve.step();
  const std::size_t n = curve.nodes();
  const auto dalpha = differentiate(curve.values(), h);
  const RealMatrix j = structure_for(curve[0]).matrix();
  std::vector<RealMatrix> inv(n), beta(n), mu(n);
  for (std::size_t i = 0; i < n; ++i) {
    inv[i] = symplectic_inverse_matrix(curve[i]);
    // The difference quotient leaves sp at O(h^2); restore it so every term stays in sp.
    const RealMatrix raw = inv[i] * dalpha[i];
    beta[i] = 0.5 * (raw + j * raw.transpose() * j);
    mu[i] = inv[i] * field[i];
  }
  InteriorField out;
  out.values.reserve(n - 2);
  out.base.reserve(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const RealMatrix dmu = (mu[i + 1] - mu[i - 1]) / (2.0 * h);
    const RealMatrix& b = beta[i];
    const RealMatrix& m = mu[i];
    const RealMatrix corr = detail::commutator(b, m) + detail::commutator(b, m.transpose()) +
                            detail::commutator(m, b.transpose());
    out.values.push_back(curve[i] * (dmu + 0.5 * corr));
    out.base.push_back(curve[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Positive cone
// ---------------------------------------------------------------------------

inline double metric_positive(const PositiveSymplectic& a, const RealMatrix& x,
                              const SpectralTolerance& tol = {}) {
  detail::require_same_shape(a.matrix(), x, "metric_positive");
  detail::require_symmetric(x, tol, "positive tangent");
  const RealMatrix w = inv_sqrtm_spd(a.matrix(), tol);
  return hs_norm(w * x * w);
}

/// Precomputed gamma_pq(t) = p^{1/2} exp(t log(p^{-1/2} q p^{-1/2})) p^{1/2}.
class PositiveGeodesic {
 public:
  PositiveGeodesic(const PositiveSymplectic& p, const PositiveSymplectic& q,
                   const SpectralTolerance& tol = {})
      : tol_(tol) {
    detail::require_same_shape(p.matrix(), q.matrix(), "positive geodesic endpoints");
    p_half_ = sqrtm_spd(p.matrix(), tol);
    const RealMatrix p_mhalf = inv_sqrtm_spd(p.matrix(), tol);
    RealMatrix v = p_mhalf * q.matrix() * p_mhalf;
    log_v_ = logm_spd(0.5 * (v + v.transpose()), tol);
  }

  [[nodiscard]] RealMatrix matrix_at(double t) const {
    RealMatrix out = p_half_ * expm(t * log_v_) * p_half_;
    return 0.5 * (out + out.transpose());
  }

  [[nodiscard]] PositiveSymplectic at(double t) const {
    return PositiveSymplectic::from_matrix(matrix_at(t), tol_);
  }

  /// log(p^{-1/2} q p^{-1/2}); its 2-norm is the length.
  [[nodiscard]] const RealMatrix& log_ratio() const noexcept { return log_v_; }
  [[nodiscard]] double length() const { return hs_norm(log_v_); }

 private:
  SpectralTolerance tol_;
  RealMatrix p_half_;
  RealMatrix log_v_;
};

inline PositiveSymplectic geodesic_positive(const PositiveSymplectic& p, const PositiveSymplectic& q,
                                            double t, const SpectralTolerance& tol = {}) {
  return PositiveGeodesic(p, q, tol).at(t);
}

inline double dist_positive(const PositiveSymplectic& p, const PositiveSymplectic& q,
                            const SpectralTolerance& tol = {}) {
  return PositiveGeodesic(p, q, tol).length();
}

/// ||e^{-x/2} dexp_x(y) e^{-x/2}||_2 - ||y||_2 for symmetric x, y.
inline double emi_gap(const RealMatrix& x, const RealMatrix& y, const SpectralTolerance& tol = {}) {
  detail::require_same_shape(x, y, "emi_gap");
  detail::require_symmetric(x, tol, "emi_gap x");
  detail::require_symmetric(y, tol, "emi_gap y");
  const RealMatrix half = expm(-0.5 * x);
  return hs_norm(half * dexp_frechet(x, y) * half) - hs_norm(y);
}

// ---------------------------------------------------------------------------
// Ambient structure on Sp+
// ---------------------------------------------------------------------------

/// Pi_g(x) = (x + g J x J g) / 2.
inline RealMatrix pi_g(const PositiveSymplectic& g, const RealMatrix& x,
                       const SpectralTolerance& tol = {}) {
  detail::require_same_shape(g.matrix(), x, "pi_g");
  detail::require_symmetric(x, tol, "pi_g argument");
  const RealMatrix& gm = g.matrix();
  const RealMatrix j = detail::standard_j_matrix(g.half_dim());
  RealMatrix out = 0.5 * (x + gm * j * x * j * gm);
  return 0.5 * (out + out.transpose());
}

/// g^{-1} = -J g J for g in Sp+.
inline PositiveSymplectic positive_inverse(const PositiveSymplectic& g,
                                           const SpectralTolerance& tol = {}) {
  RealMatrix inv = symplectic_inverse_matrix(g.matrix());
  return PositiveSymplectic::from_matrix(0.5 * (inv + inv.transpose()), tol);
}

/// Orthonormal basis of symmetric d x d matrices under the trace inner
/// product: e_i e_i^T and (e_i e_j^T + e_j e_i^T) / sqrt(2) for i < j.
inline std::vector<RealMatrix> symmetric_basis(Eigen::Index d) {
  std::vector<RealMatrix> basis;
  basis.reserve(static_cast<std::size_t>(d * (d + 1) / 2));
  const double r = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index k = i; k < d; ++k) {
      RealMatrix e = RealMatrix::Zero(d, d);
      if (i == k) {
        e(i, i) = 1.0;
      } else {
        e(i, k) = r;
        e(k, i) = r;
      }
      basis.push_back(std::move(e));
    }
  }
  return basis;
}

/// Orthogonal projection onto T_g Sp+: solves (Pi_g + Pi_{g^{-1}} - 1) w =
/// Pi_{g^{-1}} x on the space of symmetric matrices.
inline RealMatrix tangent_project_e(const PositiveSymplectic& g, const RealMatrix& x,
                                    const SpectralTolerance& tol = {}) {
  detail::require_same_shape(g.matrix(), x, "tangent_project_e");
  detail::require_symmetric(x, tol, "tangent_project_e argument");
  const PositiveSymplectic g_inv = positive_inverse(g, tol);
  const auto basis = symmetric_basis(g.matrix().rows());
  const auto m = static_cast<Eigen::Index>(basis.size());
  RealMatrix system(m, m);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index l = 0; l < m; ++l) {
    const RealMatrix& e = basis[static_cast<std::size_t>(l)];
    const RealMatrix image = pi_g(g, e, tol) + pi_g(g_inv, e, tol) - e;
    for (Eigen::Index k = 0; k < m; ++k) {
      system(k, l) = trace_inner(basis[static_cast<std::size_t>(k)], image);
    }
  }
  const RealMatrix target = pi_g(g_inv, 0.5 * (x + x.transpose()), tol);
  for (Eigen::Index k = 0; k < m; ++k) {
    rhs(k) = trace_inner(basis[static_cast<std::size_t>(k)], target);
  }
  Eigen::FullPivLU<RealMatrix> lu(system);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) {
    fail(ErrorKind::SingularProjectionSystem,
         "projection system rank " + std::to_string(lu.rank()) + " < " + std::to_string(m));
  }
  const Eigen::VectorXd coeff = lu.solve(rhs);
  RealMatrix w = RealMatrix::Zero(x.rows(), x.cols());
  for (Eigen::Index k = 0; k < m; ++k) w += coeff(k) * basis[static_cast<std::size_t>(k)];
  return w;
}

/// max over interior nodes of ||a a'' a + J a'' J||_2 with a'' by central
/// second differences.
inline double ambient_residual(const SampledCurve& curve) {
  if (curve.tag() != ManifoldTag::positive) {
    fail(ErrorKind::InvalidArgument, "ambient residual needs a curve in Sp+");
  }
  if (curve.nodes() < 7) fail(ErrorKind::GridTooCoarse, "ambient residual needs >= 7 nodes");
  const double h = curve.step();
  const RealMatrix j = detail::standard_j_matrix(curve.dim() / 2);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < curve.nodes(); ++i) {
    const RealMatrix acc = (curve[i + 1] - 2.0 * curve[i] + curve[i - 1]) / (h * h);
    worst = std::max(worst, hs_norm(curve[i] * acc * curve[i] + j * acc * j));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Unitary factor and polar product
// ---------------------------------------------------------------------------

/// ||log(u^T v)||_2 with the principal logarithm.
inline double dist_unitary(const UnitaryJ& u, const UnitaryJ& v, const SpectralTolerance& tol = {}) {
  detail::require_same_shape(u.matrix(), v.matrix(), "dist_unitary");
  return hs_norm(logm_unitary_j(u.matrix().transpose() * v.matrix(), tol));
}

/// Throws NotTangent unless u^T x is anti-symmetric and commutes with J.
inline void check_unitary_tangent(const UnitaryJ& u, const RealMatrix& x,
                                  const SpectralTolerance& tol = {}) {
  detail::require_same_shape(u.matrix(), x, "unitary tangent");
  const RealMatrix w = u.matrix().transpose() * x;
  const auto check = is_sp_algebra(w, ComplexStructure(u.half_dim()), tol);
  if (!check.has(Parity::anti_hermitian)) {
    fail(ErrorKind::NotTangent, "u^T x is not an anti-hermitian algebra element (" +
                                    check.classification() + ")");
  }
}

/// Throws NotTangent unless y is symmetric and P^{-1/2} y P^{-1/2} anticommutes with J.
inline void check_positive_tangent(const PositiveSymplectic& p, const RealMatrix& y,
                                   const SpectralTolerance& tol = {}) {
  detail::require_same_shape(p.matrix(), y, "positive tangent");
  const RealMatrix w = inv_sqrtm_spd(p.matrix(), tol);
  const RealMatrix s = w * y * w;
  const auto check = is_sp_algebra(s, ComplexStructure(p.half_dim()), tol);
  if (!check.has(Parity::hermitian)) {
    fail(ErrorKind::NotTangent, "P^{-1/2} y P^{-1/2} is not a hermitian algebra element (" +
                                    check.classification() + ")");
  }
}

inline double metric_polar(const UnitaryJ& u, const PositiveSymplectic& p, const RealMatrix& x,
                           const RealMatrix& y, const SpectralTolerance& tol = {}) {
  check_unitary_tangent(u, x, tol);
  check_positive_tangent(p, y, tol);
  const double a = hs_norm(x);
  const double b = metric_positive(p, y, tol);
  return std::sqrt(a * a + b * b);
}

/// Precomputed alpha_{p,q}(t) = u_p e^{t z} gamma_{|p| |q|}(t) with
/// z = log(u_p^T u_q).
class PolarGeodesic {
 public:
  PolarGeodesic(const SymplecticElement& p, const SymplecticElement& q,
                const SpectralTolerance& tol = {})
      : tol_(tol),
        pp_(polar_pair(p, tol)),
        pq_(polar_pair(q, tol)),
        z_(logm_unitary_j(pp_.unitary.matrix().transpose() * pq_.unitary.matrix(), tol)),
        positive_(pp_.positive, pq_.positive, tol) {}

  [[nodiscard]] RealMatrix unitary_at(double t) const { return pp_.unitary.matrix() * expm(t * z_); }
  [[nodiscard]] RealMatrix positive_at(double t) const { return positive_.matrix_at(t); }
  [[nodiscard]] RealMatrix matrix_at(double t) const { return unitary_at(t) * positive_at(t); }
  [[nodiscard]] SymplecticElement at(double t) const {
    return SymplecticElement::from_matrix(matrix_at(t), tol_);
  }

  [[nodiscard]] const RealMatrix& unitary_log() const noexcept { return z_; }
  [[nodiscard]] const PositiveGeodesic& positive_part() const noexcept { return positive_; }
  [[nodiscard]] const PolarPair& start() const noexcept { return pp_; }
  [[nodiscard]] const PolarPair& end() const noexcept { return pq_; }

  [[nodiscard]] double length() const {
    const double a = hs_norm(z_);
    const double b = positive_.length();
    return std::sqrt(a * a + b * b);
  }

 private:
  SpectralTolerance tol_;
  PolarPair pp_;
  PolarPair pq_;
  RealMatrix z_;
  PositiveGeodesic positive_;
};

inline SymplecticElement geodesic_polar(const SymplecticElement& p, const SymplecticElement& q,
                                        double t, const SpectralTolerance& tol = {}) {
  return PolarGeodesic(p, q, tol).at(t);
}

inline double dist_polar(const SymplecticElement& p, const SymplecticElement& q,
                         const SpectralTolerance& tol = {}) {
  const PolarPair pp = polar_pair(p, tol);
  const PolarPair pq = polar_pair(q, tol);
  const double du = dist_unitary(pp.unitary, pq.unitary, tol);
  const double dp = dist_positive(pp.positive, pq.positive, tol);
  return std::sqrt(du * du + dp * dp);
}

/// c(p,q) = (2 max{ e^{4 ||ln v||} (||p|| ||p^{-1}||)^2, ||p|| ||p^{-1}|| })^{1/2}
/// with v = |p|^{-1/2} |q| |p|^{-1/2} and operator norms throughout.
inline double comparison_constant(const SymplecticElement& p, const SymplecticElement& q,
                                  const SpectralTolerance& tol = {}) {
  const PolarPair pp = polar_pair(p, tol);
  const PolarPair pq = polar_pair(q, tol);
  const RealMatrix w = inv_sqrtm_spd(pp.positive.matrix(), tol);
  const RealMatrix v = w * pq.positive.matrix() * w;
  const RealMatrix log_v = logm_spd(0.5 * (v + v.transpose()), tol);
  const double log_norm = op_norm(log_v);
  const double cond = op_norm(p.matrix()) * op_norm(symplectic_inverse_matrix(p.matrix()));
  const double c2 = 2.0 * std::max(std::exp(4.0 * log_norm) * cond * cond, cond);
  return std::sqrt(c2);
}

}  // namespace spgeo

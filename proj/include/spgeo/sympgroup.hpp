#pragma once

// Group layer: the complex structure J, membership predicates for the
// symplectic group and its Lie algebra, validated element types, and the
// action of the group on its positive cone.

#include <cstdint>
#include <string>
#include <utility>

#include "spgeo/errors.hpp"
#include "spgeo/matfun.hpp"
#include "spgeo/random.hpp"

namespace spgeo {

class ComplexStructure {
 public:
  explicit ComplexStructure(Eigen::Index half_dim) : matrix_(detail::standard_j_matrix(half_dim)) {
    if (half_dim < 1) fail(ErrorKind::InvalidArgument, "complex structure needs n >= 1");
  }

  [[nodiscard]] const RealMatrix& matrix() const noexcept { return matrix_; }
  [[nodiscard]] Eigen::Index half_dim() const noexcept { return matrix_.rows() / 2; }
  [[nodiscard]] Eigen::Index dim() const noexcept { return matrix_.rows(); }

 private:
  RealMatrix matrix_;
};

/// J = [[0, -I_n], [I_n, 0]].
inline ComplexStructure standard_j(Eigen::Index n) { return ComplexStructure(n); }

inline ComplexStructure structure_for(const RealMatrix& m) {
  check_real_matrix(m);
  return ComplexStructure(m.rows() / 2);
}

struct MembershipCheck {
  bool pass = false;
  double residual = 0.0;
  double bound = 0.0;  // residual threshold actually applied
};

namespace detail {

inline void require_dim(const RealMatrix& m, const ComplexStructure& j, const char* what) {
  if (m.rows() != j.dim() || m.cols() != j.dim()) {
    fail(ErrorKind::DimensionMismatch, std::string(what) + " does not match J dimension");
  }
}

}  // namespace detail

/// Residual ||g^T J g - J||_2, accepted when <= membership_tol * (1 + ||g||_2^2).
inline MembershipCheck is_symplectic(const RealMatrix& g, const ComplexStructure& j,
                                     const SpectralTolerance& tol = {}) {
  detail::require_dim(g, j, "is_symplectic argument");
  const RealMatrix& jm = j.matrix();
  MembershipCheck out;
  out.residual = hs_norm(g.transpose() * jm * g - jm);
  const double gn = hs_norm(g);
  out.bound = tol.membership_tol * (1.0 + gn * gn);
  out.pass = g.allFinite() && out.residual <= out.bound;
  return out;
}

enum class Parity { general, hermitian, anti_hermitian };

constexpr std::string_view to_string(Parity p) {
  switch (p) {
    case Parity::general: return "general";
    case Parity::hermitian: return "hermitian";
    case Parity::anti_hermitian: return "anti_hermitian";
  }
  return "general";
}

struct AlgebraCheck {
  bool pass = false;
  double residual = 0.0;
  double bound = 0.0;
  bool hermitian = false;       // x^T = x (within tolerance)
  bool anti_hermitian = false;  // x^T = -x

  /// "none" when x is not in sp; otherwise the parities that hold.
  [[nodiscard]] std::string classification() const {
    if (!pass) return "none";
    if (hermitian && anti_hermitian) return "hermitian,anti_hermitian";
    if (hermitian) return "hermitian";
    if (anti_hermitian) return "anti_hermitian";
    return "general";
  }

  [[nodiscard]] bool has(Parity p) const {
    switch (p) {
      case Parity::general: return pass;
      case Parity::hermitian: return pass && hermitian;
      case Parity::anti_hermitian: return pass && anti_hermitian;
    }
    return false;
  }
};

/// Residual ||x J + J x^T||_2 against membership_tol * (1 + ||x||_2).
inline AlgebraCheck is_sp_algebra(const RealMatrix& x, const ComplexStructure& j,
                                  const SpectralTolerance& tol = {}) {
  detail::require_dim(x, j, "is_sp_algebra argument");
  const RealMatrix& jm = j.matrix();
  AlgebraCheck out;
  const double scale = 1.0 + hs_norm(x);
  out.residual = hs_norm(x * jm + jm * x.transpose());
  out.bound = tol.membership_tol * scale;
  out.pass = x.allFinite() && out.residual <= out.bound;
  out.hermitian = hs_norm(x - x.transpose()) <= tol.membership_tol * scale;
  out.anti_hermitian = hs_norm(x + x.transpose()) <= tol.membership_tol * scale;
  return out;
}

// ---------------------------------------------------------------------------
// Validated element types
// ---------------------------------------------------------------------------

class SymplecticElement {
 public:
  static SymplecticElement from_matrix(RealMatrix g, const SpectralTolerance& tol = {}) {
    const ComplexStructure j = structure_for(g);
    const auto check = is_symplectic(g, j, tol);
    if (!check.pass) {
      fail(ErrorKind::NotSymplectic,
           "residual " + std::to_string(check.residual) + " exceeds " + std::to_string(check.bound));
    }
    Eigen::JacobiSVD<RealMatrix> svd(g);
    const double smin = svd.singularValues()(g.rows() - 1);
    if (smin < tol.pd_floor) {
      fail(ErrorKind::Singular, "smallest singular value " + std::to_string(smin) + " below floor");
    }
    return SymplecticElement(std::move(g));
  }

  static SymplecticElement identity(Eigen::Index n) {
    return SymplecticElement(RealMatrix::Identity(2 * n, 2 * n));
  }

  [[nodiscard]] const RealMatrix& matrix() const noexcept { return m_; }
  [[nodiscard]] Eigen::Index dim() const noexcept { return m_.rows(); }
  [[nodiscard]] Eigen::Index half_dim() const noexcept { return m_.rows() / 2; }

 private:
  explicit SymplecticElement(RealMatrix g) : m_(std::move(g)) {}
  RealMatrix m_;
};

class SpAlgebraElement {
 public:
  static SpAlgebraElement from_matrix(RealMatrix x, Parity parity = Parity::general,
                                      const SpectralTolerance& tol = {}) {
    const ComplexStructure j = structure_for(x);
    const auto check = is_sp_algebra(x, j, tol);
    if (!check.has(parity)) {
      fail(ErrorKind::NotInAlgebra, "algebra residual " + std::to_string(check.residual) +
                                        ", requested parity " + std::string(to_string(parity)) +
                                        ", classified " + check.classification());
    }
    return SpAlgebraElement(std::move(x), parity);
  }

  [[nodiscard]] const RealMatrix& matrix() const noexcept { return m_; }
  [[nodiscard]] Parity parity() const noexcept { return parity_; }
  [[nodiscard]] Eigen::Index half_dim() const noexcept { return m_.rows() / 2; }

 private:
  SpAlgebraElement(RealMatrix x, Parity p) : m_(std::move(x)), parity_(p) {}
  RealMatrix m_;
  Parity parity_;
};

class PositiveSymplectic {
 public:
  static PositiveSymplectic from_matrix(RealMatrix a, const SpectralTolerance& tol = {}) {
    const ComplexStructure j = structure_for(a);
    const double asym = hs_norm(a - a.transpose());
    if (asym > tol.membership_tol * (1.0 + hs_norm(a))) {
      fail(ErrorKind::NotSymmetric, "asymmetry " + std::to_string(asym));
    }
    a = 0.5 * (a + a.transpose()).eval();
    const double min_eig = min_eigenvalue_sym(a);
    if (min_eig < tol.pd_floor) {
      fail(ErrorKind::NotPositiveDefinite, "smallest eigenvalue " + std::to_string(min_eig));
    }
    const auto check = is_symplectic(a, j, tol);
    if (!check.pass) {
      fail(ErrorKind::NotSymplectic, "positive element residual " + std::to_string(check.residual));
    }
    return PositiveSymplectic(std::move(a));
  }

  static PositiveSymplectic identity(Eigen::Index n) {
    return PositiveSymplectic(RealMatrix::Identity(2 * n, 2 * n));
  }

  [[nodiscard]] const RealMatrix& matrix() const noexcept { return m_; }
  [[nodiscard]] Eigen::Index half_dim() const noexcept { return m_.rows() / 2; }

  [[nodiscard]] SymplecticElement as_element(const SpectralTolerance& tol = {}) const {
    return SymplecticElement::from_matrix(m_, tol);
  }

 private:
  explicit PositiveSymplectic(RealMatrix a) : m_(std::move(a)) {}
  RealMatrix m_;
};

struct UnitaryResiduals {
  double orthogonality = 0.0;  // ||u^T u - 1||_2
  double commutator = 0.0;     // ||uJ - Ju||_2
  double symplectic = 0.0;     // ||u^T J u - J||_2
  double bound = 0.0;
  [[nodiscard]] bool pass() const {
    return orthogonality <= bound && commutator <= bound && symplectic <= bound;
  }
};

inline UnitaryResiduals unitary_j_residuals(const RealMatrix& u, const SpectralTolerance& tol = {}) {
  const ComplexStructure j = structure_for(u);
  const RealMatrix& jm = j.matrix();
  UnitaryResiduals r;
  r.orthogonality = hs_norm(u.transpose() * u - identity_like(u));
  r.commutator = hs_norm(u * jm - jm * u);
  r.symplectic = hs_norm(u.transpose() * jm * u - jm);
  const double un = hs_norm(u);
  r.bound = tol.membership_tol * (1.0 + un * un);
  return r;
}

class UnitaryJ {
 public:
  static UnitaryJ from_matrix(RealMatrix u, const SpectralTolerance& tol = {}) {
    const auto r = unitary_j_residuals(u, tol);
    if (!r.pass()) {
      fail(ErrorKind::NotUnitaryJ, "orthogonality " + std::to_string(r.orthogonality) +
                                       ", J-commutator " + std::to_string(r.commutator) +
                                       ", symplectic " + std::to_string(r.symplectic));
    }
    return UnitaryJ(std::move(u));
  }

  static UnitaryJ identity(Eigen::Index n) { return UnitaryJ(RealMatrix::Identity(2 * n, 2 * n)); }

  [[nodiscard]] const RealMatrix& matrix() const noexcept { return m_; }
  [[nodiscard]] Eigen::Index half_dim() const noexcept { return m_.rows() / 2; }

 private:
  explicit UnitaryJ(RealMatrix u) : m_(std::move(u)) {}
  RealMatrix m_;
};

struct PolarPair {
  UnitaryJ unitary;
  PositiveSymplectic positive;

  [[nodiscard]] RealMatrix reassemble() const { return unitary.matrix() * positive.matrix(); }
};

/// Polar factors of a symplectic element; both factors are validated members.
inline PolarPair polar_pair(const SymplecticElement& g, const SpectralTolerance& tol = {}) {
  PolarFactors f = polar_decompose(g.matrix(), tol);
  PolarPair out{UnitaryJ::from_matrix(std::move(f.unitary), tol),
                PositiveSymplectic::from_matrix(std::move(f.positive), tol)};
  const double mismatch = hs_norm(out.reassemble() - g.matrix());
  if (mismatch > 1e-10 * (1.0 + hs_norm(g.matrix()))) {
    fail(ErrorKind::Singular, "polar reassembly mismatch " + std::to_string(mismatch));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Group operations
// ---------------------------------------------------------------------------

/// g^{-1} = -J g^T J; no linear solve.
inline RealMatrix symplectic_inverse_matrix(const RealMatrix& g) {
  const RealMatrix j = detail::standard_j_matrix(g.rows() / 2);
  return -j * g.transpose() * j;
}

inline SymplecticElement symplectic_inverse(const SymplecticElement& g,
                                            const SpectralTolerance& tol = {}) {
  return SymplecticElement::from_matrix(symplectic_inverse_matrix(g.matrix()), tol);
}

inline SymplecticElement compose(const SymplecticElement& a, const SymplecticElement& b,
                                 const SpectralTolerance& tol = {}) {
  return SymplecticElement::from_matrix(a.matrix() * b.matrix(), tol);
}

/// Orthogonal projection of a symmetric matrix onto the hermitian part of sp:
/// (x + J x J) / 2.
inline SpAlgebraElement project_sp_h(const RealMatrix& x, const SpectralTolerance& tol = {}) {
  const ComplexStructure j = structure_for(x);
  const double asym = hs_norm(x - x.transpose());
  if (asym > tol.membership_tol * (1.0 + hs_norm(x))) {
    fail(ErrorKind::NotSymmetric, "project_sp_h input asymmetry " + std::to_string(asym));
  }
  const RealMatrix& jm = j.matrix();
  RealMatrix p = 0.5 * (x + jm * x * jm);
  p = 0.5 * (p + p.transpose()).eval();
  return SpAlgebraElement::from_matrix(std::move(p), Parity::hermitian, tol);
}

/// Random element of sp with the requested parity and ||x||_2 == scale.
///   hermitian:       S + J S J, S symmetric Gaussian
///   anti_hermitian:  A - J A J, A anti-symmetric Gaussian
///   general:         sum of one of each
inline SpAlgebraElement random_sp_algebra(Eigen::Index n, Parity parity, double scale, Rng& rng) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "n must be >= 1");
  if (scale < 0.0 || !std::isfinite(scale)) fail(ErrorKind::InvalidArgument, "scale must be >= 0");
  const Eigen::Index d = 2 * n;
  const RealMatrix j = detail::standard_j_matrix(n);
  RealMatrix x = RealMatrix::Zero(d, d);
  if (parity != Parity::anti_hermitian) {
    const RealMatrix g = rng.gaussian(d, d);
    const RealMatrix s = 0.5 * (g + g.transpose());
    x += s + j * s * j;
  }
  if (parity != Parity::hermitian) {
    const RealMatrix g = rng.gaussian(d, d);
    const RealMatrix a = 0.5 * (g - g.transpose());
    x += a - j * a * j;
  }
  const double nrm = hs_norm(x);
  if (scale == 0.0 || nrm == 0.0) {
    x.setZero();
  } else {
    x *= scale / nrm;
  }
  // Restore exact parity after rescaling roundoff.
  if (parity == Parity::hermitian) x = 0.5 * (x + x.transpose()).eval();
  if (parity == Parity::anti_hermitian) x = 0.5 * (x - x.transpose()).eval();
  SpectralTolerance exact;
  exact.membership_tol = 1e-12;
  return SpAlgebraElement::from_matrix(std::move(x), parity, exact);
}

inline SpAlgebraElement random_sp_algebra(Eigen::Index n, Parity parity, double scale,
                                          std::uint64_t seed) {
  Rng rng(seed);
  return random_sp_algebra(n, parity, scale, rng);
}

inline SymplecticElement random_symplectic(Eigen::Index n, double scale, Rng& rng,
                                           const SpectralTolerance& tol = {}) {
  return SymplecticElement::from_matrix(
      expm(random_sp_algebra(n, Parity::general, scale, rng).matrix()), tol);
}

inline PositiveSymplectic random_positive(Eigen::Index n, double scale, Rng& rng,
                                          const SpectralTolerance& tol = {}) {
  RealMatrix a = expm(random_sp_algebra(n, Parity::hermitian, scale, rng).matrix());
  return PositiveSymplectic::from_matrix(0.5 * (a + a.transpose()), tol);
}

inline UnitaryJ random_unitary(Eigen::Index n, double scale, Rng& rng,
                               const SpectralTolerance& tol = {}) {
  return UnitaryJ::from_matrix(
      expm(random_sp_algebra(n, Parity::anti_hermitian, scale, rng).matrix()), tol);
}

/// (g, a) -> g a g^T.
inline PositiveSymplectic group_action(const SymplecticElement& g, const PositiveSymplectic& a,
                                       const SpectralTolerance& tol = {}) {
  if (g.dim() != a.matrix().rows()) fail(ErrorKind::DimensionMismatch, "group_action dimensions");
  RealMatrix out = g.matrix() * a.matrix() * g.matrix().transpose();
  return PositiveSymplectic::from_matrix(0.5 * (out + out.transpose()), tol);
}

/// g = e^{x/2} e^{-y/2} with x = log X, y = log Y; satisfies g Y g^T = X.
inline SymplecticElement transporter(const PositiveSymplectic& x, const PositiveSymplectic& y,
                                     const SpectralTolerance& tol = {}) {
  const RealMatrix lx = logm_spd(x.matrix(), tol);
  const RealMatrix ly = logm_spd(y.matrix(), tol);
  return SymplecticElement::from_matrix(expm(0.5 * lx) * expm(-0.5 * ly), tol);
}

/// sigma_a(b) = b^{1/2} a^{-1/2}; a section of g -> g a g^T.
inline SymplecticElement global_section(const PositiveSymplectic& a, const PositiveSymplectic& b,
                                        const SpectralTolerance& tol = {}) {
  return SymplecticElement::from_matrix(
      sqrtm_spd(b.matrix(), tol) * inv_sqrtm_spd(a.matrix(), tol), tol);
}

}  // namespace spgeo

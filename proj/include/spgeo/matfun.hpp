#pragma once

// Dense matrix-function kernels on real 2n x 2n matrices.
//
// expm uses scaling and squaring around a diagonal [8/8] Pade approximant.
// The input is scaled by 2^-s until its 1-norm is at most 0.5; at that radius
// the [8/8] truncation error is far below double precision, so the result has
// backward error at roundoff level. Symmetric functions (log, sqrt, powers)
// go through the symmetric eigendecomposition, and the logarithm of a
// J-commuting orthogonal matrix goes through its complex n x n representative.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <string>

#include <Eigen/Dense>

#include "spgeo/errors.hpp"

namespace spgeo {

using RealMatrix = Eigen::MatrixXd;

struct SpectralTolerance {
  double membership_tol = 1e-8;
  double pd_floor = 1e-10;
  double branch_guard = 1e-6;

  void validate() const {
    if (!(membership_tol > 0.0) || !(pd_floor > 0.0) || !(branch_guard > 0.0)) {
      fail(ErrorKind::InvalidArgument, "tolerances must be strictly positive");
    }
  }

  /// Defaults, with membership_tol overridable through SPGEO_MEMBERSHIP_TOL.
  static SpectralTolerance from_env() {
    SpectralTolerance tol;
    if (const char* env = std::getenv("SPGEO_MEMBERSHIP_TOL"); env != nullptr && *env != '\0') {
      char* end = nullptr;
      const double v = std::strtod(env, &end);
      if (end == env || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
        fail(ErrorKind::InvalidArgument,
             std::string("SPGEO_MEMBERSHIP_TOL is not a positive number: ") + env);
      }
      tol.membership_tol = v;
    }
    return tol;
  }
};

// ---------------------------------------------------------------------------
// Norms and inner products
// ---------------------------------------------------------------------------

/// Hilbert-Schmidt (Frobenius) norm.
inline double hs_norm(const RealMatrix& x) { return x.norm(); }

/// Operator norm (largest singular value).
inline double op_norm(const RealMatrix& x) {
  if (x.size() == 0) return 0.0;
  Eigen::JacobiSVD<RealMatrix> svd(x);
  return svd.singularValues()(0);
}

/// Trace inner product <a, b> = tr(b^T a).
inline double trace_inner(const RealMatrix& a, const RealMatrix& b) {
  return a.cwiseProduct(b).sum();
}

inline double norm1(const RealMatrix& x) {
  if (x.size() == 0) return 0.0;
  return x.cwiseAbs().colwise().sum().maxCoeff();
}

inline RealMatrix identity_like(const RealMatrix& x) {
  return RealMatrix::Identity(x.rows(), x.cols());
}

namespace detail {

inline void require_square(const RealMatrix& x, const char* what) {
  if (x.rows() != x.cols() || x.rows() == 0) {
    fail(ErrorKind::DimensionMismatch, std::string(what) + " must be a non-empty square matrix");
  }
}

inline void require_finite(const RealMatrix& x, const char* what) {
  if (!x.allFinite()) fail(ErrorKind::NonFinite, std::string(what) + " has NaN or Inf entries");
}

inline void require_same_shape(const RealMatrix& a, const RealMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorKind::DimensionMismatch, std::string(what) + ": operand shapes differ");
  }
}

inline double scale_of(const RealMatrix& x) { return 1.0 + hs_norm(x); }

}  // namespace detail

/// Throws unless x is a finite square matrix of even dimension >= 2.
inline void check_real_matrix(const RealMatrix& x) {
  detail::require_square(x, "matrix");
  if (x.rows() % 2 != 0) fail(ErrorKind::DimensionMismatch, "matrix dimension must be even");
  detail::require_finite(x, "matrix");
}

// ---------------------------------------------------------------------------
// Exponential
// ---------------------------------------------------------------------------

/// Inputs with 1-norm above this are rejected; e^700 is near the double range.
inline constexpr double kExpNormCap = 700.0;
inline constexpr double kExpSquaringThreshold = 0.5;
inline constexpr int kPadeOrder = 8;

inline RealMatrix expm(const RealMatrix& x) {
  detail::require_square(x, "expm argument");
  detail::require_finite(x, "expm argument");
  const double nrm = norm1(x);
  if (nrm > kExpNormCap) {
    fail(ErrorKind::Overflow, "expm argument 1-norm " + std::to_string(nrm) + " exceeds cap");
  }
  int squarings = 0;
  if (nrm > kExpSquaringThreshold) {
    squarings = static_cast<int>(std::ceil(std::log2(nrm / kExpSquaringThreshold)));
  }
  const RealMatrix a = x / std::ldexp(1.0, squarings);
  const RealMatrix id = identity_like(x);

  // c_k = (2m-k)! m! / ((2m)! k! (m-k)!)
  RealMatrix num = id;
  RealMatrix den = id;
  RealMatrix power = id;
  double c = 1.0;
  for (int k = 0; k < kPadeOrder; ++k) {
    c *= static_cast<double>(kPadeOrder - k) /
         (static_cast<double>(k + 1) * static_cast<double>(2 * kPadeOrder - k));
    power = power * a;
    num += c * power;
    den += ((k % 2 == 0) ? -c : c) * power;
  }
  RealMatrix result = den.partialPivLu().solve(num);
  for (int i = 0; i < squarings; ++i) result = result * result;
  if (!result.allFinite()) fail(ErrorKind::Overflow, "expm result overflowed");
  return result;
}

// ---------------------------------------------------------------------------
// Symmetric positive-definite functions
// ---------------------------------------------------------------------------

namespace detail {

inline Eigen::SelfAdjointEigenSolver<RealMatrix> spd_eigen(const RealMatrix& p,
                                                          const SpectralTolerance& tol) {
  require_square(p, "SPD argument");
  require_finite(p, "SPD argument");
  const double asym = hs_norm(p - p.transpose());
  if (asym > tol.membership_tol * scale_of(p)) {
    fail(ErrorKind::NotSymmetric, "asymmetry " + std::to_string(asym) + " above tolerance");
  }
  const RealMatrix sym = 0.5 * (p + p.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(sym);
  if (eig.info() != Eigen::Success) fail(ErrorKind::NotPositiveDefinite, "eigensolver failed");
  const double min_eig = eig.eigenvalues().minCoeff();
  if (min_eig < tol.pd_floor) {
    fail(ErrorKind::NotPositiveDefinite,
         "smallest eigenvalue " + std::to_string(min_eig) + " below floor");
  }
  return eig;
}

template <typename F>
RealMatrix spd_apply(const RealMatrix& p, const SpectralTolerance& tol, F&& f) {
  const auto eig = spd_eigen(p, tol);
  const Eigen::VectorXd mapped = eig.eigenvalues().unaryExpr(f);
  const RealMatrix& v = eig.eigenvectors();
  RealMatrix out = v * mapped.asDiagonal() * v.transpose();
  return 0.5 * (out + out.transpose());
}

}  // namespace detail

inline RealMatrix logm_spd(const RealMatrix& p, const SpectralTolerance& tol = {}) {
  return detail::spd_apply(p, tol, [](double l) { return std::log(l); });
}

inline RealMatrix sqrtm_spd(const RealMatrix& p, const SpectralTolerance& tol = {}) {
  return detail::spd_apply(p, tol, [](double l) { return std::sqrt(l); });
}

/// p^t for SPD p and real t (principal power).
inline RealMatrix powm_spd(const RealMatrix& p, double t, const SpectralTolerance& tol = {}) {
  return detail::spd_apply(p, tol, [t](double l) { return std::pow(l, t); });
}

inline RealMatrix inv_sqrtm_spd(const RealMatrix& p, const SpectralTolerance& tol = {}) {
  return detail::spd_apply(p, tol, [](double l) { return 1.0 / std::sqrt(l); });
}

inline double min_eigenvalue_sym(const RealMatrix& p) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(0.5 * (p + p.transpose()), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------------------
// Complex representation of J-commuting matrices
// ---------------------------------------------------------------------------

// With J = [[0,-I],[I,0]], a real matrix commutes with J exactly when it has
// the block form [[A,-B],[B,A]]; it then acts as A + iB on C^n.

inline Eigen::MatrixXcd to_complex(const RealMatrix& m) {
  const Eigen::Index n = m.rows() / 2;
  Eigen::MatrixXcd z(n, n);
  z.real() = m.topLeftCorner(n, n);
  z.imag() = m.bottomLeftCorner(n, n);
  return z;
}

inline RealMatrix from_complex(const Eigen::MatrixXcd& z) {
  const Eigen::Index n = z.rows();
  RealMatrix m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = z.real();
  m.topRightCorner(n, n) = -z.imag();
  m.bottomLeftCorner(n, n) = z.imag();
  m.bottomRightCorner(n, n) = z.real();
  return m;
}

namespace detail {

inline RealMatrix standard_j_matrix(Eigen::Index n) {
  RealMatrix j = RealMatrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = -RealMatrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = RealMatrix::Identity(n, n);
  return j;
}

}  // namespace detail

/// Principal logarithm of an orthogonal, J-commuting (hence symplectic)
/// matrix. The result is anti-symmetric, commutes with J, and has operator
/// norm at most pi.
inline RealMatrix logm_unitary_j(const RealMatrix& u, const SpectralTolerance& tol = {}) {
  detail::require_square(u, "unitary argument");
  detail::require_finite(u, "unitary argument");
  if (u.rows() % 2 != 0) fail(ErrorKind::DimensionMismatch, "unitary argument has odd dimension");
  const RealMatrix j = detail::standard_j_matrix(u.rows() / 2);
  const double unorm = hs_norm(u);
  const double ortho = hs_norm(u.transpose() * u - identity_like(u));
  const double comm = hs_norm(u * j - j * u);
  const double sympl = hs_norm(u.transpose() * j * u - j);
  const double bound = tol.membership_tol * (1.0 + unorm * unorm);
  if (ortho > bound || comm > bound || sympl > bound) {
    fail(ErrorKind::NotUnitaryJ, "orthogonality " + std::to_string(ortho) + ", J-commutator " +
                                     std::to_string(comm) + ", symplectic residual " +
                                     std::to_string(sympl));
  }

  // Schur form of a normal matrix is diagonal up to roundoff.
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(to_complex(u));
  if (schur.info() != Eigen::Success) fail(ErrorKind::NotUnitaryJ, "complex Schur failed");
  const Eigen::MatrixXcd& q = schur.matrixU();
  const Eigen::MatrixXcd& t = schur.matrixT();
  Eigen::VectorXcd log_diag(t.rows());
  constexpr double pi = 3.14159265358979323846;
  for (Eigen::Index k = 0; k < t.rows(); ++k) {
    const double angle = std::arg(t(k, k));
    if (pi - std::abs(angle) < tol.branch_guard) {
      fail(ErrorKind::BranchAmbiguity,
           "eigenvalue at angle " + std::to_string(angle) + " is within branch guard of -1");
    }
    log_diag(k) = std::complex<double>(0.0, angle);
  }
  Eigen::MatrixXcd log_c = q * log_diag.asDiagonal() * q.adjoint();
  log_c = 0.5 * (log_c - log_c.adjoint()).eval();
  return from_complex(log_c);
}

// ---------------------------------------------------------------------------
// Frechet derivative of exp and polar decomposition
// ---------------------------------------------------------------------------

/// d exp_x(y), read off the corner block of exp([[x, y], [0, x]]).
inline RealMatrix dexp_frechet(const RealMatrix& x, const RealMatrix& y) {
  detail::require_square(x, "dexp base point");
  detail::require_same_shape(x, y, "dexp_frechet");
  const Eigen::Index d = x.rows();
  RealMatrix block = RealMatrix::Zero(2 * d, 2 * d);
  block.topLeftCorner(d, d) = x;
  block.bottomRightCorner(d, d) = x;
  block.topRightCorner(d, d) = y;
  return expm(block).topRightCorner(d, d);
}

struct PolarFactors {
  RealMatrix unitary;
  RealMatrix positive;
};

/// g = u P with P = (g^T g)^{1/2}, computed from the SVD g = W S V^T as
/// u = W V^T and P = V S V^T.
inline PolarFactors polar_decompose(const RealMatrix& g, const SpectralTolerance& tol = {}) {
  detail::require_square(g, "polar argument");
  detail::require_finite(g, "polar argument");
  Eigen::JacobiSVD<RealMatrix> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin < tol.pd_floor) {
    fail(ErrorKind::Singular, "smallest singular value " + std::to_string(smin) + " below floor");
  }
  const RealMatrix& w = svd.matrixU();
  const RealMatrix& v = svd.matrixV();
  PolarFactors out;
  out.unitary = w * v.transpose();
  out.positive = v * s.asDiagonal() * v.transpose();
  out.positive = 0.5 * (out.positive + out.positive.transpose()).eval();
  return out;
}

}  // namespace spgeo

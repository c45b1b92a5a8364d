#pragma once

// Independent oracles used by the unit tests. Nothing here calls into the
// library's kernels.

#include <cmath>

#include <Eigen/Dense>
#include <gtest/gtest.h>

namespace spgeo::testing {

/// Plain Taylor series, summed until the next term vanishes in double precision.
inline Eigen::MatrixXd taylor_expm(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(x.rows(), x.cols());
  Eigen::MatrixXd term = sum;
  for (int k = 1; k < 400; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
    if (term.norm() <= 1e-18 * sum.norm()) break;
  }
  return sum;
}

/// Central finite difference of h -> taylor_expm(x + h y) at 0.
inline Eigen::MatrixXd fd_dexp(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double h) {
  return (taylor_expm(x + h * y) - taylor_expm(x - h * y)) / (2.0 * h);
}

inline Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.begin()->size());
  Eigen::MatrixXd m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline Eigen::MatrixXd diag(std::initializer_list<double> d) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return v.asDiagonal();
}

/// Block-diagonal embedding a (+) I_k, interleaved so that J stays standard:
/// a 2x2 matrix [[a,b],[c,d]] acting on (q1, p1) is placed on coordinates
/// (0, n) of a 2n-dimensional space.
inline Eigen::MatrixXd embed_2x2(const Eigen::MatrixXd& a, Eigen::Index n) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  m(0, 0) = a(0, 0);
  m(0, n) = a(0, 1);
  m(n, 0) = a(1, 0);
  m(n, n) = a(1, 1);
  return m;
}

inline ::testing::AssertionResult near(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                       double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return ::testing::AssertionFailure() << "shape mismatch";
  }
  const double err = (a - b).norm();
  if (err <= tol) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "||a - b|| = " << err << " > " << tol << "\na =\n"
                                       << a << "\nb =\n"
                                       << b;
}

}  // namespace spgeo::testing

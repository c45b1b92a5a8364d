#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "spgeo/curves.hpp"
#include "spgeo/metrics.hpp"
#include "test_support.hpp"

namespace spgeo {
namespace {

using testing::diag;
using testing::mat;
using testing::near;

constexpr double kE = std::numbers::e;
const double kSqrt2 = std::sqrt(2.0);

RealMatrix rotation(double theta) { return testing::taylor_expm(theta * mat({{0, -1}, {1, 0}})); }

// ---------------------------------------------------------------------------
// Left-invariant metric
// ---------------------------------------------------------------------------

TEST(MetricLeft, IdentityAndLeftInvariance) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 1 + trial % 3;
    const auto x = random_sp_algebra(n, Parity::general, rng.uniform(0.1, 2.0), rng);
    const auto g = random_symplectic(n, 1.5, rng);
    const auto h = random_symplectic(n, 1.5, rng);
    EXPECT_NEAR(metric_left(SymplecticElement::identity(n), x.matrix()), x.matrix().norm(), 1e-14);
    const RealMatrix v = g.matrix() * x.matrix();
    EXPECT_NEAR(metric_left(g, v), x.matrix().norm(), 1e-10);
    EXPECT_NEAR(metric_left(compose(h, g), h.matrix() * v), metric_left(g, v), 1e-10);
  }
}

TEST(MetricLeft, TraceFormula) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = random_symplectic(2, 1.5, rng);
    const RealMatrix v = g.matrix() * random_sp_algebra(2, Parity::general, 1.0, rng).matrix();
    const RealMatrix& gm = g.matrix();
    const double trace = ((gm * gm.transpose()).inverse() * v * v.transpose()).trace();
    const double m = metric_left(g, v);
    EXPECT_NEAR(m * m, trace, 1e-10 * (1 + trace));
  }
}

TEST(MetricLeft, RejectsNonTangent) {
  try {
    (void)metric_left(SymplecticElement::identity(1), RealMatrix::Identity(2, 2));
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotTangent);
  }
}

TEST(ExpLeft, Examples) {
  Rng rng(3);
  const auto g0 = random_symplectic(2, 1.0, rng);
  const auto zero = SpAlgebraElement::from_matrix(RealMatrix::Zero(4, 4));
  EXPECT_TRUE(near(exp_left(g0, zero, 0.7).matrix(), g0.matrix(), 1e-15));

  const auto s = random_sp_algebra(2, Parity::hermitian, 1.3, rng);
  EXPECT_TRUE(near(exp_left(SymplecticElement::identity(2), s, 0.6).matrix(),
                   testing::taylor_expm(0.6 * s.matrix()), 1e-12));
}

TEST(ExpLeft, StartsAtBaseWithRequestedVelocity) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g0 = random_symplectic(2, 1.0, rng);
    const auto v0 = random_sp_algebra(2, Parity::general, 1.0, rng);
    EXPECT_TRUE(near(exp_left(g0, v0, 0.0).matrix(), g0.matrix(), 1e-15));
    const double h = 1e-5;
    const RealMatrix fd = (exp_left(g0, v0, h).matrix() - exp_left(g0, v0, -h).matrix()) / (2 * h);
    EXPECT_TRUE(near(fd, g0.matrix() * v0.matrix(), 1e-8 * (1 + g0.matrix().norm())));
    EXPECT_TRUE(near(exp_left_velocity(g0, v0, 0.0), g0.matrix() * v0.matrix(), 1e-13));
    EXPECT_TRUE(is_symplectic(exp_left(g0, v0, 1.0).matrix(), standard_j(2)).pass);
  }
}

TEST(ChristoffelLeft, BilinearSymmetricAndMatchesSpray) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 1 + trial % 3;
    const auto g = random_symplectic(n, 1.0, rng);
    const RealMatrix v = g.matrix() * random_sp_algebra(n, Parity::general, 1.0, rng).matrix();
    const RealMatrix w = g.matrix() * random_sp_algebra(n, Parity::general, 1.0, rng).matrix();
    const RealMatrix z = RealMatrix::Zero(2 * n, 2 * n);
    EXPECT_TRUE(near(christoffel_left(g, v, z), z, 0.0));
    EXPECT_TRUE(near(christoffel_left(g, v, w), christoffel_left(g, w, v), 1e-12));
    const RealMatrix gamma = christoffel_left(g, v, v);
    EXPECT_LE((gamma - spray_left(g, v)).norm(), 1e-10 * (1 + gamma.norm()));
  }
}

TEST(CovariantDerivativeLeft, GeodesicIsParallelWithSecondOrderError) {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g0 = random_symplectic(2, 1.0, rng);
    const auto v0 = random_sp_algebra(2, Parity::general, rng.uniform(0.5, 1.0), rng);
    const auto coarse =
        covariant_derivative_left(sample_left(g0, v0, 64), sample_left_velocity(g0, v0, 64));
    const auto fine =
        covariant_derivative_left(sample_left(g0, v0, 128), sample_left_velocity(g0, v0, 128));
    EXPECT_LE(coarse.max_norm(), 1e-3);
    EXPECT_GE(coarse.max_norm() / fine.max_norm(), 3.5);
    EXPECT_LE(coarse.max_tangency_residual(), 1e-8);
  }
}

TEST(CovariantDerivativeLeft, ConstantCurveGivesFieldDerivative) {
  Rng rng(7);
  const auto x = random_sp_algebra(2, Parity::general, 1.0, rng).matrix();
  const auto y = random_sp_algebra(2, Parity::general, 1.0, rng).matrix();
  const Eigen::Index n = 16;
  std::vector<RealMatrix> curve, field;
  for (Eigen::Index i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    curve.push_back(RealMatrix::Identity(4, 4));
    field.push_back(t * t * x + t * y);  // quadratic: central differences are exact
  }
  const auto d = covariant_derivative_left(
      SampledCurve::from_values(curve, ManifoldTag::symplectic),
      SampledCurve::from_values(field, ManifoldTag::tangent));
  ASSERT_EQ(d.values.size(), static_cast<std::size_t>(n - 1));
  for (std::size_t k = 0; k < d.values.size(); ++k) {
    const double t = static_cast<double>(k + 1) / n;
    EXPECT_TRUE(near(d.values[k], 2 * t * x + y, 1e-12));
  }
}

TEST(CovariantDerivativeLeft, OutputIsTangentForArbitraryFields) {
  Rng rng(8);
  const auto g0 = random_symplectic(2, 1.0, rng);
  const auto v0 = random_sp_algebra(2, Parity::general, 1.0, rng);
  const auto x = random_sp_algebra(2, Parity::general, 1.0, rng).matrix();
  const auto curve = sample_left(g0, v0, 32);
  std::vector<RealMatrix> field;
  for (std::size_t i = 0; i < curve.nodes(); ++i) {
    field.push_back(curve[i] * (std::cos(curve.param(i)) * x + v0.matrix()));
  }
  const auto d = covariant_derivative_left(curve, SampledCurve::from_values(field, ManifoldTag::tangent));
  EXPECT_LE(d.max_tangency_residual(), 1e-8);
}

TEST(CovariantDerivativeLeft, Errors) {
  Rng rng(9);
  const auto g0 = random_symplectic(1, 1.0, rng);
  const auto v0 = random_sp_algebra(1, Parity::general, 1.0, rng);
  EXPECT_THROW((void)covariant_derivative_left(sample_left(g0, v0, 8), sample_left_velocity(g0, v0, 16)),
               GeometryError);
  std::vector<RealMatrix> few(3, RealMatrix::Identity(2, 2));
  try {
    (void)SampledCurve::from_values(few, ManifoldTag::symplectic);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GridTooCoarse);
  }
}

// ---------------------------------------------------------------------------
// Positive cone
// ---------------------------------------------------------------------------

TEST(MetricPositive, Examples) {
  Rng rng(10);
  const RealMatrix x = random_sp_algebra(2, Parity::hermitian, 1.2, rng).matrix();
  EXPECT_NEAR(metric_positive(PositiveSymplectic::identity(2), x), 1.2, 1e-14);
  const auto d = PositiveSymplectic::from_matrix(diag({4, 0.25}));
  EXPECT_NEAR(metric_positive(d, diag({4, 0.25})), kSqrt2, 1e-14);
}

TEST(MetricPositive, InvariantUnderAction) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_positive(2, 1.5, rng);
    const auto g = random_symplectic(2, 1.5, rng);
    const RealMatrix a_half = sqrtm_spd(a.matrix());
    const RealMatrix x = a_half * random_sp_algebra(2, Parity::hermitian, 1.0, rng).matrix() * a_half;
    const RealMatrix gx = g.matrix() * x * g.matrix().transpose();
    EXPECT_NEAR(metric_positive(group_action(g, a), 0.5 * (gx + gx.transpose())),
                metric_positive(a, x), 1e-10 * (1 + metric_positive(a, x)));
  }
}

TEST(GeodesicPositive, Examples) {
  Rng rng(12);
  const auto q = random_positive(2, 1.5, rng);
  const auto p = random_positive(2, 1.5, rng);
  const auto one = PositiveSymplectic::identity(2);
  for (double t : {0.0, 0.3, 1.0, 1.7}) {
    EXPECT_TRUE(near(geodesic_positive(one, q, t).matrix(), powm_spd(q.matrix(), t), 1e-12));
    EXPECT_TRUE(near(geodesic_positive(p, p, t).matrix(), p.matrix(), 1e-12));
  }
  const auto e2 = PositiveSymplectic::from_matrix(diag({kE * kE, 1 / (kE * kE)}));
  EXPECT_TRUE(near(geodesic_positive(PositiveSymplectic::identity(1), e2, 0.5).matrix(),
                   diag({kE, 1 / kE}), 1e-14));
}

TEST(GeodesicPositive, EndpointsAndMembership) {
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = random_positive(3, 2.0, rng);
    const auto q = random_positive(3, 2.0, rng);
    EXPECT_LE((geodesic_positive(p, q, 0.0).matrix() - p.matrix()).norm(), 1e-10 * p.matrix().norm());
    EXPECT_LE((geodesic_positive(p, q, 1.0).matrix() - q.matrix()).norm(), 1e-10 * q.matrix().norm());
    EXPECT_NO_THROW((void)geodesic_positive(p, q, 0.37));
  }
}

TEST(DistPositive, Examples) {
  Rng rng(14);
  const auto p = random_positive(2, 1.0, rng);
  EXPECT_NEAR(dist_positive(p, p), 0.0, 1e-14);
  const auto d = PositiveSymplectic::from_matrix(diag({kE, 1 / kE}));
  EXPECT_NEAR(dist_positive(PositiveSymplectic::identity(1), d), kSqrt2, 1e-15);
}

TEST(DistPositive, SymmetricInvariantAndAboveLogDifference) {
  Rng rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 1 + trial % 3;
    const auto p = random_positive(n, 2.0, rng);
    const auto q = random_positive(n, 2.0, rng);
    const auto g = random_symplectic(n, 1.0, rng);
    const double d = dist_positive(p, q);
    EXPECT_NEAR(d, dist_positive(q, p), 1e-10);
    EXPECT_NEAR(dist_positive(group_action(g, p), group_action(g, q)), d, 1e-9);
    EXPECT_GE(d, (logm_spd(p.matrix()) - logm_spd(q.matrix())).norm() - 1e-9);
  }
}

TEST(EmiGap, Examples) {
  Rng rng(16);
  const RealMatrix y = random_sp_algebra(2, Parity::hermitian, 1.0, rng).matrix();
  const RealMatrix x = random_sp_algebra(2, Parity::hermitian, 1.0, rng).matrix();
  EXPECT_NEAR(emi_gap(RealMatrix::Zero(4, 4), y), 0.0, 1e-15);
  EXPECT_NEAR(emi_gap(x, RealMatrix::Zero(4, 4)), 0.0, 0.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = random_sp_algebra(2, Parity::hermitian, rng.uniform(0.0, 2.0), rng);
    const auto b = random_sp_algebra(2, Parity::hermitian, rng.uniform(0.0, 2.0), rng);
    EXPECT_GE(emi_gap(a.matrix(), b.matrix()), -1e-10);
  }
  EXPECT_THROW((void)emi_gap(mat({{0, 1}, {0, 0}}), RealMatrix::Zero(2, 2)), GeometryError);
}

// ---------------------------------------------------------------------------
// Ambient structure
// ---------------------------------------------------------------------------

TEST(PiG, Examples) {
  EXPECT_TRUE(near(pi_g(PositiveSymplectic::identity(2), RealMatrix::Identity(4, 4)),
                   RealMatrix::Zero(4, 4), 0.0));
  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = random_positive(2, 1.5, rng);
    const RealMatrix half = sqrtm_spd(g.matrix());
    const RealMatrix s = random_sp_algebra(2, Parity::hermitian, 1.0, rng).matrix();
    const RealMatrix v = half * s * half;
    EXPECT_LE((pi_g(g, 0.5 * (v + v.transpose())) - v).norm(), 1e-10 * (1 + v.norm()));
  }
}

TEST(PiG, IdempotentWithInverseAsAdjoint) {
  Rng rng(18);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = random_positive(2, 1.5, rng);
    const auto g_inv = positive_inverse(g);
    RealMatrix m = rng.gaussian(4, 4);
    const RealMatrix x = 0.5 * (m + m.transpose());
    m = rng.gaussian(4, 4);
    const RealMatrix y = 0.5 * (m + m.transpose());
    const RealMatrix px = pi_g(g, x);
    EXPECT_LE((pi_g(g, px) - px).norm(), 1e-10 * (1 + px.norm()));
    EXPECT_NEAR(trace_inner(px, y), trace_inner(x, pi_g(g_inv, y)), 1e-10 * (1 + px.norm() * y.norm()));
  }
}

TEST(TangentProjectE, AtIdentityIsOrthogonalProjection) {
  Rng rng(19);
  const RealMatrix m = rng.gaussian(4, 4);
  const RealMatrix x = 0.5 * (m + m.transpose());
  EXPECT_TRUE(near(tangent_project_e(PositiveSymplectic::identity(2), x), project_sp_h(x).matrix(), 1e-12));
}

TEST(TangentProjectE, FixesTangentsIdempotentAndOrthogonal) {
  Rng rng(20);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 1 + trial % 3;
    const auto g = random_positive(n, 1.5, rng);
    const RealMatrix half = sqrtm_spd(g.matrix());
    const RealMatrix s = random_sp_algebra(n, Parity::hermitian, 1.0, rng).matrix();
    RealMatrix v = half * s * half;
    v = 0.5 * (v + v.transpose()).eval();
    EXPECT_LE((tangent_project_e(g, v) - v).norm(), 1e-9 * (1 + v.norm()));

    const RealMatrix m = rng.gaussian(2 * n, 2 * n);
    const RealMatrix x = 0.5 * (m + m.transpose());
    const RealMatrix w = tangent_project_e(g, x);
    EXPECT_LE((tangent_project_e(g, w) - w).norm(), 1e-9 * (1 + w.norm()));
    check_positive_tangent(g, w);
    // x - w is orthogonal to every tangent vector g^{1/2} e g^{1/2}, e a basis of sp_h.
    for (const RealMatrix& e : symmetric_basis(2 * n)) {
      const RealMatrix t = half * project_sp_h(e).matrix() * half;
      EXPECT_NEAR(trace_inner(x - w, t), 0.0, 1e-9 * (1 + x.norm() * t.norm()));
    }
  }
}

TEST(AmbientResidual, ConstantAndRegression) {
  std::vector<RealMatrix> constant(9, RealMatrix::Identity(2, 2));
  EXPECT_EQ(ambient_residual(SampledCurve::from_values(constant, ManifoldTag::positive)), 0.0);

  // e^{ts} for s = [[0.3, 0.4], [0.4, -0.3]], N = 64. Reference value from an
  // independent scipy evaluation of the same stencil.
  const RealMatrix s = mat({{0.3, 0.4}, {0.4, -0.3}});
  std::vector<RealMatrix> values;
  for (int i = 0; i <= 64; ++i) values.push_back(testing::taylor_expm(i / 64.0 * s));
  const auto curve = SampledCurve::from_values(values, ManifoldTag::positive);
  EXPECT_NEAR(ambient_residual(curve), 1.0052450764182697, 1e-9);

  std::vector<RealMatrix> few(6, RealMatrix::Identity(2, 2));
  try {
    (void)ambient_residual(SampledCurve::from_values(few, ManifoldTag::positive));
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GridTooCoarse);
  }
}

// ---------------------------------------------------------------------------
// Unitary factor and polar metric
// ---------------------------------------------------------------------------

TEST(DistUnitary, Examples) {
  Rng rng(21);
  const auto u = random_unitary(2, 2.0, rng);
  EXPECT_NEAR(dist_unitary(u, u), 0.0, 1e-14);
  for (double theta : {0.1, 1.0, 2.5, 3.1}) {
    EXPECT_NEAR(dist_unitary(UnitaryJ::identity(1), UnitaryJ::from_matrix(rotation(theta))),
                theta * kSqrt2, 1e-12);
  }
}

TEST(DistUnitary, EquivalenceWithChordalDistance) {
  Rng rng(22);
  const double lower = std::sqrt(1.0 - std::numbers::pi * std::numbers::pi / 12.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 1 + trial % 3;
    const auto u = random_unitary(n, 2.0, rng);
    RealMatrix w = random_sp_algebra(n, Parity::anti_hermitian, 1.0, rng).matrix();
    w *= rng.uniform(0.0, std::numbers::pi - 1e-3) / op_norm(w);
    const auto v = UnitaryJ::from_matrix(u.matrix() * expm(w));
    const double d2 = dist_unitary(u, v);
    const double chord = (u.matrix() - v.matrix()).norm();
    EXPECT_LE(lower * d2, chord + 1e-12);
    EXPECT_LE(chord, d2 + 1e-9);
  }
}

TEST(MetricPolar, Examples) {
  Rng rng(23);
  const auto one_u = UnitaryJ::identity(2);
  const auto one_p = PositiveSymplectic::identity(2);
  const RealMatrix x = random_sp_algebra(2, Parity::anti_hermitian, 0.8, rng).matrix();
  const RealMatrix y = random_sp_algebra(2, Parity::hermitian, 1.1, rng).matrix();
  const RealMatrix z = RealMatrix::Zero(4, 4);
  EXPECT_NEAR(metric_polar(one_u, one_p, x, z), 0.8, 1e-14);
  EXPECT_NEAR(metric_polar(one_u, one_p, z, y), 1.1, 1e-14);
  for (int trial = 0; trial < 30; ++trial) {
    const auto u = random_unitary(2, 2.0, rng);
    const auto p = random_positive(2, 1.5, rng);
    const RealMatrix half = sqrtm_spd(p.matrix());
    const RealMatrix tx = u.matrix() * random_sp_algebra(2, Parity::anti_hermitian, 1.0, rng).matrix();
    RealMatrix ty = half * random_sp_algebra(2, Parity::hermitian, 1.0, rng).matrix() * half;
    ty = 0.5 * (ty + ty.transpose()).eval();
    const double direct = std::sqrt(tx.squaredNorm() + std::pow((inv_sqrtm_spd(p.matrix()) * ty *
                                                                 inv_sqrtm_spd(p.matrix())).norm(), 2));
    EXPECT_NEAR(metric_polar(u, p, tx, ty), direct, 1e-12 * (1 + direct));
  }
  EXPECT_THROW((void)metric_polar(one_u, one_p, y, z), GeometryError);
  EXPECT_THROW((void)metric_polar(one_u, one_p, z, x), GeometryError);
}

TEST(GeodesicPolar, Examples) {
  Rng rng(24);
  const auto g = random_positive(2, 1.5, rng);
  const auto one2 = SymplecticElement::identity(2);
  for (double t : {0.0, 0.25, 0.5, 1.0}) {
    EXPECT_TRUE(near(geodesic_polar(one2, g.as_element(), t).matrix(), powm_spd(g.matrix(), t), 1e-12));
  }
  const double theta = 2.0;
  const auto one1 = SymplecticElement::identity(1);
  const auto r = SymplecticElement::from_matrix(rotation(theta));
  for (double t : {0.0, 0.3, 0.8, 1.0}) {
    EXPECT_TRUE(near(geodesic_polar(one1, r, t).matrix(), rotation(t * theta), 1e-12));
  }
}

TEST(GeodesicPolar, EndpointsAndPolarFactors) {
  Rng rng(25);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 1 + trial % 3;
    const auto p = SymplecticElement::from_matrix(random_unitary(n, 1.2, rng).matrix() *
                                                  random_positive(n, 2.0, rng).matrix());
    const auto q = SymplecticElement::from_matrix(random_unitary(n, 1.2, rng).matrix() *
                                                  random_positive(n, 2.0, rng).matrix());
    const PolarGeodesic geo(p, q);
    EXPECT_LE((geo.matrix_at(0.0) - p.matrix()).norm(), 1e-9);
    EXPECT_LE((geo.matrix_at(1.0) - q.matrix()).norm(), 1e-9);
    const double t = 0.41;
    const auto at = geodesic_polar(p, q, t);
    const auto pp = polar_pair(at);
    EXPECT_LE((pp.unitary.matrix() - geo.unitary_at(t)).norm(), 1e-9);
    EXPECT_LE((pp.positive.matrix() - geodesic_positive(polar_pair(p).positive, polar_pair(q).positive, t).matrix()).norm(), 1e-9);
    EXPECT_LE(op_norm(geo.unitary_log()), std::numbers::pi);
  }
}

TEST(DistPolar, Examples) {
  Rng rng(26);
  const auto g = random_symplectic(2, 1.5, rng);
  EXPECT_NEAR(dist_polar(g, g), 0.0, 1e-12);
  const auto one = SymplecticElement::identity(1);
  EXPECT_NEAR(dist_polar(one, SymplecticElement::from_matrix(diag({kE, 1 / kE}))), kSqrt2, 1e-14);
  for (double theta : {0.5, 1.0, 2.0}) {
    const auto q = SymplecticElement::from_matrix(rotation(theta) * diag({kE, 1 / kE}));
    EXPECT_NEAR(dist_polar(one, q), std::sqrt(2 * theta * theta + 2), 1e-12);
  }
}

TEST(ComparisonConstant, Examples) {
  const auto one = SymplecticElement::identity(1);
  EXPECT_NEAR(comparison_constant(one, one), kSqrt2, 1e-15);
  const auto q = SymplecticElement::from_matrix(diag({kE, 1 / kE}));
  EXPECT_NEAR(comparison_constant(one, q), kSqrt2 * kE * kE, 1e-12);
  Rng rng(27);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_symplectic(2, 2.0, rng);
    const auto r = random_symplectic(2, 2.0, rng);
    EXPECT_GE(comparison_constant(p, r), kSqrt2 - 1e-12);
  }
}

}  // namespace
}  // namespace spgeo

#pragma once

// Randomized property suites. Every trial draws its inputs from
// derive_seed(config.seed, index), records measured quantities and signed
// margins (threshold minus measurement, >= 0 means pass), and keeps its inputs
// when it fails so it can be replayed alone with run_trial.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spgeo/curves.hpp"
#include "spgeo/metrics.hpp"

namespace spgeo {

enum class SuiteId { S1, S2, S3, S4, S5, S6, S7, S8, S9, S10, S11, S12, S13 };

inline constexpr std::array<SuiteId, 13> kAllSuites = {
    SuiteId::S1, SuiteId::S2, SuiteId::S3,  SuiteId::S4,  SuiteId::S5,  SuiteId::S6, SuiteId::S7,
    SuiteId::S8, SuiteId::S9, SuiteId::S10, SuiteId::S11, SuiteId::S12, SuiteId::S13};

inline std::string to_string(SuiteId id) { return "S" + std::to_string(static_cast<int>(id) + 1); }

inline std::string_view suite_title(SuiteId id) {
  switch (id) {
    case SuiteId::S1: return "adjoint and polar stability";
    case SuiteId::S2: return "symplectic inverse and closure";
    case SuiteId::S3: return "left geodesics are parallel";
    case SuiteId::S4: return "positive-cone minimality";
    case SuiteId::S5: return "exponential metric increasing";
    case SuiteId::S6: return "projection Pi_g algebra";
    case SuiteId::S7: return "ambient lower bound";
    case SuiteId::S8: return "polar minimality and distance formula";
    case SuiteId::S9: return "comparison inequality";
    case SuiteId::S10: return "unitary metric equivalence";
    case SuiteId::S11: return "normal-speed collapse";
    case SuiteId::S12: return "Cauchy-transfer bound";
    case SuiteId::S13: return "action transitivity";
  }
  return "";
}

inline SuiteId parse_suite(std::string_view name) {
  for (SuiteId id : kAllSuites) {
    if (to_string(id) == name) return id;
  }
  fail(ErrorKind::UnknownSuite, "unknown suite '" + std::string(name) + "'");
}

struct SuiteConfig {
  SuiteId suite = SuiteId::S1;
  Eigen::Index n = 2;
  int trials = 100;
  std::uint64_t seed = 0;
  Eigen::Index grid = kDefaultGrid;
  SpectralTolerance tol{};
  double scale_cap = 2.0;      // bound on ||algebra elements||_2 in gating trials
  double stress_scale = 5.0;   // bound used by the non-gating stress trials
  int stress_trials = 10;
  int competitors = 32;        // sin-bump competitors per pair in S4 and S8

  void validate() const {
    if (n < 1 || n > 6) fail(ErrorKind::InvalidArgument, "n must lie in 1..6");
    if (trials < 1) fail(ErrorKind::InvalidArgument, "trials must be >= 1");
    if (stress_trials < 0) fail(ErrorKind::InvalidArgument, "stress_trials must be >= 0");
    if (competitors < 1) fail(ErrorKind::InvalidArgument, "competitors must be >= 1");
    if (grid < kMinIntervals) fail(ErrorKind::GridTooCoarse, "grid must be >= 4");
    if (!(scale_cap > 0.0) || !(stress_scale > 0.0)) {
      fail(ErrorKind::InvalidArgument, "scales must be > 0");
    }
    tol.validate();
  }
};

struct Quantity {
  std::string name;
  double value = 0.0;
};

struct NamedMatrix {
  std::string name;
  RealMatrix value;
};

struct TrialRecord {
  int index = 0;
  std::uint64_t seed = 0;
  double scale_cap = 0.0;
  std::vector<Quantity> quantities;
  std::vector<Quantity> margins;
  std::vector<NamedMatrix> inputs;  // kept for failing trials and replays
  std::string error;                // kernel error that aborted the trial, if any
  bool pass = false;

  [[nodiscard]] std::optional<Quantity> worst_margin() const {
    if (margins.empty()) return std::nullopt;
    return *std::min_element(margins.begin(), margins.end(),
                             [](const Quantity& a, const Quantity& b) { return a.value < b.value; });
  }
};

struct VerificationReport {
  SuiteConfig config;
  std::vector<TrialRecord> trials;
  std::vector<TrialRecord> stress;
  int pass_count = 0;
  int failure_count = 0;
  int stress_pass_count = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::string worst_margin_name;
  int worst_trial = -1;

  [[nodiscard]] bool all_pass() const { return failure_count == 0; }
};

/// Scratch space handed to a suite body for one trial.
class TrialContext {
 public:
  TrialContext(const SuiteConfig& config, int index, std::uint64_t seed, double scale_cap)
      : config_(config), rng_(seed) {
    record_.index = index;
    record_.seed = seed;
    record_.scale_cap = scale_cap;
  }

  Rng& rng() { return rng_; }
  [[nodiscard]] Eigen::Index n() const { return config_.n; }
  [[nodiscard]] int index() const { return record_.index; }
  [[nodiscard]] double cap() const { return record_.scale_cap; }
  [[nodiscard]] Eigen::Index grid() const { return config_.grid; }
  [[nodiscard]] int competitors() const { return config_.competitors; }
  [[nodiscard]] const SpectralTolerance& tol() const { return config_.tol; }

  /// A norm drawn uniformly from (0, limit].
  double draw_scale(double limit) { return limit * (1.0 - rng_.uniform(0.0, 1.0)); }

  void quantity(std::string name, double value) { record_.quantities.push_back({std::move(name), value}); }
  void margin(std::string name, double value) { record_.margins.push_back({std::move(name), value}); }
  void input(std::string name, const RealMatrix& m) { record_.inputs.push_back({std::move(name), m}); }

  TrialRecord finish(bool keep_inputs) {
    bool ok = record_.error.empty();
    for (const auto& m : record_.margins) ok = ok && m.value >= 0.0 && !std::isnan(m.value);
    record_.pass = ok;
    if (ok && !keep_inputs) record_.inputs.clear();
    return std::move(record_);
  }

  void set_error(std::string message) { record_.error = std::move(message); }

 private:
  const SuiteConfig& config_;
  Rng rng_;
  TrialRecord record_;
};

namespace suites {

inline void membership_margin(TrialContext& ctx, const std::string& name, const MembershipCheck& c) {
  ctx.quantity(name + "_residual", c.residual);
  ctx.margin(name, c.bound - c.residual);
}

inline void algebra_margin(TrialContext& ctx, const std::string& name, const AlgebraCheck& c) {
  ctx.quantity(name + "_residual", c.residual);
  ctx.margin(name, c.bound - c.residual);
}

inline RealMatrix random_symmetric_unit(Eigen::Index d, Rng& rng) {
  const RealMatrix g = rng.gaussian(d, d);
  RealMatrix s = 0.5 * (g + g.transpose());
  return s / s.norm();
}

/// u P with the unitary generator kept below 1.2 in 2-norm so that the
/// relative unitary factor of two such elements stays inside the branch.
inline SymplecticElement random_polar_element(TrialContext& ctx, const std::string& name) {
  const double unitary_scale = std::min(ctx.cap(), 1.2);
  const auto u = random_unitary(ctx.n(), ctx.draw_scale(unitary_scale), ctx.rng(), ctx.tol());
  const auto p = random_positive(ctx.n(), ctx.draw_scale(ctx.cap()), ctx.rng(), ctx.tol());
  const auto g = SymplecticElement::from_matrix(u.matrix() * p.matrix(), ctx.tol());
  ctx.input(name, g.matrix());
  return g;
}

inline void s1(TrialContext& ctx) {
  const auto g = ctx.index() == 0
                     ? SymplecticElement::identity(ctx.n())
                     : random_symplectic(ctx.n(), ctx.draw_scale(ctx.cap()), ctx.rng(), ctx.tol());
  ctx.input("g", g.matrix());
  const ComplexStructure j = standard_j(ctx.n());
  membership_margin(ctx, "adjoint_symplectic", is_symplectic(g.matrix().transpose(), j, ctx.tol()));
  const PolarFactors f = polar_decompose(g.matrix(), ctx.tol());
  const UnitaryResiduals ur = unitary_j_residuals(f.unitary, ctx.tol());
  ctx.quantity("unitary_residual", std::max({ur.orthogonality, ur.commutator, ur.symplectic}));
  ctx.margin("unitary_orthogonal", ur.bound - ur.orthogonality);
  ctx.margin("unitary_commutes_j", ur.bound - ur.commutator);
  ctx.margin("unitary_symplectic", ur.bound - ur.symplectic);
  membership_margin(ctx, "positive_symplectic", is_symplectic(f.positive, j, ctx.tol()));
  const double lambda = min_eigenvalue_sym(f.positive);
  ctx.quantity("positive_min_eigenvalue", lambda);
  ctx.margin("positive_definite", lambda - ctx.tol().pd_floor);
  const double reassembly = hs_norm(f.unitary * f.positive - g.matrix());
  ctx.quantity("reassembly_residual", reassembly);
  ctx.margin("reassembly", ctx.tol().membership_tol * (1.0 + hs_norm(g.matrix())) - reassembly);
}

inline void s2(TrialContext& ctx) {
  const Eigen::Index n = ctx.n();
  const auto& tol = ctx.tol();
  const auto g = random_symplectic(n, ctx.draw_scale(ctx.cap()), ctx.rng(), tol);
  const auto h = random_symplectic(n, ctx.draw_scale(ctx.cap()), ctx.rng(), tol);
  const auto x = random_sp_algebra(n, Parity::general, ctx.draw_scale(ctx.cap()), ctx.rng());
  const auto y = random_sp_algebra(n, Parity::general, ctx.draw_scale(ctx.cap()), ctx.rng());
  ctx.input("g", g.matrix());
  ctx.input("h", h.matrix());
  ctx.input("x", x.matrix());
  ctx.input("y", y.matrix());
  const ComplexStructure j = standard_j(n);
  membership_margin(ctx, "product", is_symplectic(g.matrix() * h.matrix(), j, tol));
  const RealMatrix inv = symplectic_inverse_matrix(g.matrix());
  membership_margin(ctx, "inverse", is_symplectic(inv, j, tol));
  const double gn = hs_norm(g.matrix());
  const double id_res = hs_norm(g.matrix() * inv - identity_like(inv));
  ctx.quantity("inverse_identity_residual", id_res);
  ctx.margin("inverse_identity", tol.membership_tol * (1.0 + gn * gn) - id_res);
  membership_margin(ctx, "transpose", is_symplectic(g.matrix().transpose(), j, tol));
  membership_margin(ctx, "exponential", is_symplectic(expm(x.matrix()), j, tol));
  const RealMatrix bracket = x.matrix() * y.matrix() - y.matrix() * x.matrix();
  algebra_margin(ctx, "bracket", is_sp_algebra(bracket, j, tol));
  algebra_margin(ctx, "algebra_transpose", is_sp_algebra(x.matrix().transpose(), j, tol));
}

inline void s3(TrialContext& ctx) {
  const double cap = ctx.cap();
  const auto g0 = random_symplectic(ctx.n(), 0.5 * cap, ctx.rng(), ctx.tol());
  const auto v0 = random_sp_algebra(ctx.n(), Parity::general,
                                    ctx.rng().uniform(0.25 * cap, 0.5 * cap), ctx.rng());
  ctx.input("g0", g0.matrix());
  ctx.input("v0", v0.matrix());
  const Eigen::Index n1 = ctx.grid();
  const auto coarse = covariant_derivative_left(sample_left(g0, v0, n1, ctx.tol()),
                                                sample_left_velocity(g0, v0, n1));
  const auto fine = covariant_derivative_left(sample_left(g0, v0, 2 * n1, ctx.tol()),
                                              sample_left_velocity(g0, v0, 2 * n1));
  const double r1 = coarse.max_norm();
  const double r2 = fine.max_norm();
  ctx.quantity("residual_N", r1);
  ctx.quantity("residual_2N", r2);
  ctx.margin("residual", 1e-3 - r1);
  const double ratio = r2 > 0.0 ? r1 / r2 : std::numeric_limits<double>::infinity();
  ctx.quantity("refinement_ratio", std::isinf(ratio) ? -1.0 : ratio);
  ctx.margin("refinement_order", r1 <= 1e-13 ? 0.0 : ratio - 3.5);
  const double tangency = coarse.max_tangency_residual();
  ctx.quantity("tangency_residual", tangency);
  ctx.margin("tangency", ctx.tol().membership_tol * (1.0 + r1) - tangency);
}

inline void s4(TrialContext& ctx) {
  const auto p = random_positive(ctx.n(), ctx.draw_scale(ctx.cap()), ctx.rng(), ctx.tol());
  const auto q = random_positive(ctx.n(), ctx.draw_scale(ctx.cap()), ctx.rng(), ctx.tol());
  ctx.input("p", p.matrix());
  ctx.input("q", q.matrix());
  const double d = dist_positive(p, q, ctx.tol());
  const auto curve = sample_positive(p, q, ctx.grid(), ctx.tol());
  ctx.quantity("distance", d);
  ctx.quantity("geodesic_length", curve_length(curve, MetricKind::positive_cone, ctx.tol()));
  double shortest = std::numeric_limits<double>::infinity();
  for (int k = 0; k < ctx.competitors(); ++k) {
    const auto dir = random_sp_algebra(ctx.n(), Parity::general, 1.0, ctx.rng());
    const double amp = ctx.rng().uniform(0.1, 0.5);
    const auto c = perturb_curve(curve, dir, amp, ctx.tol());
    shortest = std::min(shortest, curve_length(c, MetricKind::positive_cone, ctx.tol()));
  }
  ctx.quantity("shortest_competitor", shortest);
  ctx.margin("minimality", shortest - (d - 1e-6));
}

inline void s5(TrialContext& ctx) {
  const auto x = random_sp_algebra(ctx.n(), Parity::hermitian, ctx.draw_scale(ctx.cap()), ctx.rng());
  const auto y = random_sp_algebra(ctx.n(), Parity::hermitian, ctx.draw_scale(ctx.cap()), ctx.rng());
  ctx.input("x", x.matrix());
  ctx.input("y", y.matrix());
  const double gap = emi_gap(x.matrix(), y.matrix(), ctx.tol());
  ctx.quantity("emi_gap", gap);
  ctx.margin("emi", gap + 1e-10);
}

inline void s6(TrialContext& ctx) {
  const auto g = random_positive(ctx.n(), ctx.draw_scale(ctx.cap()), ctx.rng(), ctx.tol());
  const RealMatrix x = random_symmetric_unit(2 * ctx.n(), ctx.rng());
  const RealMatrix y = random_symmetric_unit(2 * ctx.n(), ctx.rng());
  ctx.input("g", g.matrix());
  ctx.input("x", x);
  ctx.input("y", y);
  const RealMatrix px = pi_g(g, x, ctx.tol());
  const double idem = hs_norm(pi_g(g, px, ctx.tol()) - px);
  ctx.quantity("idempotence_residual", idem);
  ctx.margin("idempotence", 1e-10 - idem);
  const double adj = std::abs(trace_inner(px, y) - trace_inner(x, pi_g(positive_inverse(g, ctx.tol()), y, ctx.tol())));
  ctx.quantity("adjoint_residual", adj);
  ctx.margin("adjoint", 1e-10 - adj);
  const RealMatrix w = inv_sqrtm_spd(g.matrix(), ctx.tol());
  const RealMatrix s = w * px * w;
  const RealMatrix j = standard_j(ctx.n()).matrix();
  const double range = hs_norm(s * j + j * s);
  ctx.quantity("range_residual", range);
  ctx.margin("range", 1e-8 - range);
}

inline constexpr int kAmbientPaths = 5;

inline void s7(TrialContext& ctx) {
  const auto a = random_positive(ctx.n(), ctx.draw_scale(ctx.cap()), ctx.rng(), ctx.tol());
  const auto b = random_positive(ctx.n(), ctx.draw_scale(ctx.cap()), ctx.rng(), ctx.tol());
  ctx.input("a", a.matrix());
  ctx.input("b", b.matrix());
  const double chord = hs_norm(a.matrix() - b.matrix());
  ctx.quantity("chord", chord);
  const auto geodesic = sample_positive(a, b, ctx.grid(), ctx.tol());
  double shortest = curve_length(geodesic, MetricKind::positive_ambient, ctx.tol());
  for (int k = 1; k < kAmbientPaths; ++k) {
    const auto dir = random_sp_algebra(ctx.n(), Parity::general, 1.0, ctx.rng());
    const double amp = ctx.rng().uniform(0.1, 0.5);
    const auto c = perturb_curve(geodesic, dir, amp, ctx.tol());
    shortest = std::min(shortest, curve_length(c, MetricKind::positive_ambient, ctx.tol()));
  }
  ctx.quantity("shortest_path", shortest);
  ctx.margin("lower_bound", shortest + 1e-6 - chord);
}

inline void s8(TrialContext& ctx) {
  const auto p = random_polar_element(ctx, "p");
  const auto q = random_polar_element(ctx, "q");
  const double d = dist_polar(p, q, ctx.tol());
  const auto curve = sample_polar(p, q, ctx.grid(), ctx.tol());
  const double geo = curve_length(curve, MetricKind::polar_product, ctx.tol());
  ctx.quantity("distance", d);
  ctx.quantity("geodesic_length", geo);
  ctx.margin("distance_formula", 1e-3 * (1.0 + d) - std::abs(geo - d));
  double shortest = std::numeric_limits<double>::infinity();
  for (int k = 0; k < ctx.competitors(); ++k) {
    const auto dir = random_sp_algebra(ctx.n(), Parity::general, 1.0, ctx.rng());
    const double amp = ctx.rng().uniform(0.1, 0.5);
    const auto c = perturb_curve(curve, dir, amp, ctx.tol());
    shortest = std::min(shortest, curve_length(c, MetricKind::polar_product, ctx.tol()));
  }
  ctx.quantity("shortest_competitor", shortest);
  ctx.margin("minimality", shortest - (d - 1e-6));
}

inline void s9(TrialContext& ctx) {
  const auto p = random_polar_element(ctx, "p");
  const auto q = random_polar_element(ctx, "q");
  const double d = dist_polar(p, q, ctx.tol());
  const double c = comparison_constant(p, q, ctx.tol());
  const double li = curve_length(sample_polar(p, q, 2 * ctx.grid(), ctx.tol()), MetricKind::left_invariant,
                                 ctx.tol());
  ctx.quantity("polar_distance", d);
  ctx.quantity("comparison_constant", c);
  ctx.quantity("left_length", li);
  ctx.margin("comparison", c * d + 1e-6 - li);
}

inline void s10(TrialContext& ctx) {
  const auto u = random_unitary(ctx.n(), ctx.draw_scale(ctx.cap()), ctx.rng(), ctx.tol());
  RealMatrix w = random_sp_algebra(ctx.n(), Parity::anti_hermitian, 1.0, ctx.rng()).matrix();
  w *= ctx.rng().uniform(0.0, std::numbers::pi - 1e-3) / op_norm(w);
  const auto v = UnitaryJ::from_matrix(u.matrix() * expm(w), ctx.tol());
  ctx.input("u", u.matrix());
  ctx.input("v", v.matrix());
  const double d2 = dist_unitary(u, v, ctx.tol());
  const double chord = hs_norm(u.matrix() - v.matrix());
  const double lower = std::sqrt(1.0 - std::numbers::pi * std::numbers::pi / 12.0);
  ctx.quantity("geodesic_distance", d2);
  ctx.quantity("chord", chord);
  ctx.margin("lower_equivalence", chord - lower * d2);
  ctx.margin("upper_equivalence", d2 + 1e-9 - chord);
}

inline void s11(TrialContext& ctx) {
  const Eigen::Index n = ctx.n();
  RealMatrix x = RealMatrix::Zero(2 * n, 2 * n);
  // Each complex coordinate carries either a hermitian or an anti-hermitian
  // block, so the two parts act on disjoint coordinates and commute.
  for (Eigen::Index k = 0; k < n; ++k) {
    const double c = ctx.rng().normal();
    if (ctx.rng().uniform(0.0, 1.0) < 0.5) {
      x(k, k) = c;
      x(k + n, k + n) = -c;
    } else {
      x(k + n, k) = c;
      x(k, k + n) = -c;
    }
  }
  if (x.norm() > 0.0) x *= ctx.draw_scale(ctx.cap()) / x.norm();
  const auto u = random_unitary(n, ctx.cap(), ctx.rng(), ctx.tol());
  const auto v = SpAlgebraElement::from_matrix(u.matrix() * x * u.matrix().transpose(), Parity::general,
                                                ctx.tol());
  ctx.input("v", v.matrix());
  const auto one = SymplecticElement::identity(n);
  double worst = 0.0;
  for (double t : {0.25, 0.5, 1.0}) {
    worst = std::max(worst, hs_norm(exp_left(one, v, t, ctx.tol()).matrix() - expm(t * v.matrix())));
  }
  ctx.quantity("collapse_residual", worst);
  ctx.margin("collapse", 1e-9 - worst);
}

inline constexpr std::array<double, 4> kCauchyEpsilons = {0.05, 0.1, 0.25, 0.5};

inline void s12(TrialContext& ctx) {
  const double eps = kCauchyEpsilons[static_cast<std::size_t>(ctx.index()) % kCauchyEpsilons.size()];
  const auto v = random_sp_algebra(ctx.n(), Parity::general, eps, ctx.rng());
  ctx.input("v", v.matrix());
  const auto one = SymplecticElement::identity(ctx.n());
  const double dev = hs_norm(exp_left(one, v, 1.0, ctx.tol()).matrix() - one.matrix());
  ctx.quantity("epsilon", eps);
  ctx.quantity("deviation", dev);
  ctx.margin("cauchy_bound", std::exp(3.0 * eps) * eps + 1e-9 - dev);
}

inline void s13(TrialContext& ctx) {
  const auto x = random_positive(ctx.n(), ctx.draw_scale(ctx.cap()), ctx.rng(), ctx.tol());
  const auto y = random_positive(ctx.n(), ctx.draw_scale(ctx.cap()), ctx.rng(), ctx.tol());
  ctx.input("x", x.matrix());
  ctx.input("y", y.matrix());
  const RealMatrix g = transporter(x, y, ctx.tol()).matrix();
  const double tr = hs_norm(g * y.matrix() * g.transpose() - x.matrix());
  ctx.quantity("transporter_residual", tr);
  ctx.margin("transporter", ctx.tol().membership_tol * (1.0 + hs_norm(x.matrix())) - tr);
  const RealMatrix s = global_section(x, y, ctx.tol()).matrix();
  const double sr = hs_norm(s * x.matrix() * s.transpose() - y.matrix());
  ctx.quantity("section_residual", sr);
  ctx.margin("section", ctx.tol().membership_tol * (1.0 + hs_norm(y.matrix())) - sr);
}

inline void dispatch(SuiteId id, TrialContext& ctx) {
  switch (id) {
    case SuiteId::S1: return s1(ctx);
    case SuiteId::S2: return s2(ctx);
    case SuiteId::S3: return s3(ctx);
    case SuiteId::S4: return s4(ctx);
    case SuiteId::S5: return s5(ctx);
    case SuiteId::S6: return s6(ctx);
    case SuiteId::S7: return s7(ctx);
    case SuiteId::S8: return s8(ctx);
    case SuiteId::S9: return s9(ctx);
    case SuiteId::S10: return s10(ctx);
    case SuiteId::S11: return s11(ctx);
    case SuiteId::S12: return s12(ctx);
    case SuiteId::S13: return s13(ctx);
  }
}

}  // namespace suites

/// Seed of gating trial `index`; stress trials use the complemented run seed.
inline std::uint64_t trial_seed(const SuiteConfig& config, int index, bool stress = false) {
  return derive_seed(stress ? ~config.seed : config.seed, static_cast<std::uint64_t>(index));
}

/// Runs one trial in isolation. Inputs are always kept.
inline TrialRecord run_trial(const SuiteConfig& config, int index, bool stress = false,
                             bool keep_inputs = true) {
  config.validate();
  TrialContext ctx(config, index, trial_seed(config, index, stress),
                   stress ? config.stress_scale : config.scale_cap);
  try {
    suites::dispatch(config.suite, ctx);
  } catch (const GeometryError& e) {
    ctx.set_error(std::string(to_string(e.kind())) + ": " + e.what());
  }
  return ctx.finish(keep_inputs);
}

inline VerificationReport run_suite(const SuiteConfig& config) {
  config.validate();
  VerificationReport report;
  report.config = config;
  report.trials.reserve(static_cast<std::size_t>(config.trials));
  for (int i = 0; i < config.trials; ++i) {
    TrialRecord r = run_trial(config, i, false, false);
    if (r.pass) {
      ++report.pass_count;
    } else {
      ++report.failure_count;
    }
    if (const auto w = r.worst_margin(); w && w->value < report.worst_margin) {
      report.worst_margin = w->value;
      report.worst_margin_name = w->name;
      report.worst_trial = i;
    }
    report.trials.push_back(std::move(r));
  }
  for (int i = 0; i < config.stress_trials; ++i) {
    TrialRecord r = run_trial(config, i, true, false);
    if (r.pass) ++report.stress_pass_count;
    report.stress.push_back(std::move(r));
  }
  return report;
}

}  // namespace spgeo

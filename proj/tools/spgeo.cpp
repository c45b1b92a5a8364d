// spgeo: command-line front end.
//
// Exit codes: 0 success, 1 failed check or suite, 2 usage or input error,
// 3 numerical failure (overflow, branch ambiguity, singularity).

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spgeo/curves.hpp"
#include "spgeo/io.hpp"
#include "spgeo/metrics.hpp"
#include "spgeo/verify.hpp"

namespace {

using namespace spgeo;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;
constexpr int kNumeric = 3;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void emit_matrix(const RealMatrix& m, const std::string& out) {
  if (out.empty()) {
    std::cout << matrix_to_json(m).dump(2) << "\n";
  } else {
    write_matrix_file(out, m);
  }
}

MetricKind parse_metric(const std::string& s) {
  if (s == "left") return MetricKind::left_invariant;
  if (s == "positive") return MetricKind::positive_cone;
  if (s == "ambient") return MetricKind::positive_ambient;
  if (s == "polar") return MetricKind::polar_product;
  fail(ErrorKind::InvalidArgument, "unknown metric '" + s + "'");
}

Parity parse_parity(const std::string& s) {
  if (s == "general") return Parity::general;
  if (s == "hermitian") return Parity::hermitian;
  if (s == "anti_hermitian") return Parity::anti_hermitian;
  fail(ErrorKind::InvalidArgument, "unknown parity '" + s + "'");
}

struct GenArgs {
  std::string kind;
  std::string parity = "general";
  Eigen::Index n = 2;
  double scale = 1.0;
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen(const GenArgs& a, const SpectralTolerance& tol) {
  Rng rng(a.seed);
  RealMatrix m;
  if (a.kind == "symplectic") {
    m = random_symplectic(a.n, a.scale, rng, tol).matrix();
  } else if (a.kind == "positive") {
    m = random_positive(a.n, a.scale, rng, tol).matrix();
  } else if (a.kind == "unitary") {
    m = random_unitary(a.n, a.scale, rng, tol).matrix();
  } else {
    m = random_sp_algebra(a.n, parse_parity(a.parity), a.scale, rng).matrix();
  }
  emit_matrix(m, a.out);
  return kOk;
}

int run_check(const std::string& what, const std::string& file, const SpectralTolerance& tol) {
  const RealMatrix m = read_matrix_file(file);
  const ComplexStructure j = structure_for(m);
  bool pass = false;
  if (what == "symplectic") {
    const auto c = is_symplectic(m, j, tol);
    std::cout << "residual " << fmt(c.residual) << " bound " << fmt(c.bound) << "\n";
    pass = c.pass;
  } else if (what == "algebra") {
    const auto c = is_sp_algebra(m, j, tol);
    std::cout << "residual " << fmt(c.residual) << " bound " << fmt(c.bound) << " parity "
              << c.classification() << "\n";
    pass = c.pass;
  } else if (what == "positive") {
    const auto c = is_symplectic(m, j, tol);
    const double asym = hs_norm(m - m.transpose());
    const double lambda = min_eigenvalue_sym(0.5 * (m + m.transpose()));
    std::cout << "residual " << fmt(c.residual) << " bound " << fmt(c.bound) << " asymmetry " << fmt(asym)
              << " min_eigenvalue " << fmt(lambda) << "\n";
    pass = c.pass && asym <= c.bound && lambda > tol.pd_floor;
  } else {
    const auto r = unitary_j_residuals(m, tol);
    std::cout << "residual " << fmt(std::max({r.orthogonality, r.commutator, r.symplectic})) << " bound "
              << fmt(r.bound) << "\n";
    pass = r.pass();
  }
  std::cout << (pass ? "pass" : "fail") << "\n";
  return pass ? kOk : kCheckFailed;
}

int run_dist(const std::string& metric, const std::string& pf, const std::string& qf,
             const SpectralTolerance& tol) {
  const RealMatrix p = read_matrix_file(pf);
  const RealMatrix q = read_matrix_file(qf);
  switch (parse_metric(metric)) {
    case MetricKind::positive_cone:
      std::cout << fmt(dist_positive(PositiveSymplectic::from_matrix(p, tol),
                                     PositiveSymplectic::from_matrix(q, tol), tol))
                << "\n";
      return kOk;
    case MetricKind::polar_product:
      std::cout << fmt(dist_polar(SymplecticElement::from_matrix(p, tol), SymplecticElement::from_matrix(q, tol),
                                  tol))
                << "\n";
      return kOk;
    case MetricKind::left_invariant: {
      const auto curve = sample_polar(SymplecticElement::from_matrix(p, tol),
                                      SymplecticElement::from_matrix(q, tol), 128, tol);
      std::cout << fmt(curve_length(curve, MetricKind::left_invariant, tol))
                << " upper bound (left-invariant length of the polar geodesic)\n";
      return kOk;
    }
    case MetricKind::positive_ambient:
      break;
  }
  fail(ErrorKind::InvalidArgument, "dist supports left, positive and polar");
}

struct GeodesicArgs {
  std::string metric;
  std::string p, q;
  double t = 0.5;
  std::string out;
  std::string curve_out;
  Eigen::Index grid = kDefaultGrid;
};

int run_geodesic(const GeodesicArgs& a, const SpectralTolerance& tol) {
  const RealMatrix p = read_matrix_file(a.p);
  const RealMatrix q = read_matrix_file(a.q);
  const MetricKind kind = parse_metric(a.metric);
  RealMatrix at;
  switch (kind) {
    case MetricKind::left_invariant:
      at = exp_left(SymplecticElement::from_matrix(p, tol),
                    SpAlgebraElement::from_matrix(q, Parity::general, tol), a.t, tol)
               .matrix();
      break;
    case MetricKind::positive_cone:
      at = geodesic_positive(PositiveSymplectic::from_matrix(p, tol), PositiveSymplectic::from_matrix(q, tol),
                             a.t, tol)
               .matrix();
      break;
    case MetricKind::polar_product:
      at = geodesic_polar(SymplecticElement::from_matrix(p, tol), SymplecticElement::from_matrix(q, tol), a.t,
                          tol)
               .matrix();
      break;
    case MetricKind::positive_ambient:
      fail(ErrorKind::InvalidArgument, "the ambient metric has no closed-form geodesic");
  }
  emit_matrix(at, a.out);
  if (!a.curve_out.empty()) write_curve_file(a.curve_out, sample_closed_form(kind, p, q, a.grid, tol));
  return kOk;
}

int run_length(const std::string& metric, const std::string& file, const SpectralTolerance& tol) {
  const auto curve = read_curve_file(file, tol);
  std::cout << fmt(curve_length(curve, parse_metric(metric), tol)) << "\n";
  return kOk;
}

struct VerifyArgs {
  std::string suite = "all";
  SuiteConfig config;
  std::string json_out;
  std::string csv_out;
};

int run_verify(VerifyArgs a, const SpectralTolerance& tol) {
  std::vector<SuiteId> ids;
  if (a.suite == "all") {
    ids.assign(kAllSuites.begin(), kAllSuites.end());
  } else {
    ids.push_back(parse_suite(a.suite));
  }
  a.config.tol = tol;
  std::vector<VerificationReport> reports;
  bool all = true;
  for (SuiteId id : ids) {
    a.config.suite = id;
    reports.push_back(run_suite(a.config));
    const auto& r = reports.back();
    all = all && r.all_pass();
    std::cout << to_string(id) << " " << suite_title(id) << ": " << r.pass_count << "/" << a.config.trials
              << " pass";
    if (r.worst_trial >= 0) {
      std::cout << ", worst margin " << fmt(r.worst_margin) << " (" << r.worst_margin_name << ", trial "
                << r.worst_trial << ")";
    }
    if (a.config.stress_trials > 0) {
      std::cout << ", stress " << r.stress_pass_count << "/" << a.config.stress_trials;
    }
    std::cout << "\n";
    for (const auto& t : r.trials) {
      if (!t.pass) {
        std::cout << "  failed trial " << t.index << " seed " << t.seed;
        if (!t.error.empty()) std::cout << ": " << t.error;
        std::cout << "\n";
      }
    }
  }
  if (!a.json_out.empty()) {
    const Json j = ids.size() == 1 ? report_to_json(reports.front()) : reports_to_json(reports);
    detail::write_text(a.json_out, j.dump(2) + "\n");
  }
  if (!a.csv_out.empty()) detail::write_text(a.csv_out, reports_to_csv(reports));
  return all ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riemannian geometry of the symplectic group"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a random element");
  gen_cmd->add_option("--kind", gen.kind, "element kind")
      ->required()
      ->check(CLI::IsMember({"symplectic", "positive", "unitary", "algebra"}));
  gen_cmd->add_option("--parity", gen.parity, "parity for --kind algebra")
      ->check(CLI::IsMember({"general", "hermitian", "anti_hermitian"}));
  gen_cmd->add_option("--n", gen.n, "half dimension")->check(CLI::Range(1, 64));
  gen_cmd->add_option("--scale", gen.scale, "2-norm of the generator")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--seed", gen.seed, "random seed");
  gen_cmd->add_option("-o,--out", gen.out, "output file (stdout if omitted)");

  std::string check_what, check_file;
  auto* check_cmd = app.add_subcommand("check", "check membership of a matrix");
  check_cmd->add_option("--what", check_what, "set to test")
      ->required()
      ->check(CLI::IsMember({"symplectic", "algebra", "positive", "unitaryj"}));
  check_cmd->add_option("file", check_file, "matrix file")->required();

  std::string dist_metric, dist_p, dist_q;
  auto* dist_cmd = app.add_subcommand("dist", "geodesic distance between two elements");
  dist_cmd->add_option("--metric", dist_metric, "metric")
      ->required()
      ->check(CLI::IsMember({"left", "positive", "polar"}));
  dist_cmd->add_option("p", dist_p, "first element")->required();
  dist_cmd->add_option("q", dist_q, "second element")->required();

  GeodesicArgs geo;
  auto* geo_cmd = app.add_subcommand("geodesic", "evaluate a closed-form geodesic");
  geo_cmd->add_option("--metric", geo.metric, "metric; for left, the second file is the initial velocity")
      ->required()
      ->check(CLI::IsMember({"left", "positive", "polar"}));
  geo_cmd->add_option("p", geo.p, "start point")->required();
  geo_cmd->add_option("q", geo.q, "end point, or initial velocity for left")->required();
  geo_cmd->add_option("--t", geo.t, "parameter");
  geo_cmd->add_option("-o,--out", geo.out, "output file (stdout if omitted)");
  geo_cmd->add_option("--curve-out", geo.curve_out, "also write the sampled curve on [0,1]");
  geo_cmd->add_option("--grid", geo.grid, "intervals of the sampled curve")->check(CLI::Range(4, 1 << 20));

  std::string len_metric, len_file;
  auto* len_cmd = app.add_subcommand("length", "length of a sampled curve");
  len_cmd->add_option("--metric", len_metric, "metric")
      ->required()
      ->check(CLI::IsMember({"left", "positive", "ambient", "polar"}));
  len_cmd->add_option("curve", len_file, "curve file")->required();

  VerifyArgs ver;
  auto* ver_cmd = app.add_subcommand("verify", "run verification suites");
  ver_cmd->add_option("--suite", ver.suite, "S1..S13 or all");
  ver_cmd->add_option("--n", ver.config.n, "half dimension")->check(CLI::Range(1, 6));
  ver_cmd->add_option("--trials", ver.config.trials, "trials per suite")->check(CLI::PositiveNumber);
  ver_cmd->add_option("--seed", ver.config.seed, "run seed");
  ver_cmd->add_option("--grid", ver.config.grid, "curve grid intervals")->check(CLI::Range(4, 1 << 16));
  ver_cmd->add_option("--stress-trials", ver.config.stress_trials, "non-gating trials at the stress scale")
      ->check(CLI::NonNegativeNumber);
  ver_cmd->add_option("--json", ver.json_out, "write the JSON report here");
  ver_cmd->add_option("--csv", ver.csv_out, "write a CSV margin table here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const SpectralTolerance tol = SpectralTolerance::from_env();
    if (gen_cmd->parsed()) return run_gen(gen, tol);
    if (check_cmd->parsed()) return run_check(check_what, check_file, tol);
    if (dist_cmd->parsed()) return run_dist(dist_metric, dist_p, dist_q, tol);
    if (geo_cmd->parsed()) return run_geodesic(geo, tol);
    if (len_cmd->parsed()) return run_length(len_metric, len_file, tol);
    if (ver_cmd->parsed()) return run_verify(ver, tol);
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const GeometryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_numeric(e.kind()) ? kNumeric : kUsage;
  }
  return kUsage;
}

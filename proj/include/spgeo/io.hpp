#pragma once

// File formats.
//   matrix: JSON {"dim": d, "data": [d*d reals, row-major]} or CSV with d rows.
//   curve:  JSON {"tag": ..., "dim": d, "nodes": N+1, "data": [[d*d reals], ...]}.
//   report: JSON, see README for the schema; optional CSV table of margins.
// Numbers are written in the shortest form that round-trips exactly, so
// identical inputs always give byte-identical files.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "spgeo/sampled_curve.hpp"
#include "spgeo/verify.hpp"

namespace spgeo {

using Json = nlohmann::ordered_json;

/// Malformed input file. `field()` names the offending field.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  [[nodiscard]] const std::string& field() const { return field_; }

 private:
  std::string field_;
};

namespace detail {

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("path", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("path", "cannot write '" + path + "'");
  out << text;
}

inline Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(what, std::string("invalid JSON: ") + e.what());
  }
}

inline Eigen::Index read_dim(const Json& j) {
  if (!j.is_object() || !j.contains("dim")) throw FormatError("dim", "missing");
  const Json& d = j.at("dim");
  if (!d.is_number_integer()) throw FormatError("dim", "must be an integer");
  const auto dim = d.get<long long>();
  if (dim < 2 || dim % 2 != 0) throw FormatError("dim", "must be even and >= 2");
  return static_cast<Eigen::Index>(dim);
}

inline RealMatrix read_row_major(const Json& data, Eigen::Index dim, const std::string& field) {
  if (!data.is_array()) throw FormatError(field, "must be an array");
  if (data.size() != static_cast<std::size_t>(dim * dim)) {
    throw FormatError(field, "expected " + std::to_string(dim * dim) + " entries, found " +
                                 std::to_string(data.size()));
  }
  RealMatrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim * dim; ++i) {
    const Json& v = data[static_cast<std::size_t>(i)];
    if (!v.is_number()) throw FormatError(field, "entry " + std::to_string(i) + " is not a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw FormatError(field, "entry " + std::to_string(i) + " is not finite");
    m(i / dim, i % dim) = x;
  }
  return m;
}

inline Json row_major(const RealMatrix& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) data.push_back(m(i, k));
  }
  return data;
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

inline Json matrix_to_json(const RealMatrix& m) {
  Json j;
  j["dim"] = m.rows();
  j["data"] = detail::row_major(m);
  return j;
}

inline RealMatrix matrix_from_json(const Json& j) {
  const Eigen::Index dim = detail::read_dim(j);
  if (!j.contains("data")) throw FormatError("data", "missing");
  return detail::read_row_major(j.at("data"), dim, "data");
}

inline RealMatrix matrix_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      const std::string field = "row " + std::to_string(rows.size() + 1);
      try {
        std::size_t used = 0;
        const double x = std::stod(cell, &used);
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
        if (!std::isfinite(x)) throw FormatError(field, "entry '" + cell + "' is not finite");
        row.push_back(x);
      } catch (const std::logic_error&) {
        throw FormatError(field, "entry '" + cell + "' is not a number");
      }
    }
    rows.push_back(std::move(row));
  }
  const auto dim = static_cast<Eigen::Index>(rows.size());
  if (dim < 2 || dim % 2 != 0) throw FormatError("rows", "row count must be even and >= 2");
  RealMatrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != dim) {
      throw FormatError("row " + std::to_string(i + 1),
                        "expected " + std::to_string(dim) + " entries, found " + std::to_string(row.size()));
    }
    for (Eigen::Index k = 0; k < dim; ++k) m(i, k) = row[static_cast<std::size_t>(k)];
  }
  return m;
}

/// Reads a matrix file; ".csv" selects the CSV reader, anything else JSON.
inline RealMatrix read_matrix_file(const std::string& path) {
  const std::string text = detail::read_text(path);
  if (detail::ends_with(path, ".csv")) return matrix_from_csv(text);
  return matrix_from_json(detail::parse_json(text, "matrix"));
}

inline void write_matrix_file(const std::string& path, const RealMatrix& m) {
  detail::write_text(path, matrix_to_json(m).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Curves
// ---------------------------------------------------------------------------

inline ManifoldTag parse_manifold_tag(const std::string& s) {
  for (ManifoldTag t : {ManifoldTag::symplectic, ManifoldTag::positive, ManifoldTag::unitary_j,
                        ManifoldTag::tangent}) {
    if (to_string(t) == s) return t;
  }
  throw FormatError("tag", "unknown manifold tag '" + s + "'");
}

inline Json curve_to_json(const SampledCurve& curve) {
  Json j;
  j["tag"] = std::string(to_string(curve.tag()));
  j["dim"] = curve.dim();
  j["nodes"] = curve.nodes();
  Json data = Json::array();
  for (const RealMatrix& m : curve.values()) data.push_back(detail::row_major(m));
  j["data"] = std::move(data);
  return j;
}

inline SampledCurve curve_from_json(const Json& j, const SpectralTolerance& tol = {}) {
  const Eigen::Index dim = detail::read_dim(j);
  if (!j.contains("tag") || !j.at("tag").is_string()) throw FormatError("tag", "missing");
  const ManifoldTag tag = parse_manifold_tag(j.at("tag").get<std::string>());
  if (!j.contains("data") || !j.at("data").is_array()) throw FormatError("data", "missing");
  const Json& data = j.at("data");
  if (j.contains("nodes") && (!j.at("nodes").is_number_integer() ||
                              j.at("nodes").get<long long>() != static_cast<long long>(data.size()))) {
    throw FormatError("nodes", "does not match the length of data");
  }
  std::vector<RealMatrix> values;
  values.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    values.push_back(detail::read_row_major(data[i], dim, "data[" + std::to_string(i) + "]"));
  }
  return SampledCurve::from_values(std::move(values), tag, tol);
}

inline SampledCurve read_curve_file(const std::string& path, const SpectralTolerance& tol = {}) {
  if (detail::ends_with(path, ".csv")) throw FormatError("path", "curves must be JSON");
  return curve_from_json(detail::parse_json(detail::read_text(path), "curve"), tol);
}

inline void write_curve_file(const std::string& path, const SampledCurve& curve) {
  detail::write_text(path, curve_to_json(curve).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

namespace detail {

inline Json named_values(const std::vector<Quantity>& qs) {
  Json j = Json::object();
  for (const auto& q : qs) j[q.name] = q.value;
  return j;
}

inline Json trial_to_json(const TrialRecord& r) {
  Json j;
  j["index"] = r.index;
  j["seed"] = r.seed;
  j["scale_cap"] = r.scale_cap;
  j["pass"] = r.pass;
  j["quantities"] = named_values(r.quantities);
  j["margins"] = named_values(r.margins);
  if (!r.error.empty()) j["error"] = r.error;
  if (!r.inputs.empty()) {
    Json inputs = Json::object();
    for (const auto& m : r.inputs) inputs[m.name] = matrix_to_json(m.value);
    j["inputs"] = std::move(inputs);
  }
  return j;
}

}  // namespace detail

inline Json config_to_json(const SuiteConfig& c) {
  Json j;
  j["n"] = c.n;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["grid"] = c.grid;
  j["scale_cap"] = c.scale_cap;
  j["stress_scale"] = c.stress_scale;
  j["stress_trials"] = c.stress_trials;
  j["competitors"] = c.competitors;
  j["tolerances"] = {{"membership_tol", c.tol.membership_tol},
                     {"pd_floor", c.tol.pd_floor},
                     {"branch_guard", c.tol.branch_guard}};
  return j;
}

inline Json report_to_json(const VerificationReport& r) {
  Json j;
  j["suite"] = to_string(r.config.suite);
  j["title"] = suite_title(r.config.suite);
  j["config"] = config_to_json(r.config);
  j["pass_count"] = r.pass_count;
  j["failure_count"] = r.failure_count;
  j["all_pass"] = r.all_pass();
  j["worst_margin"] = r.worst_trial >= 0 ? Json(r.worst_margin) : Json(nullptr);
  j["worst_margin_name"] = r.worst_margin_name;
  j["worst_trial"] = r.worst_trial;
  Json trials = Json::array();
  for (const auto& t : r.trials) trials.push_back(detail::trial_to_json(t));
  j["trials"] = std::move(trials);
  Json stress;
  stress["scale_cap"] = r.config.stress_scale;
  stress["pass_count"] = r.stress_pass_count;
  stress["trials"] = Json::array();
  for (const auto& t : r.stress) stress["trials"].push_back(detail::trial_to_json(t));
  j["stress"] = std::move(stress);
  return j;
}

inline Json reports_to_json(const std::vector<VerificationReport>& reports) {
  Json j;
  bool all = true;
  Json list = Json::array();
  for (const auto& r : reports) {
    all = all && r.all_pass();
    list.push_back(report_to_json(r));
  }
  j["all_pass"] = all;
  j["suites"] = std::move(list);
  return j;
}

/// One row per (trial, margin): suite,variant,trial,seed,margin,value,pass.
inline std::string reports_to_csv(const std::vector<VerificationReport>& reports) {
  std::ostringstream out;
  out << "suite,variant,trial,seed,margin,value,pass\n";
  auto emit = [&](const VerificationReport& r, const std::vector<TrialRecord>& ts, const char* variant) {
    for (const auto& t : ts) {
      for (const auto& m : t.margins) {
        out << to_string(r.config.suite) << ',' << variant << ',' << t.index << ',' << t.seed << ','
            << m.name << ',' << Json(m.value).dump() << ',' << (t.pass ? 1 : 0) << '\n';
      }
      if (!t.error.empty()) {
        out << to_string(r.config.suite) << ',' << variant << ',' << t.index << ',' << t.seed
            << ",error,,0\n";
      }
    }
  };
  for (const auto& r : reports) {
    emit(r, r.trials, "gating");
    emit(r, r.stress, "stress");
  }
  return out.str();
}

}  // namespace spgeo

#include "cli/document.hpp"

#include "cvree/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

namespace cvree::cli {

namespace {

void write_value(std::ostringstream& os, const Json& j, int indent);

void newline(std::ostringstream& os, int indent) {
  os << '\n' << std::string(static_cast<std::size_t>(indent) * 2, ' ');
}

void write_value(std::ostringstream& os, const Json& j, int indent) {
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) os << ',';
        first = false;
        newline(os, indent + 1);
        os << Json(k).dump() << ": ";
        write_value(os, v, indent + 1);
      }
      newline(os, indent);
      os << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line so matrix rows read naturally.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      os << '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << (flat ? ", " : ",");
        first = false;
        if (!flat) newline(os, indent + 1);
        write_value(os, v, indent + 1);
      }
      if (!flat) newline(os, indent);
      os << ']';
      return;
    }
    case Json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

Matrix read_matrix(const Json& m, int n) {
  const int d = 2 * n;
  if (!m.is_array()) fail_validation("document: matrix must be an array");
  Matrix out(d, d);
  if (!m.empty() && m.front().is_array()) {
    if (static_cast<int>(m.size()) != d) fail_validation("document: matrix row count does not match n");
    for (int i = 0; i < d; ++i) {
      const Json& row = m[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<int>(row.size()) != d) {
        fail_validation("document: matrix row " + std::to_string(i) + " has the wrong length");
      }
      for (int k = 0; k < d; ++k) {
        if (!row[static_cast<std::size_t>(k)].is_number()) fail_validation("document: matrix entries must be numbers");
        out(i, k) = row[static_cast<std::size_t>(k)].get<double>();
      }
    }
  } else {
    if (static_cast<int>(m.size()) != d * d) fail_validation("document: flat matrix must have (2n)^2 entries");
    for (int i = 0; i < d * d; ++i) {
      if (!m[static_cast<std::size_t>(i)].is_number()) fail_validation("document: matrix entries must be numbers");
      out(i / d, i % d) = m[static_cast<std::size_t>(i)].get<double>();
    }
  }
  if (!out.allFinite()) fail_validation("document: matrix has non-finite entries");
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  if (v == 0.0) return std::signbit(v) ? "-0.0" : "0.0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Keep floats recognisable as floats when they happen to be integral.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string dump_canonical(const Json& j) {
  std::ostringstream os;
  write_value(os, j, 0);
  os << '\n';
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail_validation("cannot open " + path + " for writing");
  f << text;
  if (!f) fail_validation("failed writing " + path);
}

StateDocument parse_document(const Json& j) {
  if (!j.is_object()) fail_validation("document: top level must be an object");
  for (const char* key : {"n", "ordering", "kind", "matrix"}) {
    if (!j.contains(key)) fail_validation(std::string("document: missing field '") + key + "'");
  }
  if (!j["n"].is_number_integer() || j["n"].get<int>() < 1) fail_validation("document: n must be a positive integer");
  if (!j["ordering"].is_string() || j["ordering"].get<std::string>() != "qqpp") {
    fail_validation("document: ordering must be \"qqpp\"");
  }
  StateDocument doc;
  doc.n = j["n"].get<int>();
  const std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
  if (kind == "cm") {
    doc.kind = DocumentKind::cm;
  } else if (kind == "em") {
    doc.kind = DocumentKind::em;
  } else {
    fail_validation("document: kind must be \"cm\" or \"em\"");
  }
  doc.matrix = read_matrix(j["matrix"], doc.n);
  if (!is_symmetric(doc.matrix, 1e-10)) fail_validation("document: matrix is not symmetric within 1e-10");
  doc.matrix = 0.5 * (doc.matrix + doc.matrix.transpose());
  if (j.contains("metadata")) doc.metadata = j["metadata"];
  return doc;
}

StateDocument load_document(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail_validation("cannot open " + path);
  Json j;
  try {
    j = Json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    fail_validation(path + ": " + e.what());
  }
  return parse_document(j);
}

Json to_json(const StateDocument& doc) {
  Json j;
  j["n"] = doc.n;
  j["ordering"] = "qqpp";
  j["kind"] = doc.kind == DocumentKind::cm ? "cm" : "em";
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < doc.matrix.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < doc.matrix.cols(); ++k) row.push_back(doc.matrix(i, k));
    rows.push_back(row);
  }
  j["matrix"] = rows;
  j["metadata"] = doc.metadata;
  return j;
}

StateDocument make_document(const CovarianceMatrix& cm, Json metadata) {
  return {cm.modes(), DocumentKind::cm, cm.matrix(), std::move(metadata)};
}

StateDocument make_document(const ExponentialMatrix& em, Json metadata) {
  return {em.modes(), DocumentKind::em, em.matrix(), std::move(metadata)};
}

CovarianceMatrix as_cm(const StateDocument& doc) {
  if (doc.kind == DocumentKind::cm) return CovarianceMatrix(doc.matrix);
  return em_to_cm(ExponentialMatrix(doc.matrix));
}

ExponentialMatrix as_em(const StateDocument& doc) {
  if (doc.kind == DocumentKind::em) return ExponentialMatrix(doc.matrix);
  return cm_to_em(CovarianceMatrix(doc.matrix));
}

double nats_to_bits(double v) { return v / std::numbers::ln2; }

Json border_params_json(const BorderParams& p) {
  Json j;
  j["type"] = std::string(to_string(p.type));
  j["gamma_a"] = p.gamma_a;
  j["gamma_b"] = p.gamma_b;
  j["shape"] = p.shape;
  j["branch"] = p.branch;
  j["x_prime"] = p.x_prime;
  return j;
}

Json gree_result_json(const GreeResult& r, bool bits) {
  Json j;
  j["value"] = bits ? nats_to_bits(r.value) : r.value;
  j["unit"] = bits ? "bits" : "nats";
  j["value_nats"] = r.value;
  j["value_bits"] = nats_to_bits(r.value);
  j["best_type"] = r.best_type ? Json(std::string(to_string(*r.best_type))) : Json(nullptr);
  j["best_params"] = r.best_params ? border_params_json(*r.best_params) : Json(nullptr);
  Json per = Json::array();
  for (const auto& f : r.per_type) {
    Json e;
    e["type"] = std::string(to_string(f.type));
    e["value"] = std::isfinite(f.value) ? Json(bits ? nats_to_bits(f.value) : f.value) : Json(nullptr);
    e["params"] = f.params ? border_params_json(*f.params) : Json(nullptr);
    per.push_back(e);
  }
  j["per_type"] = per;
  j["border_residual"] = r.diagnostics.border_residual;
  Json d;
  d["separable_input"] = r.diagnostics.separable_input;
  d["starts"] = r.diagnostics.starts;
  d["evaluations"] = r.diagnostics.evaluations;
  d["iterations"] = r.diagnostics.iterations;
  d["value_check"] = r.diagnostics.value_check;
  d["x_opt"] = r.diagnostics.x_opt;
  d["y_opt"] = r.diagnostics.y_opt;
  d["spot_check_gap"] = r.diagnostics.spot_check_gap;
  d["spot_check_flag"] = r.diagnostics.spot_check_flag;
  if (r.diagnostics.alternative_reading_value) {
    d["alternative_reading_value"] = *r.diagnostics.alternative_reading_value;
  }
  j["diagnostics"] = d;
  j["best_em"] = r.best_em ? to_json(make_document(*r.best_em)) : Json(nullptr);
  return j;
}

}  // namespace cvree::cli

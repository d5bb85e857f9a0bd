#include "strucrep/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "strucrep/error.hpp"

namespace strucrep {

Json to_json(const Mat3& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < 3; ++i) rows.push_back({m(i, 0), m(i, 1), m(i, 2)});
  return rows;
}

Json to_json(const SymTensor2& t) { return to_json(t.to_mat()); }

Mat3 mat3_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw UsageError("tensor must be a 3x3 array of arrays");
  Mat3 m;
  for (std::size_t i = 0; i < 3; ++i) {
    const Json& row = j[i];
    if (!row.is_array() || row.size() != 3) throw UsageError("tensor must be a 3x3 array of arrays");
    for (std::size_t k = 0; k < 3; ++k) {
      if (!row[k].is_number()) throw UsageError("tensor entries must be numbers");
      m(i, k) = row[k].get<double>();
    }
  }
  return m;
}

std::string read_text(const std::string& path, std::istream& stdin_stream) {
  std::ostringstream ss;
  if (path == "-") {
    ss << stdin_stream.rdbuf();
    return ss.str();
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open '" + path + "'");
  ss << f.rdbuf();
  return ss.str();
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw UsageError(what + ": invalid JSON (" + e.what() + ")");
  }
}

SymTensor2 sym_tensor_from_json(const Json& j) { return SymTensor2::from_matrix(mat3_from_json(j)); }

// ---------------------------------------------------------------------------
// models

Json model_to_json(const CoefficientModel& m) {
  const auto& b = group_basis(m.group, m.form);
  Json terms = Json::array();
  for (std::size_t k = 0; k < m.coefficients.size(); ++k)
    for (const auto& [e, c] : m.coefficients[k])
      terms.push_back({{"coef_index", static_cast<int>(k) + b.first_index}, {"exponents", e}, {"value", c}});
  if (m.psi)
    for (const auto& [e, c] : *m.psi) terms.push_back({{"coef_index", "psi"}, {"exponents", e}, {"value", c}});
  return {{"group", std::string(group_name(m.group))},
          {"form", std::string(form_name(m.form))},
          {"degree", m.degree},
          {"symmetrized", m.symmetrized},
          {"tensor", !m.coefficients.empty()},
          {"scalar", m.psi.has_value()},
          {"invariant_labels", b.invariant_labels},
          {"generator_labels", b.generator_labels},
          {"terms", terms}};
}

namespace {

template <class T>
T field(const Json& j, const char* key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw UsageError(std::string("model field '") + key + "' has the wrong type");
  }
}

}  // namespace

CoefficientModel model_from_json(const Json& j) {
  if (!j.is_object()) throw UsageError("model must be a JSON object");
  if (!j.contains("group") || !j["group"].is_string()) throw UsageError("model needs a string field 'group'");
  CoefficientModel m;
  m.group = parse_group(j["group"].get<std::string>());
  m.form = parse_form(field<std::string>(j, "form", "standard"));
  if (m.form == Form::p2 && m.group != Group::D_2h) throw ValidationError("the p2 form exists only for D_2h");
  m.degree = field<int>(j, "degree", kDefaultDegreeCap);
  m.symmetrized = field<bool>(j, "symmetrized", false);
  const auto& b = group_basis(m.group, m.form);
  if (j.contains("invariant_labels")) {
    const auto labels = field<std::vector<std::string>>(j, "invariant_labels", {});
    if (labels != b.invariant_labels)
      throw ValidationError("model invariant_labels do not match the " + std::string(group_name(m.group)) + " basis");
  }
  if (!j.contains("terms") || !j["terms"].is_array()) throw UsageError("model needs an array field 'terms'");

  bool any_tensor = false, any_psi = false;
  for (const Json& t : j["terms"]) {
    if (!t.is_object() || !t.contains("coef_index") || !t.contains("exponents") || !t.contains("value"))
      throw UsageError("each model term needs coef_index, exponents and value");
    any_psi = any_psi || t["coef_index"].is_string();
    any_tensor = any_tensor || !t["coef_index"].is_string();
  }
  if (field<bool>(j, "tensor", any_tensor)) m.coefficients.resize(b.generator_count());
  if (field<bool>(j, "scalar", any_psi)) m.psi = Polynomial{};

  for (const Json& t : j["terms"]) {
    if (!t["exponents"].is_array() || !t["value"].is_number()) throw UsageError("malformed model term");
    Exponents e;
    for (const Json& x : t["exponents"]) {
      if (!x.is_number_integer()) throw UsageError("exponents must be integers");
      e.push_back(x.get<int>());
    }
    const double v = t["value"].get<double>();
    const Json& ci = t["coef_index"];
    if (ci.is_string()) {
      if (ci.get<std::string>() != "psi") throw UsageError("coef_index must be an integer or \"psi\"");
      if (!m.psi) throw ValidationError("psi term in a model declared without a scalar part");
      (*m.psi)[e] += v;
    } else if (ci.is_number_integer()) {
      const int k = ci.get<int>() - b.first_index;
      if (k < 0 || static_cast<std::size_t>(k) >= b.generator_count())
        throw ValidationError("coef_index " + std::to_string(ci.get<int>()) + " out of range for " +
                              std::string(group_name(m.group)));
      if (m.coefficients.empty()) throw ValidationError("tensor term in a model declared without a tensor part");
      m.coefficients[static_cast<std::size_t>(k)][e] += v;
    } else {
      throw UsageError("coef_index must be an integer or \"psi\"");
    }
  }
  validate_model(m);
  return m;
}

Json report_to_json(const VerificationReport& r) {
  Json w = Json::array();
  for (const auto& x : r.witnesses) w.push_back({{"Q", to_json(x.Q)}, {"C", to_json(x.C)}, {"violation", x.violation}});
  Json j{{"group", r.group},
         {"check", r.check},
         {"trials", r.trials},
         {"max_violation", r.max_violation},
         {"tolerance", r.tolerance},
         {"pass", r.pass},
         {"witnesses", w}};
  if (!r.model.empty()) j["model"] = r.model;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json fit_to_json(const FitResult& f, const std::optional<ResidualReport>& holdout) {
  Json j = model_to_json(f.model);
  Json fit{{"kind", std::string(kind_name(f.kind))},
           {"records", f.residuals.size()},
           {"rms_residual", f.rms_residual},
           {"max_residual", f.max_residual},
           {"residuals", f.residuals},
           {"condition", f.condition},
           {"rank", f.rank},
           {"unknowns", f.unknowns},
           {"min_norm", f.min_norm},
           {"ridge", f.ridge}};
  if (holdout)
    fit["holdout"] = {{"records", holdout->records},
                      {"rms", holdout->rms},
                      {"max", holdout->max},
                      {"reaudit", report_to_json(holdout->reaudit)}};
  j["fit"] = fit;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// CSV

namespace {

const char* const kCNames6[] = {"C11", "C22", "C33", "C12", "C13", "C23"};
const char* const kTNames6[] = {"T11", "T22", "T33", "T12", "T13", "T23"};

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  for (auto& s : out) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
  return out;
}

std::vector<std::string> full_names(const char* prefix) {
  std::vector<std::string> v;
  for (int i = 1; i <= 3; ++i)
    for (int k = 1; k <= 3; ++k) v.push_back(prefix + std::to_string(i) + std::to_string(k));
  return v;
}

enum class Layout { six, full };

std::string where(const std::string& source, std::size_t line) {
  return source + " line " + std::to_string(line) + ": ";
}

void append_number(std::string& out, double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

}  // namespace

std::string csv_header(SampleKind kind) {
  std::string h;
  for (const char* n : kCNames6) h += std::string(n) + ",";
  if (kind == SampleKind::scalar) return h + "psi";
  for (std::size_t k = 0; k < 6; ++k) h += std::string(kTNames6[k]) + (k < 5 ? "," : "");
  return h;
}

void write_samples(std::ostream& out, const SampleSet& s) {
  out << csv_header(s.kind) << '\n';
  for (const Sample& r : s.records) {
    std::string line;
    for (double x : r.C.components()) {
      append_number(line, x);
      line += ',';
    }
    if (s.kind == SampleKind::scalar) {
      append_number(line, r.psi);
    } else {
      const auto& t = r.T.components();
      for (std::size_t k = 0; k < 6; ++k) {
        append_number(line, t[k]);
        if (k < 5) line += ',';
      }
    }
    out << line << '\n';
  }
}

SampleSet read_samples(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  // header: first non-blank line
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    header = split_commas(line);
    break;
  }
  if (header.empty()) throw ValidationError(source + ": no header and no records");

  std::vector<std::string> c6(std::begin(kCNames6), std::end(kCNames6));
  std::vector<std::string> t6(std::begin(kTNames6), std::end(kTNames6));
  const auto c9 = full_names("C"), t9 = full_names("T");
  auto cat = [](std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  SampleSet out;
  Layout layout;
  if (header == cat(c6, t6)) {
    layout = Layout::six;
    out.kind = SampleKind::tensor;
  } else if (header == cat(c6, {"psi"})) {
    layout = Layout::six;
    out.kind = SampleKind::scalar;
  } else if (header == cat(c9, t9)) {
    layout = Layout::full;
    out.kind = SampleKind::tensor;
  } else if (header == cat(c9, {"psi"})) {
    layout = Layout::full;
    out.kind = SampleKind::scalar;
  } else {
    throw UsageError(where(source, lineno) + "unrecognized header; expected " + csv_header(SampleKind::tensor) +
                     " or " + csv_header(SampleKind::scalar));
  }
  const std::size_t width = header.size();

  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_commas(line);
    if (cells.size() != width)
      throw UsageError(where(source, lineno) + "expected " + std::to_string(width) + " fields, found " +
                       std::to_string(cells.size()));
    std::vector<double> v;
    for (const auto& c : cells) {
      if (c.empty()) throw UsageError(where(source, lineno) + "empty field");
      char* end = nullptr;
      errno = 0;
      const double x = std::strtod(c.c_str(), &end);
      if (end != c.c_str() + c.size()) throw UsageError(where(source, lineno) + "not a number: '" + c + "'");
      if (!std::isfinite(x)) throw ValidationError(where(source, lineno) + "non-finite value '" + c + "'");
      v.push_back(x);
    }
    Sample s;
    try {
      if (layout == Layout::six) {
        s.C = SymTensor2{{v[0], v[1], v[2], v[3], v[4], v[5]}};
        if (out.kind == SampleKind::tensor)
          s.T = SymTensor2{{v[6], v[7], v[8], v[9], v[10], v[11]}};
        else
          s.psi = v[6];
      } else {
        Mat3 c, t;
        for (std::size_t k = 0; k < 9; ++k) c.a[k] = v[k];
        s.C = SymTensor2::from_matrix(c);
        if (out.kind == SampleKind::tensor) {
          for (std::size_t k = 0; k < 9; ++k) t.a[k] = v[9 + k];
          s.T = SymTensor2::from_matrix(t);
        } else {
          s.psi = v[9];
        }
      }
    } catch (const ValidationError& e) {
      throw ValidationError(where(source, lineno) + e.what());
    }
    out.records.push_back(s);
  }
  if (out.records.empty()) throw ValidationError(source + ": no records");
  return out;
}

}  // namespace strucrep

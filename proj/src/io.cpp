#include "jointmeas/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "jointmeas/errors.hpp"

namespace jointmeas::io {

namespace {

using Json = nlohmann::json;

constexpr const char* kFormatVersion = "1";

[[noreturn]] void fail(const std::string& source, const std::string& where, const std::string& what) {
  throw ParseError(source + ": at " + where + ": " + what);
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(source + ": byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

const Json& member(const Json& obj, const char* key, const std::string& source) {
  if (!obj.is_object()) fail(source, "/", "expected a JSON object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(source, std::string("/") + key, "missing field");
  return *it;
}

void check_version(const Json& doc, const std::string& source) {
  const Json& version = member(doc, "format_version", source);
  if (!version.is_string() || version.get<std::string>() != kFormatVersion) {
    fail(source, "/format_version", "expected \"1\"");
  }
}

std::size_t read_dim(const Json& doc, const std::string& source) {
  const Json& dim = member(doc, "dim", source);
  if (!dim.is_number_integer() || dim.get<long long>() < 1) fail(source, "/dim", "expected a positive integer");
  return static_cast<std::size_t>(dim.get<long long>());
}

ComplexMatrix read_matrix(const Json& node, std::size_t dim, const std::string& source,
                          const std::string& where) {
  if (!node.is_array()) fail(source, where, "expected an array of [re, im] pairs");
  if (node.size() != dim * dim) {
    fail(source, where, "expected " + std::to_string(dim * dim) + " entries, found " + std::to_string(node.size()));
  }
  std::vector<Complex> entries;
  entries.reserve(node.size());
  for (std::size_t k = 0; k < node.size(); ++k) {
    const Json& pair = node[k];
    const std::string at = where + "/" + std::to_string(k);
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      fail(source, at, "expected [re, im]");
    }
    const double re = pair[0].get<double>();
    const double im = pair[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) fail(source, at, "entry is not finite");
    entries.emplace_back(re, im);
  }
  return ComplexMatrix(dim, std::move(entries));
}

OrderedJson write_matrix(const ComplexMatrix& m) {
  OrderedJson out = OrderedJson::array();
  for (const Complex& z : m.entries()) out.push_back({z.real(), z.imag()});
  return out;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

Povm parse_povm(const std::string& text, const std::string& source) {
  const Json doc = parse_json(text, source);
  check_version(doc, source);
  const std::size_t dim = read_dim(doc, source);
  const Json& outcomes = member(doc, "outcomes", source);
  if (!outcomes.is_array() || outcomes.empty()) fail(source, "/outcomes", "expected a non-empty array of labels");
  const Json& elements = member(doc, "elements", source);
  if (!elements.is_object()) fail(source, "/elements", "expected an object keyed by outcome label");

  std::vector<std::string> labels;
  std::vector<ComplexMatrix> matrices;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    if (!outcomes[k].is_string()) fail(source, "/outcomes/" + std::to_string(k), "expected a string label");
    const std::string label = outcomes[k].get<std::string>();
    const auto it = elements.find(label);
    if (it == elements.end()) fail(source, "/elements/" + label, "missing element for outcome");
    labels.push_back(label);
    matrices.push_back(read_matrix(*it, dim, source, "/elements/" + label));
  }
  if (elements.size() != outcomes.size()) {
    fail(source, "/elements", "has entries for labels not listed in /outcomes");
  }
  try {
    return Povm(std::move(labels), std::move(matrices));
  } catch (const InvalidInput& e) {
    fail(source, "/outcomes", e.what());
  }
}

std::string serialize_povm(const Povm& p) {
  OrderedJson doc;
  doc["format_version"] = kFormatVersion;
  doc["dim"] = p.dim();
  doc["outcomes"] = p.outcomes();
  OrderedJson elements = OrderedJson::object();
  for (std::size_t k = 0; k < p.size(); ++k) elements[p.outcomes()[k]] = write_matrix(p.element(k));
  doc["elements"] = std::move(elements);
  return doc.dump(2) + "\n";
}

State parse_state(const std::string& text, const std::string& source) {
  const Json doc = parse_json(text, source);
  check_version(doc, source);
  const std::size_t dim = read_dim(doc, source);
  ComplexMatrix rho = read_matrix(member(doc, "matrix", source), dim, source, "/matrix");
  try {
    return State(std::move(rho));
  } catch (const InvalidInput& e) {
    fail(source, "/matrix", e.what());
  }
}

std::string serialize_state(const State& s) {
  OrderedJson doc;
  doc["format_version"] = kFormatVersion;
  doc["dim"] = s.dim();
  doc["matrix"] = write_matrix(s.matrix());
  return doc.dump(2) + "\n";
}

std::vector<std::pair<std::string, std::string>> parse_outcome_map(const std::string& text,
                                                                   const std::string& source) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    std::istringstream fields(content);
    std::string from, to, extra;
    if (!(fields >> from >> to) || (fields >> extra)) {
      throw ParseError(source + ": line " + std::to_string(line_no) +
                       ": expected exactly two columns 'source target'");
    }
    pairs.emplace_back(from, to);
  }
  return pairs;
}

std::string serialize_outcome_map(const OutcomeMap& f) {
  std::string out;
  for (std::size_t k = 0; k < f.source().size(); ++k) {
    out += f.source()[k] + " " + f.target()[f(k)] + "\n";
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw IoError("failed writing '" + path + "'");
}

Povm load_povm(const std::string& path) { return parse_povm(read_file(path), path); }

std::vector<std::pair<std::string, std::string>> load_outcome_map(const std::string& path) {
  return parse_outcome_map(read_file(path), path);
}

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.12g", value == 0.0 ? 0.0 : value);
  return buffer;
}

OrderedJson to_json(const ValidationReport& report) {
  OrderedJson out;
  out["valid"] = report.ok();
  OrderedJson list = OrderedJson::array();
  for (const Violation& v : report.violations) {
    OrderedJson item;
    switch (v.kind) {
      case Violation::Kind::NotHermitian: item["kind"] = "not_hermitian"; break;
      case Violation::Kind::NegativeEigenvalue: item["kind"] = "negative_eigenvalue"; break;
      case Violation::Kind::Completeness: item["kind"] = "completeness"; break;
    }
    if (!v.outcome.empty()) item["outcome"] = v.outcome;
    item["magnitude"] = v.magnitude;
    item["message"] = v.describe();
    list.push_back(std::move(item));
  }
  out["violations"] = std::move(list);
  return out;
}

OrderedJson to_json(const DistanceValue& d, const std::string& metric) {
  OrderedJson out;
  out["metric"] = metric;
  out["value"] = d.value;
  out["witness_outcomes"] = d.witness_outcomes;
  return out;
}

OrderedJson to_json(const TradeoffReport& r) {
  OrderedJson out;
  out["inequality"] = inequality_id(r.inequality);
  out["X"] = r.x;
  out["Y"] = r.y;
  out["V_A"] = r.v_a;
  out["V_B"] = r.v_b;
  out["lhs"] = r.lhs;
  out["rhs"] = r.rhs;
  out["slack"] = r.slack;
  out["satisfied"] = r.satisfied;
  out["verdict"] = r.satisfied ? "satisfied" : "violated";
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

OrderedJson to_json(const FeasibilityResult& r) {
  OrderedJson out;
  out["status"] = status_name(r.status);
  out["residual"] = r.residual;
  out["iterations"] = r.iterations;
  out["certificate_note"] = r.certificate_note;
  return out;
}

std::string curves_csv(const AdmissibleCurves& curves) {
  std::string out = "X,Y_cor1,Y_heinosaari\n";
  for (std::size_t i = 0; i < curves.corollary.size(); ++i) {
    out += format_number(curves.corollary[i].x) + "," + format_number(curves.corollary[i].y) + "," +
           format_number(curves.heinosaari[i].y) + "\n";
  }
  return out;
}

std::string frontier_csv(const std::vector<FrontierPoint>& points) {
  std::string out = "X_target,X_achieved,Y_achieved\n";
  for (const FrontierPoint& p : points) {
    out += format_number(p.x_target) + "," + format_number(p.x_achieved) + "," +
           format_number(p.y_achieved) + "\n";
  }
  return out;
}

}  // namespace jointmeas::io

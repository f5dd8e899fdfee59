#include "qmarg/cli/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace qmarg::cli {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
  return buf;
}

namespace {

bool is_primitive(const Json& j) { return !j.is_object() && !j.is_array(); }

bool primitive_array(const Json& j) {
  return j.is_array() && std::all_of(j.begin(), j.end(), is_primitive);
}

// Numbers, or short tuples such as [re, im].
bool inline_array(const Json& j) {
  return primitive_array(j) || (j.is_array() && std::all_of(j.begin(), j.end(), [](const Json& e) {
                                  return primitive_array(e) && e.size() <= 2;
                                }));
}

void write_value(std::ostream& os, const Json& j, int indent);

void newline(std::ostream& os, int indent) {
  os << '\n';
  for (int i = 0; i < indent; ++i) os << "  ";
}

void write_primitive(std::ostream& os, const Json& j) {
  if (j.is_number_float()) {
    const double x = j.get<double>();
    if (std::isfinite(x)) {
      os << format_double(x);
    } else {
      os << "null";
    }
  } else {
    os << j.dump();
  }
}

void write_inline(std::ostream& os, const Json& j) {
  if (!j.is_array()) {
    write_primitive(os, j);
    return;
  }
  os << '[';
  bool first = true;
  for (const auto& e : j) {
    if (!first) os << ", ";
    first = false;
    write_inline(os, e);
  }
  os << ']';
}

void write_value(std::ostream& os, const Json& j, int indent) {
  if (j.is_object()) {
    if (j.empty()) {
      os << "{}";
      return;
    }
    os << '{';
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) os << ',';
      first = false;
      newline(os, indent + 1);
      os << Json(it.key()).dump() << ": ";
      write_value(os, it.value(), indent + 1);
    }
    newline(os, indent);
    os << '}';
  } else if (j.is_array()) {
    if (inline_array(j)) {
      write_inline(os, j);
      return;
    }
    os << '[';
    bool first = true;
    for (const auto& e : j) {
      if (!first) os << ',';
      first = false;
      newline(os, indent + 1);
      write_value(os, e, indent + 1);
    }
    newline(os, indent);
    os << ']';
  } else {
    write_primitive(os, j);
  }
}

void require_schema(const Json& doc, const char* what) {
  if (!doc.is_object()) throw InputError(std::string(what) + ": top level must be an object");
  const auto it = doc.find("schema_version");
  if (it == doc.end()) throw InputError(std::string(what) + ": missing schema_version");
  if (!it->is_string() || it->get<std::string>() != kSchemaVersion) {
    throw InputError(std::string(what) + ": unsupported schema_version " + it->dump());
  }
}

std::vector<std::size_t> read_dims(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw InputError(std::string(what) + ": dims must be a nonempty array");
  std::vector<std::size_t> dims;
  for (const auto& d : j) {
    if (!d.is_number_integer() || d.get<long long>() < 1) {
      throw InputError(std::string(what) + ": dims entries must be positive integers");
    }
    dims.push_back(d.get<std::size_t>());
  }
  return dims;
}

double read_number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  return j.get<double>();
}

}  // namespace

void write_json(std::ostream& os, const Json& doc) {
  write_value(os, doc, 0);
  os << '\n';
}

std::string dump_json(const Json& doc) {
  std::ostringstream os;
  write_json(os, doc);
  return os.str();
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

DensityMatrix parse_matrix_file(const Json& doc) {
  require_schema(doc, "matrix file");
  if (!doc.contains("dims")) throw InputError("matrix file: missing dims");
  if (!doc.contains("matrix")) throw InputError("matrix file: missing matrix");
  SubsystemDims dims(read_dims(doc["dims"], "matrix file"));
  const auto& m = doc["matrix"];
  const std::size_t n = dims.total();
  if (!m.is_array() || m.size() != n) {
    throw InputError("matrix file: matrix must have " + std::to_string(n) + " rows");
  }
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!m[i].is_array() || m[i].size() != n) {
      throw InputError("matrix file: row " + std::to_string(i) + " must have " + std::to_string(n) + " entries");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const auto& e = m[i][j];
      const std::string where = "matrix file: entry (" + std::to_string(i) + "," + std::to_string(j) + ")";
      if (!e.is_array() || e.size() != 2) throw InputError(where + ": expected [re, im]");
      a(i, j) = Complex(read_number(e[0], where), read_number(e[1], where));
    }
  }
  return DensityMatrix(std::move(dims), HermitianMatrix(std::move(a)));
}

Json matrix_file(const DensityMatrix& rho) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["dims"] = Json(std::vector<std::size_t>(rho.dims().values().begin(), rho.dims().values().end()));
  Json rows = Json::array();
  const std::size_t n = rho.dim();
  for (std::size_t i = 0; i < n; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < n; ++j) {
      const Complex z = rho.matrix()(i, j);
      row.push_back(Json::array({z.real(), z.imag()}));
    }
    rows.push_back(std::move(row));
  }
  doc["matrix"] = std::move(rows);
  return doc;
}

SpectraFile parse_spectra_file(const Json& doc) {
  require_schema(doc, "spectra file");
  SpectraFile out;
  if (doc.contains("dims")) out.dims = read_dims(doc["dims"], "spectra file");
  const auto it = doc.find("spectra");
  if (it == doc.end() || !it->is_object()) throw InputError("spectra file: missing spectra object");
  for (auto e = it->begin(); e != it->end(); ++e) {
    const std::string where = "spectra file: entry \"" + e.key() + "\"";
    if (!e.value().is_array() || e.value().empty()) throw InputError(where + ": expected a nonempty array");
    std::vector<double> values;
    for (const auto& x : e.value()) values.push_back(read_number(x, where));
    out.spectra.emplace(e.key(), std::move(values));
  }
  return out;
}

namespace {

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, ',')) parts.push_back(cur);
  if (parts.empty()) throw InputError("empty list");
  return parts;
}

}  // namespace

std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& p : split_commas(text)) {
    std::size_t used = 0;
    long long v = -1;
    try {
      v = std::stoll(p, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != p.size() || v < 0) throw InputError("not a nonnegative integer: '" + p + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& p : split_commas(text)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(p, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != p.size()) throw InputError("not a number: '" + p + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace qmarg::cli

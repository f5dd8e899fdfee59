#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "qmarg/qstate.hpp"

namespace qmarg::cli {

inline constexpr const char* kSchemaVersion = "1";

/// Malformed or inconsistent input file.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

/// Doubles as %.17g, non-finite values as null, primitive-only arrays inline.
void write_json(std::ostream& os, const Json& doc);
std::string dump_json(const Json& doc);

/// %.17g.
std::string format_double(double x);

Json read_json_file(const std::string& path);

/// {"schema_version": "1", "dims": [..], "matrix": [[[re, im], ..], ..]}
DensityMatrix parse_matrix_file(const Json& doc);
Json matrix_file(const DensityMatrix& rho);

struct SpectraFile {
  /// Empty when the file carries no dims annotation.
  std::vector<std::size_t> dims;
  /// Entries as given, not yet sorted.
  std::map<std::string, std::vector<double>> spectra;
};

/// {"schema_version": "1", "dims": [..], "spectra": {"A": [..], ..}}
SpectraFile parse_spectra_file(const Json& doc);

/// Comma-separated list; throws InputError on junk.
std::vector<std::size_t> parse_index_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

}  // namespace qmarg::cli

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rotcode/error.hpp"

namespace rotcode {

inline constexpr const char* kVersion = "rotcode 1.0.0";

/// Flat key = value configuration. List keys may repeat; the first
/// occurrence replaces the default.
struct RunConfig {
  std::string theta = "golden";
  std::string bounds = "1-theta";
  /// Digit values u_0..u_l as "re" or "re,im"; empty means 0..l.
  std::vector<std::string> u;
  /// Data for S and its reduction; empty s_theta skips them.
  std::string s_theta;
  std::string s_bounds;
  std::vector<std::string> v;
  std::vector<std::string> bases{"2"};
  int n_from = 4;
  int n_to = 12;
  std::vector<int> w{2, 3};
  long digits = 100;
  int depth = 30;
  std::uint64_t horizon = 1000000;
  long precision_cap = 65536;
  int jobs = 1;
  std::vector<std::string> suites{"cf", "code", "approx", "series", "structure"};
  /// Point e^{ix} for the cosine and sine sums; empty skips them.
  std::string z;
  std::string modulus = "2";
  std::vector<int> census_w{16, 32};
  double epsilon = 0.125;
  int complexity_n = 20;
  /// Adds wall times to rows, which makes reports differ between runs.
  bool timings = false;
  std::string out;
  std::string format = "json";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

class ConfigError : public Error {
 public:
  ConfigError(int line, int column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Throws ConfigError with the position of the offending key or value.
RunConfig parse_config(const std::string& text);
/// Applies one key = value pair; `line` is used in error messages.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value, int line = 0,
                      int column = 0);
/// Canonical text; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);
/// Range and consistency checks that need all keys.
void validate(const RunConfig& config);

struct CheckRow {
  std::string suite;
  std::string case_id;
  Status status = Status::NotApplicable;
  std::vector<std::pair<std::string, std::string>> witness;
  std::string tolerance;
  std::optional<double> seconds;
};

struct Report {
  std::string version = kVersion;
  RunConfig config;
  std::vector<CheckRow> rows;

  /// 0 all pass, 1 any FAIL, 3 INCONCLUSIVE without FAIL.
  int exit_code() const;
};

enum class Format { Json, Csv, Table };
Format parse_format(const std::string& name);

std::string emit(const Report& report, Format format);
/// Reads the rows back from emitted JSON.
std::vector<CheckRow> parse_report_rows(const std::string& json);

/// Runs the configured suites; suites run in parallel up to config.jobs and
/// rows are ordered by suite, then by case.
Report run(const RunConfig& config);
/// Rows of one suite.
std::vector<CheckRow> run_suite(const RunConfig& config, const std::string& suite);

/// Splits "a,b,c" or, when a ';' is present, "a;b;c".
std::vector<std::string> split_list(const std::string& text);

}  // namespace rotcode

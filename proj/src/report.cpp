#include "rotcode/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace rotcode {

namespace {

using json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& value, int line, int column, const char* what) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError(line, column, "expected " + std::string(what) + ", got '" + value + "'");
  return out;
}

double parse_double(const std::string& value, int line, int column) {
  try {
    std::size_t used = 0;
    double d = std::stod(value, &used);
    if (used == value.size()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError(line, column, "expected a number, got '" + value + "'");
}

std::string fmt_double(double d) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

const std::vector<std::string> kSuites{"cf", "code", "approx", "series", "structure"};

Status parse_status(const std::string& s) {
  for (Status st : {Status::Pass, Status::Fail, Status::NotApplicable, Status::Inconclusive})
    if (s == to_string(st)) return st;
  throw Error("unknown status '" + s + "'");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string witness_text(const CheckRow& r) {
  std::string out;
  for (const auto& [k, v] : r.witness) out += (out.empty() ? "" : " ") + k + "=" + v;
  return out;
}

}  // namespace

std::vector<std::string> split_list(const std::string& text) {
  const char sep = text.find(';') != std::string::npos ? ';' : ',';
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void set_config_value(RunConfig& c, const std::string& key, const std::string& value, int line, int column) {
  const int vcol = column + static_cast<int>(key.size()) + 3;
  auto positive = [&](long x, const char* what) {
    if (x <= 0) throw ConfigError(line, vcol, std::string(what) + " must be positive");
    return x;
  };
  auto window = [&](const std::string& s) {
    int w = parse_number<int>(s, line, vcol, "an integer");
    if (w < 2) throw ConfigError(line, vcol, "window w must be at least 2, got " + s);
    return w;
  };
  if (key == "theta") c.theta = value;
  else if (key == "bounds") c.bounds = value;
  else if (key == "s_theta") c.s_theta = value;
  else if (key == "s_bounds") c.s_bounds = value;
  else if (key == "z") c.z = value;
  else if (key == "modulus") c.modulus = value;
  else if (key == "out") c.out = value;
  else if (key == "format") {
    try {
      parse_format(value);
    } catch (const Error& e) {
      throw ConfigError(line, vcol, e.what());
    }
    c.format = value;
  } else if (key == "u") c.u.push_back(value);
  else if (key == "v") c.v.push_back(value);
  else if (key == "base") c.bases.push_back(value);
  else if (key == "suite") {
    if (std::find(kSuites.begin(), kSuites.end(), value) == kSuites.end())
      throw ConfigError(line, vcol, "unknown suite '" + value + "'");
    c.suites.push_back(value);
  } else if (key == "w") c.w.push_back(window(value));
  else if (key == "census_w") c.census_w.push_back(window(value));
  else if (key == "n_from") c.n_from = parse_number<int>(value, line, vcol, "an integer");
  else if (key == "n_to") c.n_to = parse_number<int>(value, line, vcol, "an integer");
  else if (key == "digits") c.digits = positive(parse_number<long>(value, line, vcol, "an integer"), "digits");
  else if (key == "depth") c.depth = static_cast<int>(positive(parse_number<int>(value, line, vcol, "an integer"), "depth"));
  else if (key == "horizon") c.horizon = static_cast<std::uint64_t>(positive(parse_number<long>(value, line, vcol, "an integer"), "horizon"));
  else if (key == "precision_cap") c.precision_cap = positive(parse_number<long>(value, line, vcol, "an integer"), "precision_cap");
  else if (key == "jobs") c.jobs = static_cast<int>(positive(parse_number<int>(value, line, vcol, "an integer"), "jobs"));
  else if (key == "complexity_n") c.complexity_n = static_cast<int>(positive(parse_number<int>(value, line, vcol, "an integer"), "complexity_n"));
  else if (key == "epsilon") {
    c.epsilon = parse_double(value, line, vcol);
    if (!(c.epsilon > 0)) throw ConfigError(line, vcol, "epsilon must be positive");
  } else if (key == "timings") {
    if (value != "true" && value != "false") throw ConfigError(line, vcol, "expected true or false");
    c.timings = value == "true";
  } else {
    throw ConfigError(line, column, "unknown key '" + key + "'");
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  const std::set<std::string> lists{"u", "v", "base", "suite", "w", "census_w"};
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  for (int line = 1; std::getline(in, raw); ++line) {
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    const int column = static_cast<int>(raw.find_first_not_of(" \t")) + 1;
    const auto eq = raw.find('=');
    if (eq == std::string::npos) throw ConfigError(line, column, "expected key = value");
    const std::string key = trim(raw.substr(0, eq));
    const std::string value = trim(raw.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, column, "missing key");
    if (lists.count(key) && seen.insert(key).second) {
      if (key == "u") c.u.clear();
      else if (key == "v") c.v.clear();
      else if (key == "base") c.bases.clear();
      else if (key == "suite") c.suites.clear();
      else if (key == "w") c.w.clear();
      else if (key == "census_w") c.census_w.clear();
    } else if (!lists.count(key) && !seen.insert(key).second) {
      throw ConfigError(line, column, "key '" + key + "' given twice");
    }
    if (lists.count(key) && value.empty()) continue;
    set_config_value(c, key, value, line, column);
  }
  return c;
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream o;
  auto one = [&](const char* k, const std::string& v) { o << k << " = " << v << "\n"; };
  auto many = [&](const char* k, const auto& vs) {
    if (vs.empty()) o << k << " =\n";
    for (const auto& v : vs) o << k << " = " << v << "\n";
  };
  one("theta", c.theta);
  one("bounds", c.bounds);
  many("u", c.u);
  if (!c.s_theta.empty()) one("s_theta", c.s_theta);
  if (!c.s_bounds.empty()) one("s_bounds", c.s_bounds);
  many("v", c.v);
  many("base", c.bases);
  one("n_from", std::to_string(c.n_from));
  one("n_to", std::to_string(c.n_to));
  many("w", c.w);
  one("digits", std::to_string(c.digits));
  one("depth", std::to_string(c.depth));
  one("horizon", std::to_string(c.horizon));
  one("precision_cap", std::to_string(c.precision_cap));
  one("jobs", std::to_string(c.jobs));
  many("suite", c.suites);
  if (!c.z.empty()) one("z", c.z);
  one("modulus", c.modulus);
  many("census_w", c.census_w);
  one("epsilon", fmt_double(c.epsilon));
  one("complexity_n", std::to_string(c.complexity_n));
  one("timings", c.timings ? "true" : "false");
  if (!c.out.empty()) one("out", c.out);
  one("format", c.format);
  return o.str();
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& what) { throw ConfigError(0, 0, what); };
  if (c.n_from < 0 || c.n_to < c.n_from) fail("need 0 <= n_from <= n_to");
  if (c.n_to + 1 > c.depth) fail("depth must exceed n_to");
  for (int w : c.w)
    if (w < 2) fail("window w must be at least 2");
  for (int w : c.census_w)
    if (w < 2) fail("census window must be at least 2");
  if (c.bases.empty()) fail("at least one base is needed");
  if (!c.v.empty() && c.s_theta.empty()) fail("v is given without s_theta");
  if (!c.s_theta.empty() && c.v.empty()) fail("s_theta needs weights v");
  if (c.digits <= 0 || c.horizon == 0 || c.precision_cap < 64 || c.jobs <= 0) fail("numeric fields must be positive");
  parse_format(c.format);
}

int Report::exit_code() const {
  bool fail = false, inconclusive = false;
  for (const auto& r : rows) {
    fail = fail || r.status == Status::Fail;
    inconclusive = inconclusive || r.status == Status::Inconclusive;
  }
  return fail ? 1 : inconclusive ? 3 : 0;
}

Format parse_format(const std::string& name) {
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  if (name == "table") return Format::Table;
  throw InvalidArgument("unknown format '" + name + "'");
}

std::string emit(const Report& report, Format format) {
  if (format == Format::Json) {
    json doc;
    doc["version"] = report.version;
    json cfg = json::object();
    std::istringstream in(emit_config(report.config));
    std::string line;
    while (std::getline(in, line)) {
      const auto eq = line.find('=');
      const std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
      if (cfg.contains(k)) {
        if (!cfg[k].is_array()) cfg[k] = json::array({cfg[k]});
        cfg[k].push_back(v);
      } else {
        cfg[k] = v;
      }
    }
    doc["config"] = cfg;
    json rows = json::array();
    for (const auto& r : report.rows) {
      json row;
      row["suite"] = r.suite;
      row["case"] = r.case_id;
      row["status"] = to_string(r.status);
      json w = json::object();
      for (const auto& [k, v] : r.witness) w[k] = v;
      row["witness"] = w;
      row["tolerance"] = r.tolerance;
      if (r.seconds) row["seconds"] = *r.seconds;
      rows.push_back(row);
    }
    doc["rows"] = rows;
    json summary;
    std::map<std::string, int> counts;
    for (Status s : {Status::Pass, Status::Fail, Status::NotApplicable, Status::Inconclusive}) counts[to_string(s)] = 0;
    for (const auto& r : report.rows) ++counts[to_string(r.status)];
    for (Status s : {Status::Pass, Status::Fail, Status::NotApplicable, Status::Inconclusive})
      summary[to_string(s)] = counts[to_string(s)];
    summary["exit_code"] = report.exit_code();
    doc["summary"] = summary;
    return doc.dump(2) + "\n";
  }
  std::ostringstream o;
  if (format == Format::Csv) {
    o << "suite,case,status,tolerance,witness\n";
    for (const auto& r : report.rows)
      o << csv_field(r.suite) << "," << csv_field(r.case_id) << "," << to_string(r.status) << ","
        << csv_field(r.tolerance) << "," << csv_field(witness_text(r)) << "\n";
    return o.str();
  }
  std::size_t ws = 5, wc = 4, wt = 6, wl = 9;
  for (const auto& r : report.rows) {
    ws = std::max(ws, r.suite.size());
    wc = std::max(wc, r.case_id.size());
    wl = std::max(wl, r.tolerance.size());
  }
  o << std::left << std::setw(static_cast<int>(ws)) << "suite" << "  " << std::setw(static_cast<int>(wc)) << "case"
    << "  " << std::setw(static_cast<int>(wt + 6)) << "status" << "  " << std::setw(static_cast<int>(wl)) << "tolerance" << "  witness\n";
  for (const auto& r : report.rows)
    o << std::setw(static_cast<int>(ws)) << r.suite << "  " << std::setw(static_cast<int>(wc)) << r.case_id << "  "
      << std::setw(static_cast<int>(wt + 6)) << to_string(r.status) << "  " << std::setw(static_cast<int>(wl)) << r.tolerance << "  " << witness_text(r) << "\n";
  return o.str();
}

std::vector<CheckRow> parse_report_rows(const std::string& text) {
  std::vector<CheckRow> out;
  const json doc = json::parse(text);
  for (const auto& row : doc.at("rows")) {
    CheckRow r;
    r.suite = row.at("suite").get<std::string>();
    r.case_id = row.at("case").get<std::string>();
    r.status = parse_status(row.at("status").get<std::string>());
    for (const auto& [k, v] : row.at("witness").items()) r.witness.emplace_back(k, v.get<std::string>());
    r.tolerance = row.at("tolerance").get<std::string>();
    if (row.contains("seconds")) r.seconds = row.at("seconds").get<double>();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace rotcode

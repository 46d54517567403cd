#include <algorithm>

#include "doctest.h"
#include "rotcode/report.hpp"

using namespace rotcode;

namespace {

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

const CheckRow* find_row(const Report& r, const std::string& suite, const std::string& id) {
  for (const auto& row : r.rows)
    if (row.suite == suite && row.case_id == id) return &row;
  return nullptr;
}

std::string witness(const CheckRow& r, const std::string& key) {
  for (const auto& [k, v] : r.witness)
    if (k == key) return v;
  return "";
}

}  // namespace

TEST_CASE("config round trip") {
  RunConfig c;
  CHECK(parse_config(emit_config(c)) == c);
  c.theta = "quad:1,-1,-1:+";
  c.bounds = "1/4,3/4";
  c.u = {"0", "1", "2,1"};
  c.s_theta = "quad:1,-1,-1:+";
  c.s_bounds = "1/2";
  c.v = {"1"};
  c.bases = {"2", "2@3/5,4/5"};
  c.w = {2, 3, 5};
  c.suites = {};
  c.z = "3/5,4/5";
  c.epsilon = 0.25;
  c.timings = true;
  CHECK(parse_config(emit_config(c)) == c);
}

TEST_CASE("config errors carry line and column") {
  try {
    parse_config("theta = golden\n# comment\nw = 1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 5);
  }
  CHECK_THROWS_AS(parse_config("nonsense = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("digits = 3\ndigits = 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("digits = -3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("no equals sign\n"), ConfigError);
  RunConfig bad;
  bad.n_to = 40;
  CHECK_THROWS(validate(bad));
  bad = RunConfig{};
  bad.v = {"1"};
  CHECK_THROWS(validate(bad));
}

TEST_CASE("repeated list keys replace the default") {
  RunConfig c = parse_config("w = 4\nw = 6\nbase = 3\nsuite = cf\n");
  CHECK(c.w == std::vector<int>{4, 6});
  CHECK(c.bases == std::vector<std::string>{"3"});
  CHECK(c.suites == std::vector<std::string>{"cf"});
  CHECK(parse_config("suite =\n").suites.empty());
}

TEST_CASE("empty suite list gives an empty report") {
  RunConfig c;
  c.suites = {};
  Report r = run(c);
  CHECK(r.rows.empty());
  CHECK(r.exit_code() == 0);
  const std::string j = emit(r, Format::Json);
  CHECK(parse_report_rows(j).empty());
  CHECK(count_lines(emit(r, Format::Csv)) == 1);
}

TEST_CASE("emitted formats agree") {
  RunConfig c;
  c.suites = {"cf", "code"};
  c.horizon = 20000;
  Report r = run(c);
  REQUIRE_FALSE(r.rows.empty());
  const std::string j = emit(r, Format::Json);
  CHECK(count_lines(emit(r, Format::Csv)) == r.rows.size() + 1);
  CHECK(count_lines(emit(r, Format::Table)) == r.rows.size() + 1);
  std::vector<CheckRow> back = parse_report_rows(j);
  REQUIRE(back.size() == r.rows.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].status == r.rows[i].status);
    CHECK(back[i].case_id == r.rows[i].case_id);
    CHECK(back[i].witness == r.rows[i].witness);
  }
}

TEST_CASE("reports are byte identical across runs and thread counts") {
  RunConfig c;
  c.n_to = 10;
  c.census_w = {4, 8};
  c.horizon = 50000;
  const std::string a = emit(run(c), Format::Json);
  c.jobs = 4;
  Report r = run(c);
  r.config.jobs = 1;
  CHECK(emit(r, Format::Json) == a);
  c.jobs = 1;
  CHECK(emit(run(c), Format::Json) == a);
}

TEST_CASE("golden Sturmian defaults pass") {
  Report r = run(RunConfig{});
  CHECK(r.exit_code() == 0);
  for (const auto& row : r.rows) {
    INFO(row.suite << " " << row.case_id);
    CHECK((row.status == Status::Pass || row.status == Status::NotApplicable));
  }
  REQUIRE(find_row(r, "code", "complexity"));
  CHECK(witness(*find_row(r, "code", "complexity"), "p_equals_n_plus_1") == "yes");
}

TEST_CASE("cosine configuration") {
  RunConfig c = parse_config("suite = series\nz = 3/5,4/5\nmodulus = 2\nbase = 2\ndigits = 90\n");
  Report r = run(c);
  const CheckRow* cos = find_row(r, "series", "cosine");
  REQUIRE(cos);
  CHECK(cos->status == Status::Pass);
  const std::string d = witness(*cos, "discrepancy");
  const int exponent = std::stoi(d.substr(d.find('e') + 1));
  CHECK(exponent <= -80);
  CHECK(find_row(r, "series", "independence")->status == Status::Pass);
}

TEST_CASE("caps become inconclusive rows") {
  RunConfig c;
  c.suites = {"approx"};
  c.horizon = 300;
  Report r = run(c);
  CHECK(r.exit_code() == 3);
  const CheckRow* h = find_row(r, "approx", "horizon w=2");
  REQUIRE(h);
  CHECK(witness(*h, "cap") == "horizon=300");

  RunConfig p;
  p.suites = {"series"};
  p.digits = 2000;
  p.precision_cap = 256;
  Report q = run(p);
  CHECK(q.exit_code() == 3);
  const CheckRow* a = find_row(q, "series", "aborted");
  REQUIRE(a);
  CHECK(a->status == Status::Inconclusive);
  CHECK(a->tolerance == "precision_cap=256");
}

TEST_CASE("a violated boundary condition fails") {
  RunConfig c;
  c.suites = {"code"};
  c.bounds = "1/5,1/5+theta";
  c.horizon = 20000;
  Report r = run(c);
  CHECK(r.exit_code() == 1);
  CHECK(find_row(r, "code", "condition-4")->status == Status::Fail);
}

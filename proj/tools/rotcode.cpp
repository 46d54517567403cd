#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rotcode/approximant.hpp"
#include "rotcode/cfrac.hpp"
#include "rotcode/coding.hpp"
#include "rotcode/report.hpp"
#include "rotcode/series.hpp"
#include "rotcode/structure.hpp"

using namespace rotcode;
using json = nlohmann::ordered_json;

namespace {

constexpr int kUsage = 2;

// Flags that map onto config keys. Applied in registration order after any
// config file, so flags override file values.
struct Overrides {
  struct Entry {
    CLI::Option* opt;
    std::string key;
    std::string value;
  };
  std::vector<std::unique_ptr<Entry>> entries;

  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    auto e = std::make_unique<Entry>();
    e->key = key;
    e->opt = app->add_option(flag, e->value, help);
    entries.push_back(std::move(e));
  }

  void apply(RunConfig& c) const {
    static const std::set<std::string> lists{"u", "v", "base", "suite", "w", "census_w"};
    for (const auto& e : entries) {
      if (!e->opt->count()) continue;
      try {
        if (!lists.count(e->key)) {
          set_config_value(c, e->key, e->value);
          continue;
        }
        if (e->key == "u") c.u.clear();
        else if (e->key == "v") c.v.clear();
        else if (e->key == "base") c.bases.clear();
        else if (e->key == "suite") c.suites.clear();
        else if (e->key == "w") c.w.clear();
        else c.census_w.clear();
        for (const auto& item : split_list(e->value)) set_config_value(c, e->key, item);
      } catch (const ConfigError& err) {
        const std::string what = err.what();
        throw InvalidArgument(e->opt->get_name() + ": " + what.substr(what.find(": ") + 2));
      }
    }
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, 0, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

int finish(const RunConfig& c, const Report& rep) {
  write_out(c.out, emit(rep, parse_format(c.format)));
  return rep.exit_code();
}

int verify(const RunConfig& c, const std::string& suite) {
  validate(c);
  set_precision_cap(c.precision_cap);
  Report rep;
  rep.config = c;
  rep.config.suites = {suite};
  rep.rows = run_suite(c, suite);
  return finish(c, rep);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Codings of rotations, periodic approximants and digit series"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  Overrides ov;
  ov.add(&app, "--precision-cap", "precision_cap", "Largest working precision in bits");
  ov.add(&app, "--horizon", "horizon", "Largest orbit index scanned");
  ov.add(&app, "--jobs", "jobs", "Worker threads");
  ov.add(&app, "--out", "out", "Output path (default stdout)");
  ov.add(&app, "--format", "format", "json, csv or table");

  auto theta_bounds = [&](CLI::App* sub) {
    ov.add(sub, "--theta", "theta", "Rotation number spec");
    ov.add(sub, "--bounds", "bounds", "Boundaries r1,r2,...");
    ov.add(sub, "--values", "u", "Digit values; use ';' between complex values");
  };

  // cf
  auto* cf = app.add_subcommand("cf", "Continued fractions")->require_subcommand(1);
  auto* cf_expand = cf->add_subcommand("expand", "Partial quotients and convergents");
  ov.add(cf_expand, "--theta", "theta", "Rotation number spec");
  ov.add(cf_expand, "--depth", "depth", "Number of quotients");
  bool cf_json = false;
  cf_expand->add_flag("--json", cf_json, "JSON output");
  auto* cf_verify = cf->add_subcommand("verify", "Identity checks");
  ov.add(cf_verify, "--theta", "theta", "Rotation number spec");
  ov.add(cf_verify, "--depth", "depth", "Number of quotients");

  // code
  auto* code = app.add_subcommand("code", "Coding words")->require_subcommand(1);
  auto* code_word = code->add_subcommand("word", "Letters as CSV");
  theta_bounds(code_word);
  std::uint64_t count = 100;
  code_word->add_option("--count", count, "Number of letters");
  auto* code_cx = code->add_subcommand("complexity", "Subword complexity p(n)");
  theta_bounds(code_cx);
  ov.add(code_cx, "--nmax", "complexity_n", "Largest n");
  auto* code_verify = code->add_subcommand("verify", "Coding checks");
  theta_bounds(code_verify);
  ov.add(code_verify, "--nmax", "complexity_n", "Largest n for p(n)");

  // approx
  auto* approx = app.add_subcommand("approx", "Periodic approximants")->require_subcommand(1);
  auto* approx_verify = approx->add_subcommand("verify", "Mismatch structure and error bounds");
  theta_bounds(approx_verify);
  ov.add(approx_verify, "--n-from", "n_from", "First level");
  ov.add(approx_verify, "--n-to", "n_to", "Last level");
  ov.add(approx_verify, "--w", "w", "Windows");
  ov.add(approx_verify, "--base", "base", "Bases; use ';' between complex bases");
  ov.add(approx_verify, "--depth", "depth", "Expansion depth");

  // series
  auto* series = app.add_subcommand("series", "Digit series")->require_subcommand(1);
  std::map<std::string, CLI::App*> series_kind;
  bool emit_json = false;
  std::string weights;
  for (const char* k : {"t", "s", "cos", "sin"}) {
    auto* sub = series->add_subcommand(k, std::string("Evaluate ") + k);
    ov.add(sub, "--theta", "theta", "Rotation number spec");
    ov.add(sub, "--bounds", "bounds", "Boundaries");
    if (std::string(k) == "t") ov.add(sub, "--values", "u", "Digit values");
    if (std::string(k) == "s") sub->add_option("--weights", weights, "Jump weights v");
    if (std::string(k) == "cos" || std::string(k) == "sin") {
      ov.add(sub, "--z", "z", "Point on the unit circle, re,im");
      ov.add(sub, "--modulus", "modulus", "Rational |b|");
    } else {
      ov.add(sub, "--base", "base", "Base");
    }
    ov.add(sub, "--digits", "digits", "Certified decimal digits");
    sub->add_flag("--emit-json", emit_json, "JSON with terms_used and tail_bound");
    series_kind[k] = sub;
  }
  auto* series_verify = series->add_subcommand("verify", "Series checks");
  theta_bounds(series_verify);
  ov.add(series_verify, "--base", "base", "Bases");
  ov.add(series_verify, "--digits", "digits", "Certified decimal digits");
  ov.add(series_verify, "--s-theta", "s_theta", "Rotation number for S");
  ov.add(series_verify, "--s-bounds", "s_bounds", "Boundaries for S");
  ov.add(series_verify, "--weights", "v", "Jump weights for S");
  ov.add(series_verify, "--z", "z", "Point for the cosine and sine sums");
  ov.add(series_verify, "--modulus", "modulus", "Rational |b|");

  // structure
  auto* structure = app.add_subcommand("structure", "Mismatch structure")->require_subcommand(1);
  auto* census = structure->add_subcommand("census", "Free windows and tail changes");
  theta_bounds(census);
  ov.add(census, "--n-from", "n_from", "First level");
  ov.add(census, "--n-to", "n_to", "Last level");
  ov.add(census, "--w", "census_w", "Windows");
  ov.add(census, "--eps", "epsilon", "Window start fraction");
  ov.add(census, "--depth", "depth", "Expansion depth");
  auto* iw = structure->add_subcommand("iw", "The set I_w at one level");
  theta_bounds(iw);
  int iw_N = 8, iw_w = 4;
  iw->add_option("--N", iw_N, "Level");
  iw->add_option("--w", iw_w, "Window");
  auto* structure_verify = structure->add_subcommand("verify", "Structure checks");
  theta_bounds(structure_verify);

  // run
  auto* run_cmd = app.add_subcommand("run", "Run suites from a config file");
  std::string config_path;
  run_cmd->add_option("--config", config_path, "key = value file");
  theta_bounds(run_cmd);
  ov.add(run_cmd, "--suite", "suite", "Suites to run");
  ov.add(run_cmd, "--digits", "digits", "Certified decimal digits");
  ov.add(run_cmd, "--base", "base", "Bases");
  ov.add(run_cmd, "--w", "w", "Windows");
  ov.add(run_cmd, "--n-from", "n_from", "First level");
  ov.add(run_cmd, "--n-to", "n_to", "Last level");
  ov.add(run_cmd, "--timings", "timings", "true adds wall times");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    RunConfig c;
    if (run_cmd->parsed() && !config_path.empty()) c = parse_config(read_file(config_path));
    ov.apply(c);

    if (run_cmd->parsed()) {
      validate(c);
      return finish(c, run(c));
    }
    if (cf_verify->parsed()) return verify(c, "cf");
    if (code_verify->parsed()) return verify(c, "code");
    if (approx_verify->parsed()) return verify(c, "approx");
    if (series_verify->parsed()) return verify(c, "series");
    if (structure_verify->parsed()) return verify(c, "structure");

    set_precision_cap(c.precision_cap);
    std::ostringstream out;

    if (cf_expand->parsed()) {
      ContinuedFraction f = expand(ThetaOracle::parse(c.theta), c.depth);
      if (cf_json) {
        json j = json::array();
        for (int m = 0; m <= f.depth(); ++m)
          j.push_back({{"m", m},
                       {"a", f.quotients[static_cast<std::size_t>(m)].get_str()},
                       {"p", f.p_at(m).get_str()},
                       {"q", f.q_at(m).get_str()}});
        out << j.dump(2) << "\n";
      } else {
        out << "m,a,p,q\n";
        for (int m = 0; m <= f.depth(); ++m)
          out << m << "," << f.quotients[static_cast<std::size_t>(m)] << "," << f.p_at(m) << "," << f.q_at(m) << "\n";
      }
    } else if (code_word->parsed() || code_cx->parsed()) {
      PartitionSpec p = PartitionSpec::parse(ThetaOracle::parse(c.theta), c.bounds);
      std::vector<ComplexRational> u;
      for (const auto& s : c.u) u.push_back(parse_complex_rational(s));
      if (!u.empty()) p.with_weights_T(u);
      CodingWord word(p);
      if (code_word->parsed()) {
        const auto a = word.letters(0, count, c.jobs);
        out << "n,letter" << (u.empty() ? "" : ",value") << "\n";
        for (std::uint64_t n = 0; n < a.size(); ++n) {
          out << n << "," << a[n];
          if (!u.empty()) out << "," << u[static_cast<std::size_t>(a[n])].to_string();
          out << "\n";
        }
      } else {
        const auto pc = subword_complexity(word, c.complexity_n, std::min<std::uint64_t>(c.horizon, 200000));
        out << "n,p\n";
        for (std::size_t k = 0; k < pc.size(); ++k) out << k + 1 << "," << pc[k] << "\n";
      }
    } else if (series->parsed()) {
      SeriesValue v;
      json extra;
      if (series_kind["t"]->parsed()) {
        PartitionSpec p = PartitionSpec::parse(ThetaOracle::parse(c.theta), c.bounds);
        std::vector<ComplexRational> u = digit_values(p);
        if (!c.u.empty()) {
          u.clear();
          for (const auto& s : c.u) u.push_back(parse_complex_rational(s));
          p.with_weights_T(u);
        }
        v = eval_T(Base::parse(c.bases.front()), CodingWord(p), u, c.digits, c.jobs);
      } else if (series_kind["s"]->parsed()) {
        PartitionSpec p = PartitionSpec::parse(ThetaOracle::parse(c.theta), c.bounds);
        std::vector<ComplexRational> w;
        for (const auto& s : split_list(weights.empty() ? "1" : weights)) w.push_back(parse_complex_rational(s));
        p.with_weights_S(w);
        v = eval_S(Base::parse(c.bases.front()), p, c.digits);
      } else {
        if (c.z.empty()) throw ConfigError(0, 0, "--z is required");
        const bool cosine = series_kind["cos"]->parsed();
        const auto z = parse_complex_rational(c.z);
        const auto m = parse_rational(c.modulus);
        TrigPair tp = cosine ? cosine_pair(m, z, c.digits) : sine_pair(m, z, c.digits);
        v.value = tp.combination;
        v.terms_used = tp.terms_used;
        v.bits = tp.combination.prec();
        v.tail_bound = tp.combination.radius_upper();
        extra["direct"] = tp.direct.to_string(static_cast<int>(std::min<long>(c.digits, 60)));
        char* s = nullptr;
        mpfr_asprintf(&s, "%.3Re", tp.discrepancy.upper().get());
        extra["discrepancy"] = s;
        mpfr_free_str(s);
      }
      const int shown = static_cast<int>(c.digits);
      if (emit_json) {
        json j{{"value", v.describe(shown)}, {"terms_used", v.terms_used}, {"bits", v.bits}};
        char* s = nullptr;
        mpfr_asprintf(&s, "%.3Re", v.tail_bound.get());
        j["tail_bound"] = s;
        mpfr_free_str(s);
        for (auto& [k, x] : extra.items()) j[k] = x;
        out << j.dump(2) << "\n";
      } else {
        out << v.describe(shown) << "\n";
      }
    } else if (census->parsed()) {
      PartitionSpec p = PartitionSpec::parse(ThetaOracle::parse(c.theta), c.bounds);
      CodingWord word(p);
      ContinuedFraction f = expand(p.theta(), c.depth);
      CensusReport rep = gap_census(word, f, c.n_from, c.n_to, c.census_w, c.epsilon, c.jobs);
      json cells = json::array();
      for (const auto& cell : rep.cells)
        cells.push_back({{"n", cell.n},
                         {"w", cell.w},
                         {"q", cell.q},
                         {"window", {cell.window_lo, cell.window_hi}},
                         {"starts", cell.starts},
                         {"hits", cell.hits},
                         {"free", cell.free},
                         {"degenerate", cell.degenerate}});
      json f1 = json::array(), f2 = json::array();
      for (double x : rep.f1) f1.push_back(std::isnan(x) ? json() : json(x));
      for (double x : rep.f2) f2.push_back(std::isnan(x) ? json() : json(x));
      json j{{"epsilon", rep.epsilon},
             {"classification", rep.iv1_like ? "iv.1-like" : rep.iv2_like ? "iv.2-like" : "undecided"},
             {"monotone_in_w", rep.monotone_in_w},
             {"cells", cells},
             {"kappa_pairs", rep.kappa_pairs},
             {"f1", f1},
             {"f2", f2}};
      out << j.dump(2) << "\n";
    } else if (iw->parsed()) {
      PartitionSpec p = PartitionSpec::parse(ThetaOracle::parse(c.theta), c.bounds);
      CodingWord word(p);
      ContinuedFraction f = expand(p.theta(), std::max(c.depth, iw_N + 2));
      IwSet s = compute_I_w(word, f, iw_N, iw_w, c.jobs);
      json members = json::array();
      for (const auto& m : s.members)
        members.push_back({{"M", m.M}, {"step", m.step}, {"boundary", m.boundary}, {"distance", m.distance.mid_double()}});
      json j{{"N", s.level},
             {"w", s.window},
             {"q", s.q},
             {"max_multiplicity", s.max_multiplicity},
             {"near_boundary", s.near_boundary},
             {"members", members}};
      out << j.dump(2) << "\n";
    }
    write_out(c.out, out.str());
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kUsage;
  } catch (const PrecisionExhausted& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return 3;
  } catch (const Inconclusive& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

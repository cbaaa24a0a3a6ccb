#include "jainops/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "jainops/bvrate.hpp"
#include "jainops/errors.hpp"
#include "jainops/moments.hpp"
#include "jainops/operators.hpp"

namespace jainops::cli {

namespace {

using json = nlohmann::ordered_json;

// Raised for anything the user has to fix in flags or config.
class ConfigError : public Error {
 public:
  using Error::Error;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double to_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError(what + ": cannot parse number '" + s + "'");
  return v;
}

std::vector<double> to_doubles(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(to_double(part, what));
  return out;
}

// ---------------------------------------------------------------------------
// Tabular output shared by every command.

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;

  void write(std::ostream& out, const std::string& format) const {
    if (format == "json") {
      json arr = json::array();
      for (const auto& row : rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = row[i];
        arr.push_back(obj);
      }
      out << arr.dump(2) << "\n";
      return;
    }
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ",";
        const json& v = row[i];
        if (v.is_number_float()) out << fmt(v.get<double>());
        else if (v.is_string()) out << v.get<std::string>();
        else out << v.dump();
      }
      out << "\n";
    }
  }
};

// ---------------------------------------------------------------------------
// Options: flags parsed by CLI11, merged over an optional JSON config.

struct RawFlags {
  std::string config;
  std::string family, f, mu_rule, mu_const, format, out, interval, n_grid, x_grid;
  std::vector<std::string> n, mu, r, c, alpha, beta, x, threshold;
  bool raw = false;
  unsigned jobs = 1;
};

struct Options {
  std::optional<std::string> family, f, mu_rule, interval;
  std::string format = "csv";
  std::string out;
  std::vector<double> n, mu, r, c, x;
  std::optional<double> alpha, beta, threshold;
  std::optional<std::vector<double>> n_grid, x_grid;
  std::optional<json> growth;
  bool raw = false;
  unsigned jobs = 1;
  Accuracy acc;
};

std::vector<double> json_numbers(const json& v, const std::string& key) {
  if (v.is_number()) return {v.get<double>()};
  if (v.is_array()) {
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError("config key '" + key + "' must hold numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }
  if (v.is_string()) return to_doubles(v.get<std::string>(), key);
  throw ConfigError("config key '" + key + "' must be a number or an array of numbers");
}

std::vector<double> json_grid(const json& v, const std::string& key) {
  if (v.is_object()) {
    for (const char* field : {"start", "stop", "count"})
      if (!v.contains(field)) throw ConfigError("grid '" + key + "' needs start, stop and count");
    std::string spec = fmt(v["start"].get<double>()) + ":" + fmt(v["stop"].get<double>()) + ":" +
                       std::to_string(v["count"].get<long long>());
    if (v.contains("spacing")) spec += ":" + v["spacing"].get<std::string>();
    return parse_grid(spec);
  }
  if (v.is_string()) return parse_grid(v.get<std::string>());
  return json_numbers(v, key);
}

Options merge_options(const RawFlags& flags, const CLI::App& sub) {
  Options o;
  json cfg = json::object();
  if (!flags.config.empty()) {
    std::ifstream in(flags.config);
    if (!in) throw ConfigError("cannot open config file '" + flags.config + "'");
    try {
      cfg = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError("config file '" + flags.config + "' is not valid JSON: " + e.what());
    }
    if (!cfg.is_object()) throw ConfigError("config file must hold a JSON object");
  }
  const auto flag_set = [&sub](const std::string& name) { return sub.count("--" + name) > 0; };
  const auto str_opt = [&](const std::string& name, const std::string& flag_value,
                           const std::string& key) -> std::optional<std::string> {
    if (flag_set(name)) return flag_value;
    if (cfg.contains(key)) {
      if (!cfg[key].is_string()) throw ConfigError("config key '" + key + "' must be a string");
      return cfg[key].get<std::string>();
    }
    return std::nullopt;
  };
  const auto list_opt = [&](const std::string& name, const std::vector<std::string>& flag_values,
                            const std::string& key) -> std::vector<double> {
    if (flag_set(name)) {
      std::vector<double> out;
      for (const auto& s : flag_values)
        for (double v : to_doubles(s, "--" + name)) out.push_back(v);
      return out;
    }
    if (cfg.contains(key)) return json_numbers(cfg[key], key);
    return {};
  };
  const auto scalar_opt = [&](const std::string& name, const std::vector<std::string>& flag_values,
                              const std::string& key) -> std::optional<double> {
    auto v = list_opt(name, flag_values, key);
    if (v.empty()) return std::nullopt;
    if (v.size() > 1) throw ConfigError("--" + name + " expects a single value");
    return v.front();
  };

  o.family = str_opt("family", flags.family, "family");
  o.f = str_opt("f", flags.f, "f");
  o.mu_rule = str_opt("mu-rule", flags.mu_rule, "mu_rule");
  if (flag_set("mu-const")) {
    if (flag_set("mu-rule")) throw ConfigError("--mu-rule and --mu-const are mutually exclusive");
    o.mu_rule = "const:" + flags.mu_const;
  }
  o.interval = str_opt("interval", flags.interval, "interval");
  if (auto fmt_opt = str_opt("format", flags.format, "format")) o.format = *fmt_opt;
  if (o.format != "csv" && o.format != "json")
    throw ConfigError("--format must be csv or json, got '" + o.format + "'");
  if (auto out_opt = str_opt("out", flags.out, "out")) o.out = *out_opt;
  o.n = list_opt("n", flags.n, "n");
  o.mu = list_opt("mu", flags.mu, "mu");
  o.r = list_opt("r", flags.r, "r");
  o.c = list_opt("c", flags.c, "c");
  o.x = list_opt("x", flags.x, "x");
  o.alpha = scalar_opt("alpha", flags.alpha, "alpha");
  o.beta = scalar_opt("beta", flags.beta, "beta");
  o.threshold = scalar_opt("threshold", flags.threshold, "threshold");
  if (flag_set("n-grid")) o.n_grid = parse_grid(flags.n_grid);
  else if (cfg.contains("n_grid")) o.n_grid = json_grid(cfg["n_grid"], "n_grid");
  if (flag_set("x-grid")) o.x_grid = parse_grid(flags.x_grid);
  else if (cfg.contains("x_grid")) o.x_grid = json_grid(cfg["x_grid"], "x_grid");
  if (cfg.contains("growth")) o.growth = cfg["growth"];
  o.raw = flag_set("raw") ? flags.raw : cfg.value("raw", false);
  o.jobs = flag_set("jobs") ? flags.jobs : cfg.value("jobs", 1u);
  if (o.jobs < 1) throw ConfigError("--jobs must be >= 1");
  o.acc.series_eps = cfg.value("series_eps", o.acc.series_eps);
  o.acc.quad_rel_eps = cfg.value("quad_rel_eps", o.acc.quad_rel_eps);
  o.acc.v_cap = cfg.value("v_cap", o.acc.v_cap);
  o.acc.panel_cap = cfg.value("panel_cap", o.acc.panel_cap);
  try {
    o.acc.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return o;
}

std::uint64_t to_count(double v, const std::string& what) {
  if (!(v >= 0.0) || std::floor(v) != v || v > 1e15)
    throw ConfigError(what + " must be a nonnegative integer, got " + fmt(v));
  return static_cast<std::uint64_t>(v);
}

std::vector<std::uint64_t> to_counts(const std::vector<double>& v, const std::string& what) {
  std::vector<std::uint64_t> out;
  for (double d : v) out.push_back(to_count(std::round(d) == d ? d : std::round(d), what));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double single(const std::vector<double>& v, double fallback, const std::string& name) {
  if (v.empty()) return fallback;
  if (v.size() > 1) throw ConfigError("--" + name + " expects a single value for this command");
  return v.front();
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void require_nonempty(const std::vector<double>& v, const std::string& name) {
  if (v.empty()) throw ConfigError(name + ": grid must be nonempty");
}

// ---------------------------------------------------------------------------
// Functions from flags.

TestFunction auto_envelope_function(const std::string& name, const PiecewisePolynomial& pw, double t0_hint,
                                    const std::optional<json>& growth) {
  if (growth) {
    GrowthEnvelope env;
    env.q = growth->value("q", 1u);
    env.M = growth->value("M", 1.0);
    env.t0 = growth->value("t0", t0_hint);
    return TestFunction(name, pw, env);
  }
  GrowthEnvelope env;
  env.q = std::max<unsigned>(1, static_cast<unsigned>((pw.max_degree() + 1) / 2));
  env.t0 = std::max(t0_hint, 1e-6);
  // Sampled ratio on [t0, 10³]; beyond max(10³, last breakpoint) the last
  // piece is bounded by the sum of its |coefficients| times t^{2q}.
  double m = 0.0;
  for (double a : pw.pieces().back().coefficients()) m += std::fabs(a);
  constexpr int kSamples = 4000;
  for (int i = 0; i <= kSamples; ++i) {
    const double t = env.t0 * std::pow(std::max(1e3, pw.breakpoints().back() + 1.0) / env.t0,
                                       static_cast<double>(i) / kSamples);
    m = std::max(m, std::fabs(pw(t)) / std::pow(t, 2.0 * env.q));
  }
  env.M = std::max(1.01 * m, 1e-12);
  return TestFunction(name, pw, env);
}

PiecewisePolynomial to_piecewise(const InlineFunction& f) {
  std::vector<Polynomial> pieces;
  for (const auto& c : f.coefficients) pieces.emplace_back(c);
  return {f.breakpoints, std::move(pieces)};
}

bool is_inline(const std::string& s) { return s.rfind("poly:", 0) == 0 || s.rfind("piecewise:", 0) == 0; }

Integrand integrand_from(const std::string& text) {
  if (is_inline(text)) {
    const InlineFunction f = parse_inline_function(text);
    if (!f.piecewise) return Integrand::polynomial(Polynomial(f.coefficients.front()));
    return Integrand::piecewise(to_piecewise(f));
  }
  try {
    return corpus_function(text).to_integrand();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("--f: ") + e.what());
  }
}

TestFunction test_function_from(const std::string& text, double t0_hint, const std::optional<json>& growth) {
  if (is_inline(text)) return auto_envelope_function(text, to_piecewise(parse_inline_function(text)), t0_hint, growth);
  try {
    return corpus_function(text);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("--f: ") + e.what());
  }
}

std::ostream& open_output(const Options& o, std::ostream& out, std::ofstream& file) {
  if (o.out.empty()) return out;
  file.open(o.out, std::ios::trunc);
  if (!file) throw ConfigError("cannot open output file '" + o.out + "'");
  return file;
}

OperatorSpec spec_from(const Options& o, Family default_family) {
  OperatorSpec spec;
  spec.family = o.family ? parse_family(*o.family) : default_family;
  spec.n = to_count(single(o.n, 10.0, "n"), "--n");
  spec.mu = single(o.mu, 0.0, "mu");
  spec.r = to_count(single(o.r, 0.0, "r"), "--r");
  spec.c = single(o.c, 1.0, "c");
  spec.alpha = o.alpha.value_or(0.0);
  spec.beta = o.beta.value_or(0.0);
  spec.normalized = !o.raw;
  spec.validate();
  return spec;
}

// ---------------------------------------------------------------------------
// Commands.

int cmd_eval(const Options& o, std::ostream& out, std::ostream&) {
  const OperatorSpec spec = spec_from(o, Family::JainBaskakov);
  const double x = single(o.x, 1.0, "x");
  const Integrand f = integrand_from(o.f.value_or("poly:1"));
  const double value = evaluate(f, x, spec, o.acc);
  const double budget = o.acc.series_eps + (f.kind() == Integrand::Kind::Polynomial ? 0.0 : o.acc.quad_rel_eps);
  std::ofstream file;
  std::ostream& dst = open_output(o, out, file);
  Table t{{"family", "n", "mu", "r", "c", "x", "value", "est_error_budget"}, {}};
  t.rows.push_back({std::string(family_name(spec.family)), spec.n, spec.mu, spec.r, spec.c, x, value, budget});
  if (o.format == "json") {
    json obj = json::object();
    for (std::size_t i = 0; i < t.columns.size(); ++i) obj[t.columns[i]] = t.rows[0][i];
    dst << obj.dump(2) << "\n";
  } else {
    t.write(dst, "csv");
  }
  return kSuccess;
}

int cmd_verify_moments(const Options& o, std::ostream& out, std::ostream& err) {
  const std::vector<std::uint64_t> ns =
      to_counts(o.n_grid ? *o.n_grid : (o.n.empty() ? std::vector<double>{10, 20, 50, 100, 200} : o.n), "--n-grid");
  const std::vector<double> xs =
      sorted_unique(o.x_grid ? *o.x_grid : (o.x.empty() ? std::vector<double>{0.5, 1, 2, 5} : o.x));
  const std::vector<std::uint64_t> rs = to_counts(o.r.empty() ? std::vector<double>{0, 1, 2} : o.r, "--r");
  const std::vector<double> mus = sorted_unique(o.mu.empty() ? std::vector<double>{0, 0.1, 0.3} : o.mu);
  const std::vector<double> cs = sorted_unique(o.c.empty() ? std::vector<double>{1, 2} : o.c);
  const double threshold = o.threshold.value_or(1e-8);
  require_nonempty(xs, "--x-grid");
  if (ns.empty()) throw ConfigError("--n-grid: grid must be nonempty");
  std::optional<Family> only;
  if (o.family) only = parse_family(*o.family);

  struct Case {
    unsigned m;
    bool central;
    double x;
    OperatorSpec spec;
  };
  std::vector<Case> cases;
  const auto want = [&](Family f) { return !only || *only == f; };
  for (double mu : mus)
    for (std::uint64_t n : ns)
      for (double x : xs) {
        OperatorSpec base;
        base.n = n;
        base.mu = mu;
        base.validate();
        if (!(x > 0.0)) throw ConfigError("x > 0 violated: x = " + fmt(x));
        if (want(Family::Jain)) {
          OperatorSpec s = base;
          s.family = Family::Jain;
          for (bool central : {false, true})
            for (unsigned m = 0; m <= 2; ++m) cases.push_back({m, central, x, s});
        }
        for (std::uint64_t r : rs)
          for (double c : cs) {
            std::vector<OperatorSpec> specs;
            if (c == 1.0 && want(Family::JainBaskakov)) specs.push_back(integral_spec(n, r, mu, 1.0));
            if (c != 1.0 && want(Family::JainBaskakovC)) specs.push_back(integral_spec(n, r, mu, c));
            if (c == 1.0 && only == Family::JainBaskakovC) specs.push_back([&] {
                auto s = integral_spec(n, r, mu, 1.0);
                s.family = Family::JainBaskakovC;
                return s;
              }());
            if (c == 1.0 && only == Family::Stancu) {
              auto s = integral_spec(n, r, mu, 1.0);
              s.family = Family::Stancu;
              s.alpha = o.alpha.value_or(0.0);
              s.beta = o.beta.value_or(0.0);
              specs.push_back(s);
            }
            for (const auto& s : specs)
              for (bool central : {false, true})
                for (unsigned m = 0; m <= 2; ++m) {
                  if (!(static_cast<double>(n) > (static_cast<double>(r) + m + 1.0) * c)) continue;
                  cases.push_back({m, central, x, s});
                }
          }
      }

  std::vector<MomentReport> reports(cases.size());
  parallel_for(cases.size(), o.jobs, [&](std::size_t i) {
    reports[i] = compare_moment(cases[i].m, cases[i].x, cases[i].spec, o.acc, cases[i].central);
  });

  Table t{{"family", "kind", "m", "n", "r", "mu", "c", "x", "closed", "numeric", "abs_err", "rel_err"}, {}};
  for (const auto& rep : reports)
    t.rows.push_back({std::string(family_name(rep.spec.family)), rep.central ? "central" : "raw", rep.m,
                      rep.spec.n, rep.spec.r, rep.spec.mu, rep.spec.kernel_c(), rep.x, rep.closed, rep.numeric,
                      rep.abs_err, rep.rel_err});
  std::ofstream file;
  t.write(open_output(o, out, file), o.format);

  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < reports.size(); ++i)
    if (!(reports[i].rel_err <= threshold)) bad.push_back(i);
  err << "verify-moments: " << reports.size() << " cases, " << bad.size() << " above threshold " << fmt(threshold)
      << "\n";
  if (bad.empty()) return kSuccess;
  std::stable_sort(bad.begin(), bad.end(),
                   [&](std::size_t a, std::size_t b) { return reports[a].rel_err > reports[b].rel_err; });
  for (std::size_t k = 0; k < std::min<std::size_t>(5, bad.size()); ++k) {
    const auto& rep = reports[bad[k]];
    err << "  worst: family=" << family_name(rep.spec.family) << " kind=" << (rep.central ? "central" : "raw")
        << " m=" << rep.m << " n=" << rep.spec.n << " r=" << rep.spec.r << " mu=" << fmt(rep.spec.mu)
        << " c=" << fmt(rep.spec.kernel_c()) << " x=" << fmt(rep.x) << " rel_err=" << fmt(rep.rel_err) << "\n";
  }
  return kPropertyViolated;
}

int cmd_bound(const Options& o, std::ostream& out, std::ostream& err) {
  const std::vector<std::uint64_t> ns =
      to_counts(o.n_grid ? *o.n_grid : std::vector<double>{50, 100, 200, 400}, "--n-grid");
  const std::vector<double> xs = sorted_unique(o.x_grid ? *o.x_grid : std::vector<double>{0.5, 1, 2});
  require_nonempty(xs, "--x-grid");
  if (ns.empty()) throw ConfigError("--n-grid: grid must be nonempty");
  if (!o.f) throw ConfigError("bound: --f is required (corpus name or inline piecewise function)");
  const TestFunction f = test_function_from(*o.f, 2.0 * xs.front(), o.growth);

  OperatorSpec spec;
  spec.mu = single(o.mu, 0.0, "mu");
  spec.r = to_count(single(o.r, 0.0, "r"), "--r");
  spec.c = single(o.c, 1.0, "c");
  spec.family = spec.c == 1.0 ? Family::JainBaskakov : Family::JainBaskakovC;
  if (o.family) {
    const Family fam = parse_family(*o.family);
    if (fam != Family::JainBaskakov && fam != Family::JainBaskakovC)
      throw ConfigError("bound: family must be jain-baskakov or jain-baskakov-c");
    spec.family = fam;
  }
  spec.n = ns.front();
  spec.validate();
  if (spec.mu > kSandwichMuMax) throw ConfigError("bound: mu in [0, 0.2] violated (small-mu regime)");
  for (std::uint64_t n : ns)
    if (!(static_cast<double>(n) > (static_cast<double>(spec.r) + 3.0) * spec.kernel_c()))
      throw ConfigError("bound: n > (r + 3) c violated: n = " + std::to_string(n));

  const std::vector<BoundRow> rows = error_vs_bound(f, xs, ns, spec, o.acc, std::nullopt, o.jobs);
  Table t{{"n", "x", "measured_error", "bound_total", "term_tv", "term_jump", "term_mean", "term_f2x", "term_tail"},
          {}};
  std::size_t violations = 0;
  for (const auto& row : rows) {
    t.rows.push_back({row.n, row.x, row.measured_error, row.bound_total, row.term_tv, row.term_jump, row.term_mean,
                      row.term_f2x, row.term_tail});
    if (!(row.measured_error <= row.bound_total)) ++violations;
  }
  std::ofstream file;
  t.write(open_output(o, out, file), o.format);
  err << "bound: f=" << f.name() << " C=" << fmt(rows.front().C) << " rows=" << rows.size()
      << " violations=" << violations << "\n";
  return violations == 0 ? kSuccess : kPropertyViolated;
}

int cmd_korovkin(const Options& o, std::ostream& out, std::ostream& err) {
  const std::vector<std::uint64_t> ns =
      to_counts(o.n_grid ? *o.n_grid : std::vector<double>{100, 200, 400, 800}, "--n-grid");
  if (ns.empty()) throw ConfigError("--n-grid: grid must be nonempty");
  const MuRule rule = MuRule::parse(o.mu_rule.value_or("inv-sqrt"));
  const double c = single(o.c, 1.0, "c");
  const Family family = o.family ? parse_family(*o.family)
                                 : (c == 1.0 ? Family::JainBaskakov : Family::JainBaskakovC);
  const std::uint64_t r = to_count(single(o.r, 0.0, "r"), "--r");
  double lo = 0.5, hi = 2.0;
  if (o.interval) {
    const auto parts = split(*o.interval, ':');
    if (parts.size() != 2) throw ConfigError("--interval must be lo:hi");
    lo = to_double(parts[0], "--interval");
    hi = to_double(parts[1], "--interval");
  }
  const auto rows = korovkin_check(family, r, c, rule, lo, hi, ns, o.acc, 101, o.jobs);
  Table t{{"n", "mu", "sup_err_m0", "sup_err_m1", "sup_err_m2"}, {}};
  for (const auto& row : rows)
    t.rows.push_back({row.n, row.mu, row.sup_error[0], row.sup_error[1], row.sup_error[2]});
  std::ofstream file;
  t.write(open_output(o, out, file), o.format);

  const KorovkinSummary s = summarize_korovkin(rows);
  const bool constant = rule.kind == MuRule::Kind::Constant && rule.value > 0.0;
  err << "korovkin: decreasing m0=" << s.decreasing[0] << " m1=" << s.decreasing[1] << " m2=" << s.decreasing[2]
      << "; final m1 sup-error=" << fmt(s.final_m1);
  if (s.plateau) err << "; plateau detected (no convergence for fixed mu)";
  err << "\n";
  if (constant) return s.plateau ? kSuccess : kPropertyViolated;
  return (s.decreasing[0] && s.decreasing[1] && s.decreasing[2]) ? kSuccess : kPropertyViolated;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + fmt(v[i]);
  return s;
}

int cmd_estimate_c(const Options& o, std::ostream& out, std::ostream& err) {
  const std::uint64_t r = to_count(single(o.r, 0.0, "r"), "--r");
  const double c = single(o.c, 1.0, "c");
  const double mu_max = single(o.mu, 0.0, "mu");
  const double n_lo = std::ceil(25.0 * (static_cast<double>(r) + 3.0) * c);
  const std::vector<std::uint64_t> ns =
      to_counts(o.n_grid ? *o.n_grid : parse_grid(fmt(n_lo) + ":800:8:log"), "--n-grid");
  const std::vector<double> xs = sorted_unique(o.x_grid ? *o.x_grid : parse_grid("0.25:4:9:log"));
  require_nonempty(xs, "--x-grid");
  if (ns.empty()) throw ConfigError("--n-grid: grid must be nonempty");
  const SandwichEstimate est = estimate_sandwich_C(r, mu_max, ns, xs, c);
  std::vector<double> nd(est.n_grid.begin(), est.n_grid.end());
  std::ofstream file;
  std::ostream& dst = open_output(o, out, file);
  if (o.format == "json") {
    json obj = json::object();
    obj["r"] = est.r;
    obj["mu_max"] = est.mu_max;
    obj["c"] = est.c;
    obj["C"] = est.C;
    obj["worst_lower"] = est.worst_lower;
    obj["worst_upper"] = est.worst_upper;
    obj["n_grid"] = est.n_grid;
    obj["x_grid"] = est.x_grid;
    obj["mu_grid"] = est.mu_grid;
    dst << obj.dump(2) << "\n";
  } else {
    Table t{{"r", "mu_max", "c", "C", "worst_lower", "worst_upper", "n_grid", "x_grid", "mu_grid"}, {}};
    t.rows.push_back({est.r, est.mu_max, est.c, est.C, est.worst_lower, est.worst_upper, join(nd), join(est.x_grid),
                      join(est.mu_grid)});
    t.write(dst, "csv");
  }
  err << "estimate-c: C=" << fmt(est.C) << "\n";
  return est.C > 1.0 ? kSuccess : kPropertyViolated;
}

}  // namespace

// ---------------------------------------------------------------------------

InlineFunction parse_inline_function(const std::string& text) {
  InlineFunction f;
  if (text.rfind("poly:", 0) == 0) {
    f.breakpoints = {0.0};
    f.coefficients = {to_doubles(text.substr(5), "poly")};
    return f;
  }
  if (text.rfind("piecewise:", 0) == 0) {
    f.piecewise = true;
    for (const auto& piece : split(text.substr(10), ';')) {
      const auto parts = split(piece, '|');
      if (parts.size() != 2) throw DomainError("piecewise: each piece must be bp|c0,c1,...; got '" + piece + "'");
      f.breakpoints.push_back(to_double(parts[0], "piecewise breakpoint"));
      f.coefficients.push_back(to_doubles(parts[1], "piecewise coefficients"));
    }
    if (f.breakpoints.empty()) throw DomainError("piecewise: no pieces");
    return f;
  }
  throw DomainError("function must be poly:c0,c1,... or piecewise:bp|c0,...;bp|...; got '" + text + "'");
}

std::vector<double> parse_grid(const std::string& text) {
  if (text.find(':') == std::string::npos) return to_doubles(text, "grid");
  const auto parts = split(text, ':');
  if (parts.size() < 3 || parts.size() > 4) throw ConfigError("grid must be start:stop:count[:linear|log]");
  const double start = to_double(parts[0], "grid start");
  const double stop = to_double(parts[1], "grid stop");
  const double count_d = to_double(parts[2], "grid count");
  const std::string spacing = parts.size() == 4 ? parts[3] : "linear";
  if (!(count_d >= 1.0) || std::floor(count_d) != count_d) throw ConfigError("grid count must be a positive integer");
  const auto count = static_cast<std::size_t>(count_d);
  if (spacing != "linear" && spacing != "log") throw ConfigError("grid spacing must be linear or log");
  if (spacing == "log" && !(start > 0.0 && stop > 0.0)) throw ConfigError("log grid needs positive start and stop");
  std::vector<double> g;
  for (std::size_t i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    g.push_back(spacing == "log" ? start * std::pow(stop / start, f) : start + (stop - start) * f);
  }
  if (count > 1) g.back() = stop;
  return g;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"jainlab: Jain-type positive linear operators of integral type"};
  app.name("jainlab");
  app.require_subcommand(1);
  RawFlags flags;

  const auto add_common = [&flags](CLI::App* sub) {
    sub->add_option("--config", flags.config, "JSON config file; flags override it");
    sub->add_option("--family", flags.family, "jain | jain-baskakov | jain-baskakov-c | stancu");
    sub->add_option("--n", flags.n, "operator index n")->delimiter(',');
    sub->add_option("--mu", flags.mu, "Jain parameter mu in [0, 0.99]")->delimiter(',');
    sub->add_option("--r", flags.r, "integral order r >= 0")->delimiter(',');
    sub->add_option("--c", flags.c, "kernel parameter c > 0")->delimiter(',');
    sub->add_option("--alpha", flags.alpha, "Stancu alpha");
    sub->add_option("--beta", flags.beta, "Stancu beta");
    sub->add_option("--x", flags.x, "evaluation point")->delimiter(',');
    sub->add_option("--f", flags.f, "poly:c0,c1,... | piecewise:bp|c0,..;bp|.. | corpus name");
    sub->add_option("--n-grid", flags.n_grid, "a,b,c or start:stop:count[:log]");
    sub->add_option("--x-grid", flags.x_grid, "a,b,c or start:stop:count[:log]");
    sub->add_option("--mu-rule", flags.mu_rule, "inv-sqrt | const:<v>");
    sub->add_option("--mu-const", flags.mu_const, "shorthand for --mu-rule const:<v>");
    sub->add_option("--interval", flags.interval, "compact interval lo:hi for korovkin");
    sub->add_option("--threshold", flags.threshold, "relative error threshold");
    sub->add_option("--format", flags.format, "csv | json");
    sub->add_option("--out", flags.out, "output path (default stdout)");
    sub->add_option("--jobs", flags.jobs, "worker threads");
    sub->add_flag("--raw", flags.raw, "use the raw prefactor instead of the normalized operator");
  };

  struct Command {
    std::string name;
    std::string help;
    int (*fn)(const Options&, std::ostream&, std::ostream&);
    CLI::App* sub = nullptr;
  };
  std::vector<Command> commands{
      {"eval", "evaluate an operator at one point", &cmd_eval},
      {"verify-moments", "closed vs numeric moment cross-check", &cmd_verify_moments},
      {"bound", "measured error vs assembled BV-rate bound", &cmd_bound},
      {"korovkin", "sup-errors of K(t^m) on a compact interval", &cmd_korovkin},
      {"estimate-c", "estimate the sandwich constant C", &cmd_estimate_c},
  };
  for (auto& c : commands) {
    c.sub = app.add_subcommand(c.name, c.help);
    add_common(c.sub);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  for (const auto& c : commands) {
    if (!c.sub->parsed()) continue;
    try {
      const Options o = merge_options(flags, *c.sub);
      return c.fn(o, out, err);
    } catch (const TruncationCapExceeded& e) {
      err << "numeric error: " << e.what() << "\n";
      return kNumericCapError;
    } catch (const QuadratureNoConvergence& e) {
      err << "numeric error: " << e.what() << "\n";
      return kNumericCapError;
    } catch (const SandwichViolated& e) {
      err << "property violated: " << e.what() << "\n";
      return kPropertyViolated;
    } catch (const Error& e) {
      err << "config error: " << e.what() << "\n";
      return kConfigError;
    }
  }
  return kConfigError;
}

}  // namespace jainops::cli

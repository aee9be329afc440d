#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "lkpos/catalog.hpp"
#include "lkpos/diffcalc.hpp"
#include "lkpos/error.hpp"
#include "lkpos/grids.hpp"
#include "lkpos/json_io.hpp"
#include "lkpos/kernelcheck.hpp"
#include "lkpos/levykhin.hpp"
#include "lkpos/reflection.hpp"
#include "lkpos/version.hpp"

namespace lkpos::cli {

namespace {

// Thrown for bad flags or inputs; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string command;
  std::string function;
  std::map<std::string, double> params;
  std::string interval;
  int points = kDefaultGridSize;
  std::optional<double> tol;
  std::string h_list = "dyadic:10";
  std::string grid_kind = "cheb";
  std::string lambda_grid = "default";
  std::uint64_t seed = 0;
  bool json = false;
  std::string csv;
  std::string form;
  std::string rep;
  std::string t;
  std::string a;
  int n = 3;
  bool shifted = false;
  bool check = false;
};

double parse_number(const std::string& s) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double x = std::strtod(begin, &end);
  if (s.empty() || end != begin + s.size()) throw UsageError("not a number: '" + s + "'");
  return x;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
  if (out.empty()) throw UsageError("empty list");
  return out;
}

std::vector<double> parse_h_list(const std::string& s) {
  if (s.rfind("dyadic:", 0) == 0) {
    const double k = parse_number(s.substr(7));
    if (k < 0 || k > 60 || k != std::floor(k)) throw UsageError("dyadic:K needs an integer 0 <= K <= 60");
    return dyadic_hs(static_cast<int>(k));
  }
  std::vector<double> hs = parse_list(s);
  for (double h : hs)
    if (!(h > 0.0)) throw UsageError("every h must be > 0");
  return hs;
}

std::vector<double> parse_lambda_grid(const std::string& s) {
  if (s == "default") return default_lambda_grid();
  if (s.rfind("log:", 0) == 0) {
    const std::vector<double> v = parse_list(s.substr(4));
    if (v.size() != 3 || !(v[0] > 0.0) || !(v[1] > v[0]) || v[2] < 2) throw UsageError("log:LO,HI,N needs 0 < LO < HI, N >= 2");
    std::vector<double> g = log_spaced(v[0], v[1], static_cast<int>(v[2]));
    g.insert(g.begin(), 0.0);
    return g;
  }
  return parse_list(s);
}

std::optional<std::pair<double, double>> parse_interval(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const std::vector<double> v = parse_list(s);
  if (v.size() != 2 || !(v[0] < v[1])) throw UsageError("--interval needs a,b with a < b");
  return std::make_pair(v[0], v[1]);
}

// A function under test with whatever is known about it.
struct Target {
  FuncHandle f;
  std::string label;
  std::optional<CatalogEntry> entry;
  std::optional<LKData> rep;
};

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

Target load_target(const Config& cfg, bool need_function = true) {
  Target t;
  if (cfg.function.rfind("catalog:", 0) == 0) {
    const std::string name = cfg.function.substr(8);
    t.entry = get(name, cfg.params);
    t.f = t.entry->func;
    t.rep = t.entry->lk_data;
    t.label = "catalog:" + name;
    for (const auto& [k, v] : t.entry->params) {
      std::ostringstream os;
      os << v;
      t.label += " " + k + "=" + os.str();
    }
    return t;
  }
  if (!cfg.params.empty()) throw UsageError("--alpha/--lambda/--beta/--c apply to catalog functions only");
  if (!cfg.function.empty() && cfg.function != "rep") {
    throw UsageError("--function must be catalog:NAME or rep (with --rep FILE)");
  }
  if (cfg.rep.empty()) {
    if (need_function) throw UsageError("give --function catalog:NAME or --rep FILE");
    return t;
  }
  t.rep = lk_data_from_json(read_json_file(cfg.rep), cfg.form);
  t.f = lk_function(*t.rep);
  t.label = "rep:" + cfg.rep + " (" + kind_name(*t.rep) + ")";
  return t;
}

const FlagClaim* find_claim(const Target& t, Property p) {
  if (!t.entry) return nullptr;
  for (const auto* flags : {&t.entry->known_flags, &t.entry->refuted_flags})
    for (const FlagClaim& c : *flags)
      if (c.property == p) return &c;
  return nullptr;
}

std::pair<double, double> default_window(const Target& t) {
  if (t.entry) return t.entry->window;
  if (t.rep) {
    if (const auto* r = std::get_if<LKIntervalRep>(&t.rep->rep)) return probe_window(r->interval);
    if (t.rep->even) return {-4.0, 4.0};
    if (const auto* r = std::get_if<LaplaceRep>(&t.rep->rep)) return probe_window(r->domain);
  }
  return {0.0, 4.0};
}

std::pair<double, double> window_for(const Config& cfg, const Target& t, std::optional<Property> p) {
  std::pair<double, double> w;
  if (auto given = parse_interval(cfg.interval)) {
    w = *given;
  } else if (const FlagClaim* c = p ? find_claim(t, *p) : nullptr; c && std::isfinite(c->hi)) {
    w = {c->lo, c->hi};
  } else {
    w = default_window(t);
  }
  if (!std::isfinite(w.first) || !std::isfinite(w.second)) {
    w = probe_window(Domain::open(w.first, w.second));
  }
  return w;
}

std::vector<double> grid_on(const Config& cfg, double lo, double hi) {
  if (cfg.points < 1 || cfg.points > kMaxGridSize) {
    throw UsageError("--points must be between 1 and " + std::to_string(kMaxGridSize));
  }
  if (cfg.grid_kind == "cheb") return chebyshev_points(lo, hi, cfg.points);
  if (cfg.grid_kind == "uniform") return uniform_points(lo, hi, cfg.points);
  if (cfg.grid_kind == "random") return random_points(lo, hi, cfg.points, cfg.seed);
  throw UsageError("--grid-kind must be cheb, uniform or random");
}

ReflectionOptions reflection_options(const Config& cfg) {
  ReflectionOptions opt;
  opt.n = cfg.points;
  opt.tol = cfg.tol;
  if (cfg.grid_kind == "cheb") {
    opt.grid_kind = GridKind::chebyshev;
  } else if (cfg.grid_kind == "uniform") {
    opt.grid_kind = GridKind::uniform;
  } else {
    throw UsageError("reflection checks take --grid-kind cheb or uniform");
  }
  return opt;
}

double half_width(const Config& cfg, const Target& t, Property p) {
  if (!cfg.a.empty()) {
    const double a = parse_number(cfg.a);
    if (!(a > 0.0)) throw UsageError("--a must be > 0");
    return a;
  }
  if (const FlagClaim* c = find_claim(t, p)) return c->hi;
  if (auto w = parse_interval(cfg.interval)) return std::max(std::abs(w->first), std::abs(w->second));
  if (t.entry && t.entry->window.first < 0.0) return t.entry->window.second;
  return kInf;
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::pass: return kExitPass;
    case Verdict::fail: return kExitFail;
    case Verdict::inconclusive: return kExitInconclusive;
  }
  return kExitInconclusive;
}

struct Outcome {
  Json results = Json::array();
  Verdict verdict = Verdict::pass;
  std::vector<std::string> lines;
  std::vector<std::pair<double, double>> table;
};

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

std::string fmt_list(const std::vector<double>& xs) {
  std::string s = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + fmt(xs[i]);
  return s + "]";
}

void describe(Outcome& o, const std::string& what, const PositivityVerdict& v) {
  o.lines.push_back(what + ": " + to_string(v.verdict));
  o.lines.push_back("  extremal eigenvalue " + fmt(v.extremal_eig) + ", tol " + fmt(v.tol_used) + ", scale " +
                    fmt(v.scale));
  if (!v.note.empty()) o.lines.push_back("  " + v.note);
  if (v.failed()) {
    o.lines.push_back("  witness " + fmt_list(v.witness));
    o.lines.push_back("  at points " + fmt_list(v.grid));
    for (const auto& [k, x] : v.params) o.lines.push_back("  " + k + " = " + fmt(x));
  }
}

void add_verdict(Outcome& o, const std::string& name, const PositivityVerdict& v) {
  o.results.push_back({{"name", name}, {"verdict", to_string(v.verdict)}, {"detail", to_json(v)}});
  o.verdict = v.verdict;
  describe(o, name, v);
}

void tabulate(Outcome& o, const FuncHandle& f, const std::vector<double>& grid) {
  for (double t : grid) o.table.emplace_back(t, f(t));
}

Outcome cmd_kernel(const Config& cfg, const Target& t, Property p) {
  const auto [lo, hi] = window_for(cfg, t, p);
  double from = lo;
  if (p == Property::completely_monotone || p == Property::bernstein) from = std::max(lo, 0.0);
  if (!(hi > from)) throw UsageError("window must reach into (0, inf)");
  const std::vector<double> grid = grid_on(cfg, from, hi);
  Outcome o;
  PositivityVerdict v;
  switch (p) {
    case Property::positive_definite: v = psd_check(gram_plus(t.f, grid), cfg.tol); break;
    case Property::negative_definite: v = cnd_check(gram_plus(t.f, grid), cfg.tol); break;
    case Property::completely_monotone: v = completely_monotone_check(t.f, grid, 6, default_deltas(), cfg.tol); break;
    default: {
      const BernsteinVerdict b = bernstein_check(t.f, grid, 6, default_deltas(), cfg.tol);
      v = b.overall;
      o.results.push_back({{"name", "nonnegative"}, {"verdict", to_string(b.nonnegative.verdict)},
                           {"detail", to_json(b.nonnegative)}});
      o.results.push_back({{"name", "derivative_completely_monotone"},
                           {"verdict", to_string(b.derivative_part.verdict)},
                           {"detail", to_json(b.derivative_part)}});
    }
  }
  add_verdict(o, to_string(p) + " on (" + fmt(from) + ", " + fmt(hi) + ")", v);
  tabulate(o, t.f, grid);
  return o;
}

Outcome reflection_outcome(const std::string& name, const ReflectionReport& r) {
  Outcome o;
  const PositivityVerdict s = summary(r);
  o.results.push_back({{"name", name}, {"verdict", to_string(r.verdict)}, {"detail", to_json(r)}});
  o.verdict = r.verdict;
  describe(o, name, s);
  o.lines.push_back("  minus kernel " + to_string(r.minus_verdict.verdict) + ", plus kernel " +
                    to_string(r.plus_verdict.verdict) + (r.symmetric ? ", even" : ", not even"));
  return o;
}

Outcome cmd_rp(const Config& cfg, const Target& t) {
  const double a = half_width(cfg, t, Property::reflection_positive);
  const ReflectionReport r = reflection_positive_check(t.f, a, reflection_options(cfg));
  Outcome o = reflection_outcome("reflection_positive on (-" + fmt(a) + ", " + fmt(a) + ")", r);
  tabulate(o, t.f, symmetric_grid(make_grid(reflection_options(cfg).grid_kind, 0.0,
                                            std::isfinite(a) ? a : kInfiniteWindow, cfg.points)));
  return o;
}

Outcome cmd_rn(const Config& cfg, const Target& t) {
  const double a = half_width(cfg, t, Property::reflection_negative);
  const ReflectionReport r = reflection_negative_check(t.f, a, parse_h_list(cfg.h_list), reflection_options(cfg));
  Outcome o = reflection_outcome("reflection_negative on (-" + fmt(a) + ", " + fmt(a) + ")", r);
  tabulate(o, t.f, symmetric_grid(make_grid(reflection_options(cfg).grid_kind, 0.0,
                                            std::isfinite(a) ? a : kInfiniteWindow, cfg.points)));
  return o;
}

Outcome cmd_hankel(const Config& cfg, const Target& t) {
  const double c = cfg.t.empty() ? 1.0 : parse_number(cfg.t);
  if (cfg.n < 0 || cfg.n > 8) throw UsageError("--n must be between 0 and 8");
  Outcome o;
  const PositivityVerdict v = hankel_check(t.f, c, cfg.n, cfg.shifted, cfg.tol);
  add_verdict(o, std::string(cfg.shifted ? "shifted " : "") + "Hankel matrix at t = " + fmt(c), v);
  return o;
}

Outcome cmd_polya(const Config& cfg, const Target& t) {
  const auto [lo, hi] = window_for(cfg, t, std::nullopt);
  (void)lo;
  if (!(hi > 0.0)) throw UsageError("polya needs a window reaching into (0, inf)");
  std::vector<double> grid = grid_on(cfg, 0.0, hi);
  if (t.f.domain().contains(0.0)) grid.insert(grid.begin(), 0.0);
  Outcome o;
  add_verdict(o, "Polya criterion on [0, " + fmt(hi) + ")", polya_check(t.f, grid, cfg.tol));
  tabulate(o, t.f, grid);
  return o;
}

std::vector<double> t_values(const Config& cfg, const Target& t) {
  if (!cfg.t.empty()) return parse_list(cfg.t);
  const auto [lo, hi] = window_for(cfg, t, std::nullopt);
  return grid_on(cfg, lo, hi);
}

Outcome cmd_synth(const Config& cfg, const Target& t) {
  if (!t.rep) throw UsageError("synth needs --rep FILE (with --form) or a catalog entry with L-K data");
  Outcome o;
  bool converged = true;
  Json values = Json::array();
  for (double x : t_values(cfg, t)) {
    const Evaluation e = t.f.evaluate(x);
    converged = converged && e.converged;
    values.push_back({{"t", number_json(x)}, {"value", number_json(e.value)}, {"converged", e.converged}});
    o.table.emplace_back(x, e.value);
    o.lines.push_back("psi(" + fmt(x) + ") = " + [&] {
      std::ostringstream os;
      os << std::setprecision(10) << e.value;
      return os.str();
    }());
  }
  o.verdict = converged ? Verdict::pass : Verdict::inconclusive;
  o.results.push_back({{"name", "synth"},
                       {"verdict", to_string(o.verdict)},
                       {"detail", {{"form", kind_name(*t.rep)}, {"rep", to_json(*t.rep)}, {"values", values}}}});
  if (!converged) o.lines.push_back("some quadratures missed their error target");
  return o;
}

Outcome cmd_analyze(const Config& cfg, const Target& t) {
  const std::string form = cfg.form.empty() ? "increasing" : cfg.form;
  const auto [lo, hi] = window_for(cfg, t, std::nullopt);
  const std::vector<double> lambdas = parse_lambda_grid(cfg.lambda_grid);
  const double tol = cfg.tol.value_or(1e-8);
  Outcome o;
  Json detail;
  if (form == "interval") {
    const double t0 = cfg.t.empty() ? 0.5 * (lo + hi) : parse_number(cfg.t);
    const IntervalAnalysis a = analyze_interval(t.f, t0, grid_on(cfg, lo, hi), lambdas, tol);
    detail = {{"rep", to_json(a.rep)}, {"residual", number_json(a.residual)}};
    o.lines.push_back("c = " + fmt(a.rep.c) + ", d = " + fmt(a.rep.d) + " at t0 = " + fmt(t0));
    o.lines.push_back("fit residual |L(mu) + psi''| = " + fmt(a.residual));
  } else if (form == "increasing") {
    const double from = std::max(lo, 0.0);
    if (!(hi > from)) throw UsageError("analyze increasing needs a window in (0, inf)");
    const IncreasingAnalysis a = analyze_increasing(t.f, grid_on(cfg, from, hi), lambdas, tol);
    detail = {{"rep", to_json(a.rep)}, {"residual", number_json(a.residual)}};
    o.lines.push_back("c = psi(1) = " + fmt(a.rep.c));
    o.lines.push_back("fit residual |L(mu) - psi'| = " + fmt(a.residual));
  } else {
    throw UsageError("analyze takes --form interval or increasing");
  }
  o.results.push_back({{"name", "analyze " + form}, {"verdict", "PASS"}, {"detail", detail}});
  return o;
}

Measure measure_for_thm59(const Config& cfg, const Target& t) {
  if (!cfg.rep.empty()) {
    const Json j = read_json_file(cfg.rep);
    return measure_from_json(j.contains("mu") ? j.at("mu") : j);
  }
  if (t.rep) {
    if (const auto* r = std::get_if<LaplaceRep>(&t.rep->rep)) return r->mu;
  }
  throw UsageError("thm59 needs --rep FILE holding a measure, or a catalog entry given as a Laplace transform");
}

Outcome cmd_thm59(const Config& cfg, const Target& t) {
  const Measure mu = measure_for_thm59(cfg, t);
  const double a = cfg.a.empty() ? 1.0 : parse_number(cfg.a);
  const Thm59Report r = thm59_check(mu, a, reflection_options(cfg));
  Outcome o = reflection_outcome("reflection_positive of L(mu)(|t|) on (-" + fmt(a) + ", " + fmt(a) + ")", r.rp);
  o.lines.insert(o.lines.begin(), "boundary slope L(mu)'(a-) = " + fmt(r.boundary_slope) +
                                      (r.sufficient ? " <= tol: sufficient condition holds"
                                                    : " > tol: sufficient condition fails"));
  if (r.necessary_witness) o.lines.push_back("necessary witness b = " + fmt(*r.necessary_witness));
  if (!r.consistent) o.lines.push_back("inconsistent: sufficient condition holds but the check failed");
  Json detail = {{"sufficient", r.sufficient},
                 {"boundary_slope", number_json(r.boundary_slope)},
                 {"nonconstant", r.nonconstant},
                 {"consistent", r.consistent},
                 {"necessary_witness", r.necessary_witness ? number_json(*r.necessary_witness) : Json(nullptr)},
                 {"measure", to_json(mu)}};
  o.results.push_back({{"name", "thm59"}, {"verdict", to_string(r.rp.verdict)}, {"detail", detail}});
  return o;
}

Outcome cmd_gallery(const Config& cfg) {
  Outcome o;
  std::vector<CatalogEntry> entries;
  if (cfg.function.rfind("catalog:", 0) == 0) {
    entries.push_back(get(cfg.function.substr(8), cfg.params));
  } else if (!cfg.function.empty()) {
    throw UsageError("gallery takes --function catalog:NAME");
  } else {
    for (const std::string& name : list()) entries.push_back(get(name));
  }
  int mismatches = 0;
  for (const CatalogEntry& e : entries) {
    Json params = Json::object();
    std::string head = e.name;
    for (const auto& [k, v] : e.params) {
      params[k] = number_json(v);
      head += " " + k + "=" + fmt(v);
    }
    o.lines.push_back(head + ": " + e.formula);
    Json known = Json::array(), refuted = Json::array();
    for (const auto& [flags, out, tag] : {std::tuple{&e.known_flags, &known, "+"}, std::tuple{&e.refuted_flags, &refuted, "-"}}) {
      for (const FlagClaim& c : *flags) {
        Json cj = to_json(c);
        std::string line = std::string("  ") + tag + " " + to_string(c.property) + " on (" + fmt(c.lo) + ", " + fmt(c.hi) + ")";
        if (cfg.check) {
          const PositivityVerdict v = check_claim(e.func, c);
          const bool ok = tag[0] == '+' ? v.passed() : v.failed();
          if (!ok) ++mismatches;
          cj["checked"] = to_string(v.verdict);
          line += std::string(" [") + to_string(v.verdict) + (ok ? "" : ", MISMATCH") + "]";
        }
        out->push_back(cj);
        o.lines.push_back(line);
        o.lines.push_back("      " + c.citation);
      }
    }
    Json item = {{"name", e.name}, {"formula", e.formula}, {"params", params}, {"known_flags", known},
                 {"refuted_flags", refuted}};
    if (e.lk_data) item["lk_data"] = to_json(*e.lk_data);
    o.results.push_back(item);
  }
  if (cfg.check) {
    o.verdict = mismatches == 0 ? Verdict::pass : Verdict::fail;
    o.lines.push_back(std::to_string(mismatches) + " flag mismatches");
  }
  return o;
}

Json echo_inputs(const Config& cfg) {
  Json params = Json::object();
  for (const auto& [k, v] : cfg.params) params[k] = number_json(v);
  Json j = {{"function", cfg.function}, {"params", params},   {"points", cfg.points},
            {"h_list", cfg.h_list},     {"grid_kind", cfg.grid_kind}, {"lambda_grid", cfg.lambda_grid},
            {"seed", cfg.seed}};
  if (!cfg.interval.empty()) j["interval"] = cfg.interval;
  if (cfg.tol) j["tol"] = number_json(*cfg.tol);
  if (!cfg.form.empty()) j["form"] = cfg.form;
  if (!cfg.rep.empty()) j["rep"] = cfg.rep;
  if (!cfg.t.empty()) j["t"] = cfg.t;
  if (!cfg.a.empty()) j["a"] = cfg.a;
  if (cfg.command == "hankel") {
    j["n"] = cfg.n;
    j["shifted"] = cfg.shifted;
  }
  return j;
}

Outcome dispatch(const Config& cfg) {
  const std::string& c = cfg.command;
  if (c == "gallery") return cmd_gallery(cfg);
  if (c == "thm59") return cmd_thm59(cfg, cfg.rep.empty() ? load_target(cfg, false) : Target{});
  const Target t = load_target(cfg);
  if (c == "check-pd") return cmd_kernel(cfg, t, Property::positive_definite);
  if (c == "check-nd") return cmd_kernel(cfg, t, Property::negative_definite);
  if (c == "check-cm") return cmd_kernel(cfg, t, Property::completely_monotone);
  if (c == "check-bernstein") return cmd_kernel(cfg, t, Property::bernstein);
  if (c == "check-rp") return cmd_rp(cfg, t);
  if (c == "check-rn") return cmd_rn(cfg, t);
  if (c == "hankel") return cmd_hankel(cfg, t);
  if (c == "polya") return cmd_polya(cfg, t);
  if (c == "synth") return cmd_synth(cfg, t);
  return cmd_analyze(cfg, t);
}

void write_csv(const std::string& path, const std::vector<std::pair<double, double>>& table) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << "t,value\n" << std::setprecision(17);
  for (const auto& [t, v] : table) out << t << ',' << v << '\n';
}

int negative_finding(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotNegativeDefinite:
    case ErrorKind::NotIncreasing:
    case ErrorKind::NotConvex:
    case ErrorKind::NotSymmetric:
    case ErrorKind::NotReflectionPositive:
      return kExitFail;
    default:
      return kExitUsage;
  }
}

void add_common(CLI::App* sub, Config& cfg) {
  sub->add_option("--function", cfg.function, "catalog:NAME, or rep together with --rep FILE");
  for (const char* p : {"alpha", "lambda", "beta", "c"}) {
    sub->add_option_function<double>(std::string("--") + p, [&cfg, p](double v) { cfg.params[p] = v; },
                                     std::string("catalog parameter ") + p);
  }
  sub->add_option("--interval", cfg.interval, "window a,b (inf allowed)");
  sub->add_option("--points", cfg.points, "grid size");
  sub->add_option_function<double>("--tol", [&cfg](double v) { cfg.tol = v; }, "relative tolerance");
  sub->add_option("--h-list", cfg.h_list, "h values h1,h2,... or dyadic:K for 2^0..2^-K");
  sub->add_option("--grid-kind", cfg.grid_kind, "cheb, uniform or random");
  sub->add_option("--lambda-grid", cfg.lambda_grid, "default, l1,l2,... or log:LO,HI,N");
  sub->add_option("--seed", cfg.seed, "seed for random grids");
  sub->add_flag("--json", cfg.json, "JSON report on stdout");
  sub->add_option("--csv", cfg.csv, "write (t, value) table to FILE");
  sub->add_option("--form", cfg.form,
                  "interval, increasing, bernstein, reflection_negative, laplace or laplace_abs");
  sub->add_option("--rep", cfg.rep, "representation or measure JSON file");
  sub->add_option("--t", cfg.t, "evaluation point(s), Hankel point, or t0 for analyze");
  sub->add_option("--a", cfg.a, "half-width of the symmetric interval (inf allowed)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app("Positive and negative definite functions on intervals", "lkpos");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"check-pd", "positive definite: plus kernel Gram matrix PSD"},
      {"check-nd", "negative definite: plus kernel conditionally negative definite"},
      {"check-rp", "reflection positive on (-a, a)"},
      {"check-rn", "reflection negative on (-a, a)"},
      {"check-cm", "completely monotone by finite differences"},
      {"check-bernstein", "Bernstein function by finite differences"},
      {"hankel", "derivative Hankel matrix at a point"},
      {"synth", "evaluate a Levy-Khintchine representation"},
      {"analyze", "recover a representation from a function"},
      {"polya", "Polya sufficient condition on [0, inf)"},
      {"thm59", "boundary derivative test for L(mu)(|t|)"},
      {"gallery", "list catalog entries with flags and citations"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, cfg);
    if (std::string(name) == "hankel") {
      sub->add_option("--n", cfg.n, "matrix indices 0..n");
      sub->add_flag("--shifted", cfg.shifted, "use -f^(1+i+j)");
    }
    if (std::string(name) == "gallery") sub->add_flag("--check", cfg.check, "run every flag through its checker");
    sub->callback([&cfg, n = std::string(name)] { cfg.command = n; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "lkpos: " << e.what() << '\n';
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = dispatch(cfg);
  } catch (const UsageError& e) {
    err << "lkpos: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "lkpos: " << e.what() << '\n';
    const int code = negative_finding(e.kind());
    if (code == kExitFail && cfg.json) {
      Json report = {{"command", cfg.command}, {"inputs", echo_inputs(cfg)}, {"version", kVersion},
                     {"verdict", "FAIL"}, {"error", {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}}},
                     {"results", Json::array()}, {"timing_ms", 0.0}};
      out << render(report) << '\n';
    }
    return code;
  } catch (const std::exception& e) {
    err << "lkpos: " << e.what() << '\n';
    return kExitUsage;
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  try {
    if (!cfg.csv.empty()) write_csv(cfg.csv, o.table);
  } catch (const UsageError& e) {
    err << "lkpos: " << e.what() << '\n';
    return kExitUsage;
  }

  if (cfg.json) {
    Json report = {{"command", cfg.command}, {"inputs", echo_inputs(cfg)}, {"results", o.results},
                   {"verdict", to_string(o.verdict)}, {"timing_ms", std::round(ms * 1000.0) / 1000.0},
                   {"version", kVersion}};
    out << render(report) << '\n';
  } else {
    out << "lkpos " << kVersion << "  " << cfg.command;
    if (!cfg.function.empty()) out << "  " << cfg.function;
    out << '\n';
    for (const std::string& line : o.lines) out << line << '\n';
    if (cfg.command.rfind("check-", 0) == 0 && o.verdict == Verdict::pass) {
      out << "PASS means no violation was found on this grid at this tolerance.\n";
    }
  }
  return exit_code(o.verdict);
}

}  // namespace lkpos::cli

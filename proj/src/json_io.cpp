#include "lkpos/json_io.hpp"

#include <cmath>

#include "lkpos/error.hpp"

namespace lkpos {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidArgument, "JSON: " + what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) bad("expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field '") + key + "'");
  return *it;
}

double num_or(const Json& j, const char* key, double fallback) {
  if (!j.is_object()) bad("expected an object");
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? fallback : number_from_json(*it);
}

std::vector<double> numbers(const Json& j) {
  if (!j.is_array()) bad("expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const Json& x : j) out.push_back(number_from_json(x));
  return out;
}

Json numbers_json(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(number_json(x));
  return a;
}

std::string string_field(const Json& j, const char* key) {
  const Json& s = field(j, key);
  if (!s.is_string()) bad(std::string("field '") + key + "' must be a string");
  return s.get<std::string>();
}

Json bound_json(const PowerExpBound& b) {
  return {{"coeff", number_json(b.coeff)}, {"power", number_json(b.power)}, {"rate", number_json(b.rate)}};
}

PowerExpBound bound_from_json(const Json& j) {
  return {number_from_json(field(j, "coeff")), num_or(j, "power", 0.0), num_or(j, "rate", 0.0)};
}

}  // namespace

Json number_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::nan("");
  }
  bad("expected a number");
}

Json to_json(const Measure& mu) {
  Json j;
  Json atoms = Json::array();
  for (const Atom& a : mu.atoms) atoms.push_back({{"lambda", number_json(a.lambda)}, {"weight", number_json(a.weight)}});
  j["atoms"] = atoms;
  if (mu.density) {
    const GriddedDensity& d = *mu.density;
    Json dj = {{"grid", numbers_json(d.grid)},
               {"values", numbers_json(d.values)},
               {"rule", d.rule == DensityRule::trapezoid ? "trapezoid" : "gauss_composite"}};
    if (d.tail_envelope) dj["tail_envelope"] = bound_json(*d.tail_envelope);
    j["density"] = dj;
  } else {
    j["density"] = nullptr;
  }
  if (!mu.terms.empty()) {
    Json terms = Json::array();
    for (const PowerExpDensity& t : mu.terms) {
      terms.push_back({{"coeff", number_json(t.coeff)},
                       {"power", number_json(t.power)},
                       {"rate", number_json(t.rate)},
                       {"lo", number_json(t.lo)},
                       {"hi", number_json(t.hi)}});
    }
    j["terms"] = terms;
  }
  if (mu.support) j["support"] = {number_json(mu.support->first), number_json(mu.support->second)};
  return j;
}

Measure measure_from_json(const Json& j) {
  if (!j.is_object()) bad("measure must be an object");
  Measure mu;
  if (auto it = j.find("atoms"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) bad("atoms must be an array");
    for (const Json& a : *it) mu.add_atom(number_from_json(field(a, "lambda")), number_from_json(field(a, "weight")));
  }
  if (auto it = j.find("density"); it != j.end() && !it->is_null()) {
    GriddedDensity d;
    d.grid = numbers(field(*it, "grid"));
    d.values = numbers(field(*it, "values"));
    if (auto r = it->find("rule"); r != it->end()) {
      if (*r == "trapezoid") {
        d.rule = DensityRule::trapezoid;
      } else if (*r == "gauss_composite") {
        d.rule = DensityRule::gauss_composite;
      } else {
        bad("density rule must be trapezoid or gauss_composite");
      }
    }
    if (auto t = it->find("tail_envelope"); t != it->end() && !t->is_null()) d.tail_envelope = bound_from_json(*t);
    mu.density = d;
  }
  if (auto it = j.find("terms"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) bad("terms must be an array");
    for (const Json& t : *it) {
      mu.add_term({number_from_json(field(t, "coeff")), num_or(t, "power", 0.0), num_or(t, "rate", 0.0),
                   num_or(t, "lo", 0.0), num_or(t, "hi", kInf)});
    }
  }
  if (auto it = j.find("support"); it != j.end() && !it->is_null()) {
    const std::vector<double> s = numbers(*it);
    if (s.size() != 2) bad("support must be [lo, hi]");
    mu.support = std::make_pair(s[0], s[1]);
  }
  mu.validate();
  return mu;
}

Json to_json(const Domain& d) {
  return {{"lo", number_json(d.lo)}, {"hi", number_json(d.hi)}, {"lo_closed", d.lo_closed}, {"hi_closed", d.hi_closed}};
}

Domain domain_from_json(const Json& j) {
  if (j.is_array()) {
    const std::vector<double> v = numbers(j);
    if (v.size() != 2 || !(v[0] < v[1])) bad("interval must be [lo, hi] with lo < hi");
    return Domain::open(v[0], v[1]);
  }
  Domain d = Domain::open(number_from_json(field(j, "lo")), number_from_json(field(j, "hi")));
  for (auto [key, flag] : {std::pair{"lo_closed", &d.lo_closed}, std::pair{"hi_closed", &d.hi_closed}}) {
    auto it = j.find(key);
    if (it == j.end()) continue;
    if (!it->is_boolean()) bad(std::string(key) + " must be a boolean");
    *flag = it->get<bool>();
  }
  if (!(d.lo < d.hi)) bad("interval needs lo < hi");
  return d;
}

Json to_json(const LKIntervalRep& rep) {
  return {{"form", "interval"},
          {"t0", number_json(rep.t0)},
          {"c", number_json(rep.c)},
          {"d", number_json(rep.d)},
          {"interval", {number_json(rep.interval.lo), number_json(rep.interval.hi)}},
          {"mu", to_json(rep.mu)}};
}

Json to_json(const LKIncreasingRep& rep) {
  return {{"form", "increasing"}, {"c", number_json(rep.c)}, {"mu", to_json(rep.mu)}};
}

Json to_json(const BernsteinRep& rep) {
  return {{"form", "bernstein"}, {"a", number_json(rep.a)}, {"b", number_json(rep.b)}, {"sigma", to_json(rep.sigma)}};
}

LKIntervalRep interval_rep_from_json(const Json& j) {
  LKIntervalRep rep;
  rep.t0 = num_or(j, "t0", 0.0);
  rep.c = num_or(j, "c", 0.0);
  rep.d = num_or(j, "d", 0.0);
  if (auto it = j.find("interval"); it != j.end()) rep.interval = domain_from_json(*it);
  rep.mu = measure_from_json(field(j, "mu"));
  return rep;
}

LKIncreasingRep increasing_rep_from_json(const Json& j) {
  LKIncreasingRep rep;
  rep.c = num_or(j, "c", 0.0);
  rep.mu = measure_from_json(field(j, "mu"));
  return rep;
}

BernsteinRep bernstein_rep_from_json(const Json& j) {
  BernsteinRep rep;
  rep.a = num_or(j, "a", 0.0);
  rep.b = num_or(j, "b", 0.0);
  rep.sigma = measure_from_json(field(j, "sigma"));
  return rep;
}

Json to_json(const LKData& d) {
  Json j;
  if (const auto* r = std::get_if<LKIntervalRep>(&d.rep)) j = to_json(*r);
  if (const auto* r = std::get_if<LKIncreasingRep>(&d.rep)) j = to_json(*r);
  if (const auto* r = std::get_if<BernsteinRep>(&d.rep)) j = to_json(*r);
  if (const auto* r = std::get_if<LaplaceRep>(&d.rep)) {
    j = {{"mu", to_json(r->mu)}, {"domain", to_json(r->domain)}};
  }
  j["form"] = kind_name(d);
  return j;
}

LKData lk_data_from_json(const Json& j, const std::string& form_override) {
  if (!j.is_object()) bad("representation must be an object");
  const std::string form = !form_override.empty() ? form_override : string_field(j, "form");
  if (form == "interval") return {interval_rep_from_json(j), false};
  if (form == "increasing") return {increasing_rep_from_json(j), false};
  if (form == "bernstein") return {bernstein_rep_from_json(j), false};
  if (form == "reflection_negative") return {bernstein_rep_from_json(j), true};
  if (form == "laplace" || form == "laplace_abs") {
    LaplaceRep r;
    r.mu = measure_from_json(field(j, "mu"));
    if (auto it = j.find("domain"); it != j.end()) r.domain = domain_from_json(*it);
    return {r, form == "laplace_abs"};
  }
  bad("unknown form '" + form + "'");
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "PASS") return Verdict::pass;
  if (s == "FAIL") return Verdict::fail;
  if (s == "INCONCLUSIVE") return Verdict::inconclusive;
  bad("verdict must be PASS, FAIL or INCONCLUSIVE");
}

Json to_json(const PositivityVerdict& v) {
  Json params = Json::object();
  for (const auto& [k, x] : v.params) params[k] = number_json(x);
  return {{"verdict", to_string(v.verdict)},
          {"extremal_eig", number_json(v.extremal_eig)},
          {"tol", number_json(v.tol_used)},
          {"scale", number_json(v.scale)},
          {"witness", numbers_json(v.witness)},
          {"grid", numbers_json(v.grid)},
          {"note", v.note},
          {"params", params}};
}

PositivityVerdict verdict_from_json(const Json& j) {
  PositivityVerdict v;
  v.verdict = verdict_from_string(string_field(j, "verdict"));
  v.extremal_eig = num_or(j, "extremal_eig", 0.0);
  v.tol_used = num_or(j, "tol", 0.0);
  v.scale = num_or(j, "scale", 1.0);
  if (auto it = j.find("witness"); it != j.end()) v.witness = numbers(*it);
  if (auto it = j.find("grid"); it != j.end()) v.grid = numbers(*it);
  if (auto it = j.find("note"); it != j.end() && it->is_string()) v.note = it->get<std::string>();
  if (auto it = j.find("params"); it != j.end() && it->is_object()) {
    for (const auto& [k, x] : it->items()) v.params[k] = number_from_json(x);
  }
  return v;
}

Json to_json(const ReflectionReport& r) {
  Json j = {{"a", number_json(r.a)},
            {"symmetric", r.symmetric},
            {"asymmetry", number_json(r.asymmetry)},
            {"verdict", to_string(r.verdict)},
            {"minus", to_json(r.minus_verdict)},
            {"plus", to_json(r.plus_verdict)},
            {"note", r.note}};
  if (r.schoenberg_minus) j["schoenberg_minus"] = to_json(*r.schoenberg_minus);
  if (r.schoenberg_plus) j["schoenberg_plus"] = to_json(*r.schoenberg_plus);
  if (r.bernstein_verdict) j["bernstein"] = to_json(*r.bernstein_verdict);
  if (r.two_point) j["two_point"] = to_json(*r.two_point);
  return j;
}

Json to_json(const FlagClaim& c) {
  return {{"property", to_string(c.property)},
          {"window", {number_json(c.lo), number_json(c.hi)}},
          {"citation", c.citation}};
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    bad(std::string("parse error: ") + e.what());
  }
}

std::string render(const Json& j) { return j.dump(2); }

}  // namespace lkpos

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lkpos/func.hpp"
#include "lkpos/kernelcheck.hpp"
#include "lkpos/levykhin.hpp"
#include "lkpos/measure.hpp"

namespace lkpos {

enum class Property {
  positive_definite,
  negative_definite,
  completely_monotone,
  bernstein,
  reflection_positive,
  reflection_negative,
};

std::string to_string(Property p);
/// Throws InvalidArgument for an unknown name.
Property property_from_string(const std::string& s);

/// A property asserted (or refuted) on the window (lo, hi). Reflection
/// claims use lo = -a, hi = a with a possibly infinite.
struct FlagClaim {
  Property property = Property::positive_definite;
  double lo = 0.0;
  double hi = 0.0;
  /// The mathematical fact backing the claim.
  std::string citation;
};

/// f(t) = L(mu)(t), or L(mu)(|t|) when even.
struct LaplaceRep {
  Measure mu;
  /// Where the transform converges (of |t| when even).
  Domain domain = Domain::real_line();
};

struct LKData {
  std::variant<LKIntervalRep, LKIncreasingRep, BernsteinRep, LaplaceRep> rep;
  /// Evaluate at |t| (even extension of a half-line representation).
  bool even = false;
};

std::string kind_name(const LKData& d);

/// The function a representation describes.
FuncHandle lk_function(const LKData& d, double tol = 1e-10);

using CatalogParams = std::map<std::string, double>;

struct CatalogEntry {
  std::string name;
  CatalogParams params;
  std::string formula;
  FuncHandle func;
  Domain domain;
  /// Default sampling window.
  std::pair<double, double> window;
  std::vector<FlagClaim> known_flags;
  /// Properties that fail, confirmed by the same checkers.
  std::vector<FlagClaim> refuted_flags;
  std::optional<LKData> lk_data;

  bool has_flag(Property p) const;
};

struct CatalogInfo {
  std::string name;
  std::string formula;
  CatalogParams defaults;
};

/// Entry `name` with params overriding the defaults. Throws UnknownName for
/// an unknown entry and InvalidArgument for an unknown or out-of-range parameter.
CatalogEntry get(const std::string& name, const CatalogParams& params = {});
std::vector<std::string> list();
std::vector<CatalogInfo> catalog_info();

/// Runs the checker behind a claim at default grid size and tolerance:
/// psd/cnd of the plus kernel, completely monotone, Bernstein, or the
/// reflection checks (h = 2^0 .. 2^-10 for negativity).
PositivityVerdict check_claim(const FuncHandle& f, const FlagClaim& claim);

}  // namespace lkpos

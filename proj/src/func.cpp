#include "lkpos/func.hpp"

#include <algorithm>
#include <cmath>

#include "lkpos/error.hpp"

namespace lkpos {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DivergentIntegral: return "DivergentIntegral";
    case ErrorKind::InvalidMeasure: return "InvalidMeasure";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorKind::NotReflectionPositive: return "NotReflectionPositive";
    case ErrorKind::IndexError: return "IndexError";
    case ErrorKind::OrderTooHigh: return "OrderTooHigh";
    case ErrorKind::NotNegativeDefinite: return "NotNegativeDefinite";
    case ErrorKind::NotIncreasing: return "NotIncreasing";
    case ErrorKind::InvalidRep: return "InvalidRep";
    case ErrorKind::NotConvex: return "NotConvex";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

bool Domain::contains(double x) const {
  if (std::isnan(x)) return false;
  const bool above = lo_closed ? x >= lo : x > lo;
  const bool below = hi_closed ? x <= hi : x < hi;
  return above && below;
}

double Domain::distance_to_boundary(double x) const {
  return std::min(std::isfinite(lo) ? x - lo : kInf, std::isfinite(hi) ? hi - x : kInf);
}

FuncHandle::FuncHandle(std::string name, Domain domain, std::function<double(double)> f)
    : name_(std::move(name)), domain_(domain) {
  eval_ = [f = std::move(f)](double t) { return Evaluation{f(t), true}; };
}

FuncHandle::FuncHandle(std::string name, Domain domain, Evaluator f)
    : name_(std::move(name)), domain_(domain), eval_(std::move(f)) {}

FuncHandle FuncHandle::with_derivatives(Derivative deriv, int max_order) const {
  FuncHandle out = *this;
  out.deriv_ = std::move(deriv);
  out.max_order_ = max_order;
  return out;
}

FuncHandle FuncHandle::renamed(std::string name) const {
  FuncHandle out = *this;
  out.name_ = std::move(name);
  return out;
}

Evaluation FuncHandle::evaluate(double t) const {
  if (!domain_.contains(t)) {
    throw Error(ErrorKind::DomainError,
                name_ + ": argument " + std::to_string(t) + " outside the domain");
  }
  return eval_(t);
}

double FuncHandle::analytic_derivative(double t, int k) const {
  if (!deriv_ || k > max_order_ || k < 0) {
    throw Error(ErrorKind::OrderTooHigh,
                name_ + ": no closed-form derivative of order " + std::to_string(k));
  }
  if (!domain_.contains(t)) {
    throw Error(ErrorKind::DomainError,
                name_ + ": argument " + std::to_string(t) + " outside the domain");
  }
  return deriv_(t, k);
}

}  // namespace lkpos

#include "hifbe/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "hifbe/inner.hpp"

namespace hifb {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::catalog_miss: return "catalog-miss";
    case Errc::oracle_fault: return "oracle-fault";
    case Errc::exponent_mismatch: return "exponent-mismatch";
    case Errc::bracket_too_small: return "bracket-too-small";
    case Errc::prox_unbounded: return "prox-unbounded";
    case Errc::envelope_undefined: return "envelope-undefined";
    case Errc::capability_missing: return "capability-missing";
    case Errc::gamma_too_large: return "gamma-too-large";
    case Errc::prox_bound_violation: return "prox-bound-violation";
    case Errc::lemma_violation: return "lemma-violation";
    case Errc::domain_error: return "domain-error";
    case Errc::dependency_missing: return "dependency-missing";
    case Errc::bad_config: return "bad-config";
  }
  return "unknown";
}

SmoothOracle SmoothOracle::zero(int dim) {
  SmoothOracle f;
  f.dim = dim;
  f.value = [](const Vec&) { return 0.0; };
  f.gradient = [dim](const Vec&) { return Vec(Vec::Zero(dim)); };
  f.hessian = [dim](const Vec&) { return Mat(Mat::Zero(dim, dim)); };
  f.nu = 1.0;
  f.l_nu = 0.0;
  return f;
}

bool NonsmoothOracle::prox_supports(double p) const {
  if (!has_prox()) return false;
  if (prox_orders.empty()) return true;
  return std::any_of(prox_orders.begin(), prox_orders.end(),
                     [p](double q) { return q == p; });
}

NonsmoothOracle NonsmoothOracle::zero(int dim) {
  NonsmoothOracle g;
  g.dim = dim;
  g.value = [](const Vec&) { return 0.0; };
  g.is_zero = true;
  g.prox_bound_hint = kInf;
  if (dim == 1) {
    g.subdiff_1d = [](double) { return Interval{0.0, 0.0}; };
  }
  return g;
}

NonsmoothOracle NonsmoothOracle::abs_value(double weight) {
  NonsmoothOracle g;
  g.dim = 1;
  g.value = [weight](const Vec& x) { return weight * std::abs(x(0)); };
  g.analytic_prox = [weight](const Vec& u, double gamma, double /*p*/) {
    return std::vector<Vec>{vec1(soft_threshold(u(0), weight * gamma))};
  };
  g.prox_orders = {2.0};
  g.subdiff_1d = [weight](double x) {
    if (x == 0.0) return Interval{-weight, weight};
    return Interval{weight * sgn(x), weight * sgn(x)};
  };
  g.prox_bound_hint = kInf;  // bounded below
  return g;
}

NonsmoothOracle NonsmoothOracle::indicator(double lo, double hi) {
  NonsmoothOracle g;
  g.dim = 1;
  g.value = [lo, hi](const Vec& x) {
    return (x(0) >= lo && x(0) <= hi) ? 0.0 : kInf;
  };
  g.indicator_interval = {lo, hi};
  g.subdiff_1d = [lo, hi](double x) {
    if (x < lo || x > hi) return Interval{kInf, -kInf};  // empty
    Interval iv{0.0, 0.0};
    if (x == lo) iv.lo = -kInf;
    if (x == hi) iv.hi = kInf;
    return iv;
  };
  g.prox_bound_hint = kInf;
  return g;
}

double composite_value(const CompositeProblem& problem, const Vec& x) {
  if (x.size() != problem.dim())
    throw Error(Errc::domain_error, "dimension mismatch in composite_value");
  const double fv = problem.f.value(x);
  if (!std::isfinite(fv))
    throw Error(Errc::oracle_fault, "smooth part returned a non-finite value");
  const double gv = problem.g.value(x);
  if (std::isnan(gv))
    throw Error(Errc::oracle_fault, "nonsmooth part returned NaN");
  return fv + gv;  // +inf propagates
}

}  // namespace hifb

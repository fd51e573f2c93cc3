#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hifbe/error.hpp"
#include "hifbe/types.hpp"

namespace hifb {

/// Smooth part f of a composite objective: value/gradient evaluators plus the
/// Holder metadata of the gradient (exponent nu in (0,1], constant l_nu >= 0).
/// The optional Hessian enables the candidate-gradient formula; the optional
/// (mu_hess, l_mu) pair declares a Holder modulus for the Hessian itself.
struct SmoothOracle {
  int dim = 1;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<Mat(const Vec&)> hessian;  // empty if unavailable
  double nu = 1.0;
  double l_nu = 0.0;
  std::optional<double> mu_hess;
  std::optional<double> l_mu;

  bool has_hessian() const { return static_cast<bool>(hessian); }

  static SmoothOracle zero(int dim);
};

/// Nonsmooth part g: extended-real value (may return +inf), optional analytic
/// proximal map for min_v g(v) + (1/(p*gamma))|u-v|^p, optional 1D
/// subdifferential interval, and an optional prox-boundedness threshold.
struct NonsmoothOracle {
  int dim = 1;
  std::function<double(const Vec&)> value;
  // (anchor u, gamma, p) -> minimizer set. Empty function if unavailable;
  // when set, `prox_orders` lists the orders p it supports (empty = all).
  std::function<std::vector<Vec>(const Vec&, double, double)> analytic_prox;
  std::vector<double> prox_orders;
  std::function<Interval(double)> subdiff_1d;  // dim == 1 only
  std::optional<double> prox_bound_hint;       // threshold gamma^{g,p}
  bool is_zero = false;
  std::optional<std::pair<double, double>> indicator_interval;

  bool has_prox() const { return static_cast<bool>(analytic_prox); }
  bool has_subdiff() const { return static_cast<bool>(subdiff_1d); }
  bool prox_supports(double p) const;

  static NonsmoothOracle zero(int dim);
  static NonsmoothOracle abs_value(double weight);
  static NonsmoothOracle indicator(double lo, double hi);
};

struct CompositeProblem {
  std::string id;
  SmoothOracle f;
  NonsmoothOracle g;
  std::optional<Vec> known_minimizer;
  std::optional<double> known_min_value;  // phi at the known minimizer
  std::optional<double> calm_constant;

  int dim() const { return f.dim; }
};

/// phi(x) = f(x) + g(x); +inf propagates from g. A non-finite f value is an
/// oracle fault, never a legitimate +inf.
double composite_value(const CompositeProblem& problem, const Vec& x);

}  // namespace hifb

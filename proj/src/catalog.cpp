#include "hifbe/catalog.hpp"

#include <cmath>
#include <sstream>

namespace hifb {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Frozen gradient-Holder constants for the non-quadratic smooth parts,
// produced once by estimate_holder_constant on [-3,3] with n_samples = 20000,
// seed 20240501 (includes the 1.1 inflation). The quadratic constants are
// analytic. Generation commands and raw outputs: docs/catalog.md.
constexpr double kHolderPowerQ = 1.5556349185645451;      // f(x) = (2/3)|x|^{3/2}
constexpr double kHolderOscillatory = 1.1667261889234091;  // f(x) = 0.5|x|^{3/2}

// f(x) = c|x|^{3/2}: gradient (3c/2) sgn(x)|x|^{1/2}, second derivative
// (3c/4)|x|^{-1/2} away from the origin (NaN at 0, where it blows up).
SmoothOracle power_three_halves(double c, double l_nu) {
  SmoothOracle f;
  f.dim = 1;
  f.value = [c](const Vec& x) { return c * pow_abs(x(0), 1.5); };
  f.gradient = [c](const Vec& x) {
    return vec1(1.5 * c * sgn(x(0)) * std::sqrt(std::abs(x(0))));
  };
  f.hessian = [c](const Vec& x) {
    Mat h(1, 1);
    h(0, 0) = x(0) == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                          : 0.75 * c / std::sqrt(std::abs(x(0)));
    return h;
  };
  f.nu = 0.5;
  f.l_nu = l_nu;
  return f;
}

CompositeProblem make_zero() {
  CompositeProblem prob;
  prob.id = "zero";
  prob.f = SmoothOracle::zero(1);
  prob.g = NonsmoothOracle::zero(1);
  prob.known_minimizer = vec1(0.0);
  prob.known_min_value = 0.0;
  return prob;
}

CompositeProblem make_power_q() {
  CompositeProblem prob;
  prob.id = "power-q";
  prob.f = power_three_halves(2.0 / 3.0, kHolderPowerQ);
  prob.g = NonsmoothOracle::zero(1);
  prob.known_minimizer = vec1(0.0);
  prob.known_min_value = 0.0;
  prob.calm_constant = 0.1;
  return prob;
}

CompositeProblem make_oscillatory() {
  CompositeProblem prob;
  prob.id = "oscillatory";
  prob.f = power_three_halves(0.5, kHolderOscillatory);

  NonsmoothOracle g;
  g.dim = 1;
  g.value = [](const Vec& xv) {
    const double x = xv(0);
    return std::abs(0.3 * std::sin(5.0 * x)) + 0.2 * x * x * std::exp(-x * x);
  };
  g.subdiff_1d = [](double x) {
    const double smooth = 0.4 * x * (1.0 - x * x) * std::exp(-x * x);
    const double t = 5.0 * x;
    const double dist = std::abs(t - std::round(t / kPi) * kPi);
    if (dist <= 1e-6) {
      // kink of |0.3 sin(5x)|; |cos| = 1 there, so the slope band is +-1.5
      return Interval{smooth - 1.5, smooth + 1.5};
    }
    const double d = 1.5 * std::cos(t) * sgn(std::sin(t));
    return Interval{smooth + d, smooth + d};
  };
  g.prox_bound_hint = kInf;
  prob.g = g;

  prob.known_minimizer = vec1(0.0);
  prob.known_min_value = 0.0;
  return prob;
}

CompositeProblem make_majorant_demo() {
  CompositeProblem prob;
  prob.id = "majorant-demo";
  prob.f = power_three_halves(2.0 / 3.0, kHolderPowerQ);

  NonsmoothOracle g;
  g.dim = 1;
  g.value = [](const Vec& xv) {
    const double x = xv(0);
    return -0.5 * std::cos(3.0 * x) + 0.2 * std::abs(x);
  };
  g.subdiff_1d = [](double x) {
    const double smooth = 1.5 * std::sin(3.0 * x);
    if (std::abs(x) <= 1e-7) return Interval{smooth - 0.2, smooth + 0.2};
    return Interval{smooth + 0.2 * sgn(x), smooth + 0.2 * sgn(x)};
  };
  g.prox_bound_hint = kInf;
  prob.g = g;

  prob.known_minimizer = vec1(0.0);
  prob.known_min_value = -0.5;
  return prob;
}

CompositeProblem make_quad_l1() {
  CompositeProblem prob;
  prob.id = "quad-l1";

  SmoothOracle f;
  f.dim = 1;
  f.value = [](const Vec& x) { return 0.5 * (x(0) - 1.0) * (x(0) - 1.0); };
  f.gradient = [](const Vec& x) { return vec1(x(0) - 1.0); };
  f.hessian = [](const Vec&) { return Mat(Mat::Ones(1, 1)); };
  f.nu = 1.0;
  f.l_nu = 1.0;
  f.mu_hess = 0.5;
  f.l_mu = 1.0;
  prob.f = f;

  prob.g = NonsmoothOracle::abs_value(1.0);
  prob.known_minimizer = vec1(0.0);
  prob.known_min_value = 0.5;
  return prob;
}

CompositeProblem make_quad_free() {
  CompositeProblem prob;
  prob.id = "quad-free";

  Mat a(2, 2);
  a << 2.0, 0.5, 0.5, 1.0;
  Vec b(2);
  b << 1.0, 1.0;

  SmoothOracle f;
  f.dim = 2;
  f.value = [a, b](const Vec& x) { return 0.5 * x.dot(a * x) - b.dot(x); };
  f.gradient = [a, b](const Vec& x) { return Vec(a * x - b); };
  f.hessian = [a](const Vec&) { return a; };
  f.nu = 1.0;
  f.l_nu = (3.0 + std::sqrt(2.0)) / 2.0;  // largest eigenvalue of a
  f.mu_hess = 0.5;
  f.l_mu = 1.0;
  prob.f = f;

  prob.g = NonsmoothOracle::zero(2);
  Vec xbar(2);
  xbar << 2.0 / 7.0, 6.0 / 7.0;  // a^{-1} b
  prob.known_minimizer = xbar;
  prob.known_min_value = -0.5 * b.dot(xbar);
  return prob;
}

CompositeProblem make_quad_free1d() {
  CompositeProblem prob;
  prob.id = "quad-free1d";

  SmoothOracle f;
  f.dim = 1;
  f.value = [](const Vec& x) { return 0.5 * x(0) * x(0); };
  f.gradient = [](const Vec& x) { return x; };
  f.hessian = [](const Vec&) { return Mat(Mat::Ones(1, 1)); };
  f.nu = 1.0;
  f.l_nu = 1.0;
  f.mu_hess = 0.5;
  f.l_mu = 1.0;
  prob.f = f;

  prob.g = NonsmoothOracle::zero(1);
  prob.known_minimizer = vec1(0.0);
  prob.known_min_value = 0.0;
  return prob;
}

}  // namespace

const std::vector<std::string>& problem_catalog_ids() {
  static const std::vector<std::string> ids = {
      "zero",    "power-q",  "oscillatory", "majorant-demo",
      "quad-l1", "quad-free", "quad-free1d"};
  return ids;
}

CompositeProblem problem_catalog_get(const std::string& id) {
  if (id == "zero") return make_zero();
  if (id == "power-q") return make_power_q();
  if (id == "oscillatory") return make_oscillatory();
  if (id == "majorant-demo") return make_majorant_demo();
  if (id == "quad-l1") return make_quad_l1();
  if (id == "quad-free") return make_quad_free();
  if (id == "quad-free1d") return make_quad_free1d();

  std::ostringstream msg;
  msg << "unknown problem id '" << id << "'; valid ids:";
  for (const auto& known : problem_catalog_ids()) msg << " " << known;
  throw Error(Errc::catalog_miss, msg.str());
}

}  // namespace hifb

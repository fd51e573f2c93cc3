#include <doctest.h>

#include <cmath>
#include <random>

#include "hifbe/catalog.hpp"
#include "hifbe/holder.hpp"

using namespace hifb;

namespace {

Vec rand_point(int dim, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec x(dim);
  for (int i = 0; i < dim; ++i) x(i) = u(rng);
  return x;
}

}  // namespace

TEST_CASE("catalog ids are stable and misses name the valid ids") {
  CHECK(problem_catalog_ids().size() == 7);
  for (const auto& id : problem_catalog_ids()) {
    const CompositeProblem prob = problem_catalog_get(id);
    CHECK(prob.id == id);
    CHECK(prob.f.dim == prob.g.dim);
  }
  try {
    problem_catalog_get("no-such-problem");
    FAIL("expected catalog miss");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::catalog_miss);
    CHECK(std::string(err.what()).find("oscillatory") != std::string::npos);
    CHECK(std::string(err.what()).find("quad-l1") != std::string::npos);
  }
}

TEST_CASE("catalog function values match their definitions") {
  const CompositeProblem zero = problem_catalog_get("zero");
  CHECK(composite_value(zero, vec1(3.7)) == 0.0);
  CHECK(composite_value(zero, vec1(-12.0)) == 0.0);
  CHECK((*zero.known_minimizer)(0) == 0.0);

  const CompositeProblem osc = problem_catalog_get("oscillatory");
  CHECK(osc.f.value(vec1(1.0)) == doctest::Approx(0.5).epsilon(1e-14));
  // direct evaluation of phi(1) = 0.5 + |0.3 sin 5| + 0.2 e^{-1}
  const double expected = 0.5 + std::abs(0.3 * std::sin(5.0)) + 0.2 * std::exp(-1.0);
  CHECK(composite_value(osc, vec1(1.0)) == doctest::Approx(expected).epsilon(1e-15));

  const CompositeProblem maj = problem_catalog_get("majorant-demo");
  CHECK(composite_value(maj, vec1(0.0)) == doctest::Approx(-0.5).epsilon(1e-15));

  const CompositeProblem quad = problem_catalog_get("quad-l1");
  CHECK(composite_value(quad, vec1(0.0)) == doctest::Approx(0.5).epsilon(1e-15));

  const CompositeProblem qf = problem_catalog_get("quad-free");
  // minimizer of a quadratic: value -0.5 b.x with x = A^{-1} b
  CHECK(composite_value(qf, *qf.known_minimizer) ==
        doctest::Approx(-4.0 / 7.0).epsilon(1e-14));
}

TEST_CASE("oracle faults surface as errors") {
  CompositeProblem bad;
  bad.id = "bad";
  bad.f.dim = 1;
  bad.f.value = [](const Vec&) { return kInf; };
  bad.f.gradient = [](const Vec&) { return vec1(0.0); };
  bad.g = NonsmoothOracle::zero(1);
  CHECK_THROWS_AS(composite_value(bad, vec1(0.0)), Error);
}

TEST_CASE("catalog is deterministic across instances") {
  std::mt19937_64 rng(11);
  for (const auto& id : problem_catalog_ids()) {
    const CompositeProblem a = problem_catalog_get(id);
    const CompositeProblem b = problem_catalog_get(id);
    for (int i = 0; i < 50; ++i) {
      const Vec x = rand_point(a.dim(), -3.0, 3.0, rng);
      CHECK(a.f.value(x) == b.f.value(x));
      CHECK(a.f.gradient(x) == b.f.gradient(x));
      CHECK(a.g.value(x) == b.g.value(x));
    }
  }
}

TEST_CASE("holder constant estimator on known gradients") {
  SUBCASE("constant function gives zero") {
    SmoothOracle f;
    f.dim = 1;
    f.value = [](const Vec&) { return 4.2; };
    f.gradient = [](const Vec&) { return vec1(0.0); };
    CHECK(estimate_holder_constant(f, 0.5, Box::cube(1, -1, 1), 500, 3) == 0.0);
  }

  SUBCASE("quadratic with unit curvature gives exactly the inflated constant") {
    SmoothOracle f;
    f.dim = 1;
    f.value = [](const Vec& x) { return 0.5 * x(0) * x(0); };
    f.gradient = [](const Vec& x) { return x; };
    const double est = estimate_holder_constant(f, 1.0, Box::cube(1, -1, 1), 1000, 3);
    CHECK(est == doctest::Approx(1.1).epsilon(1e-14));
  }

  SUBCASE("power three-halves at nu = 1/2: sampled max lies in [1, sqrt 2]") {
    SmoothOracle f;
    f.dim = 1;
    f.value = [](const Vec& x) { return (2.0 / 3.0) * pow_abs(x(0), 1.5); };
    f.gradient = [](const Vec& x) {
      return vec1(sgn(x(0)) * std::sqrt(std::abs(x(0))));
    };
    const double est = estimate_holder_constant(f, 0.5, Box::cube(1, -2, 2), 5000, 3);
    CHECK(est >= 1.1 * 1.0);
    CHECK(est <= 1.1 * std::sqrt(2.0) * (1.0 + 1e-9));
    // deterministic for a fixed seed
    CHECK(est == estimate_holder_constant(f, 0.5, Box::cube(1, -2, 2), 5000, 3));
  }

  SUBCASE("declaring nu too large raises exponent-mismatch") {
    SmoothOracle f;
    f.dim = 1;
    f.value = [](const Vec& x) { return (2.0 / 3.0) * pow_abs(x(0), 1.5); };
    f.gradient = [](const Vec& x) {
      return vec1(sgn(x(0)) * std::sqrt(std::abs(x(0))));
    };
    try {
      estimate_holder_constant(f, 1.0, Box::cube(1, -2, 2), 5000, 3);
      FAIL("expected exponent mismatch");
    } catch (const Error& err) {
      CHECK(err.code() == Errc::exponent_mismatch);
    }
  }
}

TEST_CASE("holder descent inequality holds with the frozen catalog constants") {
  // |f(y) - f(x) - <grad f(x), y-x>| <= l_nu/(1+nu) |y-x|^{1+nu} on random pairs
  std::mt19937_64 rng(17);
  for (const auto& id : problem_catalog_ids()) {
    const CompositeProblem prob = problem_catalog_get(id);
    const double coef = prob.f.l_nu / (1.0 + prob.f.nu);
    double worst = -kInf;
    for (int i = 0; i < 10000; ++i) {
      const Vec x = rand_point(prob.dim(), -3.0, 3.0, rng);
      const Vec y = rand_point(prob.dim(), -3.0, 3.0, rng);
      const double lin = prob.f.value(x) + prob.f.gradient(x).dot(y - x);
      const double lhs = std::abs(prob.f.value(y) - lin);
      worst = std::max(worst, lhs - coef * pow_abs((y - x).norm(), 1.0 + prob.f.nu));
    }
    INFO("problem ", id);
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("two-sided gradient estimate holds with the frozen catalog constants") {
  // |<grad f(y) - grad f(x), y-x>| <= 2 l_nu/(1+nu) |y-x|^{1+nu}
  std::mt19937_64 rng(19);
  for (const auto& id : problem_catalog_ids()) {
    const CompositeProblem prob = problem_catalog_get(id);
    const double coef = 2.0 * prob.f.l_nu / (1.0 + prob.f.nu);
    double worst = -kInf;
    for (int i = 0; i < 10000; ++i) {
      const Vec x = rand_point(prob.dim(), -3.0, 3.0, rng);
      const Vec y = rand_point(prob.dim(), -3.0, 3.0, rng);
      const double lhs = std::abs((prob.f.gradient(y) - prob.f.gradient(x)).dot(y - x));
      worst = std::max(worst, lhs - coef * pow_abs((y - x).norm(), 1.0 + prob.f.nu));
    }
    INFO("problem ", id);
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("provided Hessians match finite differences of the gradient") {
  std::mt19937_64 rng(23);
  const double h = 1e-6;
  for (const auto& id : problem_catalog_ids()) {
    const CompositeProblem prob = problem_catalog_get(id);
    if (!prob.f.has_hessian()) continue;
    for (int trial = 0; trial < 20; ++trial) {
      Vec x = rand_point(prob.dim(), -2.0, 2.0, rng);
      if (prob.dim() == 1 && std::abs(x(0)) < 0.1) x(0) += 0.5;  // stay off kinks
      const Mat hess = prob.f.hessian(x);
      if (!hess.allFinite()) continue;
      Mat fd(prob.dim(), prob.dim());
      for (int j = 0; j < prob.dim(); ++j) {
        Vec xp = x, xm = x;
        xp(j) += h;
        xm(j) -= h;
        fd.col(j) = (prob.f.gradient(xp) - prob.f.gradient(xm)) / (2.0 * h);
      }
      fd = 0.5 * (fd + fd.transpose()).eval();
      INFO("problem ", id);
      CHECK((hess - fd).norm() <= 1e-4 * (1.0 + hess.norm()));
    }
  }
}

TEST_CASE("analytic prox beats a dense bracket grid") {
  // prox objective g(v) + (1/(2 gamma))(u - v)^2 for g = |.|
  const NonsmoothOracle g = NonsmoothOracle::abs_value(1.0);
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> anchors(-4.0, 4.0), gammas(0.05, 2.0);
  for (int trial = 0; trial < 25; ++trial) {
    const double u = anchors(rng);
    const double gamma = gammas(rng);
    const Vec prox = g.analytic_prox(vec1(u), gamma, 2.0).front();
    const double prox_val =
        g.value(prox) + 1.0 / (2.0 * gamma) * (u - prox(0)) * (u - prox(0));
    double grid_best = kInf;
    const double radius = 2.0 * (1.0 + std::abs(u));
    for (int i = 0; i < 10000; ++i) {
      const double v = u - radius + 2.0 * radius * i / 9999.0;
      grid_best = std::min(grid_best,
                           g.value(vec1(v)) + 1.0 / (2.0 * gamma) * (u - v) * (u - v));
    }
    CHECK(prox_val <= grid_best + 1e-10);
  }
}

TEST_CASE("1D subdifferentials of the builtin nonsmooth parts") {
  const CompositeProblem quad = problem_catalog_get("quad-l1");
  CHECK(quad.g.subdiff_1d(0.0).lo == -1.0);
  CHECK(quad.g.subdiff_1d(0.0).hi == 1.0);
  CHECK(quad.g.subdiff_1d(0.5).lo == 1.0);
  CHECK(quad.g.subdiff_1d(-2.0).hi == -1.0);

  // oscillatory: kink of |0.3 sin(5x)| at pi/5 has slope band +-1.5 plus the
  // smooth remainder's derivative
  const CompositeProblem osc = problem_catalog_get("oscillatory");
  const double kink = M_PI / 5.0;
  const Interval at_kink = osc.g.subdiff_1d(kink);
  const double smooth = 0.4 * kink * (1.0 - kink * kink) * std::exp(-kink * kink);
  CHECK(at_kink.lo == doctest::Approx(smooth - 1.5).epsilon(1e-12));
  CHECK(at_kink.hi == doctest::Approx(smooth + 1.5).epsilon(1e-12));
  // away from kinks the interval degenerates to the derivative
  const Interval away = osc.g.subdiff_1d(0.1);
  CHECK(away.width() == 0.0);
  const double fd =
      (osc.g.value(vec1(0.1 + 1e-7)) - osc.g.value(vec1(0.1 - 1e-7))) / 2e-7;
  CHECK(away.lo == doctest::Approx(fd).epsilon(1e-5));

  const CompositeProblem maj = problem_catalog_get("majorant-demo");
  CHECK(maj.g.subdiff_1d(0.0).lo == doctest::Approx(-0.2));
  CHECK(maj.g.subdiff_1d(0.0).hi == doctest::Approx(0.2));
}

TEST_CASE("known minimizers minimize on a verification grid") {
  for (const auto& id : problem_catalog_ids()) {
    const CompositeProblem prob = problem_catalog_get(id);
    if (!prob.known_minimizer || prob.dim() != 1) continue;
    const double phi_bar = composite_value(prob, *prob.known_minimizer);
    CHECK(phi_bar == doctest::Approx(*prob.known_min_value).epsilon(1e-12));
    for (int i = 0; i <= 400; ++i) {
      const double x = -3.0 + 6.0 * i / 400.0;
      CHECK(phi_bar <= composite_value(prob, vec1(x)) + 1e-10);
    }
  }
}

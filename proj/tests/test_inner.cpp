#include <doctest.h>

#include <cmath>
#include <random>

#include "hifbe/catalog.hpp"
#include "hifbe/envelope.hpp"
#include "hifbe/inner.hpp"

using namespace hifb;

namespace {

EnvelopeConfig cfg_of(double p, double gamma) {
  EnvelopeConfig cfg;
  cfg.p = p;
  cfg.gamma = gamma;
  return cfg;
}

CompositeProblem synthetic_1d(std::function<double(double)> fv,
                              std::function<double(double)> fg, NonsmoothOracle g) {
  CompositeProblem prob;
  prob.id = "synthetic";
  prob.f.dim = 1;
  prob.f.value = [fv](const Vec& x) { return fv(x(0)); };
  prob.f.gradient = [fg](const Vec& x) { return vec1(fg(x(0))); };
  prob.g = std::move(g);
  return prob;
}

}  // namespace

TEST_CASE("soft threshold") {
  CHECK(soft_threshold(0.5, 0.5) == 0.0);
  CHECK(soft_threshold(2.0, 0.5) == 1.5);
  CHECK(soft_threshold(-1.0, 0.25) == -0.75);
  CHECK(soft_threshold(0.0, 1.0) == 0.0);
  CHECK_THROWS_AS(soft_threshold(1.0, -0.1), Error);
}

TEST_CASE("model value") {
  const CompositeProblem zero = problem_catalog_get("zero");
  CHECK(model_value(zero, vec1(1.0), vec1(1.0), cfg_of(2.0, 1.0)) == 0.0);

  const CompositeProblem quad = problem_catalog_get("quad-l1");
  // f(0) + grad f(0)*(y-0) + |y| + (1/(2*0.5)) y^2 at y = 0.5:
  // 0.5 - 0.5 + 0.5 + 0.25 = 0.75
  CHECK(model_value(quad, vec1(0.0), vec1(0.5), cfg_of(2.0, 0.5)) ==
        doctest::Approx(0.75).epsilon(1e-15));

  // power-q anchored at 0: zero gradient, so the model is the pure power term
  const CompositeProblem pq = problem_catalog_get("power-q");
  for (double t : {0.3, -1.2, 2.0}) {
    const double expected = 1.0 / (1.5 * 0.7) * pow_abs(t, 1.5);
    CHECK(model_value(pq, vec1(0.0), vec1(t), cfg_of(1.5, 0.7)) ==
          doctest::Approx(expected).epsilon(1e-14));
  }

  // +inf propagates from g
  CompositeProblem box = synthetic_1d([](double) { return 0.0; },
                                      [](double) { return 0.0; },
                                      NonsmoothOracle::indicator(-1.0, 1.0));
  CHECK(model_value(box, vec1(0.0), vec1(2.0), cfg_of(2.0, 1.0)) == kInf);
}

TEST_CASE("subproblem solutions on the catalog") {
  SUBCASE("zero problem fixes the anchor") {
    const CompositeProblem zero = problem_catalog_get("zero");
    const SubproblemSolution sol = solve_subproblem(zero, vec1(0.3), cfg_of(2.0, 1.0));
    CHECK(sol.representative(0) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(sol.value == doctest::Approx(0.0));
    CHECK(sol.certified);
  }

  SUBCASE("quad-l1 at the origin soft-thresholds to zero") {
    const CompositeProblem quad = problem_catalog_get("quad-l1");
    const SubproblemSolution sol = solve_subproblem(quad, vec1(0.0), cfg_of(2.0, 0.5));
    // forward point u = 0 - 0.5*(-1) = 0.5, soft(0.5, 0.5) = 0
    CHECK(sol.representative(0) == 0.0);
    CHECK(sol.certified);
  }

  SUBCASE("power-q closed form at x = 1, p = 3/2, gamma = 1") {
    const CompositeProblem pq = problem_catalog_get("power-q");
    // grad f(1) = 1, step = (gamma*1)^{1/(p-1)} = 1, so y = 0 and
    // value = f(1) - (1 - 1/p) * 1 = 2/3 - 1/3 = 1/3
    const SubproblemSolution analytic = solve_subproblem(pq, vec1(1.0), cfg_of(1.5, 1.0));
    CHECK(analytic.representative(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(analytic.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    EnvelopeConfig grid = cfg_of(1.5, 1.0);
    grid.allow_analytic = false;
    const SubproblemSolution gridded = solve_subproblem(pq, vec1(1.0), grid);
    CHECK(gridded.certified);
    CHECK(gridded.value == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(std::abs(gridded.representative(0)) <= 1e-7);
  }
}

TEST_CASE("analytic registry coverage") {
  const CompositeProblem pq = problem_catalog_get("power-q");
  CHECK(prox_registry_lookup(pq, 1.5).has_value());
  CHECK(prox_registry_lookup(pq, 2.0).has_value());

  const CompositeProblem quad = problem_catalog_get("quad-l1");
  auto p2 = prox_registry_lookup(quad, 2.0);
  REQUIRE(p2.has_value());
  // solver output equals the soft-threshold composition
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> xs(-3.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    const double x = xs(rng);
    const double gamma = 0.4;
    const Vec y = (*p2)(vec1(x), gamma).front();
    CHECK(y(0) == doctest::Approx(soft_threshold(x - gamma * (x - 1.0), gamma))
                      .epsilon(1e-15));
  }
  // no composition shortcut away from p = 2
  CHECK_FALSE(prox_registry_lookup(quad, 1.5).has_value());

  // gradient step for g == 0 at p = 2
  const CompositeProblem qf1 = problem_catalog_get("quad-free1d");
  auto grad_step = prox_registry_lookup(qf1, 2.0);
  REQUIRE(grad_step.has_value());
  const Vec y = (*grad_step)(vec1(2.0), 0.5).front();
  CHECK(y(0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("interval indicator clamps the unconstrained minimizer") {
  // f = 0.5(x-3)^2 pushes toward 3; the solution must stop at the box edge
  CompositeProblem box = synthetic_1d(
      [](double x) { return 0.5 * (x - 3.0) * (x - 3.0); },
      [](double x) { return x - 3.0; }, NonsmoothOracle::indicator(-1.0, 1.0));

  for (double p : {1.7, 2.0, 2.5}) {
    const SubproblemSolution analytic = solve_subproblem(box, vec1(0.0), cfg_of(p, 2.0));
    EnvelopeConfig grid = cfg_of(p, 2.0);
    grid.allow_analytic = false;
    const SubproblemSolution gridded = solve_subproblem(box, vec1(0.0), grid);
    CHECK(analytic.representative(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gridded.representative(0) ==
          doctest::Approx(analytic.representative(0)).epsilon(1e-6));
    CHECK(std::abs(gridded.value - analytic.value) <= 1e-8);
  }
}

TEST_CASE("grid solutions are stable under 4x refinement") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> xs(-2.5, 2.5), ps(1.2, 2.5), gs(0.05, 0.8);
  const char* ids[] = {"oscillatory", "majorant-demo", "quad-l1", "power-q"};
  int solved = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const CompositeProblem prob = problem_catalog_get(ids[trial % 4]);
    EnvelopeConfig coarse = cfg_of(ps(rng), gs(rng));
    coarse.allow_analytic = false;
    EnvelopeConfig fine = coarse;
    fine.grid_points = 4 * coarse.grid_points + 1;
    const Vec x = vec1(xs(rng));
    const SubproblemSolution a = solve_subproblem(prob, x, coarse);
    const SubproblemSolution b = solve_subproblem(prob, x, fine);
    CHECK(std::abs(a.value - b.value) <= coarse.tol_val);
    CHECK((a.representative - b.representative).norm() <= 10.0 * coarse.tol_y);
    ++solved;
  }
  CHECK(solved == 1000);
}

TEST_CASE("registry and grid agree where both apply") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> xs(-3.0, 3.0), gs(0.1, 0.9);
  const char* ids[] = {"quad-l1", "power-q", "quad-free1d"};
  for (int trial = 0; trial < 1000; ++trial) {
    const CompositeProblem prob = problem_catalog_get(ids[trial % 3]);
    const double p = prob.id == "quad-l1" ? 2.0 : 1.5;
    EnvelopeConfig cfg = cfg_of(p, gs(rng));
    const Vec x = vec1(xs(rng));
    const SubproblemSolution analytic = solve_subproblem(prob, x, cfg);
    EnvelopeConfig grid = cfg;
    grid.allow_analytic = false;
    const SubproblemSolution gridded = solve_subproblem(prob, x, grid);
    CHECK(std::abs(analytic.value - gridded.value) <= cfg.tol_val);
  }
}

TEST_CASE("anchor feasibility: subproblem value never exceeds phi(x)") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> xs(-2.5, 2.5), ps(1.2, 2.6), gs(0.05, 3.0);
  for (const auto& id : problem_catalog_ids()) {
    const CompositeProblem prob = problem_catalog_get(id);
    if (prob.dim() != 1) continue;
    for (int trial = 0; trial < 50; ++trial) {
      const Vec x = vec1(xs(rng));
      const SubproblemSolution sol = solve_subproblem(prob, x, cfg_of(ps(rng), gs(rng)));
      CHECK(sol.value <= composite_value(prob, x) + 1e-10);
    }
  }
}

TEST_CASE("prox-unbounded models are detected") {
  NonsmoothOracle sink;
  sink.dim = 1;
  sink.value = [](const Vec& y) { return -pow_abs(y(0), 4.0); };
  CompositeProblem prob = synthetic_1d([](double) { return 0.0; },
                                       [](double) { return 0.0; }, sink);
  try {
    solve_subproblem(prob, vec1(0.0), cfg_of(2.0, 1.0));
    FAIL("expected prox-unbounded");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::prox_unbounded);
    CHECK(err.witness().has_value());
  }
}

TEST_CASE("far minimizers exhaust the bracket doubling") {
  // f = -10x drives the minimizer ~ (10 gamma)^{1/(p-1)} away from the anchor
  auto make = [](double slope) {
    NonsmoothOracle g = NonsmoothOracle::zero(1);
    g.is_zero = false;  // force the grid route
    return synthetic_1d([slope](double x) { return slope * x; },
                        [slope](double) { return slope; }, g);
  };
  EnvelopeConfig near = cfg_of(2.0, 5.0);
  near.allow_analytic = false;
  const SubproblemSolution ok = solve_subproblem(make(-10.0), vec1(0.0), near);
  CHECK(ok.representative(0) == doctest::Approx(50.0).epsilon(1e-7));

  EnvelopeConfig far = cfg_of(2.0, 100.0);
  far.allow_analytic = false;
  CHECK_THROWS_AS(solve_subproblem(make(-10.0), vec1(0.0), far), Error);
}

TEST_CASE("multistart handles a 2D nonsmooth composite") {
  // f = 0.5|x - c|^2 with an l1 term; p = 1.5 has no analytic route
  CompositeProblem prob;
  prob.id = "synthetic-2d";
  Vec c(2);
  c << 1.5, -0.5;
  prob.f.dim = 2;
  prob.f.value = [c](const Vec& x) { return 0.5 * (x - c).squaredNorm(); };
  prob.f.gradient = [c](const Vec& x) { return Vec(x - c); };
  NonsmoothOracle l1;
  l1.dim = 2;
  l1.value = [](const Vec& y) { return y.cwiseAbs().sum(); };
  l1.analytic_prox = [](const Vec& u, double gamma, double) {
    Vec y(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) y(i) = soft_threshold(u(i), gamma);
    return std::vector<Vec>{y};
  };
  l1.prox_orders = {2.0};
  prob.g = l1;

  const Vec x0 = Vec::Zero(2);
  const SubproblemSolution sol = solve_subproblem(prob, x0, cfg_of(1.5, 0.5));
  CHECK_FALSE(sol.certified);
  CHECK(sol.value <= composite_value(prob, x0) + 1e-10);

  // coarse exhaustive search as the reference
  double brute = kInf;
  EnvelopeConfig cfg = cfg_of(1.5, 0.5);
  for (int i = 0; i <= 200; ++i) {
    for (int j = 0; j <= 200; ++j) {
      Vec y(2);
      y << -3.0 + 6.0 * i / 200.0, -3.0 + 6.0 * j / 200.0;
      brute = std::min(brute, model_value(prob, x0, y, cfg));
    }
  }
  CHECK(sol.value <= brute + 1e-3);

  // at p = 2 the registry applies and certifies the composition
  const SubproblemSolution p2 = solve_subproblem(prob, x0, cfg_of(2.0, 0.5));
  CHECK(p2.certified);
  for (Eigen::Index i = 0; i < 2; ++i) {
    const double u = x0(i) - 0.5 * (x0(i) - c(i));
    CHECK(p2.representative(i) == doctest::Approx(soft_threshold(u, 0.5)).epsilon(1e-12));
  }
}

TEST_CASE("config validation") {
  EnvelopeConfig cfg;
  cfg.p = 1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = EnvelopeConfig{};
  cfg.gamma = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = EnvelopeConfig{};
  cfg.grid_points = 100;  // even
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = EnvelopeConfig{};
  CHECK_NOTHROW(cfg.validate());
}

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hifbe/oracle.hpp"

namespace hifb {

/// Settings for the subproblem min_y l(x,y) + (1/(p*gamma))|x-y|^p.
struct EnvelopeConfig {
  double p = 2.0;      // order, > 1
  double gamma = 1.0;  // > 0

  // 1D bracket half-width. <= 0 means automatic: 10*(1+|x|), doubled on
  // boundary hits up to 6 times. A caller that has computed the containment
  // radius tau may install it here directly.
  double bracket_radius = 0.0;
  int grid_points = 4001;  // odd, >= 101, so the anchor is a grid node

  double tol_y = 1e-8;     // minimizer location tolerance
  double tol_val = 1e-10;  // value tolerance
  double tol_tie = 1e-8;   // value window for reporting near-optimal basins

  int multistarts = 16;        // local starts for dim >= 2
  int max_inner_iters = 200;   // per local minimization

  // Skip the analytic registry and force the generic solver; used by tests
  // that compare the two routes against each other.
  bool allow_analytic = true;

  void validate() const;  // throws bad_config

  EnvelopeConfig with(double p_, double gamma_) const {
    EnvelopeConfig c = *this;
    c.p = p_;
    c.gamma = gamma_;
    return c;
  }
};

/// Minimizer set of the subproblem. `minimizers` holds every basin within
/// tol_tie of the best value; `representative` is deterministic: the
/// smallest-norm element among those within tol_val of the best value,
/// norm ties broken lexicographically.
struct SubproblemSolution {
  std::vector<Vec> minimizers;
  Vec representative;
  double value = 0.0;
  bool certified = false;
  long n_evals = 0;

  bool single_valued() const { return minimizers.size() == 1; }
};

/// l(x,y) + (1/(p*gamma))|x-y|^p where l(x,y) = f(x) + <grad f(x), y-x> + g(y).
/// Returns +inf iff g(y) = +inf.
double model_value(const CompositeProblem& problem, const Vec& x, const Vec& y,
                   const EnvelopeConfig& cfg);

/// Certified global solve in 1D (bracketed grid + golden-section refinement),
/// analytic shortcut when the registry provides one, best-effort multistart
/// otherwise (certified = false).
SubproblemSolution solve_subproblem(const CompositeProblem& problem, const Vec& x,
                                    const EnvelopeConfig& cfg);

/// Analytic solver taking (anchor x, gamma) -> minimizer set.
using AnalyticSolver = std::function<std::vector<Vec>(const Vec&, double)>;

/// Returns an analytic subproblem solver when one exists:
///   - g == 0, any p: explicit stationary point of the linear+power model;
///   - g with an analytic prox and p == 2: prox_g(x - gamma*grad f(x), gamma);
///   - g an interval indicator, dim 1, any p: clamp of the g == 0 minimizer.
/// For p != 2 with a general g the forward-backward composition is not valid,
/// so no solver is returned.
std::optional<AnalyticSolver> prox_registry_lookup(const CompositeProblem& problem,
                                                   double p);

/// sgn(u) * max(|u| - t, 0).
double soft_threshold(double u, double t);

}  // namespace hifb

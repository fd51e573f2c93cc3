#pragma once

#include "hifbe/inner.hpp"

namespace hifb {

/// One envelope evaluation: the envelope value, the splitting-map solution it
/// came from, and the residual x - representative.
struct EnvelopeEval {
  double value = 0.0;
  SubproblemSolution hifbs;
  Vec residual;
  bool single_valued = false;
  bool certified = false;
};

/// High-order forward-backward envelope of phi = f + g at x.
/// Throws envelope_undefined (with the witness ray) when the subproblem is
/// unbounded below, i.e. gamma exceeds the prox-boundedness threshold of g.
EnvelopeEval hifbe(const CompositeProblem& problem, const Vec& x, const EnvelopeConfig& cfg);

/// High-order forward-backward splitting map at x (the envelope's argmin set).
SubproblemSolution hifbs(const CompositeProblem& problem, const Vec& x,
                         const EnvelopeConfig& cfg);

/// Residual map x - representative; zero exactly at fixed points.
Vec residual(const CompositeProblem& problem, const Vec& x, const EnvelopeConfig& cfg);

/// Candidate envelope gradient at x together with its validity flags.
/// v = hess f(x)(ybar - x) + (1/gamma)|x - ybar|^{p-2}(x - ybar) for the
/// representative ybar, with |d|^{p-2} d := 0 at d = 0. The formula equals the
/// true gradient wherever the splitting map is single-valued and continuous;
/// `at_kink` marks evaluations within tol_y of a fixed point, where the p < 2
/// power is genuinely singular, and `single_valued` = false downgrades v to a
/// candidate.
struct CandidateGradient {
  Vec v;
  bool single_valued = false;
  bool at_kink = false;
  bool certified = false;
};

CandidateGradient candidate_gradient(const CompositeProblem& problem, const Vec& x,
                                     const EnvelopeConfig& cfg);

/// Central-difference gradient of the envelope value, coordinate by
/// coordinate. h <= 0 selects the default 1e-5 * (1 + |x|).
Vec fd_gradient(const CompositeProblem& problem, const Vec& x, const EnvelopeConfig& cfg,
                double h = -1.0);

/// High-order Moreau envelope of g alone (f == 0 specialization). The argmin
/// set inside the result is the high-order proximal map of g.
EnvelopeEval home(const NonsmoothOracle& g, const Vec& x, double gamma, double p,
                  const EnvelopeConfig& cfg);

/// Closed form for the g == 0 subproblem: with a = grad f(x),
///   minimizer y = x - gamma^{1/(p-1)} |a|^{(2-p)/(p-1)} a,
///   value     = f(x) - (1 - 1/p) gamma^{1/(p-1)} |a|^{p/(p-1)};
/// (f(x), x) when a = 0.
std::pair<double, Vec> forward_value_closed_form(const SmoothOracle& f, const Vec& x,
                                                 double gamma, double p);

}  // namespace hifb

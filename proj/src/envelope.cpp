#include "hifbe/envelope.hpp"

#include <cmath>

#include "detail.hpp"

namespace hifb {

EnvelopeEval hifbe(const CompositeProblem& problem, const Vec& x,
                   const EnvelopeConfig& cfg) {
  SubproblemSolution sol;
  try {
    sol = solve_subproblem(problem, x, cfg);
  } catch (const Error& err) {
    if (err.code() == Errc::prox_unbounded)
      throw Error(Errc::envelope_undefined,
                  "envelope is -inf at the query point (gamma above the "
                  "prox-boundedness threshold of g)",
                  err.witness());
    throw;
  }
  EnvelopeEval ev;
  ev.value = sol.value;
  ev.residual = x - sol.representative;
  ev.single_valued = sol.single_valued();
  ev.certified = sol.certified;
  ev.hifbs = std::move(sol);
  return ev;
}

SubproblemSolution hifbs(const CompositeProblem& problem, const Vec& x,
                         const EnvelopeConfig& cfg) {
  return hifbe(problem, x, cfg).hifbs;
}

Vec residual(const CompositeProblem& problem, const Vec& x, const EnvelopeConfig& cfg) {
  return hifbe(problem, x, cfg).residual;
}

CandidateGradient candidate_gradient(const CompositeProblem& problem, const Vec& x,
                                     const EnvelopeConfig& cfg) {
  if (!problem.f.has_hessian())
    throw Error(Errc::capability_missing, "candidate gradient needs a Hessian oracle");

  const EnvelopeEval ev = hifbe(problem, x, cfg);
  const Vec d = ev.residual;  // x - ybar
  const double nd = d.norm();

  CandidateGradient out;
  out.single_valued = ev.single_valued;
  out.certified = ev.certified;
  out.at_kink = nd <= cfg.tol_y;
  if (nd == 0.0) {
    // Both terms vanish; skipping the Hessian also keeps anchors where the
    // Hessian itself is singular (fixed points of power-type objectives)
    // well defined, matching the 0/0 := 0 convention for the power gradient.
    out.v = Vec::Zero(problem.dim());
    return out;
  }
  const Mat hess = problem.f.hessian(x);
  out.v = hess * (-d) + (1.0 / cfg.gamma) * pow_abs(nd, cfg.p - 2.0) * d;
  return out;
}

Vec fd_gradient(const CompositeProblem& problem, const Vec& x, const EnvelopeConfig& cfg,
                double h) {
  if (h <= 0.0) h = 1e-5 * (1.0 + x.norm());
  Vec grad(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    grad(i) = (hifbe(problem, xp, cfg).value - hifbe(problem, xm, cfg).value) / (2.0 * h);
  }
  return grad;
}

EnvelopeEval home(const NonsmoothOracle& g, const Vec& x, double gamma, double p,
                  const EnvelopeConfig& cfg) {
  CompositeProblem prob;
  prob.id = "home";
  prob.f = SmoothOracle::zero(g.dim);
  prob.g = g;
  return hifbe(prob, x, cfg.with(p, gamma));
}

std::pair<double, Vec> forward_value_closed_form(const SmoothOracle& f, const Vec& x,
                                                 double gamma, double p) {
  if (!(p > 1.0)) throw Error(Errc::bad_config, "order p must exceed 1");
  const Vec a = f.gradient(x);
  const double na = a.norm();
  const double fx = f.value(x);
  if (na == 0.0) return {fx, x};
  const double value =
      fx - (1.0 - 1.0 / p) * std::pow(gamma, 1.0 / (p - 1.0)) * pow_abs(na, p / (p - 1.0));
  return {value, forward_value_closed_form_point(f, x, gamma, p)};
}

}  // namespace hifb

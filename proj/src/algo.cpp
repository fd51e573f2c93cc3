#include "hifbe/algo.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "hifbe/io.hpp"

namespace hifb {

const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::residual_tol: return "residual-tol";
    case StopReason::max_iters: return "max-iters";
    case StopReason::envelope_undefined: return "envelope-undefined";
    case StopReason::stalled: return "stalled";
  }
  return "unknown";
}

Vec hifba_step(const CompositeProblem& problem, const Vec& x, const EnvelopeConfig& cfg) {
  return hifbs(problem, x, cfg).representative;
}

HifbaTrace hifba_run(const CompositeProblem& problem, const Vec& x0,
                     const EnvelopeConfig& cfg, int max_iters, double res_tol) {
  cfg.validate();
  if (max_iters < 1) throw Error(Errc::bad_config, "max_iters must be >= 1");
  if (!(res_tol > 0.0)) throw Error(Errc::bad_config, "res_tol must be positive");

  // Descent of phi along the iterates is guaranteed when the order matches
  // the declared exponent and gamma sits below 1/l_nu; monitor it there.
  const bool monitor_descent =
      std::abs(cfg.p - (1.0 + problem.f.nu)) < 1e-12 &&
      (problem.f.l_nu == 0.0 || cfg.gamma < 1.0 / problem.f.l_nu);

  HifbaTrace trace;
  Vec x = x0;
  double prev_phi = 0.0;
  int stall_count = 0;

  for (int k = 0; k < max_iters; ++k) {
    EnvelopeEval ev;
    try {
      ev = hifbe(problem, x, cfg);
    } catch (const Error& err) {
      if (err.code() == Errc::envelope_undefined) {
        trace.stop_reason = StopReason::envelope_undefined;
        return trace;
      }
      throw;
    }

    TraceRecord rec;
    rec.k = k;
    rec.x = x;
    rec.phi = composite_value(problem, x);
    rec.env = ev.value;
    rec.res_norm = ev.residual.norm();
    rec.d = ev.hifbs.representative - x;
    rec.n_minimizers = static_cast<int>(ev.hifbs.minimizers.size());
    trace.records.push_back(rec);

    if (monitor_descent && k > 0 && rec.phi > prev_phi + cfg.tol_val &&
        !trace.numerical_fault) {
      trace.numerical_fault = true;
      std::ostringstream msg;
      msg << "phi increased by " << rec.phi - prev_phi << " at iteration " << k;
      trace.fault_message = msg.str();
    }
    prev_phi = rec.phi;

    if (rec.res_norm <= res_tol) {
      trace.stop_reason = StopReason::residual_tol;
      return trace;
    }
    if (rec.d.norm() < cfg.tol_y) {
      if (++stall_count >= 10) {
        trace.stop_reason = StopReason::stalled;
        return trace;
      }
    } else {
      stall_count = 0;
    }
    x = ev.hifbs.representative;
  }
  trace.stop_reason = StopReason::max_iters;
  return trace;
}

std::optional<double> scaled_gradient_check(const CompositeProblem& problem,
                                            const TraceRecord& record,
                                            const EnvelopeConfig& cfg) {
  const double nd = record.d.norm();
  if (nd <= cfg.tol_y) return std::nullopt;  // at a kink of the power term
  if (!problem.f.has_hessian())
    throw Error(Errc::capability_missing, "scaled-gradient check needs a Hessian oracle");

  const CandidateGradient cand = candidate_gradient(problem, record.x, cfg);
  const Mat hess = problem.f.hessian(record.x);
  const Vec lhs =
      (1.0 / cfg.gamma) * pow_abs(nd, cfg.p - 2.0) * record.d - hess * record.d;
  return (lhs + cand.v).norm();
}

void write_trace_csv(std::ostream& os, const HifbaTrace& trace, int dim,
                     const std::vector<std::string>& comments) {
  for (const auto& line : comments) os << "# " << line << "\n";
  os << "k";
  if (dim == 1) {
    os << ",x";
  } else {
    for (int i = 0; i < dim; ++i) os << ",x" << i;
  }
  os << ",phi,env,res_norm";
  if (dim == 1) {
    os << ",d";
  } else {
    for (int i = 0; i < dim; ++i) os << ",d" << i;
  }
  os << "\n";
  for (const auto& rec : trace.records) {
    os << rec.k;
    for (int i = 0; i < dim; ++i) os << "," << fmt17(rec.x(i));
    os << "," << fmt17(rec.phi) << "," << fmt17(rec.env) << "," << fmt17(rec.res_norm);
    for (int i = 0; i < dim; ++i) os << "," << fmt17(rec.d(i));
    os << "\n";
  }
}

}  // namespace hifb

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hifbe/envelope.hpp"

namespace hifb {

enum class StopReason { residual_tol, max_iters, envelope_undefined, stalled };

const char* stop_reason_name(StopReason r);

struct TraceRecord {
  int k = 0;
  Vec x;
  double phi = 0.0;
  double env = 0.0;
  double res_norm = 0.0;
  Vec d;  // x_{k+1} - x_k; for the final record, the step that would be taken
  int n_minimizers = 1;
};

struct HifbaTrace {
  std::vector<TraceRecord> records;
  StopReason stop_reason = StopReason::max_iters;
  // When p = 1 + nu and gamma < 1/l_nu the phi sequence must be
  // non-increasing; any observed increase beyond tol_val is recorded here
  // rather than silently ignored.
  bool numerical_fault = false;
  std::string fault_message;
};

/// One iteration: the representative of the splitting map at x.
Vec hifba_step(const CompositeProblem& problem, const Vec& x, const EnvelopeConfig& cfg);

/// Iterate x_{k+1} = representative of hifbs(x_k) until the residual norm
/// drops to res_tol, the iteration budget runs out, the envelope becomes
/// undefined, or the step stalls (10 consecutive steps below tol_y while the
/// residual stays above res_tol).
HifbaTrace hifba_run(const CompositeProblem& problem, const Vec& x0,
                     const EnvelopeConfig& cfg, int max_iters, double res_tol);

/// Residual of the scaled-gradient identity
///   ((1/gamma)|d|^{p-2} I - hess f(x)) d = -grad env(x)
/// at one trace record, using the candidate gradient for the right-hand side.
/// The identity is algebraic, so the returned magnitude measures only solver
/// error. Returns nullopt (check skipped) when |d| <= tol_y.
std::optional<double> scaled_gradient_check(const CompositeProblem& problem,
                                            const TraceRecord& record,
                                            const EnvelopeConfig& cfg);

/// CSV trace: header `k,x,phi,env,res_norm,d` in 1D; coordinates expand to
/// x0..x{n-1}, d0..d{n-1} in higher dimension. `comments` lines are written
/// first, each prefixed with "# ".
void write_trace_csv(std::ostream& os, const HifbaTrace& trace, int dim,
                     const std::vector<std::string>& comments);

}  // namespace hifb

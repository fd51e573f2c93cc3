#include <algorithm>
#include <cmath>

#include "hifbe/algo.hpp"
#include "hifbe/analysis.hpp"
#include "hifbe/catalog.hpp"

namespace hifb {

namespace {

std::string fmtg(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

CheckReport value_report(const std::string& id, bool passed, double violation,
                         std::map<std::string, double> consts, long n, std::uint64_t seed) {
  CheckReport rep;
  rep.check_id = id;
  rep.passed = passed;
  rep.worst_violation = violation;
  rep.constants_used = std::move(consts);
  rep.n_samples = n;
  rep.seed = seed;
  return rep;
}

std::vector<CheckReport> suite_kappa(std::uint64_t seed) {
  std::vector<CheckReport> out;
  const int n = 20000;

  const double k2 = estimate_kappa_p(2.0, 1.0, n, seed);
  out.push_back(value_report("kappa/p2-exact", std::abs(k2 - 0.99) <= 1e-12,
                             std::abs(k2 - 0.99), {{"kappa", k2}, {"p", 2.0}}, n, seed));

  const double k15a = estimate_kappa_p(1.5, 1.0, n, seed);
  out.push_back(value_report("kappa/p1.5-positive", k15a > 0.0,
                             k15a > 0.0 ? 0.0 : -k15a,
                             {{"kappa", k15a}, {"p", 1.5}, {"r", 1.0}}, n, seed));

  const double k15b = estimate_kappa_p(1.5, 2.0, n, seed);
  const double rel = std::abs(k15a - k15b) / std::max(k15a, 1e-300);
  out.push_back(value_report("kappa/scale-invariance", rel <= 0.02,
                             std::max(0.0, rel - 0.02),
                             {{"kappa_r1", k15a}, {"kappa_r2", k15b}}, 2 * n, seed));

  std::map<std::string, double> consts;
  double prev = -kInf;
  double worst = 0.0;
  for (double p : {1.2, 1.4, 1.6, 1.8, 2.0}) {
    const double k = estimate_kappa_p(p, 1.0, n, seed);
    consts["kappa_p" + fmtg(p)] = k;
    worst = std::max(worst, prev - k);
    prev = k;
  }
  out.push_back(value_report("kappa/monotone-in-p", worst <= 1e-9,
                             std::max(0.0, worst), std::move(consts), 5L * n, seed));
  return out;
}

std::vector<CheckReport> suite_envelope(std::uint64_t seed) {
  std::vector<CheckReport> out;
  EnvelopeConfig base;
  const int n_grid = 201;

  for (const auto& id : {"zero", "power-q", "oscillatory", "majorant-demo", "quad-l1",
                         "quad-free1d"}) {
    const CompositeProblem prob = problem_catalog_get(id);
    const double p = 1.0 + prob.f.nu;
    std::vector<double> gammas;
    if (prob.f.l_nu == 0.0) {
      gammas = {0.5, 1.0};
    } else {
      gammas = {0.45 / prob.f.l_nu, 0.9 / prob.f.l_nu};
    }
    double lo = -2.0, hi = 2.0;
    if (prob.id == "oscillatory") {
      lo = -2.5;
      hi = 2.5;
      gammas.push_back(2.0);  // above 1/l_nu: exercises the skip path
    }
    auto reports = check_envelope_relations(prob, gammas, p, lo, hi, n_grid, base);
    for (auto& rep : reports) {
      rep.seed = seed;
      out.push_back(std::move(rep));
    }
  }
  return out;
}

std::vector<CheckReport> suite_calm(std::uint64_t seed) {
  std::vector<CheckReport> out;
  for (const auto& id :
       {"zero", "power-q", "oscillatory", "majorant-demo", "quad-l1", "quad-free",
        "quad-free1d"}) {
    const CompositeProblem prob = problem_catalog_get(id);
    if (!prob.known_minimizer) continue;
    const double p = 1.0 + prob.f.nu;
    const double m_hat = prob.calm_constant
                             ? *prob.calm_constant
                             : estimate_calm_constant(prob, *prob.known_minimizer, p,
                                                      1.5, 401);
    CheckReport rep = check_p_calm(prob, *prob.known_minimizer, m_hat, p, 1.5, 401);
    rep.seed = seed;
    out.push_back(std::move(rep));
  }

  // Stationarity inclusions at a few anchors with 1D subdifferentials.
  EnvelopeConfig cfg;
  struct Probe {
    const char* id;
    double p, gamma, x;
  };
  for (const Probe& probe : {Probe{"quad-l1", 2.0, 0.5, 0.0},
                             Probe{"quad-l1", 2.0, 0.5, 1.7},
                             Probe{"oscillatory", 1.5, 0.2, 1.1},
                             Probe{"majorant-demo", 1.5, 0.3, 0.7},
                             Probe{"power-q", 1.5, 0.2, 0.9}}) {
    const CompositeProblem prob = problem_catalog_get(probe.id);
    CheckReport rep =
        check_stationarity_inclusion(prob, vec1(probe.x), cfg.with(probe.p, probe.gamma));
    rep.seed = seed;
    out.push_back(std::move(rep));
  }

  // Shrinking neighborhoods around the calm point of the power objective.
  {
    const CompositeProblem prob = problem_catalog_get("power-q");
    EnvelopeConfig scfg;
    scfg.p = 1.5;
    scfg.gamma = 0.2;
    CheckReport rep = check_uniform_shrinkage(prob, scfg, *prob.known_minimizer, 0.1,
                                              {0.5, 0.25, 0.1, 0.05, 0.02, 0.01}, 40, seed);
    out.push_back(std::move(rep));
  }
  return out;
}

std::vector<CheckReport> suite_regularity(std::uint64_t seed) {
  std::vector<CheckReport> out;
  struct Probe {
    const char* id;
    double p, gamma, r;
  };
  for (const Probe& probe : {Probe{"oscillatory", 1.5, 0.2, 2.0},
                             Probe{"power-q", 1.5, 0.2, 2.0},
                             Probe{"quad-l1", 2.0, 0.4, 1.0},
                             Probe{"quad-free1d", 2.0, 0.4, 1.0}}) {
    const CompositeProblem prob = problem_catalog_get(probe.id);
    EnvelopeConfig cfg;
    cfg.p = probe.p;
    cfg.gamma = probe.gamma;
    auto reports = check_envelope_regularity(prob, cfg, probe.r, 2000, seed);
    for (auto& rep : reports) out.push_back(std::move(rep));
  }
  return out;
}

std::vector<CheckReport> suite_majorant(std::uint64_t seed) {
  auto reports = check_majorant("majorant-demo", {0.5, 1.0, 0.2}, 0.5, -2.0, 3.0, 1001);
  for (auto& rep : reports) rep.seed = seed;
  return reports;
}

std::vector<CheckReport> suite_algo(std::uint64_t seed) {
  std::vector<CheckReport> out;

  {  // geometric contraction on the 1D quadratic
    const CompositeProblem prob = problem_catalog_get("quad-free1d");
    EnvelopeConfig cfg;
    cfg.p = 2.0;
    cfg.gamma = 0.5;
    const HifbaTrace trace = hifba_run(prob, vec1(2.0), cfg, 100, 1e-6);
    const bool ok = trace.stop_reason == StopReason::residual_tol &&
                    trace.records.size() >= 15 && trace.records.size() <= 30 &&
                    !trace.numerical_fault;
    out.push_back(value_report("algo/quad-free1d/contraction", ok,
                               ok ? 0.0 : 1.0,
                               {{"iters", static_cast<double>(trace.records.size())},
                                {"gamma", cfg.gamma}},
                               static_cast<long>(trace.records.size()), seed));
  }

  {  // immediate fixed point at the calm origin of the power objective
    const CompositeProblem prob = problem_catalog_get("power-q");
    EnvelopeConfig cfg;
    cfg.p = 1.5;
    cfg.gamma = 0.1;
    const HifbaTrace trace = hifba_run(prob, vec1(0.0), cfg, 10, 1e-8);
    const bool ok = trace.stop_reason == StopReason::residual_tol &&
                    trace.records.size() == 1 && trace.records[0].res_norm <= 1e-8;
    out.push_back(value_report("algo/power-q/fixed-point", ok,
                               ok ? 0.0 : trace.records.empty()
                                              ? 1.0
                                              : trace.records.back().res_norm,
                               {{"gamma", cfg.gamma}},
                               static_cast<long>(trace.records.size()), seed));
  }

  {  // monotone descent plus the scaled-gradient identity along the way
    const CompositeProblem prob = problem_catalog_get("oscillatory");
    EnvelopeConfig cfg;
    cfg.p = 1.5;
    cfg.gamma = 0.2;
    double worst_descent = 0.0;
    double worst_identity = 0.0;
    long n_checked = 0;
    bool terminated = true;
    for (double x0 : {2.0, -1.3, 0.7}) {
      const HifbaTrace trace = hifba_run(prob, vec1(x0), cfg, 400, 1e-6);
      terminated = terminated && trace.stop_reason == StopReason::residual_tol;
      for (size_t i = 1; i < trace.records.size(); ++i)
        worst_descent = std::max(
            worst_descent, trace.records[i].phi - trace.records[i - 1].phi);
      for (const auto& rec : trace.records) {
        const auto res = scaled_gradient_check(prob, rec, cfg);
        if (res) {
          worst_identity = std::max(worst_identity, *res);
          ++n_checked;
        }
      }
    }
    out.push_back(value_report("algo/oscillatory/descent",
                               terminated && worst_descent <= 1e-10,
                               std::max(0.0, worst_descent),
                               {{"gamma", cfg.gamma}, {"p", cfg.p}}, 3, seed));
    out.push_back(value_report("algo/oscillatory/scaled-gradient",
                               worst_identity <= 100.0 * EnvelopeConfig{}.tol_y,
                               worst_identity, {{"gamma", cfg.gamma}}, n_checked, seed));
  }
  return out;
}

}  // namespace

bool suite_known(const std::string& suite) {
  static const std::vector<std::string> names = {"all",        "envelope", "calm",
                                                 "regularity", "majorant", "kappa",
                                                 "algo"};
  return std::find(names.begin(), names.end(), suite) != names.end();
}

std::vector<CheckReport> run_suite(const std::string& suite, std::uint64_t seed,
                                   const std::string& problem_filter) {
  if (!suite_known(suite))
    throw Error(Errc::bad_config, "unknown suite '" + suite + "'");

  std::vector<CheckReport> out;
  auto append = [&out](std::vector<CheckReport> reports) {
    for (auto& rep : reports) out.push_back(std::move(rep));
  };
  if (suite == "envelope" || suite == "all") append(suite_envelope(seed));
  if (suite == "calm" || suite == "all") append(suite_calm(seed));
  if (suite == "regularity" || suite == "all") append(suite_regularity(seed));
  if (suite == "majorant" || suite == "all") append(suite_majorant(seed));
  if (suite == "kappa" || suite == "all") append(suite_kappa(seed));
  if (suite == "algo" || suite == "all") append(suite_algo(seed));

  if (!problem_filter.empty()) {
    const std::string token = "/" + problem_filter + "/";
    std::vector<CheckReport> filtered;
    for (auto& rep : out) {
      if (rep.check_id.find(token) != std::string::npos) filtered.push_back(std::move(rep));
    }
    return filtered;
  }
  return out;
}

}  // namespace hifb

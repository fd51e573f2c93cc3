#include "hifbe/inner.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "detail.hpp"

namespace hifb {

double soft_threshold(double u, double t) {
  if (t < 0.0) throw Error(Errc::bad_config, "negative soft-threshold");
  return sgn(u) * std::max(std::abs(u) - t, 0.0);
}

void EnvelopeConfig::validate() const {
  if (!(p > 1.0)) throw Error(Errc::bad_config, "order p must exceed 1");
  if (!(gamma > 0.0)) throw Error(Errc::bad_config, "gamma must be positive");
  if (grid_points < 101 || grid_points % 2 == 0)
    throw Error(Errc::bad_config, "grid_points must be odd and >= 101");
  if (!(tol_y > 0.0 && tol_val > 0.0 && tol_tie > 0.0))
    throw Error(Errc::bad_config, "tolerances must be positive");
  if (multistarts < 1 || max_inner_iters < 1)
    throw Error(Errc::bad_config, "multistarts and max_inner_iters must be >= 1");
}

namespace {

// Model of the subproblem at a fixed anchor: the affine part of f is frozen
// once, so per-candidate evaluation touches only g and the power term.
struct Model {
  const CompositeProblem& problem;
  const EnvelopeConfig& cfg;
  Vec x;
  double fx;
  Vec grad_fx;
  double reg_coef;  // 1/(p*gamma)
  mutable long n_evals = 0;

  Model(const CompositeProblem& prob, const Vec& anchor, const EnvelopeConfig& c)
      : problem(prob), cfg(c), x(anchor) {
    if (anchor.size() != prob.dim())
      throw Error(Errc::domain_error, "anchor dimension mismatch");
    fx = prob.f.value(anchor);
    grad_fx = prob.f.gradient(anchor);
    if (!std::isfinite(fx) || !grad_fx.allFinite())
      throw Error(Errc::oracle_fault, "smooth oracle returned non-finite data");
    reg_coef = 1.0 / (c.p * c.gamma);
  }

  double operator()(const Vec& y) const {
    ++n_evals;
    const double gy = problem.g.value(y);
    if (gy == kInf) return kInf;
    if (std::isnan(gy)) throw Error(Errc::oracle_fault, "nonsmooth oracle returned NaN");
    return fx + grad_fx.dot(y - x) + gy + reg_coef * pow_abs((x - y).norm(), cfg.p);
  }

  double eval1d(double y) const { return (*this)(vec1(y)); }
};

// Norm-then-lexicographic order; norms within tol count as tied so that a
// symmetric pair refined on different grids picks the same side.
bool rep_less(const Vec& a, const Vec& b, double tol) {
  const double na = a.norm(), nb = b.norm();
  if (na < nb - tol) return true;
  if (nb < na - tol) return false;
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                      b.data() + b.size());
}

struct Candidate {
  Vec y;
  double val;
};

SubproblemSolution assemble(std::vector<Candidate> cands, const EnvelopeConfig& cfg,
                            bool certified, long n_evals) {
  if (cands.empty()) throw Error(Errc::bracket_too_small, "no finite candidate found");
  double best = kInf;
  for (const auto& c : cands) best = std::min(best, c.val);

  // Drop whatever exceeds the tie window, then merge near-duplicates.
  std::vector<Candidate> kept;
  for (auto& c : cands) {
    if (c.val > best + cfg.tol_tie) continue;
    bool dup = false;
    for (auto& k : kept) {
      if ((k.y - c.y).norm() <= 10.0 * cfg.tol_y) {
        if (c.val < k.val) k = c;
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(std::move(c));
  }
  std::sort(kept.begin(), kept.end(), [&](const Candidate& a, const Candidate& b) {
    return rep_less(a.y, b.y, cfg.tol_y);
  });

  SubproblemSolution sol;
  sol.value = best;
  sol.certified = certified;
  sol.n_evals = n_evals;
  for (const auto& k : kept) sol.minimizers.push_back(k.y);

  // Representative: tightest ties only, so its model value matches the
  // reported optimum to tol_val even when looser basins are listed.
  bool have_rep = false;
  for (const auto& k : kept) {
    if (k.val <= best + cfg.tol_val) {
      if (!have_rep || rep_less(k.y, sol.representative, cfg.tol_y)) {
        sol.representative = k.y;
        have_rep = true;
      }
    }
  }
  if (!have_rep) sol.representative = kept.front().y;
  return sol;
}

// Golden-section over [lo, hi]; tracks the best probed point so a nonsmooth
// or flat valley still returns the incumbent.
Candidate golden_refine(const Model& model, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = model.eval1d(c);
  double fd = model.eval1d(d);
  Candidate best{vec1(fc <= fd ? c : d), std::min(fc, fd)};
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = model.eval1d(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = model.eval1d(d);
    }
    const double t = fc <= fd ? c : d;
    const double ft = std::min(fc, fd);
    if (ft < best.val) best = {vec1(t), ft};
  }
  const double mid = 0.5 * (a + b);
  const double fmid = model.eval1d(mid);
  if (fmid < best.val) best = {vec1(mid), fmid};
  return best;
}

SubproblemSolution solve_grid_1d(const CompositeProblem& problem, const Vec& x,
                                 const EnvelopeConfig& cfg) {
  const Model model(problem, x, cfg);
  double radius = cfg.bracket_radius > 0.0 ? cfg.bracket_radius
                                           : 10.0 * (1.0 + std::abs(x(0)));
  const int n = cfg.grid_points;

  for (int attempt = 0; attempt <= 6; ++attempt, radius *= 2.0) {
    const double lo = x(0) - radius;
    const double step = 2.0 * radius / (n - 1);
    std::vector<double> vals(n);
    int best_idx = -1;
    double best_val = kInf;
    for (int i = 0; i < n; ++i) {
      vals[i] = model.eval1d(lo + i * step);
      if (vals[i] < best_val) {
        best_val = vals[i];
        best_idx = i;
      }
    }
    if (best_idx < 0) continue;  // everything +inf: widen
    if (best_val < -1.0 / cfg.tol_val)
      throw Error(Errc::prox_unbounded, "model value diverges below -1/tol_val",
                  vec1(lo + best_idx * step));
    if (best_idx == 0 || best_idx == n - 1) continue;  // boundary hit: widen

    // Refine every interior local basin within the tie window. The location
    // target goes well below tol_y: at a kink minimizer the value error is
    // slope * location error, and values must be accurate to tol_val.
    const double refine_tol = std::min(cfg.tol_y, 0.02 * cfg.tol_val);
    std::vector<Candidate> cands;
    for (int i = 1; i + 1 < n; ++i) {
      if (vals[i] > best_val + cfg.tol_tie) continue;
      if (vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1]) {
        cands.push_back(
            golden_refine(model, lo + (i - 1) * step, lo + (i + 1) * step, refine_tol));
      }
    }
    if (cands.empty())
      cands.push_back(golden_refine(model, lo + (best_idx - 1) * step,
                                    lo + (best_idx + 1) * step, refine_tol));
    return assemble(std::move(cands), cfg, /*certified=*/true, model.n_evals);
  }
  throw Error(Errc::bracket_too_small,
              "minimizer kept hitting the bracket boundary; enlarge bracket_radius");
}

std::uint64_t mix_seed(const Vec& x, double p, double gamma) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  auto fold = [&h](double v) {
    h ^= std::bit_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  for (Eigen::Index i = 0; i < x.size(); ++i) fold(x(i));
  fold(p);
  fold(gamma);
  return h;
}

// Proximal gradient on the model: smooth part s(y) = <a, y-x> + reg|x-y|^p,
// nonsmooth part g via its analytic prox. Backtracking handles the
// non-Lipschitz power gradient for p < 2.
Candidate prox_gradient_local(const Model& model, const Vec& y0) {
  const auto& cfg = model.cfg;
  const auto& g = model.problem.g;
  Vec y = y0;
  double fy = model(y);
  double t = cfg.gamma;
  for (int it = 0; it < cfg.max_inner_iters; ++it) {
    const Vec diff = y - model.x;
    const double nd = diff.norm();
    Vec grad_s = model.grad_fx;
    if (nd > 0.0)
      grad_s += (1.0 / cfg.gamma) * pow_abs(nd, cfg.p - 2.0) * diff;
    bool moved = false;
    for (int bt = 0; bt < 30; ++bt) {
      const auto props = g.analytic_prox(y - t * grad_s, t, 2.0);
      if (props.empty()) break;
      const Vec cand = props.front();
      const double fc = model(cand);
      if (fc < fy - 1e-14) {
        y = cand;
        fy = fc;
        moved = true;
        t *= 1.3;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;
  }
  return {y, fy};
}

Candidate compass_local(const Model& model, const Vec& y0) {
  const auto& cfg = model.cfg;
  Vec y = y0;
  double fy = model(y);
  double step = std::max(1.0, 0.1 * (1.0 + y.norm()));
  const int dim = static_cast<int>(y.size());
  for (int it = 0; it < cfg.max_inner_iters && step > cfg.tol_y; ++it) {
    bool improved = false;
    for (int i = 0; i < dim; ++i) {
      for (double s : {step, -step}) {
        Vec cand = y;
        cand(i) += s;
        const double fc = model(cand);
        if (fc < fy - 1e-14) {
          y = cand;
          fy = fc;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return {y, fy};
}

SubproblemSolution solve_multistart(const CompositeProblem& problem, const Vec& x,
                                    const EnvelopeConfig& cfg) {
  const Model model(problem, x, cfg);
  std::mt19937_64 rng(mix_seed(x, cfg.p, cfg.gamma));
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<Vec> starts;
  starts.push_back(x);
  starts.push_back(forward_value_closed_form_point(problem.f, x, cfg.gamma, cfg.p));
  while (static_cast<int>(starts.size()) < cfg.multistarts) {
    Vec s(x.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = gauss(rng);
    starts.push_back(x + (1.0 + x.norm()) * s);
  }

  const bool use_prox = problem.g.has_prox() && problem.g.prox_supports(2.0);
  std::vector<Candidate> cands;
  for (const auto& s : starts) {
    Candidate c = use_prox ? prox_gradient_local(model, s) : compass_local(model, s);
    if (c.val < -1.0 / cfg.tol_val)
      throw Error(Errc::prox_unbounded, "model value diverges below -1/tol_val", c.y);
    if (std::isfinite(c.val)) cands.push_back(std::move(c));
  }
  return assemble(std::move(cands), cfg, /*certified=*/false, model.n_evals);
}

}  // namespace

Vec forward_value_closed_form_point(const SmoothOracle& f, const Vec& x, double gamma,
                                    double p) {
  const Vec a = f.gradient(x);
  const double na = a.norm();
  if (na == 0.0) return x;
  const double step = std::pow(gamma, 1.0 / (p - 1.0)) * pow_abs(na, (2.0 - p) / (p - 1.0));
  return x - step * a;
}

double model_value(const CompositeProblem& problem, const Vec& x, const Vec& y,
                   const EnvelopeConfig& cfg) {
  cfg.validate();
  if (y.size() != problem.dim())
    throw Error(Errc::domain_error, "candidate dimension mismatch");
  const Model model(problem, x, cfg);
  return model(y);
}

std::optional<AnalyticSolver> prox_registry_lookup(const CompositeProblem& problem,
                                                   double p) {
  const SmoothOracle& f = problem.f;

  if (problem.g.is_zero) {
    return AnalyticSolver([f, p](const Vec& x, double gamma) {
      return std::vector<Vec>{forward_value_closed_form_point(f, x, gamma, p)};
    });
  }

  if (problem.g.indicator_interval && problem.dim() == 1) {
    // The 1D model is convex in y, so the constrained minimizer is the clamp
    // of the unconstrained one.
    const auto [lo, hi] = *problem.g.indicator_interval;
    return AnalyticSolver([f, p, lo, hi](const Vec& x, double gamma) {
      const Vec y0 = forward_value_closed_form_point(f, x, gamma, p);
      return std::vector<Vec>{vec1(std::min(std::max(y0(0), lo), hi))};
    });
  }

  if (p == 2.0 && problem.g.prox_supports(2.0)) {
    const NonsmoothOracle g = problem.g;
    return AnalyticSolver([f, g](const Vec& x, double gamma) {
      const Vec forward = x - gamma * f.gradient(x);
      return g.analytic_prox(forward, gamma, 2.0);
    });
  }

  // The prox composition is specific to p = 2; for other orders there is no
  // valid shortcut through the proximal map of g.
  return std::nullopt;
}

SubproblemSolution solve_subproblem(const CompositeProblem& problem, const Vec& x,
                                    const EnvelopeConfig& cfg) {
  cfg.validate();
  if (x.size() != problem.dim())
    throw Error(Errc::domain_error, "anchor dimension mismatch");

  if (cfg.allow_analytic) {
    if (auto solver = prox_registry_lookup(problem, cfg.p)) {
      const Model model(problem, x, cfg);
      std::vector<Candidate> cands;
      for (auto& y : (*solver)(x, cfg.gamma)) cands.push_back({y, model(y)});
      return assemble(std::move(cands), cfg, /*certified=*/true, model.n_evals);
    }
  }
  if (problem.dim() == 1) return solve_grid_1d(problem, x, cfg);
  return solve_multistart(problem, x, cfg);
}

}  // namespace hifb

#include "hifbe/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "hifbe/algo.hpp"
#include "hifbe/catalog.hpp"
#include "hifbe/holder.hpp"

namespace hifb {

namespace {

constexpr double kStrictnessFloor = 1e-12;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t sub_seed(std::uint64_t seed, const std::string& check_id) {
  return seed ^ fnv1a(check_id);
}

std::string fmt_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

Vec sample_ball(const Vec& center, double radius, std::mt19937_64& rng) {
  const int dim = static_cast<int>(center.size());
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  if (dim == 1) return vec1(center(0) + radius * unit(rng));
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec dir(dim);
  for (int i = 0; i < dim; ++i) dir(i) = gauss(rng);
  const double nrm = dir.norm();
  if (nrm == 0.0) return center;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double rad = radius * std::pow(u01(rng), 1.0 / dim);
  return center + (rad / nrm) * dir;
}

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return 0.0;
  return (n * sxy - sx * sy) / denom;
}

double subgradient_point(const NonsmoothOracle& g, double x) {
  const Interval iv = g.subdiff_1d(x);
  if (iv.width() > 1e-9)
    throw Error(Errc::domain_error, "objective not differentiable at the anchor");
  return 0.5 * (iv.lo + iv.hi);
}

}  // namespace

nlohmann::ordered_json to_json(const CheckReport& report) {
  nlohmann::ordered_json j;
  j["check_id"] = report.check_id;
  j["passed"] = report.passed;
  j["n_samples"] = report.n_samples;
  j["worst_violation"] = report.worst_violation;
  if (report.witness) {
    nlohmann::ordered_json w = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < report.witness->size(); ++i)
      w.push_back((*report.witness)(i));
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  nlohmann::ordered_json consts;
  for (const auto& [k, v] : report.constants_used) consts[k] = v;
  j["constants_used"] = consts;
  j["seed"] = report.seed;
  if (report.skipped) j["status"] = "skipped";
  if (!report.note.empty()) j["note"] = report.note;
  return j;
}

double estimate_kappa_p(double p, double r, int n_samples, std::uint64_t seed, int dim) {
  if (!(p > 1.0 && p <= 2.0))
    throw Error(Errc::bad_config, "kappa estimate needs p in (1,2]");
  if (!(r > 0.0) || n_samples < 10000 || dim < 1)
    throw Error(Errc::bad_config, "kappa estimate needs r > 0 and >= 1e4 samples");

  std::mt19937_64 rng(seed);
  const Vec origin = Vec::Zero(dim);
  const double r_pow = pow_abs(r, p - 2.0);

  auto power_grad = [p](const Vec& v) -> Vec {
    return pow_abs(v.norm(), p - 2.0) * v;
  };
  auto ratio = [&](const Vec& a, const Vec& b) -> double {
    const double d2 = (a - b).squaredNorm();
    if (d2 == 0.0) return kInf;  // degenerate pair, skipped
    return (power_grad(a) - power_grad(b)).dot(a - b) / (r_pow * d2);
  };

  double best = kInf;
  Vec best_a = origin, best_b = origin;
  for (int i = 0; i < n_samples; ++i) {
    const Vec a = sample_ball(origin, r, rng);
    const Vec b = sample_ball(origin, r, rng);
    const double q = ratio(a, b);
    if (q <= 0.0)
      throw Error(Errc::lemma_violation, "power-gradient monotonicity ratio <= 0");
    if (q < best) {
      best = q;
      best_a = a;
      best_b = b;
    }
  }
  // Local refinement around the worst pair.
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int round = 0; round < 8; ++round) {
    const double sigma = r * std::pow(2.0, -round - 2);
    for (int i = 0; i < 200; ++i) {
      Vec a = best_a, b = best_b;
      for (int k = 0; k < dim; ++k) {
        a(k) += sigma * gauss(rng);
        b(k) += sigma * gauss(rng);
      }
      if (a.norm() > r) a *= r / a.norm();
      if (b.norm() > r) b *= r / b.norm();
      const double q = ratio(a, b);
      if (q <= 0.0)
        throw Error(Errc::lemma_violation, "power-gradient monotonicity ratio <= 0");
      if (q < best) {
        best = q;
        best_a = a;
        best_b = b;
      }
    }
  }
  return 0.99 * best;
}

double lower_bound_constant(const CompositeProblem& problem, double r, double gamma_hat,
                            double p, int grid_x, int grid_y) {
  if (problem.dim() != 1)
    throw Error(Errc::capability_missing, "lower-bound grid search is 1D only");
  if (!(gamma_hat > 0.0) || !(p > 1.0) || !(r > 0.0))
    throw Error(Errc::bad_config, "invalid lower-bound parameters");
  if (grid_x % 2 == 0) ++grid_x;
  if (grid_y % 2 == 0) ++grid_y;

  const double c0 = std::pow(2.0, p - 1.0) / (p * gamma_hat);
  double y_range = std::max(2.0 * r, 2.0);

  for (int round = 0; round < 48; ++round, y_range *= 2.0) {
    double best = kInf;
    double best_y = 0.0;
    for (int ix = 0; ix < grid_x; ++ix) {
      const double x = -r + 2.0 * r * ix / (grid_x - 1);
      const Vec xv = vec1(x);
      const double fx = problem.f.value(xv);
      const double ax = problem.f.gradient(xv)(0);
      for (int iy = 0; iy < grid_y; ++iy) {
        const double y = -y_range + 2.0 * y_range * iy / (grid_y - 1);
        const double gy = problem.g.value(vec1(y));
        if (gy == kInf) continue;
        const double v = fx + ax * (y - x) + gy + c0 * pow_abs(y, p);
        if (v < best) {
          best = v;
          best_y = y;
        }
      }
    }
    if (best == kInf)
      throw Error(Errc::domain_error, "g is +inf on the whole search grid");
    if (best < -1e12)
      throw Error(Errc::prox_bound_violation,
                  "l(x,y) + c0|y|^p is unbounded below: g beats the power growth",
                  vec1(best_y));
    const double spacing = 2.0 * y_range / (grid_y - 1);
    if (std::abs(best_y) < y_range - 2.0 * spacing)
      return best - 0.01 * std::abs(best) - 1e-12;
  }
  throw Error(Errc::prox_bound_violation,
              "lower-bound minimizer keeps escaping to the boundary");
}

TauBound tau_bound(double r, double gamma, double gamma_hat, double l_nu, double p,
                   double phi_center, double c1, double gamma_max) {
  if (!(r > 0.0 && p > 1.0 && gamma_hat > 0.0 && l_nu >= 0.0))
    throw Error(Errc::bad_config, "invalid tau parameters");
  const double c0 = std::pow(2.0, p - 1.0) / (p * gamma_hat);
  auto eval = [&](double gam) {
    if (!(gam > 0.0)) throw Error(Errc::bad_config, "gamma must be positive");
    const double denom = std::pow(2.0, 1.0 - p) - c0 * p * gam;
    if (denom <= 0.0)
      throw Error(Errc::gamma_too_large,
                  "gamma must stay below 4^{1-p} * gamma_hat for the containment bound");
    const double num =
        (3.0 * gam * l_nu + 2.0) * std::pow(r, p) + p * gam * (phi_center - c1);
    return std::pow(std::max(num, 0.0) / denom, 1.0 / p);
  };
  TauBound out;
  out.tau = eval(gamma);
  out.tau_hat = eval(gamma_max);
  return out;
}

double estimate_calm_constant(const CompositeProblem& problem, const Vec& xbar, double p,
                              double radius, int n_grid) {
  const double phi_bar = composite_value(problem, xbar);
  double worst = 0.0;
  std::mt19937_64 rng(fnv1a(problem.id) ^ 0xca1fULL);
  for (int i = 0; i < n_grid; ++i) {
    Vec x;
    if (problem.dim() == 1) {
      const double t = -radius + 2.0 * radius * i / (n_grid - 1);
      x = vec1(xbar(0) + t);
    } else {
      x = sample_ball(xbar, radius, rng);
    }
    const double dist = (x - xbar).norm();
    if (dist < 1e-9) continue;
    const double phi = composite_value(problem, x);
    if (phi == kInf) continue;
    worst = std::max(worst, (phi_bar - phi) / pow_abs(dist, p));
  }
  return std::max(1.05 * worst, 1e-3);
}

CheckReport check_p_calm(const CompositeProblem& problem, const Vec& xbar, double M,
                         double p, double radius, int n_grid) {
  CheckReport rep;
  rep.check_id = "calm/" + problem.id + "/p=" + fmt_num(p);
  rep.n_samples = n_grid;
  rep.constants_used["M"] = M;
  rep.constants_used["p"] = p;
  rep.constants_used["floor"] = kStrictnessFloor;
  rep.constants_used["l_nu"] = problem.f.l_nu;

  const double phi_bar = composite_value(problem, xbar);
  if (phi_bar == kInf)
    throw Error(Errc::domain_error, "calm candidate lies outside dom phi");

  std::mt19937_64 rng(fnv1a(rep.check_id));
  double worst = -kInf;
  Vec witness;
  for (int i = 0; i < n_grid; ++i) {
    Vec x;
    if (problem.dim() == 1) {
      const double t = -radius + 2.0 * radius * i / (n_grid - 1);
      x = vec1(xbar(0) + t);
    } else {
      x = sample_ball(xbar, radius, rng);
    }
    const double dist = (x - xbar).norm();
    if (dist < 1e-9) continue;
    const double phi = composite_value(problem, x);
    if (phi == kInf) continue;
    // phi(x) + M|x-xbar|^p must exceed phi(xbar) by at least the floor.
    const double viol = phi_bar - phi - M * pow_abs(dist, p) + kStrictnessFloor;
    if (viol > worst) {
      worst = viol;
      witness = x;
    }
  }
  const bool grid_ok = worst <= 0.0;

  // Fixed-point consequence at gamma = min{1/(2 l_nu), 1/(2pM)}.
  double gamma_fix = 1.0 / (2.0 * p * M);
  if (problem.f.l_nu > 0.0) gamma_fix = std::min(gamma_fix, 1.0 / (2.0 * problem.f.l_nu));
  rep.constants_used["gamma_fixed_point"] = gamma_fix;

  EnvelopeConfig cfg;
  cfg.p = p;
  cfg.gamma = gamma_fix;
  const SubproblemSolution sol = hifbs(problem, xbar, cfg);
  const double fix_err = (sol.representative - xbar).norm();
  const bool fixed_ok = fix_err <= 10.0 * cfg.tol_y && sol.single_valued();
  rep.constants_used["fixed_point_error"] = fix_err;

  rep.passed = grid_ok && fixed_ok;
  rep.worst_violation = std::max({0.0, worst, fixed_ok ? 0.0 : fix_err});
  if (!rep.passed && witness.size() > 0) rep.witness = witness;
  return rep;
}

CheckReport check_stationarity_inclusion(const CompositeProblem& problem, const Vec& x,
                                         const EnvelopeConfig& cfg) {
  if (problem.dim() != 1 || !problem.g.has_subdiff())
    throw Error(Errc::capability_missing,
                "stationarity inclusion needs dim 1 and a 1D subdifferential");
  constexpr double kInflate = 1e-6;

  CheckReport rep;
  rep.check_id = "stationarity/" + problem.id + "/x=" + fmt_num(x(0));
  rep.constants_used["gamma"] = cfg.gamma;
  rep.constants_used["p"] = cfg.p;
  rep.constants_used["inflation"] = kInflate;

  const SubproblemSolution sol = hifbs(problem, x, cfg);
  const double grad_fx = problem.f.gradient(x)(0);
  double worst = 0.0;
  Vec witness;
  for (const auto& y : sol.minimizers) {
    const double d = x(0) - y(0);
    const double s = pow_abs(d, cfg.p - 2.0) * d / cfg.gamma - grad_fx;
    const Interval iv = problem.g.subdiff_1d(y(0));
    const double dist = std::max({0.0, iv.lo - s, s - iv.hi});
    if (dist > worst) {
      worst = dist;
      witness = y;
    }
  }
  rep.n_samples = static_cast<long>(sol.minimizers.size());

  // At a known minimizer the first-order condition -grad f in subdiff g holds.
  if (problem.known_minimizer) {
    const double xb = (*problem.known_minimizer)(0);
    const double target = -problem.f.gradient(*problem.known_minimizer)(0);
    const Interval iv = problem.g.subdiff_1d(xb);
    const double dist = std::max({0.0, iv.lo - target, target - iv.hi});
    if (dist > worst) {
      worst = dist;
      witness = *problem.known_minimizer;
    }
    ++rep.n_samples;
  }

  rep.worst_violation = std::max(0.0, worst - kInflate);
  rep.passed = rep.worst_violation == 0.0;
  if (!rep.passed) rep.witness = witness;
  return rep;
}

std::vector<CheckReport> check_envelope_regularity(const CompositeProblem& problem,
                                                   const EnvelopeConfig& cfg, double r,
                                                   int n_pairs, std::uint64_t seed) {
  std::vector<CheckReport> out;
  const double nu = problem.f.nu;
  const double l_nu = problem.f.l_nu;
  const bool order_matched = std::abs(cfg.p - (1.0 + nu)) < 1e-12;

  // (i) envelope Holder bound with the computed modulus.
  {
    CheckReport rep;
    rep.check_id = "regularity/" + problem.id + "/envelope-holder";
    rep.seed = sub_seed(seed, rep.check_id);
    if (problem.dim() != 1) {
      rep.skipped = true;
      rep.note = "certified envelope values need dim 1";
    } else if (!order_matched) {
      rep.skipped = true;
      rep.note = "order p does not match 1 + nu";
    } else if (l_nu > 0.0 && cfg.gamma >= 1.0 / l_nu) {
      rep.skipped = true;
      rep.note = "gamma not below 1/l_nu";
    } else {
      const double gamma_hat =
          std::max(1.0, 2.0 * cfg.gamma * std::pow(4.0, cfg.p - 1.0));
      const double c1 = lower_bound_constant(problem, r, gamma_hat, cfg.p);
      const double phi0 = composite_value(problem, Vec::Zero(1));
      const TauBound tb = tau_bound(r, cfg.gamma, gamma_hat, l_nu, cfg.p, phi0, c1,
                                    cfg.gamma);
      const double two_r = 2.0 * r;
      const double l_env = l_nu * (3.0 * r + tb.tau) +
                           pow_abs(two_r, cfg.p - nu) / (cfg.p * cfg.gamma) +
                           pow_abs(3.0 * r + tb.tau, cfg.p - 1.0) *
                               pow_abs(two_r, 1.0 - nu) / cfg.gamma;
      rep.constants_used = {{"tau", tb.tau},
                            {"L_env", l_env},
                            {"l_nu", l_nu},
                            {"gamma", cfg.gamma},
                            {"gamma_hat", gamma_hat},
                            {"c1", c1},
                            {"p", cfg.p},
                            {"nu", nu},
                            {"r", r}};

      std::mt19937_64 rng(rep.seed);
      const int pool_size = std::max(64, std::min(2000, n_pairs / 5));
      std::vector<double> xs(pool_size), env(pool_size);
      for (int i = 0; i < pool_size; ++i) {
        xs[i] = sample_ball(Vec::Zero(1), r, rng)(0);
        env[i] = hifbe(problem, vec1(xs[i]), cfg).value;
      }
      std::uniform_int_distribution<int> pick(0, pool_size - 1);
      double worst = 0.0;
      Vec witness;
      for (int i = 0; i < n_pairs; ++i) {
        const int a = pick(rng);
        const int b = pick(rng);
        if (a == b) continue;
        const double viol = std::abs(env[a] - env[b]) -
                            l_env * pow_abs(xs[a] - xs[b], nu);
        if (viol > worst) {
          worst = viol;
          witness = Vec(2);
          witness << xs[a], xs[b];
        }
      }
      rep.n_samples = n_pairs;
      rep.worst_violation = std::max(0.0, worst);
      rep.passed = worst <= 0.0;
      if (!rep.passed) rep.witness = witness;
    }
    out.push_back(std::move(rep));
  }

  // Shared local-sampling machinery for the two exponent fits.
  auto exponent_fit = [&](const std::string& id, double target_exponent,
                          auto&& map_at) -> CheckReport {
    CheckReport rep;
    rep.check_id = id;
    rep.seed = sub_seed(seed, id);
    if (!problem.known_minimizer) {
      rep.skipped = true;
      rep.note = "no calm point available";
      return rep;
    }
    const Vec xbar = *problem.known_minimizer;
    const double m_hat = problem.calm_constant
                             ? *problem.calm_constant
                             : estimate_calm_constant(problem, xbar, cfg.p, 1.0, 201);
    double gamma_loc = cfg.gamma;
    gamma_loc = std::min(gamma_loc, 0.9 * std::pow(2.0, -cfg.p) / (m_hat * cfg.p));
    if (l_nu > 0.0) gamma_loc = std::min(gamma_loc, 0.9 / (2.0 * l_nu));
    EnvelopeConfig local_cfg = cfg;
    local_cfg.gamma = gamma_loc;
    rep.constants_used["gamma"] = gamma_loc;
    rep.constants_used["M"] = m_hat;
    rep.constants_used["target_exponent"] = target_exponent;

    const double r_loc = 0.05;
    std::mt19937_64 rng(rep.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> lx, ly;
    double c_fit = 0.0;
    const int n_fit = std::max(40, n_pairs / 100);
    for (int i = 0; i < n_fit; ++i) {
      const double u = 2.5 * i / (n_fit - 1);  // separations r_loc .. r_loc*1e-2.5
      const double dist = r_loc * std::pow(10.0, -u);
      const Vec x1 = vec1(xbar(0) + 0.5 * r_loc * unit(rng));
      const Vec x2 = vec1(x1(0) + (unit(rng) > 0 ? dist : -dist));
      std::optional<Vec> t1 = map_at(x1, local_cfg);
      std::optional<Vec> t2 = map_at(x2, local_cfg);
      if (!t1 || !t2) continue;
      const double dt = (*t1 - *t2).norm();
      const double dx = (x1 - x2).norm();
      if (dt <= 10.0 * local_cfg.tol_y || dx == 0.0) continue;
      lx.push_back(std::log(dx));
      ly.push_back(std::log(dt));
      c_fit = std::max(c_fit, dt / pow_abs(dx, target_exponent));
    }
    rep.n_samples = static_cast<long>(lx.size());
    if (lx.size() < 10) {
      // The map is locally constant (every difference below solver noise):
      // any Holder exponent holds trivially.
      rep.passed = true;
      rep.note = "map locally constant at solver resolution";
      return rep;
    }
    const double slope = fit_slope(lx, ly);
    rep.constants_used["slope"] = slope;
    rep.constants_used["fitted_constant"] = c_fit;
    rep.worst_violation = std::max(0.0, target_exponent - 0.15 - slope);
    rep.passed = rep.worst_violation == 0.0;
    return rep;
  };

  // (ii) splitting-map exponent nu/2 near the calm point.
  {
    auto map_at = [&](const Vec& x, const EnvelopeConfig& c) -> std::optional<Vec> {
      const SubproblemSolution sol = hifbs(problem, x, c);
      if (!sol.certified) return std::nullopt;
      return sol.representative;
    };
    CheckReport rep = exponent_fit("regularity/" + problem.id + "/hifbs-exponent",
                                   0.5 * nu, map_at);
    out.push_back(std::move(rep));
  }

  // (iii) envelope-gradient exponent eta = (nu/2) min{mu, nu}.
  {
    const std::string id = "regularity/" + problem.id + "/gradient-exponent";
    if (!problem.f.mu_hess || !problem.f.has_hessian()) {
      CheckReport rep;
      rep.check_id = id;
      rep.seed = sub_seed(seed, id);
      rep.skipped = true;
      rep.note = "no Hessian-Holder metadata";
      out.push_back(std::move(rep));
    } else {
      const double eta = 0.5 * nu * std::min(*problem.f.mu_hess, nu);
      auto map_at = [&](const Vec& x, const EnvelopeConfig& c) -> std::optional<Vec> {
        const CandidateGradient cg = candidate_gradient(problem, x, c);
        if (!cg.single_valued || cg.at_kink || !cg.certified) return std::nullopt;
        return cg.v;
      };
      CheckReport rep = exponent_fit(id, eta, map_at);
      rep.constants_used["eta"] = eta;
      rep.constants_used["mu_hess"] = *problem.f.mu_hess;
      out.push_back(std::move(rep));
    }
  }
  return out;
}

CheckReport check_uniform_shrinkage(const CompositeProblem& problem,
                                    const EnvelopeConfig& cfg, const Vec& xbar,
                                    double eps, const std::vector<double>& radii,
                                    int n_samples, std::uint64_t seed) {
  CheckReport rep;
  rep.check_id = "shrinkage/" + problem.id + "/eps=" + fmt_num(eps);
  rep.seed = sub_seed(seed, rep.check_id);
  rep.constants_used["eps"] = eps;

  const double m_hat = problem.calm_constant
                           ? *problem.calm_constant
                           : estimate_calm_constant(problem, xbar, cfg.p, 1.0, 201);
  double gamma = cfg.gamma;
  gamma = std::min(gamma, 0.9 * std::pow(2.0, -cfg.p) / (m_hat * cfg.p));
  if (problem.f.l_nu > 0.0) gamma = std::min(gamma, 0.9 / (2.0 * problem.f.l_nu));
  EnvelopeConfig local_cfg = cfg;
  local_cfg.gamma = gamma;
  rep.constants_used["gamma"] = gamma;
  rep.constants_used["M"] = m_hat;

  const double g_bar = problem.g.value(xbar);
  const Vec grad_bar = problem.f.gradient(xbar);

  std::vector<double> sorted = radii;
  std::sort(sorted.begin(), sorted.end());
  double theta_star = -1.0;
  long used = 0;
  for (double theta : sorted) {
    std::mt19937_64 rng(rep.seed);  // same stream per radius: nested samples
    bool ok = true;
    for (int i = 0; i < n_samples && ok; ++i) {
      const Vec x = sample_ball(xbar, theta, rng);
      const SubproblemSolution sol = hifbs(problem, x, local_cfg);
      ++used;
      for (const auto& y : sol.minimizers) {
        const double q1 = (y - xbar).norm();
        const double q2 = problem.g.value(y) - g_bar;
        const double q3 =
            pow_abs((x - y).norm(), cfg.p - 1.0) / gamma +
            (problem.f.gradient(x) - grad_bar).norm();
        if (!(q1 < eps && q2 < eps && q3 < eps)) {
          ok = false;
          break;
        }
      }
    }
    if (ok) theta_star = theta;  // largest qualifying radius wins
  }
  rep.n_samples = used;
  if (theta_star < 0.0) {
    rep.skipped = true;
    rep.note = "inconclusive: no candidate radius qualified";
    return rep;
  }
  rep.constants_used["theta_star"] = theta_star;
  rep.passed = true;
  return rep;
}

std::map<double, double> majorant_constants(const CompositeProblem& problem,
                                            double x_anchor, double lo, double hi,
                                            int n_grid,
                                            const std::vector<double>& exponents) {
  const double nu = 0.5;  // declared exponent of the power part of phi
  const Vec anchor = vec1(x_anchor);
  const double phi_a = composite_value(problem, anchor);
  const double slope = problem.f.gradient(anchor)(0) + subgradient_point(problem.g, x_anchor);

  // Smallest constant that makes the nu-model majorize phi on the grid.
  double l_nu = 0.0;
  for (int i = 0; i < n_grid; ++i) {
    const double y = lo + (hi - lo) * i / (n_grid - 1);
    const double delta = y - x_anchor;
    if (std::abs(delta) < 1e-12) continue;
    const double excess = composite_value(problem, vec1(y)) - phi_a - slope * delta;
    l_nu = std::max(l_nu, (1.0 + nu) * excess / pow_abs(delta, 1.0 + nu));
  }

  // The other exponents reuse the same regularization strength at a reference
  // displacement (half the farthest grid point from the anchor), i.e. all
  // models add the same penalty at |delta| = delta_ref.
  const double delta_ref = 0.5 * std::max(std::abs(lo - x_anchor), std::abs(hi - x_anchor));
  std::map<double, double> consts;
  for (double mu : exponents) {
    consts[mu] = l_nu * ((1.0 + mu) / (1.0 + nu)) * pow_abs(delta_ref, nu - mu);
  }
  return consts;
}

std::vector<CheckReport> check_majorant(const std::string& f_id,
                                        const std::vector<double>& exponents,
                                        double x_anchor, double lo, double hi,
                                        int n_grid) {
  if (f_id != "majorant-demo")
    throw Error(Errc::domain_error, "majorant check is defined for 'majorant-demo'");
  const CompositeProblem problem = problem_catalog_get(f_id);
  const Vec anchor = vec1(x_anchor);
  const double phi_a = composite_value(problem, anchor);
  const double slope = problem.f.gradient(anchor)(0) + subgradient_point(problem.g, x_anchor);
  const auto consts = majorant_constants(problem, x_anchor, lo, hi, n_grid, exponents);

  std::vector<CheckReport> out;
  for (double mu : exponents) {
    CheckReport rep;
    rep.check_id = "majorant/mu=" + fmt_num(mu);
    rep.n_samples = n_grid;
    const double l_mu = consts.at(mu);
    rep.constants_used = {{"mu", mu},
                          {"L_mu", l_mu},
                          {"anchor", x_anchor},
                          {"expected_majorizes", mu == 0.5 ? 1.0 : 0.0}};

    double worst = -kInf;
    Vec witness;
    for (int i = 0; i < n_grid; ++i) {
      const double y = lo + (hi - lo) * i / (n_grid - 1);
      const double delta = y - x_anchor;
      const double model =
          phi_a + slope * delta + l_mu / (1.0 + mu) * pow_abs(delta, 1.0 + mu);
      const double viol = composite_value(problem, vec1(y)) - model;
      if (viol > worst) {
        worst = viol;
        witness = vec1(y);
      }
    }
    const bool majorizes = worst <= 1e-9;
    rep.constants_used["max_gap_above_model"] = std::max(worst, 0.0);
    rep.constants_used["observed_majorizes"] = majorizes ? 1.0 : 0.0;
    rep.passed = majorizes == (mu == 0.5);
    if (!majorizes) rep.witness = witness;  // where the model dips below phi
    rep.worst_violation = rep.passed ? 0.0 : std::max(worst, 0.0);
    out.push_back(std::move(rep));
  }
  return out;
}

std::vector<CheckReport> check_envelope_relations(const CompositeProblem& problem,
                                                  const std::vector<double>& gammas,
                                                  double p, double lo, double hi,
                                                  int n_grid,
                                                  const EnvelopeConfig& base_cfg) {
  if (problem.dim() != 1)
    throw Error(Errc::capability_missing, "envelope relation grid is 1D only");
  const double l_nu = problem.f.l_nu;
  const bool order_matched = std::abs(p - (1.0 + problem.f.nu)) < 1e-12;
  const double tol = base_cfg.tol_val;

  struct GammaData {
    double gamma;
    bool certified;
    std::vector<double> env;
    std::vector<double> phi_rep;  // phi at the representatives
  };

  std::vector<double> phi(n_grid);
  std::vector<double> xs(n_grid);
  for (int i = 0; i < n_grid; ++i) {
    xs[i] = lo + (hi - lo) * i / (n_grid - 1);
    phi[i] = composite_value(problem, vec1(xs[i]));
  }

  std::vector<GammaData> data;
  for (double gamma : gammas) {
    GammaData gd;
    gd.gamma = gamma;
    gd.certified = order_matched && (l_nu == 0.0 || gamma < 1.0 / l_nu);
    gd.env.resize(n_grid);
    gd.phi_rep.resize(n_grid);
    EnvelopeConfig cfg = base_cfg.with(p, gamma);
    for (int i = 0; i < n_grid; ++i) {
      const EnvelopeEval ev = hifbe(problem, vec1(xs[i]), cfg);
      gd.env[i] = ev.value;
      gd.phi_rep[i] = composite_value(problem, ev.hifbs.representative);
    }
    data.push_back(std::move(gd));
  }

  std::vector<CheckReport> out;
  auto make = [&](const std::string& name) {
    CheckReport rep;
    rep.check_id = "envelope/" + problem.id + "/" + name;
    rep.n_samples = n_grid;
    rep.constants_used["p"] = p;
    rep.constants_used["l_nu"] = l_nu;
    return rep;
  };

  for (const auto& gd : data) {
    // (a) env <= phi pointwise, any gamma.
    CheckReport rep = make("upper-bound/gamma=" + fmt_num(gd.gamma));
    rep.constants_used["gamma"] = gd.gamma;
    double worst = 0.0;
    Vec witness;
    for (int i = 0; i < n_grid; ++i) {
      const double viol = gd.env[i] - phi[i] - tol;
      if (viol > worst) {
        worst = viol;
        witness = vec1(xs[i]);
      }
    }
    rep.worst_violation = worst;
    rep.passed = worst <= 0.0;
    if (!rep.passed) rep.witness = witness;
    out.push_back(std::move(rep));

    // (b) descent chain for certified gammas.
    CheckReport desc = make("descent/gamma=" + fmt_num(gd.gamma));
    desc.constants_used["gamma"] = gd.gamma;
    if (!gd.certified) {
      desc.skipped = true;
      desc.note = order_matched ? "gamma not certified below 1/l_nu"
                                : "order p does not match 1 + nu";
    } else {
      double w = 0.0;
      Vec wit;
      for (int i = 0; i < n_grid; ++i) {
        const double viol =
            std::max(gd.phi_rep[i] - gd.env[i], gd.env[i] - phi[i]) - tol;
        if (viol > w) {
          w = viol;
          wit = vec1(xs[i]);
        }
      }
      desc.worst_violation = w;
      desc.passed = w <= 0.0;
      if (!desc.passed) desc.witness = wit;
    }
    out.push_back(std::move(desc));

    // (d) grid-infimum preservation for certified gammas.
    CheckReport inf_rep = make("infimum/gamma=" + fmt_num(gd.gamma));
    inf_rep.constants_used["gamma"] = gd.gamma;
    if (!gd.certified) {
      inf_rep.skipped = true;
      inf_rep.note = order_matched ? "gamma not certified below 1/l_nu"
                                   : "order p does not match 1 + nu";
    } else {
      const double min_phi = *std::min_element(phi.begin(), phi.end());
      const double min_env = *std::min_element(gd.env.begin(), gd.env.end());
      const double dev = std::abs(min_phi - min_env);
      inf_rep.constants_used["grid_tolerance"] = 1e-3;
      inf_rep.worst_violation = std::max(0.0, dev - 1e-3);
      inf_rep.passed = dev <= 1e-3;
    }
    out.push_back(std::move(inf_rep));
  }

  // (c) gamma-monotonicity across the certified gammas.
  CheckReport mono = make("gamma-monotone");
  std::vector<const GammaData*> certified;
  for (const auto& gd : data)
    if (gd.certified) certified.push_back(&gd);
  std::sort(certified.begin(), certified.end(),
            [](const GammaData* a, const GammaData* b) { return a->gamma < b->gamma; });
  if (certified.size() < 2) {
    mono.skipped = true;
    mono.note = "fewer than two certified gammas";
  } else {
    double worst = 0.0;
    Vec witness;
    for (size_t j = 0; j + 1 < certified.size(); ++j) {
      for (int i = 0; i < n_grid; ++i) {
        // larger gamma weakens the penalty, so its envelope sits lower
        const double viol = certified[j + 1]->env[i] - certified[j]->env[i] - tol;
        if (viol > worst) {
          worst = viol;
          witness = vec1(xs[i]);
        }
      }
    }
    mono.worst_violation = worst;
    mono.passed = worst <= 0.0;
    if (!mono.passed) mono.witness = witness;
  }
  out.push_back(std::move(mono));
  return out;
}

double differentiability_gamma_threshold(const CompositeProblem& problem, double r,
                                         double kappa_p, double tau_hat,
                                         double gamma_max) {
  if (!problem.f.has_hessian())
    throw Error(Errc::capability_missing, "threshold needs a Hessian oracle");
  const double p = 1.0 + problem.f.nu;
  double hess_max = 0.0;
  std::mt19937_64 rng(fnv1a(problem.id) ^ 0xd1ffULL);
  for (int i = 0; i < 101; ++i) {
    Vec x;
    if (problem.dim() == 1) {
      x = vec1(-r + 2.0 * r * i / 100.0);
    } else {
      x = sample_ball(Vec::Zero(problem.dim()), r, rng);
    }
    const Mat h = problem.f.hessian(x);
    if (!h.allFinite()) continue;  // singular points are excluded from the max
    hess_max = std::max(hess_max, h.norm());
  }
  if (hess_max == 0.0) return gamma_max;
  return std::min(gamma_max, kappa_p * pow_abs(r + tau_hat, p - 2.0) / hess_max);
}

}  // namespace hifb

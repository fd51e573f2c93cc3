#pragma once

#include <Eigen/Core>
#include <limits>

namespace hifb {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Closed interval [lo, hi]; lo/hi may be +-inf (e.g. subdifferential of an
// indicator at the boundary of its domain).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v, double tol = 0.0) const {
    return v >= lo - tol && v <= hi + tol;
  }
  double width() const { return hi - lo; }
};

inline double sgn(double x) { return static_cast<double>((x > 0) - (x < 0)); }

// |t|^q with the 0^q := 0 convention for q <= 0 at t = 0, plus fast paths for
// the two orders that dominate the workload.
inline double pow_abs(double t, double q) {
  const double a = std::abs(t);
  if (a == 0.0) return 0.0;
  if (q == 2.0) return a * a;
  if (q == 1.5) return a * std::sqrt(a);
  if (q == 1.0) return a;
  if (q == 0.5) return std::sqrt(a);
  return std::pow(a, q);
}

inline Vec vec1(double x) {
  Vec v(1);
  v(0) = x;
  return v;
}

}  // namespace hifb

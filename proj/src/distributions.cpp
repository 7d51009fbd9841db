#include "cvinfer/distributions.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cvinfer/error.hpp"

namespace cvinfer {

namespace {
constexpr double kShapeLo = 0.05;
constexpr double kShapeHi = 500.0;
}  // namespace

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::DomainError, "normal quantile needs p in (0, 1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw Error(ErrorKind::DomainError, "log_gamma needs x > 0");
  return boost::math::lgamma(x);
}

double weibull_cv(double shape) {
  if (!(shape > 0.0)) throw Error(ErrorKind::InvalidParameter, "weibull shape must be positive");
  const double log_ratio = log_gamma(1.0 + 2.0 / shape) - 2.0 * log_gamma(1.0 + 1.0 / shape);
  return std::sqrt(std::expm1(log_ratio));
}

double weibull_shape_for_cv(double tau) {
  if (!(tau > 0.0)) throw Error(ErrorKind::InvalidParameter, "target CV must be positive");
  double lo = kShapeLo;  // large CV
  double hi = kShapeHi;  // small CV
  if (tau > weibull_cv(lo) || tau < weibull_cv(hi)) {
    std::ostringstream msg;
    msg << "CV " << tau << " is outside the range reachable with shape in [" << kShapeLo << ", " << kShapeHi << "]";
    throw Error(ErrorKind::OutOfBracket, msg.str());
  }
  for (int i = 0; i < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (weibull_cv(mid) > tau) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace cvinfer

#include "cvinfer/mslr.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <functional>
#include <sstream>

#include "cvinfer/distributions.hpp"
#include "cvinfer/error.hpp"

namespace cvinfer {

namespace {

constexpr int kMaxDoublings = 60;
constexpr double kRadicandSlack = 1e-10;

struct SignedLogDet {
  int sign = 0;  // 0 for a singular matrix
  double log_abs = 0.0;
};

SignedLogDet signed_log_det(const Eigen::MatrixXd& m) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const Eigen::MatrixXd& packed = lu.matrixLU();
  SignedLogDet out;
  out.sign = static_cast<int>(lu.permutationP().determinant());
  for (Eigen::Index i = 0; i < packed.rows(); ++i) {
    const double d = packed(i, i);
    if (d == 0.0 || !std::isfinite(d)) return {0, 0.0};
    if (d < 0.0) out.sign = -out.sign;
    out.log_abs += std::log(std::abs(d));
  }
  return out;
}

void require_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorKind::DomainError, "level must lie in (0, 1)");
}

// Finds lower/upper roots of stat(tau) = +z and stat(tau) = -z around tau_hat
// by geometric bracket expansion followed by TOMS 748.
std::pair<double, double> invert_statistic(const std::function<double(double)>& stat, double tau_hat, double z,
                                           int& iterations) {
  auto tol = [tau_hat](double a, double b) { return std::abs(b - a) <= 1e-13 * (1.0 + tau_hat); };
  iterations = 0;

  auto solve = [&](auto f, double inner, double f_inner, double outer_start, double factor) {
    double outer = outer_start;
    double f_outer = f(outer);
    int doublings = 0;
    while ((f_outer > 0.0) == (f_inner > 0.0)) {
      if (++doublings > kMaxDoublings) {
        std::ostringstream msg;
        msg << "statistic never reached " << (factor < 1.0 ? "+" : "-") << z << " on the range between "
            << tau_hat << " and " << outer;
        throw Error(ErrorKind::BracketingFailed, msg.str());
      }
      inner = outer;
      f_inner = f_outer;
      outer *= factor;
      f_outer = f(outer);
    }
    std::uintmax_t iters = 200;
    double a = std::min(inner, outer);
    double b = std::max(inner, outer);
    double fa = (a == inner) ? f_inner : f_outer;
    double fb = (b == inner) ? f_inner : f_outer;
    auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
    iterations += static_cast<int>(iters);
    if (f(lo) == 0.0) return lo;
    if (f(hi) == 0.0) return hi;
    return 0.5 * (lo + hi);
  };

  auto f_lower = [&](double t) { return stat(t) - z; };
  auto f_upper = [&](double t) { return stat(t) + z; };
  const double lower = solve(f_lower, tau_hat, f_lower(tau_hat), 0.5 * tau_hat, 0.5);
  const double upper = solve(f_upper, tau_hat, f_upper(tau_hat), 1.5 * tau_hat, 2.0);
  return {lower, upper};
}

double two_sided_p(double stat) { return std::min(1.0, 2.0 * normal_cdf(-std::abs(stat))); }

}  // namespace

double slr_r(double tau, const Dataset& data, const FitResult& fit) {
  const double tau_hat = fit.theta_hat.tau;
  if (tau == tau_hat) return 0.0;
  const double radicand = 2.0 * (fit.loglik - profile_loglik(tau, data));
  if (radicand < -kRadicandSlack) {
    std::ostringstream msg;
    msg << "profile log-likelihood at tau=" << tau << " exceeds the fitted maximum by " << -radicand / 2.0;
    throw Error(ErrorKind::ProfileExceedsMaximum, msg.str());
  }
  const double root = std::sqrt(std::max(radicand, 0.0));
  return tau_hat > tau ? root : -root;
}

AncillaryDirections build_V(const Dataset& data, const FitResult& fit) {
  if (!data.has_raw()) throw Error(ErrorKind::RawDataRequired, "V needs per-observation data");
  const auto& th = fit.theta_hat;
  const std::size_t k = data.k();
  AncillaryDirections dirs;
  dirs.V = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k + 1), data.total_n());
  Eigen::Index col = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (double x : data.raw()[i].values) {
      dirs.V(0, col) = (x - th.mu[i]) / th.tau;
      dirs.V(static_cast<Eigen::Index>(i + 1), col) = x / th.mu[i];
      ++col;
    }
  }
  return dirs;
}

GradientBundle gradient_bundle(const ParamVector& theta, const Dataset& data, const ParamVector& anchor) {
  theta.validate();
  anchor.validate();
  const std::size_t k = data.k();
  if (theta.k() != k || anchor.k() != k) {
    throw Error(ErrorKind::InvalidParameter, "parameter vector does not match group count");
  }
  const double t = theta.tau;
  const double t_hat = anchor.tau;
  const auto dim = static_cast<Eigen::Index>(k + 1);

  GradientBundle b;
  b.l_V = Eigen::VectorXd::Zero(dim);
  b.l_theta_V = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& g = data.group(i);
    const auto row = static_cast<Eigen::Index>(i + 1);
    const double m = theta.mu[i];
    const double m_hat = anchor.mu[i];
    const double c_anchor = g.cross(m_hat, m);  // sum (x - mu_hat)(x - mu)
    const double c_zero = g.cross(0.0, m);      // sum x (x - mu)

    b.l_V(0) -= c_anchor / (m * m);
    b.l_V(row) = -c_zero / (m_hat * m * m * t * t);

    b.l_theta_V(0, 0) += c_anchor / (m * m);
    b.l_theta_V(0, row) = 2.0 * c_zero / (m_hat * m * m * t * t * t);
    b.l_theta_V(row, 0) = (g.n * (g.mean - m_hat) / (m * m) + 2.0 * c_anchor / (m * m * m)) / (t_hat * t * t);
    b.l_theta_V(row, row) = (g.n * g.mean / (m * m) + 2.0 * c_zero / (m * m * m)) / (m_hat * t * t);
  }
  b.l_V(0) /= t_hat * t * t;
  b.l_theta_V(0, 0) *= 2.0 / (t_hat * t * t * t);
  b.l_lambda_V = b.l_theta_V.bottomRows(dim - 1);
  return b;
}

GradientBundle gradient_bundle(const ParamVector& theta, const Dataset& data, const AncillaryDirections& dirs) {
  if (!data.has_raw()) throw Error(ErrorKind::RawDataRequired, "direct gradients need per-observation data");
  theta.validate();
  const std::size_t k = data.k();
  const double t = theta.tau;
  const auto dim = static_cast<Eigen::Index>(k + 1);
  if (dirs.V.rows() != dim || dirs.V.cols() != data.total_n()) {
    throw Error(ErrorKind::InvalidParameter, "direction array does not match the dataset");
  }

  // dl/dx_ij and its derivatives with respect to theta, per observation.
  Eigen::VectorXd dl_dx(data.total_n());
  Eigen::MatrixXd d2l_dx_dtheta = Eigen::MatrixXd::Zero(dim, data.total_n());
  Eigen::Index col = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double m = theta.mu[i];
    for (double x : data.raw()[i].values) {
      dl_dx(col) = -(x - m) / (m * m * t * t);
      d2l_dx_dtheta(0, col) = 2.0 * (x - m) / (m * m * t * t * t);
      d2l_dx_dtheta(static_cast<Eigen::Index>(i + 1), col) = (2.0 * x - m) / (m * m * m * t * t);
      ++col;
    }
  }

  GradientBundle b;
  b.l_V = dirs.V * dl_dx;
  b.l_theta_V = d2l_dx_dtheta * dirs.V.transpose();
  b.l_lambda_V = b.l_theta_V.bottomRows(dim - 1);
  return b;
}

MslrEvaluator::MslrEvaluator(const Dataset& data, const FitResult& fit, MslrOptions options)
    : data_(data), fit_(fit), options_(options) {
  const auto& th = fit_.theta_hat;
  const GradientBundle at_hat = gradient_bundle(th, data_, th);
  l_V_hat_ = at_hat.l_V;

  const SignedLogDet d = signed_log_det(at_hat.l_theta_V);
  if (d.sign == 0 || d.log_abs < -690.0) {
    throw Error(ErrorKind::SingularGradientMatrix, "likelihood gradient matrix at the MLE is singular");
  }
  sign_det_l_theta_V_hat_ = d.sign;
  log_abs_det_l_theta_V_hat_ = d.log_abs;

  const SignedLogDet info = signed_log_det(observed_info(th, data_));
  if (info.sign <= 0) {
    throw Error(ErrorKind::NonPositiveInfoDeterminant, "observed information at the MLE is not positive definite");
  }
  log_det_info_hat_ = info.log_abs;
}

double MslrEvaluator::r(double tau) const { return slr_r(tau, data_, fit_); }

double MslrEvaluator::q(double tau) const {
  const ParamVector th_tau = constrained_theta(tau, data_);
  const GradientBundle at_tau = gradient_bundle(th_tau, data_, fit_.theta_hat);
  const auto dim = at_tau.l_V.size();

  Eigen::MatrixXd numerator(dim, dim);
  numerator.row(0) = (l_V_hat_ - at_tau.l_V).transpose();
  numerator.bottomRows(dim - 1) = at_tau.l_lambda_V;
  const SignedLogDet num = signed_log_det(numerator);
  if (num.sign == 0) return 0.0;

  double log_det_nuisance = 0.0;
  const Eigen::MatrixXd nuis = nuisance_info(th_tau, data_);
  for (Eigen::Index i = 0; i < nuis.rows(); ++i) {
    if (!(nuis(i, i) > 0.0)) {
      throw Error(ErrorKind::NonPositiveInfoDeterminant, "nuisance information is not positive definite");
    }
    log_det_nuisance += std::log(nuis(i, i));
  }
  const double log_abs_q =
      num.log_abs - log_abs_det_l_theta_V_hat_ + 0.5 * (log_det_info_hat_ - log_det_nuisance);
  return num.sign * sign_det_l_theta_V_hat_ * std::exp(log_abs_q);
}

RootDiagnostics MslrEvaluator::r_star(double tau) const {
  RootDiagnostics d;
  d.tau = tau;
  d.r = r(tau);
  if (std::abs(d.r) < options_.guard) {
    d.q = q(tau);
    d.r_star = d.r;
    d.guard_active = true;
    return d;
  }
  d.q = q(tau);
  if (!(d.r / d.q > 0.0)) {
    std::ostringstream msg;
    msg << "r=" << d.r << " and Q=" << d.q << " at tau=" << tau << " do not share a sign";
    throw Error(ErrorKind::InconsistentSigns, msg.str());
  }
  d.r_star = d.r - std::log(d.r / d.q) / d.r;
  return d;
}

double q_statistic(double tau, const Dataset& data, const FitResult& fit) {
  return MslrEvaluator(data, fit).q(tau);
}

RootDiagnostics r_star(double tau, const Dataset& data, const FitResult& fit, MslrOptions options) {
  return MslrEvaluator(data, fit, options).r_star(tau);
}

IntervalEstimate ci_mslr(const Dataset& data, double level, const FitResult& fit, MslrOptions options) {
  require_level(level);
  const MslrEvaluator eval(data, fit, options);
  const double z = normal_quantile(0.5 + 0.5 * level);
  int iterations = 0;
  auto [lo, hi] = invert_statistic([&](double t) { return eval.r_star(t).r_star; }, fit.theta_hat.tau, z,
                                   iterations);
  IntervalEstimate ci;
  ci.method = Method::MSLR;
  ci.level = level;
  ci.lower = lo;
  ci.upper = hi;
  ci.tau_hat = fit.theta_hat.tau;
  ci.iterations = iterations;
  return ci;
}

IntervalEstimate ci_slr(const Dataset& data, double level, const FitResult& fit) {
  require_level(level);
  const double z = normal_quantile(0.5 + 0.5 * level);
  int iterations = 0;
  auto [lo, hi] = invert_statistic([&](double t) { return slr_r(t, data, fit); }, fit.theta_hat.tau, z,
                                   iterations);
  IntervalEstimate ci;
  ci.method = Method::SLR;
  ci.level = level;
  ci.lower = lo;
  ci.upper = hi;
  ci.tau_hat = fit.theta_hat.tau;
  ci.iterations = iterations;
  return ci;
}

double pvalue_mslr(const Dataset& data, double tau0, const FitResult& fit, MslrOptions options) {
  if (!(tau0 > 0.0)) throw Error(ErrorKind::DomainError, "tau0 must be positive");
  return two_sided_p(r_star(tau0, data, fit, options).r_star);
}

double pvalue_slr(const Dataset& data, double tau0, const FitResult& fit) {
  if (!(tau0 > 0.0)) throw Error(ErrorKind::DomainError, "tau0 must be positive");
  return two_sided_p(slr_r(tau0, data, fit));
}

}  // namespace cvinfer

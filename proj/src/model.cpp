#include "cvinfer/model.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <sstream>

#include "cvinfer/error.hpp"

namespace cvinfer {

namespace {

constexpr int kMaxIterations = 200;

void require_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorKind::NonPositiveParameter, "tau must be positive and finite");
  }
}

void check_dims(const ParamVector& theta, std::size_t k) {
  if (theta.k() != k) throw Error(ErrorKind::InvalidParameter, "parameter vector does not match group count");
}

// sum_j (x_ij / mu - 1)^2
double scaled_residual_ss(const SampleSummary& g, double mu) { return g.cross(mu, mu) / (mu * mu); }

}  // namespace

void ParamVector::validate() const {
  require_tau(tau);
  for (double m : mu) {
    if (!(m > 0.0) || !std::isfinite(m)) {
      throw Error(ErrorKind::NonPositiveParameter, "every mu_i must be positive and finite");
    }
  }
}

double log_likelihood(const ParamVector& theta, std::span<const SampleSummary> groups) {
  theta.validate();
  check_dims(theta, groups.size());
  double n_total = 0.0;
  double log_mu = 0.0;
  double rss = 0.0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& g = groups[i];
    n_total += g.n;
    log_mu += g.n * std::log(theta.mu[i]);
    rss += scaled_residual_ss(g, theta.mu[i]);
  }
  return -n_total * std::log(theta.tau) - log_mu - rss / (2.0 * theta.tau * theta.tau);
}

double log_likelihood(const ParamVector& theta, const Dataset& data) {
  return log_likelihood(theta, data.groups());
}

double cmle_mu(double tau, const SampleSummary& s) {
  require_tau(tau);
  // Rationalised root of n tau^2 mu^2 + sum(x) mu - sum(x^2) = 0; stable as tau -> 0.
  return 2.0 * s.mean_sq / (s.mean + std::sqrt(s.mean * s.mean + 4.0 * tau * tau * s.mean_sq));
}

ParamVector constrained_theta(double tau, const Dataset& data) {
  ParamVector theta;
  theta.tau = tau;
  theta.mu.reserve(data.k());
  for (const auto& g : data.groups()) theta.mu.push_back(cmle_mu(tau, g));
  return theta;
}

double profile_loglik(double tau, const Dataset& data) {
  return log_likelihood(constrained_theta(tau, data), data);
}

double profile_score(double tau, const Dataset& data) {
  require_tau(tau);
  double rss = 0.0;
  for (const auto& g : data.groups()) rss += scaled_residual_ss(g, cmle_mu(tau, g));
  return -data.total_n() / tau + rss / (tau * tau * tau);
}

FitResult fit_mle(const Dataset& data) {
  // Pooled moment estimate as the starting point.
  double num = 0.0;
  double den = 0.0;
  for (const auto& g : data.groups()) {
    num += (g.n - 1) * g.sd * g.sd;
    den += g.n * g.mean * g.mean;
  }
  const double tau0 = std::sqrt(num / den);

  auto g = [&](double t) { return profile_score(t, data); };
  double lo = tau0 / 10.0;
  double hi = tau0 * 10.0;
  double g_lo = g(lo);
  double g_hi = g(hi);
  for (int i = 0; i < 30 && !(g_lo > 0.0); ++i) g_lo = g(lo /= 10.0);
  for (int i = 0; i < 30 && !(g_hi < 0.0); ++i) g_hi = g(hi *= 10.0);
  if (!(g_lo > 0.0) || !(g_hi < 0.0)) {
    std::ostringstream msg;
    msg << "profile score does not change sign on [" << lo << ", " << hi << "]";
    throw Error(ErrorKind::NoConvergence, msg.str());
  }

  std::uintmax_t iters = kMaxIterations;
  auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-13 * (1.0 + std::abs(a)); };
  auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, g_lo, g_hi, tol, iters);

  FitResult fit;
  const double tau_hat = (g(a) == 0.0) ? a : (g(b) == 0.0 ? b : 0.5 * (a + b));
  fit.theta_hat = constrained_theta(tau_hat, data);
  fit.loglik = log_likelihood(fit.theta_hat, data);
  fit.iterations = static_cast<int>(iters);
  fit.converged = iters < static_cast<std::uintmax_t>(kMaxIterations) &&
                  std::abs(b - a) < 1e-10 * (1.0 + tau_hat) && std::abs(g(tau_hat)) < 1e-8;
  if (!fit.converged) {
    std::ostringstream msg;
    msg << "profile maximisation stopped after " << iters << " iterations at tau=" << tau_hat
        << " with score " << g(tau_hat);
    throw Error(ErrorKind::NoConvergence, msg.str());
  }
  const double h = 1e-4 * tau_hat;
  fit.profile_curvature =
      (profile_loglik(tau_hat + h, data) - 2.0 * fit.loglik + profile_loglik(tau_hat - h, data)) / (h * h);
  return fit;
}

Eigen::VectorXd score(const ParamVector& theta, const Dataset& data) {
  theta.validate();
  check_dims(theta, data.k());
  const double t = theta.tau;
  const std::size_t k = data.k();
  Eigen::VectorXd s(k + 1);
  double rss = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const auto& g = data.group(i);
    const double m = theta.mu[i];
    rss += scaled_residual_ss(g, m);
    s(i + 1) = -g.n / m + g.cross(0.0, m) / (t * t * m * m * m);
  }
  s(0) = -data.total_n() / t + rss / (t * t * t);
  return s;
}

Eigen::MatrixXd observed_info(const ParamVector& theta, const Dataset& data) {
  theta.validate();
  check_dims(theta, data.k());
  const double t = theta.tau;
  const std::size_t k = data.k();
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(k + 1, k + 1);
  double rss = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const auto& g = data.group(i);
    const double m = theta.mu[i];
    const double sum_sq = g.n * g.mean_sq;
    const double xr = g.cross(0.0, m);  // sum x (x - mu)
    rss += scaled_residual_ss(g, m);
    j(i + 1, i + 1) = -g.n / (m * m) + (sum_sq + 2.0 * xr) / (t * t * m * m * m * m);
    j(0, i + 1) = j(i + 1, 0) = 2.0 * xr / (t * t * t * m * m * m);
  }
  j(0, 0) = -data.total_n() / (t * t) + 3.0 * rss / (t * t * t * t);
  return j;
}

Eigen::MatrixXd nuisance_info(const ParamVector& theta, const Dataset& data) {
  const auto k = static_cast<Eigen::Index>(data.k());
  return observed_info(theta, data).bottomRightCorner(k, k);
}

}  // namespace cvinfer

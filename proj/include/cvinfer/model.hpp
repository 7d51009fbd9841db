#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "cvinfer/summary.hpp"

namespace cvinfer {

/// theta = (tau, mu_1, ..., mu_k) of the normal common-CV model
/// X_ij ~ N(mu_i, tau^2 mu_i^2).
struct ParamVector {
  double tau = 0.0;
  std::vector<double> mu;

  /// Throws NonPositiveParameter unless tau > 0 and every mu_i > 0.
  void validate() const;
  std::size_t k() const noexcept { return mu.size(); }
};

struct FitResult {
  ParamVector theta_hat;
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Second difference of the profile log-likelihood at tau_hat.
  double profile_curvature = 0.0;
};

/// l(theta) = -n log tau - sum n_i log mu_i - (1/2 tau^2) sum_ij (x_ij/mu_i - 1)^2,
/// evaluated from sufficient statistics.
double log_likelihood(const ParamVector& theta, std::span<const SampleSummary> groups);
double log_likelihood(const ParamVector& theta, const Dataset& data);

/// Closed-form constrained MLE of mu_i for fixed tau.
double cmle_mu(double tau, const SampleSummary& summary);

/// (tau, cmle_mu(tau, group_1), ..., cmle_mu(tau, group_k)).
ParamVector constrained_theta(double tau, const Dataset& data);

double profile_loglik(double tau, const Dataset& data);

/// d/dtau of the profile log-likelihood. Because the nuisance score vanishes
/// at the CMLE this is the tau-component of the score at (tau, mu_hat_tau).
double profile_score(double tau, const Dataset& data);

/// Maximum likelihood fit by 1-D maximisation of the profile log-likelihood.
/// Throws NoConvergence if the stationary point cannot be bracketed or the
/// solver exceeds its iteration cap.
FitResult fit_mle(const Dataset& data);

/// (dl/dtau, dl/dmu_1, ..., dl/dmu_k).
Eigen::VectorXd score(const ParamVector& theta, const Dataset& data);

/// j(theta) = -d^2 l / dtheta dtheta', ordered (tau, mu_1, ..., mu_k).
Eigen::MatrixXd observed_info(const ParamVector& theta, const Dataset& data);

/// The diagonal mu-block of observed_info.
Eigen::MatrixXd nuisance_info(const ParamVector& theta, const Dataset& data);

}  // namespace cvinfer

#pragma once

#include <Eigen/Dense>

#include "cvinfer/interval.hpp"
#include "cvinfer/model.hpp"
#include "cvinfer/summary.hpp"

namespace cvinfer {

/// Data-space directions V = -(dR/dx)^{-1} (dR/dtheta) at theta_hat for the
/// pivotal R_ij = (x_ij - mu_i) / (tau mu_i). Row 0 is the tau direction,
/// row i+1 the mu_i direction; columns follow observations group by group.
struct AncillaryDirections {
  Eigen::MatrixXd V;
};

/// Likelihood gradients in the directions V.
///
/// l_V(m) = sum_obs dl/dx * V(m, obs); row p of l_theta_V is d l_V / d theta_p.
/// l_lambda_V holds the nuisance rows 1..k of l_theta_V.
struct GradientBundle {
  Eigen::VectorXd l_V;
  Eigen::MatrixXd l_theta_V;
  Eigen::MatrixXd l_lambda_V;
};

struct RootDiagnostics {
  double tau = 0.0;
  double r = 0.0;
  double q = 0.0;
  double r_star = 0.0;
  bool guard_active = false;
};

struct MslrOptions {
  /// r* falls back to r when |r| is below this (the modification is 0/0 at tau_hat).
  double guard = 1e-5;
};

/// Evaluates r, Q and r* for one dataset, caching everything that depends
/// only on theta_hat. Holds references: `data` and `fit` must outlive it.
class MslrEvaluator {
 public:
  MslrEvaluator(const Dataset& data, const FitResult& fit, MslrOptions options = {});

  double r(double tau) const;
  double q(double tau) const;
  RootDiagnostics r_star(double tau) const;

  const FitResult& fit() const noexcept { return fit_; }

 private:
  const Dataset& data_;
  const FitResult& fit_;
  MslrOptions options_;
  Eigen::VectorXd l_V_hat_;
  double log_abs_det_l_theta_V_hat_ = 0.0;
  int sign_det_l_theta_V_hat_ = 1;
  double log_det_info_hat_ = 0.0;
};

/// Signed root r(tau) = sgn(tau_hat - tau) sqrt(2 (l(theta_hat) - l(theta_hat_tau))).
double slr_r(double tau, const Dataset& data, const FitResult& fit);

/// Requires raw observations (RawDataRequired otherwise).
AncillaryDirections build_V(const Dataset& data, const FitResult& fit);

/// Closed-form gradients with V anchored at `anchor` (= theta_hat), evaluated
/// from sufficient statistics only.
GradientBundle gradient_bundle(const ParamVector& theta, const Dataset& data, const ParamVector& anchor);

/// Same quantities from the definition, summing over raw observations along V.
GradientBundle gradient_bundle(const ParamVector& theta, const Dataset& data, const AncillaryDirections& dirs);

double q_statistic(double tau, const Dataset& data, const FitResult& fit);
RootDiagnostics r_star(double tau, const Dataset& data, const FitResult& fit, MslrOptions options = {});

/// {tau : |r*(tau)| < z_{alpha/2}} with alpha = 1 - level.
IntervalEstimate ci_mslr(const Dataset& data, double level, const FitResult& fit, MslrOptions options = {});
/// {tau : |r(tau)| <= z_{alpha/2}}.
IntervalEstimate ci_slr(const Dataset& data, double level, const FitResult& fit);

/// Two-sided p-value for H0: tau = tau0 based on r*.
double pvalue_mslr(const Dataset& data, double tau0, const FitResult& fit, MslrOptions options = {});
/// Two-sided p-value based on r.
double pvalue_slr(const Dataset& data, double tau0, const FitResult& fit);

}  // namespace cvinfer

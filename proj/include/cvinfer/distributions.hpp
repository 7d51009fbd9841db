#pragma once

namespace cvinfer {

/// Standard normal CDF.
double normal_cdf(double x) noexcept;

/// Standard normal quantile; throws DomainError outside (0, 1).
double normal_quantile(double p);

/// log Gamma(x) for x > 0.
double log_gamma(double x);

/// Coefficient of variation of a Weibull(shape, scale) variable:
/// sqrt(Gamma(1 + 2/shape) / Gamma(1 + 1/shape)^2 - 1).
double weibull_cv(double shape);

/// Shape parameter whose Weibull CV equals tau, by bisection on [0.05, 500]
/// (the CV is strictly decreasing in the shape). Throws OutOfBracket when tau
/// is not attainable inside that range.
double weibull_shape_for_cv(double tau);

}  // namespace cvinfer

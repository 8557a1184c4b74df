#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "rho_lite/ar1.hpp"

namespace rho_lite {

/// Raised when an estimator input is numerically degenerate (e.g. an all-zero
/// series whose energy normalizer vanishes). Distinct from precondition errors
/// so callers can map it to a dedicated exit status.
struct DegenerateInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fraction of consecutive equal signs, together with the integer tallies it
/// was computed from: value = agreements / comparisons, comparisons = N - 1.
struct LambdaEstimate {
    double value = 0.0;
    std::size_t agreements = 0;
    std::size_t comparisons = 0;
};

/**
 * @brief Segmented affine map on [0, 1].
 *
 * Segment k covers the half-open interval [breakpoints[k], breakpoints[k+1])
 * and evaluates to intercepts[k] + slopes[k] * lambda; the last interval is
 * closed at 1 so evaluation is defined on all of [0, 1]. Segments are fit
 * independently and need not join continuously.
 */
struct PiecewiseLinearModel {
    std::vector<double> breakpoints;  ///< b_0 = 0 < b_1 < ... < b_K = 1
    std::vector<double> intercepts;   ///< K entries
    std::vector<double> slopes;       ///< K entries

    std::size_t segment_count() const { return slopes.size(); }

    /// @throws std::invalid_argument on inconsistent sizes or unsorted breakpoints
    void validate() const;

    /// Index of the segment containing lambda. @throws std::domain_error outside [0,1].
    std::size_t segment_index(double lambda) const;

    double evaluate(double lambda) const;
};

/// The default five-segment approximation of cos(pi * (1 - lambda)).
const PiecewiseLinearModel& proposed_pwl_model();

/// The same five segments with every coefficient replaced by its shift-add
/// friendly dyadic approximation (5/8, 63/32, 3, 1, 5/4, 3/2, 3/4, 3/8).
/// Floating-point reference model of the streaming datapath.
const PiecewiseLinearModel& proposed_pwl_dyadic_model();

/**
 * @brief Ratio estimator of the AR(1) correlation coefficient:
 *        sum_{n=2..N} x[n] x[n-1]  /  sum_{n=1..N} x[n]^2.
 *
 * @throws std::invalid_argument for series shorter than 2
 * @throws DegenerateInput when the denominator is zero (all-zero series)
 */
double acf_estimate(std::span<const double> series);

/// Fraction of consecutive equal bits over n = 2..N, divided by N - 1.
LambdaEstimate lambda_hat(std::span<const std::uint8_t> bits);

/// cos(pi * (1 - lambda)); the sign-process estimator maps lambda_hat through
/// this. @throws std::domain_error for lambda outside [0, 1].
double kedem_rho(double lambda);

/// Evaluate a piecewise-linear model at lambda (default: proposed_pwl_model()).
double piecewise_rho(double lambda);
double piecewise_rho(double lambda, const PiecewiseLinearModel& model);

/// proposed_pwl_dyadic_model() evaluated at lambda.
double piecewise_rho_dyadic(double lambda);

struct EstimateTriple {
    double acf = 0.0;
    double kedem = 0.0;
    double proposed = 0.0;
};

/// All three batch estimates of one series. The sign-based estimates may fall
/// slightly outside [-1, 1] (e.g. +-1.01 at the lambda endpoints); they are
/// returned raw, callers opt into clamping.
EstimateTriple estimate_all(std::span<const double> series);

}  // namespace rho_lite

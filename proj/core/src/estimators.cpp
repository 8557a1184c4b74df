#include "rho_lite/estimators.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rho_lite {

void PiecewiseLinearModel::validate() const {
    const std::size_t k = slopes.size();
    if (k == 0 || intercepts.size() != k || breakpoints.size() != k + 1) {
        throw std::invalid_argument("PiecewiseLinearModel: inconsistent segment counts");
    }
    if (breakpoints.front() != 0.0 || breakpoints.back() != 1.0) {
        throw std::invalid_argument("PiecewiseLinearModel: breakpoints must span [0, 1]");
    }
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i] < breakpoints[i + 1])) {
            throw std::invalid_argument("PiecewiseLinearModel: breakpoints must be ascending");
        }
    }
}

std::size_t PiecewiseLinearModel::segment_index(double lambda) const {
    if (!(lambda >= 0.0) || !(lambda <= 1.0)) {
        std::ostringstream msg;
        msg << "piecewise model: lambda must lie in [0, 1], got " << lambda;
        throw std::domain_error(msg.str());
    }
    // Half-open intervals [b_k, b_{k+1}); lambda == 1 belongs to the last one.
    std::size_t k = slopes.size() - 1;
    for (std::size_t i = 1; i < breakpoints.size() - 1; ++i) {
        if (lambda < breakpoints[i]) {
            k = i - 1;
            break;
        }
    }
    return k;
}

double PiecewiseLinearModel::evaluate(double lambda) const {
    const std::size_t k = segment_index(lambda);
    return intercepts[k] + slopes[k] * lambda;
}

const PiecewiseLinearModel& proposed_pwl_model() {
    static const PiecewiseLinearModel model{
        {0.0, 0.14, 0.30, 0.70, 0.86, 1.0},
        {-1.01, -1.20, -1.51, -0.77, 0.37},
        {0.64, 1.97, 3.02, 1.97, 0.64},
    };
    return model;
}

const PiecewiseLinearModel& proposed_pwl_dyadic_model() {
    static const PiecewiseLinearModel model{
        {0.0, 0.14, 0.30, 0.70, 0.86, 1.0},
        {-1.0, -5.0 / 4.0, -3.0 / 2.0, -3.0 / 4.0, 3.0 / 8.0},
        {5.0 / 8.0, 63.0 / 32.0, 3.0, 63.0 / 32.0, 5.0 / 8.0},
    };
    return model;
}

double acf_estimate(std::span<const double> series) {
    if (series.size() < 2) {
        throw std::invalid_argument("acf_estimate: need at least 2 samples");
    }
    double numerator = 0.0;
    double denominator = series[0] * series[0];
    for (std::size_t n = 1; n < series.size(); ++n) {
        numerator += series[n] * series[n - 1];
        denominator += series[n] * series[n];
    }
    if (denominator == 0.0) {
        throw DegenerateInput("acf_estimate: degenerate series (all samples zero)");
    }
    return numerator / denominator;
}

LambdaEstimate lambda_hat(std::span<const std::uint8_t> bits) {
    if (bits.size() < 2) {
        throw std::invalid_argument("lambda_hat: need at least 2 samples");
    }
    std::size_t agreements = 0;
    for (std::size_t n = 1; n < bits.size(); ++n) {
        agreements += (bits[n] == bits[n - 1]) ? 1 : 0;
    }
    const std::size_t comparisons = bits.size() - 1;
    return {static_cast<double>(agreements) / static_cast<double>(comparisons), agreements,
            comparisons};
}

double kedem_rho(double lambda) {
    if (!(lambda >= 0.0) || !(lambda <= 1.0)) {
        std::ostringstream msg;
        msg << "kedem_rho: lambda must lie in [0, 1], got " << lambda;
        throw std::domain_error(msg.str());
    }
    return std::cos(std::numbers::pi * (1.0 - lambda));
}

double piecewise_rho(double lambda) { return proposed_pwl_model().evaluate(lambda); }

double piecewise_rho(double lambda, const PiecewiseLinearModel& model) {
    return model.evaluate(lambda);
}

double piecewise_rho_dyadic(double lambda) { return proposed_pwl_dyadic_model().evaluate(lambda); }

EstimateTriple estimate_all(std::span<const double> series) {
    const double acf = acf_estimate(series);
    const LambdaEstimate lam = lambda_hat(sign_process(series));
    return {acf, kedem_rho(lam.value), piecewise_rho(lam.value)};
}

}  // namespace rho_lite

#include "rho_lite/ar1.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace rho_lite {

void Ar1Params::validate() const {
    if (!(std::abs(rho) < 1.0)) {
        std::ostringstream msg;
        msg << "Ar1Params: |rho| < 1 required for stationarity, got rho = " << rho;
        throw std::invalid_argument(msg.str());
    }
    if (!(noise_sigma > 0.0)) {
        std::ostringstream msg;
        msg << "Ar1Params: noise_sigma must be positive, got " << noise_sigma;
        throw std::invalid_argument(msg.str());
    }
}

double noise_sigma_for_coverage(double coverage, double bound) {
    if (!(coverage > 0.0) || !(coverage < 1.0)) {
        std::ostringstream msg;
        msg << "noise_sigma_for_coverage: coverage must lie in (0, 1), got " << coverage;
        throw std::invalid_argument(msg.str());
    }
    if (!(bound > 0.0)) {
        throw std::invalid_argument("noise_sigma_for_coverage: bound must be positive");
    }
    const boost::math::normal_distribution<double> unit_normal;
    const double z = boost::math::quantile(unit_normal, 0.5 * (1.0 + coverage));
    return bound / z;
}

SampleSeries generate_ar1(const Ar1Params& params, std::size_t n, std::uint64_t seed,
                          InitMode init, std::size_t burn_in_samples) {
    params.validate();
    if (n < 2) {
        throw std::invalid_argument("generate_ar1: need at least 2 samples");
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> unit(0.0, 1.0);
    const double rho = params.rho;
    const double sigma = params.noise_sigma;

    SampleSeries out;
    out.reserve(n);

    double x = 0.0;
    if (init == InitMode::stationary) {
        // Stationary marginal: N(0, sigma^2 / (1 - rho^2)), so the
        // autocorrelation identity holds from the very first sample.
        x = unit(rng) * sigma / std::sqrt(1.0 - rho * rho);
    } else {
        for (std::size_t k = 0; k < burn_in_samples; ++k) {
            x = rho * x + sigma * unit(rng);
        }
    }
    out.push_back(x);
    for (std::size_t k = 1; k < n; ++k) {
        x = rho * x + sigma * unit(rng);
        out.push_back(x);
    }
    return out;
}

BinarySeries sign_process(std::span<const double> samples) {
    if (samples.empty()) {
        throw std::invalid_argument("sign_process: empty series");
    }
    BinarySeries bits;
    bits.reserve(samples.size());
    for (double v : samples) {
        bits.push_back(v > 0.0 ? 1 : 0);  // strict: zero maps to 0
    }
    return bits;
}

double theoretical_acf(const Ar1Params& params, int lag) {
    params.validate();
    if (lag < 0) {
        throw std::invalid_argument("theoretical_acf: lag must be non-negative");
    }
    return std::pow(params.rho, lag);
}

}  // namespace rho_lite

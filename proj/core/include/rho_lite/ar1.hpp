#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rho_lite {

/**
 * @brief Parameters of the first-order autoregressive recursion
 *        x[n] = rho * x[n-1] + w[n], with w[n] i.i.d. N(0, noise_sigma^2).
 *
 * Stationarity requires |rho| < 1 (strict).
 */
struct Ar1Params {
    double rho = 0.0;          ///< correlation coefficient, |rho| < 1
    double noise_sigma = 1.0;  ///< standard deviation (not variance) of the innovations

    /// @throws std::invalid_argument if |rho| >= 1 or noise_sigma <= 0
    void validate() const;
};

using SampleSeries = std::vector<double>;
using BinarySeries = std::vector<std::uint8_t>;

enum class InitMode {
    stationary,  ///< draw x[1] from the stationary marginal N(0, sigma^2 / (1 - rho^2))
    burn_in      ///< start at zero and discard a warm-up prefix before recording
};

/**
 * @brief Standard deviation sigma such that P(|W| <= bound) = coverage for
 *        W ~ N(0, sigma^2), i.e. sigma = bound / z_{(1+coverage)/2}.
 *
 * Example: noise_sigma_for_coverage(0.90, 1.0) ~= 0.6080, the noise level at
 * which 90% of the innovations fall inside [-1, 1].
 */
double noise_sigma_for_coverage(double coverage, double bound);

/**
 * @brief Generate a Gaussian AR(1) sample path of length n.
 *
 * Deterministic for a given (params, n, seed, init) tuple. In stationary mode
 * the first sample is drawn from the stationary marginal so the process is
 * exactly stationary from index 1.
 */
SampleSeries generate_ar1(const Ar1Params& params, std::size_t n, std::uint64_t seed,
                          InitMode init = InitMode::stationary,
                          std::size_t burn_in_samples = 1024);

/// Binary threshold process: bit[n] = 1 iff samples[n] > 0 (strict; zero maps to 0).
BinarySeries sign_process(std::span<const double> samples);

/// Lag-k autocorrelation of the stationary process: rho^lag. Rejects negative lags.
double theoretical_acf(const Ar1Params& params, int lag);

}  // namespace rho_lite

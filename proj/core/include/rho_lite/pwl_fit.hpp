#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>

#include "rho_lite/dyadic.hpp"
#include "rho_lite/estimators.hpp"

namespace rho_lite {

using TargetFn = std::function<double(double)>;

struct FitConfig {
    std::size_t n_segments = 5;
    /// Evaluation points on [0, 1]; reported errors use this grid. Spacing of
    /// 1e-4 or finer makes the grid maximum indistinguishable from the
    /// continuous maximum for smooth targets.
    std::size_t grid_size = 10001;
    /// Constrain interior breakpoints to mirror around 1/2.
    bool antisymmetry_constraint = false;
    std::size_t max_iterations = 400;  ///< outer-search generations
    std::size_t population = 40;       ///< outer-search population size
    double tolerance = 1e-10;          ///< minimum improvement still counted as progress
    std::uint64_t seed = 0;

    void validate() const;
};

struct FitResult {
    PiecewiseLinearModel model;
    double max_error = 0.0;      ///< max |model - target| on the cfg grid
    double error_location = 0.0; ///< grid point attaining it
    std::size_t generations = 0;
    bool converged = false;
};

/// Thrown when the outer search exhausts max_iterations while still
/// improving; carries the best model found so far.
struct FitNotConverged : std::runtime_error {
    explicit FitNotConverged(FitResult best_so_far);
    FitResult best;
};

/**
 * @brief Minimax K-segment piecewise-linear fit of a function on [0, 1].
 *
 * Outer layer: differential evolution over the K-1 interior breakpoints.
 * Inner layer: exact per-segment minimax affine fit on the grid (the optimal
 * slope is a kink of the convex residual-spread function, located through the
 * segment's convex hulls). Segments are fit independently; continuity across
 * breakpoints is not enforced. Deterministic for a fixed cfg.seed.
 */
FitResult fit_piecewise(const TargetFn& target, const FitConfig& cfg);

struct MaxError {
    double error = 0.0;
    double argmax = 0.0;
};

/// Max |model(x) - target(x)| over a uniform grid, and where it happens.
MaxError max_abs_error(const PiecewiseLinearModel& model, const TargetFn& target,
                       std::size_t grid_size);

/// Copy of a model with every intercept and slope replaced by its dyadic
/// quantization under the caps; breakpoints are kept as-is.
PiecewiseLinearModel quantize_model(const PiecewiseLinearModel& model, const DyadicCaps& caps,
                                    DyadicMode mode);

}  // namespace rho_lite

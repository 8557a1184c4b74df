#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rho_lite/estimators.hpp"
#include "rho_lite/fixed_point.hpp"

namespace rho_lite {

struct WindowConfig {
    std::size_t window_n = 512;
    QFormat input_format = QFormat::q1_8();
    /// Emit estimates from the first clock with zero-initialized delay lines
    /// (the datapath-debug behavior) instead of suppressing output until the
    /// window is full.
    bool emit_during_warmup = false;

    void validate() const;
};

/// Signed accumulator width that can never overflow for the given window:
/// 2 * (input magnitude bits) + ceil(log2 window) + sign.
int required_accumulator_bits(const WindowConfig& cfg);

/**
 * @brief Streaming model of the windowed ratio estimator.
 *
 * Two delay lines hold the last N-1 lagged products x[n]x[n-1] and the last N
 * squares x[n]^2; each push retires the expired terms from the running
 * accumulators and adds the new ones, so after warm-up the output equals the
 * batch ratio estimate of the trailing N samples exactly (integer arithmetic
 * throughout, one full-precision division at the output).
 */
class SlidingAcfCorrelator {
public:
    explicit SlidingAcfCorrelator(const WindowConfig& cfg);

    /// One sample in, at most one estimate out. Returns nothing during
    /// warm-up and nothing on a degenerate (all-zero) window, which instead
    /// sets last_window_degenerate().
    std::optional<double> push(FixedWord sample);

    bool last_window_degenerate() const { return degenerate_; }
    std::int64_t numerator_raw() const { return numerator_; }
    std::int64_t denominator_raw() const { return denominator_; }
    std::size_t samples_seen() const { return count_; }

private:
    WindowConfig cfg_;
    std::vector<std::int64_t> product_ring_;  // N-1 live lagged products
    std::vector<std::int64_t> square_ring_;   // N live squares
    std::int64_t prev_raw_ = 0;
    std::int64_t numerator_ = 0;
    std::int64_t denominator_ = 0;
    std::size_t count_ = 0;
    bool degenerate_ = false;
};

/**
 * @brief Streaming sign-agreement counter.
 *
 * The input word is reduced to its sign bit, compared with the previous sign,
 * and the comparison result enters an N-1 deep ring; the running count adds
 * the newest comparison and retires the one made N-1 pushes earlier. After
 * warm-up the emitted estimate equals the batch agreement fraction of the
 * trailing N samples with divisor N-1, exactly.
 */
class SlidingLambdaCounter {
public:
    explicit SlidingLambdaCounter(const WindowConfig& cfg);

    std::optional<LambdaEstimate> push(FixedWord sample);

    std::size_t agreement_count() const { return agreements_; }
    std::size_t samples_seen() const { return count_; }

private:
    WindowConfig cfg_;
    std::vector<std::uint8_t> agreement_ring_;  // N-1 live comparisons
    std::uint8_t prev_bit_ = 0;
    std::size_t agreements_ = 0;
    std::size_t count_ = 0;
};

enum class RhoBackend {
    cordic,     ///< cos(pi * (1 - lambda)) through the fixed-point rotator
    dyadic_pwl  ///< folded three-segment shift-add evaluation of the dyadic model
};

/**
 * @brief Full streaming estimator: sign counter feeding one of the two
 *        correlation datapaths, one estimate per push after warm-up.
 *
 * The dyadic backend exploits the model's antisymmetry: lambda above 1/2 is
 * complemented, one of the first three segments is evaluated with shift-add
 * constants, and the result is negated. Complement and negation are wiring in
 * the modeled datapath and are not charged to the counter; charged per
 * estimate are the interval comparisons (one each), the slope network's
 * shift/add cost, and one intercept addition. The cordic backend charges one
 * addition and one multiplication for the angle pi*(1/2 - lambda) plus the
 * kernel's iteration budget.
 */
class RhoPipeline {
public:
    RhoPipeline(const WindowConfig& cfg, RhoBackend backend, const CordicConfig& cordic = {});

    std::optional<FixedWord> push(FixedWord sample);

    /// The datapath after the counter stage, exposed for direct drive: map a
    /// lambda word in [0, 1] to a rho estimate word.
    FixedWord evaluate(FixedWord lambda);

    const OpCounter& counter() const { return ops_; }
    OpCounter& counter() { return ops_; }
    RhoBackend backend() const { return backend_; }

private:
    FixedWord evaluate_dyadic(FixedWord lambda);
    FixedWord evaluate_cordic(FixedWord lambda);

    SlidingLambdaCounter lambda_stage_;
    WindowConfig cfg_;
    RhoBackend backend_;
    CordicConfig cordic_;
    OpCounter ops_;
};

}  // namespace rho_lite

#include "rho_lite/streaming.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rho_lite {

void WindowConfig::validate() const {
    if (window_n < 2) {
        throw std::invalid_argument("WindowConfig: window_n must be at least 2");
    }
    input_format.validate();
    if (input_format.fraction_bits < 2 ||
        input_format.total_bits - 1 - input_format.fraction_bits < 1) {
        // The datapath needs lambda in [0, 1] representable: at least one
        // integer bit and enough fraction for the interval thresholds.
        throw std::invalid_argument("WindowConfig: input_format cannot represent [0, 1]");
    }
}

int required_accumulator_bits(const WindowConfig& cfg) {
    const int magnitude_bits = cfg.input_format.total_bits - 1;
    const auto window = static_cast<std::uint64_t>(cfg.window_n);
    return 2 * magnitude_bits + static_cast<int>(std::bit_width(window - 1)) + 1;
}

// ---------------------------------------------------------------------------
// windowed ratio correlator
// ---------------------------------------------------------------------------

SlidingAcfCorrelator::SlidingAcfCorrelator(const WindowConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    product_ring_.assign(cfg_.window_n - 1, 0);
    square_ring_.assign(cfg_.window_n, 0);
}

std::optional<double> SlidingAcfCorrelator::push(FixedWord sample) {
    if (!(sample.format == cfg_.input_format)) {
        throw std::invalid_argument("correlator push: sample format mismatch");
    }
    const std::int64_t raw = sample.raw;
    const std::int64_t product = raw * prev_raw_;  // first push pairs with zero
    const std::int64_t square = raw * raw;

    const std::size_t pi = count_ % product_ring_.size();
    numerator_ += product - product_ring_[pi];
    product_ring_[pi] = product;

    const std::size_t si = count_ % square_ring_.size();
    denominator_ += square - square_ring_[si];
    square_ring_[si] = square;

    prev_raw_ = raw;
    ++count_;

    if (count_ < cfg_.window_n && !cfg_.emit_during_warmup) {
        return std::nullopt;
    }
    if (denominator_ == 0) {
        degenerate_ = true;
        return std::nullopt;
    }
    degenerate_ = false;
    return static_cast<double>(numerator_) / static_cast<double>(denominator_);
}

// ---------------------------------------------------------------------------
// sign-agreement counter
// ---------------------------------------------------------------------------

SlidingLambdaCounter::SlidingLambdaCounter(const WindowConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    agreement_ring_.assign(cfg_.window_n - 1, 0);
}

std::optional<LambdaEstimate> SlidingLambdaCounter::push(FixedWord sample) {
    if (!(sample.format == cfg_.input_format)) {
        throw std::invalid_argument("lambda push: sample format mismatch");
    }
    const std::uint8_t bit = sample.raw > 0 ? 1 : 0;
    if (count_ >= 1) {
        const std::uint8_t agree = bit == prev_bit_ ? 1 : 0;
        const std::size_t idx = (count_ - 1) % agreement_ring_.size();
        agreements_ += agree;
        agreements_ -= agreement_ring_[idx];
        agreement_ring_[idx] = agree;
    }
    prev_bit_ = bit;
    ++count_;

    if (count_ < cfg_.window_n && !cfg_.emit_during_warmup) {
        return std::nullopt;
    }
    const std::size_t comparisons = cfg_.window_n - 1;
    return LambdaEstimate{static_cast<double>(agreements_) / static_cast<double>(comparisons),
                          agreements_, comparisons};
}

// ---------------------------------------------------------------------------
// rho datapaths
// ---------------------------------------------------------------------------

RhoPipeline::RhoPipeline(const WindowConfig& cfg, RhoBackend backend, const CordicConfig& cordic)
    : lambda_stage_(cfg), cfg_(cfg), backend_(backend), cordic_(cordic) {}

std::optional<FixedWord> RhoPipeline::push(FixedWord sample) {
    const auto lambda = lambda_stage_.push(sample);
    if (!lambda.has_value()) {
        return std::nullopt;
    }
    if (backend_ == RhoBackend::cordic) {
        ops_.divisions += 1;  // lambda normalization by N-1, full precision
    }
    const FixedWord lambda_word =
        quantize(lambda->value, cfg_.input_format, RoundMode::nearest_even);
    return evaluate(lambda_word);
}

FixedWord RhoPipeline::evaluate(FixedWord lambda) {
    if (lambda.raw < 0 || lambda.to_real() > 1.0) {
        throw std::domain_error("RhoPipeline::evaluate: lambda word outside [0, 1]");
    }
    return backend_ == RhoBackend::cordic ? evaluate_cordic(lambda) : evaluate_dyadic(lambda);
}

FixedWord RhoPipeline::evaluate_dyadic(FixedWord lambda) {
    const QFormat fmt = lambda.format;
    const int f = fmt.fraction_bits;
    const std::int64_t one = std::int64_t{1} << f;
    const std::int64_t half = std::int64_t{1} << (f - 1);

    // Antisymmetry fold: lambda above 1/2 is complemented and the result
    // negated, so only the first three segments carry arithmetic.
    ops_.comparisons += 1;
    const bool fold = lambda.raw > half;
    const std::int64_t lam_eff = fold ? one - lambda.raw : lambda.raw;

    // Interval thresholds in raw units: first raw value belonging to the
    // second and third segments.
    const auto t1 = static_cast<std::int64_t>(std::ceil(0.14 * static_cast<double>(one)));
    const auto t2 = static_cast<std::int64_t>(std::ceil(0.30 * static_cast<double>(one)));

    static const DyadicRational slopes[3] = {{5, 3}, {63, 5}, {3, 0}};
    std::size_t seg;
    ops_.comparisons += 1;
    if (lam_eff < t1) {
        seg = 0;
    } else {
        ops_.comparisons += 1;
        seg = lam_eff < t2 ? 1 : 2;
    }
    // Intercepts -1, -5/4, -3/2 in raw units (exact for fraction_bits >= 2).
    const std::int64_t intercepts[3] = {-one, -(std::int64_t{5} << (f - 2)),
                                        -(std::int64_t{3} << (f - 1))};

    const FixedWord scaled = dyadic_mul({lam_eff, fmt}, slopes[seg], &ops_);
    std::int64_t acc = scaled.raw + intercepts[seg];
    ops_.additions += 1;
    if (fold) {
        acc = -acc;  // complement wiring in the modeled adder, not charged
    }
    if (acc < fmt.raw_min()) {
        acc = fmt.raw_min();
        ++ops_.saturations;
    } else if (acc > fmt.raw_max()) {
        acc = fmt.raw_max();
        ++ops_.saturations;
    }
    return {acc, fmt};
}

FixedWord RhoPipeline::evaluate_cordic(FixedWord lambda) {
    // Angle pi * (1/2 - lambda) keeps the rotation inside [-pi/2, pi/2] for
    // every lambda in [0, 1]; starting from (0, K) the rotator then lands on
    // -sin of it, which is exactly cos(pi * (1 - lambda)).
    const double angle = std::numbers::pi * (0.5 - lambda.to_real());
    ops_.additions += 1;        // 1/2 - lambda
    ops_.multiplications += 1;  // scaling by pi

    const int f = cordic_.internal_bits - 2;
    const auto z_raw = static_cast<std::int64_t>(std::nearbyint(std::ldexp(angle, f)));
    const auto k_raw = static_cast<std::int64_t>(
        std::nearbyint(std::ldexp(cordic_gain(cordic_.iterations), f)));

    const std::int64_t x_final = cordic_rotate_x(0, k_raw, z_raw, f, cordic_.iterations, &ops_);
    return quantize(std::ldexp(static_cast<double>(x_final), -f), cfg_.input_format,
                    RoundMode::nearest_even, &ops_);
}

}  // namespace rho_lite

#include "rho_lite/fixed_point.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace rho_lite {

void QFormat::validate() const {
    if (total_bits < 2 || total_bits > 62) {
        throw std::invalid_argument("QFormat: total_bits must lie in [2, 62]");
    }
    if (fraction_bits < 0 || fraction_bits >= total_bits) {
        throw std::invalid_argument("QFormat: fraction_bits must lie in [0, total_bits)");
    }
}

std::int64_t QFormat::raw_min() const { return -(std::int64_t{1} << (total_bits - 1)); }
std::int64_t QFormat::raw_max() const { return (std::int64_t{1} << (total_bits - 1)) - 1; }
double QFormat::lsb() const { return std::ldexp(1.0, -fraction_bits); }
double QFormat::min_value() const { return static_cast<double>(raw_min()) * lsb(); }
double QFormat::max_value() const { return static_cast<double>(raw_max()) * lsb(); }

double FixedWord::to_real() const { return static_cast<double>(raw) * format.lsb(); }

FixedWord quantize(double value, QFormat format, RoundMode mode, OpCounter* overflow_counter) {
    format.validate();
    if (std::isnan(value)) {
        throw std::invalid_argument("quantize: value is NaN");
    }
    const double scaled = std::ldexp(value, format.fraction_bits);
    double rounded;
    if (mode == RoundMode::nearest_even) {
        rounded = std::nearbyint(scaled);  // FE_TONEAREST: ties to even
    } else {
        rounded = std::floor(scaled);  // what an arithmetic right shift does
    }
    const auto lo = static_cast<double>(format.raw_min());
    const auto hi = static_cast<double>(format.raw_max());
    std::int64_t raw;
    if (rounded < lo) {
        raw = format.raw_min();
        if (overflow_counter != nullptr) ++overflow_counter->saturations;
    } else if (rounded > hi) {
        raw = format.raw_max();
        if (overflow_counter != nullptr) ++overflow_counter->saturations;
    } else {
        raw = static_cast<std::int64_t>(rounded);
    }
    return {raw, format};
}

double cordic_gain(int iterations) {
    double k = 1.0;
    for (int i = 0; i < iterations; ++i) {
        k /= std::sqrt(1.0 + std::ldexp(1.0, -2 * i));
    }
    return k;
}

std::int64_t cordic_rotate_x(std::int64_t x0, std::int64_t y0, std::int64_t z0,
                             int fraction_bits, int iterations, OpCounter* counter) {
    // Angle table in the internal scale, rounded once up front.
    std::vector<std::int64_t> atan_raw(static_cast<std::size_t>(iterations));
    for (int i = 0; i < iterations; ++i) {
        atan_raw[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(
            std::nearbyint(std::ldexp(std::atan(std::ldexp(1.0, -i)), fraction_bits)));
    }

    std::int64_t x = x0;
    std::int64_t y = y0;
    std::int64_t z = z0;
    for (int i = 0; i < iterations; ++i) {
        const bool positive = z >= 0;
        const std::int64_t xs = x >> i;  // truncating (arithmetic) shifts
        const std::int64_t ys = y >> i;
        if (positive) {
            x -= ys;
            y += xs;
            z -= atan_raw[static_cast<std::size_t>(i)];
        } else {
            x += ys;
            y -= xs;
            z += atan_raw[static_cast<std::size_t>(i)];
        }
        if (counter != nullptr) {
            counter->additions += 2;  // x and y updates; z is angle bookkeeping
            if (i > 0) {
                counter->shifts += 2;
            }
        }
    }
    return x;
}

FixedWord cordic_cos(FixedWord angle, const CordicConfig& cfg, OpCounter* counter,
                     QFormat out_format) {
    angle.format.validate();
    out_format.validate();
    if (cfg.iterations < 1 || cfg.iterations > 60) {
        throw std::invalid_argument("cordic_cos: iterations must lie in [1, 60]");
    }
    if (cfg.internal_bits < 8 || cfg.internal_bits > 62) {
        throw std::invalid_argument("cordic_cos: internal_bits must lie in [8, 62]");
    }

    const double theta_in = angle.to_real();
    if (std::abs(theta_in) > std::numbers::pi + angle.format.lsb()) {
        std::ostringstream msg;
        msg << "cordic_cos: angle must lie in [-pi, pi], got " << theta_in;
        throw std::domain_error(msg.str());
    }

    // Evenness first (cos(-t) = cos(t)), so opposite angles take the bit-exact
    // same path; then fold (pi/2, pi] by starting from (-K, 0) with the
    // residual angle t - pi, since cos(t) = -cos(t - pi).
    const double theta = std::abs(theta_in);
    const bool folded = theta > std::numbers::pi / 2.0;
    const double residual = folded ? theta - std::numbers::pi : theta;

    const int f = cfg.internal_bits - 2;  // x, y, z live in [-2, 2)
    const double gain = cordic_gain(cfg.iterations);
    const auto k_raw = static_cast<std::int64_t>(std::nearbyint(std::ldexp(gain, f)));
    const auto z_raw = static_cast<std::int64_t>(std::nearbyint(std::ldexp(residual, f)));

    const std::int64_t x_final =
        cordic_rotate_x(folded ? -k_raw : k_raw, 0, z_raw, f, cfg.iterations, counter);

    return quantize(std::ldexp(static_cast<double>(x_final), -f), out_format,
                    RoundMode::nearest_even, counter);
}

FixedWord dyadic_mul(FixedWord x, const DyadicRational& c, OpCounter* counter) {
    x.format.validate();
    if (c.log2_denominator < 0) {
        throw std::invalid_argument("dyadic_mul: negative denominator exponent");
    }
    if (c.numerator != 0 &&
        std::llabs(x.raw) > (std::int64_t{1} << 61) / std::llabs(c.numerator)) {
        throw std::overflow_error("dyadic_mul: raw product would overflow");
    }

    const std::int64_t product = x.raw * c.numerator;
    std::int64_t shifted = product >> c.log2_denominator;  // truncating

    if (shifted < x.format.raw_min()) {
        shifted = x.format.raw_min();
        if (counter != nullptr) ++counter->saturations;
    } else if (shifted > x.format.raw_max()) {
        shifted = x.format.raw_max();
        if (counter != nullptr) ++counter->saturations;
    }
    if (counter != nullptr) {
        const ShiftAddCost cost = shift_add_cost(c);
        counter->additions += static_cast<std::uint64_t>(cost.additions);
        counter->shifts += static_cast<std::uint64_t>(cost.shifts);
    }
    return {shifted, x.format};
}

}  // namespace rho_lite

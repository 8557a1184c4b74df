#pragma once

#include <cstdint>

#include "rho_lite/dyadic.hpp"

namespace rho_lite {

/**
 * @brief Signed two's-complement fixed-point format.
 *
 * A word holds total_bits bits of which fraction_bits are fractional; the real
 * value of raw r is r * 2^-fraction_bits. The representable range is
 * [-2^(total-1-frac), 2^(total-1-frac) - 2^-frac].
 */
struct QFormat {
    int total_bits = 10;
    int fraction_bits = 8;

    /// @throws std::invalid_argument unless 2 <= total_bits <= 62 and
    ///         0 <= fraction_bits < total_bits
    void validate() const;

    std::int64_t raw_min() const;  ///< -2^(total_bits-1)
    std::int64_t raw_max() const;  ///<  2^(total_bits-1) - 1
    double lsb() const;            ///<  2^-fraction_bits
    double min_value() const;
    double max_value() const;

    bool operator==(const QFormat&) const = default;

    /// Default 10-bit estimate word: range [-2, 2), resolution 2^-8.
    static QFormat q1_8() { return QFormat{10, 8}; }
};

/// A fixed-point value: a raw two's-complement integer plus its format.
struct FixedWord {
    std::int64_t raw = 0;
    QFormat format{};

    double to_real() const;
    bool operator==(const FixedWord&) const = default;
};

enum class RoundMode {
    nearest_even,  ///< round to nearest, ties to even
    truncate       ///< floor in raw units, the behavior of an arithmetic right shift
};

/**
 * @brief Tally of arithmetic operations charged by the instrumented paths.
 *
 * Tallies only grow during a counting session. Single writer; concurrent
 * sessions must use separate counters. `saturations` records quantizer
 * overflow events and is not part of the arithmetic-cost accounting.
 */
struct OpCounter {
    std::uint64_t multiplications = 0;
    std::uint64_t divisions = 0;
    std::uint64_t additions = 0;
    std::uint64_t shifts = 0;
    std::uint64_t comparisons = 0;
    std::uint64_t saturations = 0;

    void reset() { *this = OpCounter{}; }
    bool operator==(const OpCounter&) const = default;
};

/// Snapshot of a counter's tallies.
inline OpCounter counter_report(const OpCounter& counter) { return counter; }

/// Nearest representable value under the rounding mode; saturates at the
/// format range (no wraparound). Saturation is silent except for the optional
/// overflow tally.
FixedWord quantize(double value, QFormat format, RoundMode mode = RoundMode::nearest_even,
                   OpCounter* overflow_counter = nullptr);

struct CordicConfig {
    int iterations = 14;
    /// Width of the x/y/z words inside the kernel; their fraction length is
    /// internal_bits - 2 (one sign bit, one integer bit, range [-2, 2)).
    int internal_bits = 16;
};

/**
 * @brief Fixed-point cosine by circular-rotation CORDIC.
 *
 * Accepts angles in [-pi, pi]: evenness (cos(-t) = cos(t)) is applied first,
 * then angles above pi/2 are folded by starting the rotation from (-K, 0)
 * with the residual angle t - pi. Iteration arithmetic is truncating.
 *
 * Counter accounting matches the two-adds-per-iteration convention of the
 * modeled rotator: each iteration charges 2 additions, and 2 shifts when the
 * shift distance is nonzero (iteration 0 shifts by zero bits and is free), so
 * 14 iterations cost exactly 28 additions and at most 28 shifts. The angle
 * fold and the z-accumulator update are charged to angle generation, not here.
 */
FixedWord cordic_cos(FixedWord angle, const CordicConfig& cfg = {},
                     OpCounter* counter = nullptr, QFormat out_format = QFormat::q1_8());

/**
 * @brief x * c through a canonical signed-digit shift-add network.
 *
 * The product is exact in raw units, then arithmetic-shifted right by
 * log2_denominator (truncating) and saturated to x's format. The counter is
 * charged shift_add_cost(c).
 */
FixedWord dyadic_mul(FixedWord x, const DyadicRational& c, OpCounter* counter = nullptr);

/**
 * @brief Core rotation-mode kernel shared by cordic_cos and the streaming
 *        estimator datapath: rotate the pre-scaled start vector (x0, y0) by
 *        the angle z0 (all raw values in a fraction_bits fixed-point scale)
 *        and return the final x. Charges the per-iteration budget described
 *        at cordic_cos.
 */
std::int64_t cordic_rotate_x(std::int64_t x0, std::int64_t y0, std::int64_t z0,
                             int fraction_bits, int iterations, OpCounter* counter);

/// CORDIC gain product_{i<n} 1/sqrt(1 + 2^-2i) (the pre-scale constant K).
double cordic_gain(int iterations);

}  // namespace rho_lite

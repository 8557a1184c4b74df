#pragma once

#include <cstdint>
#include <vector>

namespace rho_lite {

/// Rational of the form numerator / 2^log2_denominator. Multiplication by such
/// a constant reduces to shifts and additions.
struct DyadicRational {
    std::int64_t numerator = 0;
    int log2_denominator = 0;

    double value() const;
    bool operator==(const DyadicRational&) const = default;
};

/// One nonzero digit of a signed-digit decomposition: sign * 2^position.
struct SignedDigit {
    int position = 0;
    int sign = 0;  // +1 or -1
};

/// Canonical signed-digit (CSD) form of n: minimal number of nonzero digits,
/// no two adjacent nonzeros. Digits are returned in ascending position order.
std::vector<SignedDigit> csd_digits(std::int64_t n);

/// Number of nonzero CSD digits of n (adder-count proxy for a shift-add
/// constant multiplier: weight w needs w - 1 adders).
int csd_weight(std::int64_t n);

/// Shift/add cost of multiplying by c through its CSD network: one addition
/// per nonzero digit after the first, one shift per nonzero digit at a nonzero
/// position, plus one final shift when log2_denominator > 0.
struct ShiftAddCost {
    int additions = 0;
    int shifts = 0;
};
ShiftAddCost shift_add_cost(const DyadicRational& c);

enum class DyadicMode {
    /// Minimize |value - dyadic| over every representable dyadic within caps.
    closest_value,
    /// Restrict numerators to at most max_signed_digits CSD digits (so the
    /// multiplier network needs at most max_signed_digits - 1 adders), then
    /// pick the closest value among the qualifying candidates.
    cost_aware
};

struct DyadicCaps {
    int max_log2_denominator = 5;
    std::int64_t max_numerator = 63;
    /// cost_aware only. 2 keeps every constant realizable with a single adder;
    /// this cap reproduces the hardware constant table for the default model.
    int max_signed_digits = 2;
};

/**
 * @brief Best dyadic approximation of value under the caps.
 *
 * Ties are broken toward the smaller denominator exponent, then the smaller
 * |numerator|; results are always in reduced form (odd numerator or exponent 0).
 * Idempotent on values already representable within the caps.
 */
DyadicRational quantize_dyadic(double value, const DyadicCaps& caps,
                               DyadicMode mode = DyadicMode::closest_value);

/// Convenience overload with explicit caps and closest-value mode.
DyadicRational quantize_dyadic(double value, int max_log2_denominator,
                               std::int64_t max_numerator);

}  // namespace rho_lite

#include "rho_lite/dyadic.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace rho_lite {

double DyadicRational::value() const {
    return static_cast<double>(numerator) / std::ldexp(1.0, log2_denominator);
}

std::vector<SignedDigit> csd_digits(std::int64_t n) {
    std::vector<SignedDigit> digits;
    const int sign = n < 0 ? -1 : 1;
    std::uint64_t m = static_cast<std::uint64_t>(std::llabs(n));
    int pos = 0;
    while (m != 0) {
        if (m & 1u) {
            // Runs of ones become 2^(k+1) - 2^j: emit -1 at the run start.
            const int digit = (m & 2u) ? -1 : 1;
            digits.push_back({pos, digit * sign});
            m -= static_cast<std::uint64_t>(digit);  // m mod 4 == 3 -> +1 carry
        }
        m >>= 1;
        ++pos;
    }
    return digits;
}

int csd_weight(std::int64_t n) {
    return static_cast<int>(csd_digits(n).size());
}

ShiftAddCost shift_add_cost(const DyadicRational& c) {
    ShiftAddCost cost;
    const auto digits = csd_digits(c.numerator);
    if (digits.empty()) {
        return cost;  // multiplying by zero: constant wiring
    }
    cost.additions = static_cast<int>(digits.size()) - 1;
    for (const auto& d : digits) {
        if (d.position > 0) {
            ++cost.shifts;
        }
    }
    if (c.log2_denominator > 0) {
        ++cost.shifts;
    }
    return cost;
}

namespace {

DyadicRational reduced(std::int64_t numerator, int log2_den) {
    while (log2_den > 0 && numerator % 2 == 0) {
        numerator /= 2;
        --log2_den;
    }
    return {numerator, log2_den};
}

}  // namespace

DyadicRational quantize_dyadic(double value, const DyadicCaps& caps, DyadicMode mode) {
    if (caps.max_log2_denominator < 0 || caps.max_numerator <= 0) {
        throw std::invalid_argument("quantize_dyadic: caps must be positive");
    }
    const int digit_cap =
        mode == DyadicMode::cost_aware ? caps.max_signed_digits : std::numeric_limits<int>::max();

    // Exhaustive scan of the candidate set. Qualifying numerators thin out
    // under the digit cap, so nothing short of enumeration is reliable; the
    // cost is max_numerator * max_log2_denominator candidates.
    DyadicRational best{0, 0};
    double best_err = std::numeric_limits<double>::infinity();
    for (int m = 0; m <= caps.max_log2_denominator; ++m) {
        for (std::int64_t k = -caps.max_numerator; k <= caps.max_numerator; ++k) {
            const DyadicRational cand = reduced(k, m);
            if (cand.log2_denominator != m && k != 0) {
                continue;  // non-reduced duplicate; visited at its own denominator
            }
            if (k == 0 && m != 0) {
                continue;
            }
            if (csd_weight(cand.numerator) > digit_cap) {
                continue;
            }
            const double err = std::abs(value - cand.value());
            const bool better =
                err < best_err ||
                (err == best_err && (cand.log2_denominator < best.log2_denominator ||
                                     (cand.log2_denominator == best.log2_denominator &&
                                      std::llabs(cand.numerator) < std::llabs(best.numerator))));
            if (better) {
                best = cand;
                best_err = err;
            }
        }
    }
    return best;
}

DyadicRational quantize_dyadic(double value, int max_log2_denominator, std::int64_t max_numerator) {
    DyadicCaps caps;
    caps.max_log2_denominator = max_log2_denominator;
    caps.max_numerator = max_numerator;
    return quantize_dyadic(value, caps, DyadicMode::closest_value);
}

}  // namespace rho_lite

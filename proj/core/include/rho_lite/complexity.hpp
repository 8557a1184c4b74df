#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "rho_lite/fixed_point.hpp"

namespace rho_lite {

enum class EstimatorKind { acf, kedem, proposed };

std::string to_string(EstimatorKind kind);
EstimatorKind estimator_kind_from_string(const std::string& name);

/**
 * @brief Arithmetic budget of one estimate over a window of n samples.
 *
 * Comparisons are tallied separately and are not part of the additions total.
 * When shifts_are_upper_bound is set, the shift (and comparison) figures are
 * worst-case budgets: measured runs may come in under them.
 */
struct OpCountReport {
    EstimatorKind kind = EstimatorKind::acf;
    std::size_t n = 0;
    std::uint64_t multiplications = 0;
    std::uint64_t divisions = 0;
    std::uint64_t additions = 0;
    std::uint64_t shifts = 0;
    std::uint64_t comparisons = 0;
    bool shifts_are_upper_bound = false;
};

/**
 * @brief Closed-form per-estimate budgets.
 *
 *   acf:      2n multiplications, 1 division, 2(n-1) additions, 0 shifts
 *   kedem:    1 multiplication, 1 division, n+28 additions, up to 28 shifts
 *   proposed: 0 multiplications, 0 divisions, n+1 additions, up to 2 shifts
 *
 * The acf figures count both windowed sums as n products (the lagged sum's
 * first product pairs with an implicit zero) accumulated with n-1 additions
 * each. The kedem row charges the sign-counter accumulation (n-1), the angle
 * offset (1), and the 14-iteration rotator (28); its division is the lambda
 * normalization and its multiplication the angle scaling by pi. The proposed
 * row charges the sign-counter accumulation plus one slope-network addition
 * and one intercept addition per estimate; its lambda normalization is a
 * counter-output rescaling (wiring, not arithmetic), hence zero divisions.
 */
OpCountReport formula_op_count(EstimatorKind kind, std::size_t n);

/**
 * @brief Run the batch estimator of the given kind over a generated length-n
 *        series with all arithmetic routed through counting wrappers, and
 *        return the tallies observed.
 */
OpCountReport measured_op_count(EstimatorKind kind, std::size_t n, std::uint64_t seed);

// Instrumented batch estimators used by measured_op_count. Passing a null
// counter disables counting without changing any arithmetic, so results are
// bit-identical with counting on or off.
double counted_acf_estimate(std::span<const double> series, OpCounter* ops);
double counted_kedem_estimate(std::span<const std::uint8_t> bits, const CordicConfig& cfg,
                              OpCounter* ops);
double counted_proposed_estimate(std::span<const std::uint8_t> bits, OpCounter* ops);

}  // namespace rho_lite

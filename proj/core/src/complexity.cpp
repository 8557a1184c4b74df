#include "rho_lite/complexity.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rho_lite/ar1.hpp"
#include "rho_lite/estimators.hpp"

namespace rho_lite {

std::string to_string(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::acf: return "acf";
        case EstimatorKind::kedem: return "kedem";
        case EstimatorKind::proposed: return "proposed";
    }
    throw std::invalid_argument("unknown estimator kind");
}

EstimatorKind estimator_kind_from_string(const std::string& name) {
    if (name == "acf") return EstimatorKind::acf;
    if (name == "kedem") return EstimatorKind::kedem;
    if (name == "proposed") return EstimatorKind::proposed;
    throw std::invalid_argument("unknown estimator kind: " + name);
}

OpCountReport formula_op_count(EstimatorKind kind, std::size_t n) {
    if (n < 2) {
        throw std::invalid_argument("formula_op_count: n must be at least 2");
    }
    OpCountReport r;
    r.kind = kind;
    r.n = n;
    switch (kind) {
        case EstimatorKind::acf:
            r.multiplications = 2 * n;
            r.divisions = 1;
            r.additions = 2 * (n - 1);
            r.shifts = 0;
            r.comparisons = 0;
            r.shifts_are_upper_bound = false;
            break;
        case EstimatorKind::kedem:
            r.multiplications = 1;
            r.divisions = 1;
            r.additions = n + 28;
            r.shifts = 28;
            r.comparisons = n - 1;
            r.shifts_are_upper_bound = true;
            break;
        case EstimatorKind::proposed:
            r.multiplications = 0;
            r.divisions = 0;
            r.additions = n + 1;
            r.shifts = 2;
            r.comparisons = (n - 1) + 4;
            r.shifts_are_upper_bound = true;
            break;
    }
    return r;
}

namespace {

inline void charge(OpCounter* ops, std::uint64_t OpCounter::* field, std::uint64_t amount = 1) {
    if (ops != nullptr) {
        ops->*field += amount;
    }
}

// Shared sign-agreement accumulation: n-1 comparisons, n-1 additions into a
// zero-initialized accumulator, one division by n-1.
double counted_lambda(std::span<const std::uint8_t> bits, OpCounter* ops, bool charge_division) {
    double agreements = 0.0;
    for (std::size_t i = 1; i < bits.size(); ++i) {
        charge(ops, &OpCounter::comparisons);
        const double agree = bits[i] == bits[i - 1] ? 1.0 : 0.0;
        agreements += agree;
        charge(ops, &OpCounter::additions);
    }
    if (charge_division) {
        charge(ops, &OpCounter::divisions);
    }
    return agreements / static_cast<double>(bits.size() - 1);
}

}  // namespace

double counted_acf_estimate(std::span<const double> series, OpCounter* ops) {
    if (series.size() < 2) {
        throw std::invalid_argument("counted_acf_estimate: need at least 2 samples");
    }
    // Both windowed sums are treated as n products folded with n-1 additions;
    // the lagged sum's first product pairs x[1] with an implicit zero, so the
    // value matches the batch estimator exactly while the tallies are
    // data-independent: 2n multiplications, 2(n-1) additions, 1 division.
    double numerator = series[0] * 0.0;
    charge(ops, &OpCounter::multiplications);
    double denominator = series[0] * series[0];
    charge(ops, &OpCounter::multiplications);
    for (std::size_t n = 1; n < series.size(); ++n) {
        numerator += series[n] * series[n - 1];
        charge(ops, &OpCounter::multiplications);
        charge(ops, &OpCounter::additions);
        denominator += series[n] * series[n];
        charge(ops, &OpCounter::multiplications);
        charge(ops, &OpCounter::additions);
    }
    if (denominator == 0.0) {
        throw DegenerateInput("counted_acf_estimate: degenerate series (all samples zero)");
    }
    charge(ops, &OpCounter::divisions);
    return numerator / denominator;
}

double counted_kedem_estimate(std::span<const std::uint8_t> bits, const CordicConfig& cfg,
                              OpCounter* ops) {
    if (bits.size() < 2) {
        throw std::invalid_argument("counted_kedem_estimate: need at least 2 samples");
    }
    const double lambda = counted_lambda(bits, ops, /*charge_division=*/true);

    // One addition and one multiplication by pi form the rotation angle
    // pi * (1/2 - lambda) in [-pi/2, pi/2]; starting the rotator from (0, K)
    // makes its x output -sin of that, i.e. cos(pi * (1 - lambda)), with no
    // data-dependent range reduction.
    const double angle = std::numbers::pi * (0.5 - lambda);
    charge(ops, &OpCounter::additions);
    charge(ops, &OpCounter::multiplications);

    const int f = cfg.internal_bits - 2;
    const auto z_raw = static_cast<std::int64_t>(std::nearbyint(std::ldexp(angle, f)));
    const auto k_raw =
        static_cast<std::int64_t>(std::nearbyint(std::ldexp(cordic_gain(cfg.iterations), f)));
    const std::int64_t x_final = cordic_rotate_x(0, k_raw, z_raw, f, cfg.iterations, ops);
    return std::ldexp(static_cast<double>(x_final), -f);
}

double counted_proposed_estimate(std::span<const std::uint8_t> bits, OpCounter* ops) {
    if (bits.size() < 2) {
        throw std::invalid_argument("counted_proposed_estimate: need at least 2 samples");
    }
    // The datapath consumes the agreement counter's bits directly; rescaling
    // them into a fixed-point lambda word is wiring, so no division is
    // charged.
    const double lambda = counted_lambda(bits, ops, /*charge_division=*/false);

    const PiecewiseLinearModel& model = proposed_pwl_dyadic_model();
    std::size_t seg = model.segment_count() - 1;
    for (std::size_t i = 1; i + 1 < model.breakpoints.size(); ++i) {
        charge(ops, &OpCounter::comparisons);
        if (lambda < model.breakpoints[i]) {
            seg = i - 1;
            break;
        }
    }

    static const DyadicRational slope_constants[5] = {{5, 3}, {63, 5}, {3, 0}, {63, 5}, {5, 3}};
    const DyadicRational c = slope_constants[seg];
    const ShiftAddCost cost = shift_add_cost(c);
    charge(ops, &OpCounter::additions, static_cast<std::uint64_t>(cost.additions));
    charge(ops, &OpCounter::shifts, static_cast<std::uint64_t>(cost.shifts));
    const double scaled =
        lambda * static_cast<double>(c.numerator) / std::ldexp(1.0, c.log2_denominator);

    charge(ops, &OpCounter::additions);
    return model.intercepts[seg] + scaled;
}

OpCountReport measured_op_count(EstimatorKind kind, std::size_t n, std::uint64_t seed) {
    if (n < 2) {
        throw std::invalid_argument("measured_op_count: n must be at least 2");
    }
    const Ar1Params params{0.5, noise_sigma_for_coverage(0.90, 1.0)};
    const SampleSeries series = generate_ar1(params, n, seed);

    OpCounter ops;
    switch (kind) {
        case EstimatorKind::acf:
            counted_acf_estimate(series, &ops);
            break;
        case EstimatorKind::kedem:
            counted_kedem_estimate(sign_process(series), CordicConfig{}, &ops);
            break;
        case EstimatorKind::proposed:
            counted_proposed_estimate(sign_process(series), &ops);
            break;
    }
    OpCountReport r;
    r.kind = kind;
    r.n = n;
    r.multiplications = ops.multiplications;
    r.divisions = ops.divisions;
    r.additions = ops.additions;
    r.shifts = ops.shifts;
    r.comparisons = ops.comparisons;
    r.shifts_are_upper_bound = false;  // measured figures are exact observations
    return r;
}

}  // namespace rho_lite

#include "rho_lite/pwl_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace rho_lite {

void FitConfig::validate() const {
    if (n_segments < 1) {
        throw std::invalid_argument("FitConfig: n_segments must be at least 1");
    }
    if (grid_size < 1000) {
        throw std::invalid_argument("FitConfig: grid_size must be at least 1000");
    }
    if (population < 4) {
        throw std::invalid_argument("FitConfig: population must be at least 4");
    }
    if (max_iterations < 1) {
        throw std::invalid_argument("FitConfig: max_iterations must be at least 1");
    }
    if (!(tolerance >= 0.0)) {
        throw std::invalid_argument("FitConfig: tolerance must be non-negative");
    }
}

FitNotConverged::FitNotConverged(FitResult best_so_far)
    : std::runtime_error("fit_piecewise: outer search still improving at max_iterations"),
      best(std::move(best_so_far)) {}

namespace {

struct Grid {
    std::vector<double> xs;
    std::vector<double> ys;
};

Grid sample_target(const TargetFn& target, std::size_t grid_size) {
    Grid g;
    g.xs.resize(grid_size);
    g.ys.resize(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(grid_size - 1);
        g.xs[i] = x;
        g.ys[i] = target(x);
    }
    return g;
}

double cross(const Grid& g, std::size_t o, std::size_t a, std::size_t b) {
    return (g.xs[a] - g.xs[o]) * (g.ys[b] - g.ys[o]) - (g.ys[a] - g.ys[o]) * (g.xs[b] - g.xs[o]);
}

struct AffineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double error = 0.0;
};

// Exact minimax affine fit of the grid points [lo, hi). The residual spread
// max_i(y - b x) - min_i(y - b x) is convex piecewise linear in the slope b
// with kinks only at convex-hull edge slopes, so the optimum is found by
// evaluating the spread at every hull edge slope; hull support points are
// located by binary search over the monotone edge slopes.
AffineFit minimax_affine(const Grid& g, std::size_t lo, std::size_t hi) {
    const std::size_t m = hi - lo;
    if (m == 1) {
        return {g.ys[lo], 0.0, 0.0};
    }

    std::vector<std::size_t> upper;  // edge slopes decreasing
    std::vector<std::size_t> lower;  // edge slopes increasing
    for (std::size_t i = lo; i < hi; ++i) {
        while (upper.size() >= 2 && cross(g, upper[upper.size() - 2], upper.back(), i) >= 0.0) {
            upper.pop_back();
        }
        upper.push_back(i);
        while (lower.size() >= 2 && cross(g, lower[lower.size() - 2], lower.back(), i) <= 0.0) {
            lower.pop_back();
        }
        lower.push_back(i);
    }

    const auto edge_slope = [&g](const std::vector<std::size_t>& hull, std::size_t e) {
        return (g.ys[hull[e + 1]] - g.ys[hull[e]]) / (g.xs[hull[e + 1]] - g.xs[hull[e]]);
    };
    // Hull vertex maximizing (upper) or minimizing (lower) y - b x.
    const auto support_max = [&](double b) {
        std::size_t a = 0, z = upper.size() - 1;
        while (a < z) {
            const std::size_t mid = (a + z) / 2;
            if (edge_slope(upper, mid) > b) {
                a = mid + 1;
            } else {
                z = mid;
            }
        }
        return g.ys[upper[a]] - b * g.xs[upper[a]];
    };
    const auto support_min = [&](double b) {
        std::size_t a = 0, z = lower.size() - 1;
        while (a < z) {
            const std::size_t mid = (a + z) / 2;
            if (edge_slope(lower, mid) < b) {
                a = mid + 1;
            } else {
                z = mid;
            }
        }
        return g.ys[lower[a]] - b * g.xs[lower[a]];
    };

    double best_b = 0.0;
    double best_spread = std::numeric_limits<double>::infinity();
    const auto consider = [&](double b) {
        const double spread = support_max(b) - support_min(b);
        if (spread < best_spread) {
            best_spread = spread;
            best_b = b;
        }
    };
    for (std::size_t e = 0; e + 1 < upper.size(); ++e) consider(edge_slope(upper, e));
    for (std::size_t e = 0; e + 1 < lower.size(); ++e) consider(edge_slope(lower, e));
    if (!std::isfinite(best_spread)) {  // single hull edge on both sides
        consider((g.ys[hi - 1] - g.ys[lo]) / (g.xs[hi - 1] - g.xs[lo]));
    }

    const double r_max = support_max(best_b);
    const double r_min = support_min(best_b);
    return {0.5 * (r_max + r_min), best_b, 0.5 * (r_max - r_min)};
}

// Index of the first grid point belonging to segment k under the half-open
// interval convention.
std::vector<std::size_t> segment_bounds(const Grid& g, const std::vector<double>& breakpoints) {
    std::vector<std::size_t> bounds;
    bounds.reserve(breakpoints.size());
    bounds.push_back(0);
    for (std::size_t k = 1; k + 1 < breakpoints.size(); ++k) {
        const auto it = std::lower_bound(g.xs.begin(), g.xs.end(), breakpoints[k]);
        bounds.push_back(static_cast<std::size_t>(it - g.xs.begin()));
    }
    bounds.push_back(g.xs.size());
    return bounds;
}

struct CandidateFit {
    double max_error = std::numeric_limits<double>::infinity();
    std::vector<AffineFit> segments;
};

CandidateFit fit_candidate(const Grid& g, const std::vector<double>& breakpoints) {
    const auto bounds = segment_bounds(g, breakpoints);
    CandidateFit out;
    out.segments.reserve(breakpoints.size() - 1);
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
        if (bounds[k + 1] - bounds[k] < 2) {
            return out;  // empty or single-point segment: infeasible candidate
        }
        const AffineFit fit = minimax_affine(g, bounds[k], bounds[k + 1]);
        worst = std::max(worst, fit.error);
        out.segments.push_back(fit);
    }
    out.max_error = worst;
    return out;
}

// Interior breakpoints that equalize integral sqrt|f''| per segment, a decent
// starting guess for curvature-driven placement.
std::vector<double> curvature_quantiles(const Grid& g, std::size_t n_segments) {
    const std::size_t n = g.xs.size();
    std::vector<double> cumulative(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h = g.xs[i + 1] - g.xs[i];
        const double second = (g.ys[i + 1] - 2.0 * g.ys[i] + g.ys[i - 1]) / (h * h);
        cumulative[i] = cumulative[i - 1] + std::sqrt(std::abs(second)) + 1e-12;
    }
    cumulative[n - 1] = cumulative[n - 2];
    std::vector<double> bks;
    for (std::size_t k = 1; k < n_segments; ++k) {
        const double wanted =
            cumulative[n - 1] * static_cast<double>(k) / static_cast<double>(n_segments);
        const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), wanted);
        const std::size_t idx =
            std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), n - 2);
        bks.push_back(g.xs[idx]);
    }
    return bks;
}

std::vector<double> expand_symmetric(const std::vector<double>& half, std::size_t n_interior) {
    std::vector<double> full(n_interior);
    const std::size_t h = half.size();
    for (std::size_t i = 0; i < h; ++i) {
        full[i] = half[i];
        full[n_interior - 1 - i] = 1.0 - half[i];
    }
    if (n_interior % 2 == 1) {
        full[n_interior / 2] = 0.5;
    }
    std::sort(full.begin(), full.end());
    return full;
}

}  // namespace

FitResult fit_piecewise(const TargetFn& target, const FitConfig& cfg) {
    cfg.validate();

    // The outer search runs on a coarser grid for speed; the returned model
    // and error are refit and measured on the full cfg grid.
    const Grid fine = sample_target(target, cfg.grid_size);
    const Grid coarse =
        cfg.grid_size > 2001 ? sample_target(target, 2001) : fine;

    const std::size_t n_interior = cfg.n_segments - 1;
    std::size_t generations = 0;
    bool converged = true;
    std::vector<double> best_breakpoints(n_interior, 0.0);

    const std::size_t eff_dims =
        cfg.antisymmetry_constraint ? n_interior / 2 : n_interior;
    if (n_interior > 0 && eff_dims == 0) {
        // Fully pinned by the symmetry constraint (single interior breakpoint).
        best_breakpoints = expand_symmetric({}, n_interior);
    }
    if (eff_dims > 0) {
        const double lo_lim = 1e-3;
        const double hi_lim = cfg.antisymmetry_constraint ? 0.5 - 1e-3 : 1.0 - 1e-3;

        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> unif(lo_lim, hi_lim);
        std::uniform_real_distribution<double> unit(0.0, 1.0);

        const auto to_full = [&](const std::vector<double>& v) {
            if (cfg.antisymmetry_constraint) {
                return expand_symmetric(v, n_interior);
            }
            std::vector<double> s = v;
            std::sort(s.begin(), s.end());
            return s;
        };

        std::vector<std::vector<double>> population(cfg.population,
                                                    std::vector<double>(eff_dims));
        for (auto& member : population) {
            for (auto& x : member) x = unif(rng);
            std::sort(member.begin(), member.end());
        }
        {  // curvature-balanced warm start
            const std::vector<double> guess = curvature_quantiles(coarse, cfg.n_segments);
            auto& member = population.front();
            for (std::size_t i = 0; i < eff_dims && i < guess.size(); ++i) {
                member[i] = std::clamp(guess[i], lo_lim, hi_lim);
            }
            std::sort(member.begin(), member.end());
        }

        std::vector<double> cost(cfg.population);
        for (std::size_t i = 0; i < cfg.population; ++i) {
            cost[i] = fit_candidate(coarse, to_full(population[i])).max_error;
        }

        const double f_weight = 0.7;
        const double crossover = 0.9;
        const std::size_t stagnation_window =
            std::min<std::size_t>(150, std::max<std::size_t>(20, cfg.max_iterations / 3));
        const double spread_floor = std::max(cfg.tolerance, 1e-12);
        double best_cost = *std::min_element(cost.begin(), cost.end());
        std::size_t since_improvement = 0;
        bool settled = false;

        std::uniform_int_distribution<std::size_t> pick(0, cfg.population - 1);
        for (generations = 0; generations < cfg.max_iterations; ++generations) {
            for (std::size_t i = 0; i < cfg.population; ++i) {
                std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
                while (a == i) a = pick(rng);
                while (b == i || b == a) b = pick(rng);
                while (c == i || c == a || c == b) c = pick(rng);

                std::vector<double> trial(eff_dims);
                const std::size_t forced = eff_dims == 0 ? 0 : pick(rng) % eff_dims;
                for (std::size_t d = 0; d < eff_dims; ++d) {
                    if (unit(rng) < crossover || d == forced) {
                        trial[d] = std::clamp(
                            population[a][d] + f_weight * (population[b][d] - population[c][d]),
                            lo_lim, hi_lim);
                    } else {
                        trial[d] = population[i][d];
                    }
                }
                std::sort(trial.begin(), trial.end());
                const double trial_cost = fit_candidate(coarse, to_full(trial)).max_error;
                if (trial_cost <= cost[i]) {
                    population[i] = std::move(trial);
                    cost[i] = trial_cost;
                }
            }
            const auto [lo_it, hi_it] = std::minmax_element(cost.begin(), cost.end());
            if (*lo_it < best_cost - cfg.tolerance) {
                best_cost = *lo_it;
                since_improvement = 0;
            } else {
                ++since_improvement;
            }
            // Done when the population has collapsed onto one cost level or
            // the best member stopped moving for a full window.
            if (*hi_it - *lo_it < spread_floor || since_improvement >= stagnation_window) {
                settled = true;
                ++generations;
                break;
            }
        }
        converged = settled;

        const std::size_t winner = static_cast<std::size_t>(
            std::min_element(cost.begin(), cost.end()) - cost.begin());
        best_breakpoints = to_full(population[winner]);
    }

    // Final exact refit on the full grid.
    std::vector<double> full_breakpoints;
    full_breakpoints.reserve(cfg.n_segments + 1);
    full_breakpoints.push_back(0.0);
    for (double b : best_breakpoints) full_breakpoints.push_back(b);
    full_breakpoints.push_back(1.0);

    const CandidateFit final_fit = fit_candidate(fine, full_breakpoints);
    FitResult result;
    result.model.breakpoints = full_breakpoints;
    for (const AffineFit& seg : final_fit.segments) {
        result.model.intercepts.push_back(seg.intercept);
        result.model.slopes.push_back(seg.slope);
    }
    result.model.validate();
    const MaxError measured = max_abs_error(result.model, target, cfg.grid_size);
    result.max_error = measured.error;
    result.error_location = measured.argmax;
    result.generations = generations;
    result.converged = converged;

    if (!converged) {
        throw FitNotConverged(std::move(result));
    }
    return result;
}

MaxError max_abs_error(const PiecewiseLinearModel& model, const TargetFn& target,
                       std::size_t grid_size) {
    if (grid_size < 2) {
        throw std::invalid_argument("max_abs_error: grid_size must be at least 2");
    }
    model.validate();
    MaxError out;
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(grid_size - 1);
        const double err = std::abs(model.evaluate(x) - target(x));
        if (err > out.error) {
            out.error = err;
            out.argmax = x;
        }
    }
    return out;
}

PiecewiseLinearModel quantize_model(const PiecewiseLinearModel& model, const DyadicCaps& caps,
                                    DyadicMode mode) {
    model.validate();
    PiecewiseLinearModel out = model;
    for (auto& v : out.intercepts) {
        v = quantize_dyadic(v, caps, mode).value();
    }
    for (auto& v : out.slopes) {
        v = quantize_dyadic(v, caps, mode).value();
    }
    return out;
}

}  // namespace rho_lite

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "rho_lite/ar1.hpp"
#include "rho_lite/estimators.hpp"

namespace rho_lite {

/// File-system failures, annotated with the offending path.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class EstimatorPath {
    batch_float,    ///< double-precision batch estimators
    hardware_fixed  ///< 10-bit streaming correlator / counter / datapath models
};

struct ExperimentConfig {
    std::size_t replicates = 1000;
    std::size_t series_length = 512;
    std::vector<double> rho_grid = default_rho_grid();
    /// Innovation standard deviation; <= 0 means derive it from coverage.
    double noise_sigma = 0.0;
    double coverage = 0.90;
    double coverage_bound = 1.0;
    std::uint64_t base_seed = 0;
    /// Clamp every estimate to [-1, 1] before differencing. Off by default:
    /// raw values match the estimator definitions and the datapath output,
    /// and clamping changes the bias statistics.
    bool clamp_outputs = false;
    EstimatorPath path = EstimatorPath::batch_float;
    InitMode init = InitMode::stationary;

    /// Grid endpoints +-1 are invalid for the process; the default grid runs
    /// -0.96..0.96 in steps of 0.04 (49 points). map_strict_endpoints()
    /// instead maps +-1 to +-(1 - 1e-6) for callers that insist on them.
    static std::vector<double> default_rho_grid();
    void map_strict_endpoints();

    double resolved_noise_sigma() const;
    /// @throws std::invalid_argument for any grid value with |rho| >= 1,
    ///         replicates == 0, or series_length < 2
    void validate() const;
};

struct BiasRow {
    double rho = 0.0;
    std::string estimator;  // "acf" | "kedem" | "proposed"
    double mean_error = 0.0;
    double std_error = 0.0;  // sample std of per-replicate errors / sqrt(R)
    double ci_lo = 0.0;      // mean_error -+ 1.96 * std_error
    double ci_hi = 0.0;
};

struct BiasReport {
    ExperimentConfig config;
    std::vector<BiasRow> rows;  ///< three rows (acf, kedem, proposed) per grid point
    /// Largest per-replicate |proposed - kedem| seen anywhere in the run.
    double max_abs_proposed_minus_kedem = 0.0;
};

/**
 * @brief Replicated bias experiment over the rho grid.
 *
 * Replicate r uses seed base_seed + r at every grid point, so all estimators
 * (and grid points) see paired paths. Deterministic given the config.
 */
BiasReport run_bias_experiment(const ExperimentConfig& cfg);

/// CSV with header rho,estimator,mean_error,stderr,ci_lo,ci_hi.
void write_report_csv(const BiasReport& report, std::ostream& out);
void export_report(const BiasReport& report, const std::string& path);
std::vector<BiasRow> parse_report_csv(std::istream& in);

/// gnuplot script rendering the three bias panels (with confidence bands)
/// from an exported CSV. Writes scripts and data only, never images.
void write_plot_script(const std::string& csv_path, std::ostream& out);
void export_plot_script(const std::string& csv_path, const std::string& script_path);

}  // namespace rho_lite

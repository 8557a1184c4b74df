#include "rho_lite/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "rho_lite/streaming.hpp"

namespace rho_lite {

std::vector<double> ExperimentConfig::default_rho_grid() {
    // -0.96 .. 0.96 in steps of 0.04: the largest grid of 0.04-spaced values
    // that keeps |rho| < 1.
    std::vector<double> grid;
    grid.reserve(49);
    for (int i = -24; i <= 24; ++i) {
        grid.push_back(static_cast<double>(i * 4) / 100.0);
    }
    return grid;
}

void ExperimentConfig::map_strict_endpoints() {
    for (double& rho : rho_grid) {
        if (rho >= 1.0) rho = 1.0 - 1e-6;
        if (rho <= -1.0) rho = -(1.0 - 1e-6);
    }
}

double ExperimentConfig::resolved_noise_sigma() const {
    return noise_sigma > 0.0 ? noise_sigma : noise_sigma_for_coverage(coverage, coverage_bound);
}

void ExperimentConfig::validate() const {
    if (replicates == 0) {
        throw std::invalid_argument("ExperimentConfig: replicates must be positive");
    }
    if (series_length < 2) {
        throw std::invalid_argument("ExperimentConfig: series_length must be at least 2");
    }
    for (double rho : rho_grid) {
        if (!(std::abs(rho) < 1.0)) {
            std::ostringstream msg;
            msg << "ExperimentConfig: grid value " << rho
                << " violates |rho| < 1; drop it or use map_strict_endpoints()";
            throw std::invalid_argument(msg.str());
        }
    }
    (void)resolved_noise_sigma();  // validates coverage when sigma is derived
}

namespace {

struct ErrorAccumulator {
    double sum = 0.0;
    double sum_sq = 0.0;
    void add(double err) {
        sum += err;
        sum_sq += err * err;
    }
};

BiasRow make_row(double rho, const char* name, const ErrorAccumulator& acc, std::size_t r) {
    const double n = static_cast<double>(r);
    const double mean = acc.sum / n;
    double variance = 0.0;
    if (r > 1) {
        variance = std::max(0.0, (acc.sum_sq - n * mean * mean) / (n - 1.0));
    }
    const double std_error = std::sqrt(variance / n);
    const double half_width = 1.96 * std_error;
    return {rho, name, mean, std_error, mean - half_width, mean + half_width};
}

EstimateTriple hardware_estimates(const SampleSeries& series, const WindowConfig& wcfg) {
    SlidingAcfCorrelator correlator(wcfg);
    RhoPipeline kedem_path(wcfg, RhoBackend::cordic);
    RhoPipeline proposed_path(wcfg, RhoBackend::dyadic_pwl);

    EstimateTriple out;
    for (double v : series) {
        const FixedWord word = quantize(v, wcfg.input_format);
        if (const auto est = correlator.push(word)) out.acf = *est;
        if (const auto est = kedem_path.push(word)) out.kedem = est->to_real();
        if (const auto est = proposed_path.push(word)) out.proposed = est->to_real();
    }
    return out;
}

}  // namespace

BiasReport run_bias_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const double sigma = cfg.resolved_noise_sigma();

    WindowConfig wcfg;
    wcfg.window_n = cfg.series_length;

    BiasReport report;
    report.config = cfg;
    report.rows.reserve(3 * cfg.rho_grid.size());

    for (double rho : cfg.rho_grid) {
        const Ar1Params params{rho, sigma};
        ErrorAccumulator acf_acc, kedem_acc, proposed_acc;

        for (std::size_t r = 0; r < cfg.replicates; ++r) {
            const std::uint64_t seed = cfg.base_seed + r;
            const SampleSeries series =
                generate_ar1(params, cfg.series_length, seed, cfg.init);
            EstimateTriple est = cfg.path == EstimatorPath::batch_float
                                     ? estimate_all(series)
                                     : hardware_estimates(series, wcfg);
            report.max_abs_proposed_minus_kedem = std::max(
                report.max_abs_proposed_minus_kedem, std::abs(est.proposed - est.kedem));
            if (cfg.clamp_outputs) {
                est.acf = std::clamp(est.acf, -1.0, 1.0);
                est.kedem = std::clamp(est.kedem, -1.0, 1.0);
                est.proposed = std::clamp(est.proposed, -1.0, 1.0);
            }
            acf_acc.add(est.acf - rho);
            kedem_acc.add(est.kedem - rho);
            proposed_acc.add(est.proposed - rho);
        }
        report.rows.push_back(make_row(rho, "acf", acf_acc, cfg.replicates));
        report.rows.push_back(make_row(rho, "kedem", kedem_acc, cfg.replicates));
        report.rows.push_back(make_row(rho, "proposed", proposed_acc, cfg.replicates));
    }
    return report;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

void write_report_csv(const BiasReport& report, std::ostream& out) {
    out << "rho,estimator,mean_error,stderr,ci_lo,ci_hi\n";
    for (const BiasRow& row : report.rows) {
        out << format_double(row.rho) << ',' << row.estimator << ','
            << format_double(row.mean_error) << ',' << format_double(row.std_error) << ','
            << format_double(row.ci_lo) << ',' << format_double(row.ci_hi) << '\n';
    }
}

void export_report(const BiasReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("export_report: cannot open '" + path + "' for writing");
    }
    write_report_csv(report, out);
    if (!out.good()) {
        throw IoError("export_report: write failed for '" + path + "'");
    }
}

std::vector<BiasRow> parse_report_csv(std::istream& in) {
    std::vector<BiasRow> rows;
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError("parse_report_csv: missing header");
    }
    if (line != "rho,estimator,mean_error,stderr,ci_lo,ci_hi") {
        throw IoError("parse_report_csv: unexpected header '" + line + "'");
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        BiasRow row;
        std::string token;
        std::getline(fields, token, ',');
        row.rho = std::stod(token);
        std::getline(fields, row.estimator, ',');
        std::getline(fields, token, ',');
        row.mean_error = std::stod(token);
        std::getline(fields, token, ',');
        row.std_error = std::stod(token);
        std::getline(fields, token, ',');
        row.ci_lo = std::stod(token);
        if (!std::getline(fields, token, ',')) {
            throw IoError("parse_report_csv: truncated row '" + line + "'");
        }
        row.ci_hi = std::stod(token);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_plot_script(const std::string& csv_path, std::ostream& out) {
    out << "# gnuplot script: per-estimator mean error with 95% confidence bands\n"
        << "set datafile separator ','\n"
        << "set key left top\n"
        << "set xlabel 'rho'\n"
        << "set ylabel 'bias'\n"
        << "set grid\n"
        << "set multiplot layout 3,1\n";
    for (const char* name : {"acf", "kedem", "proposed"}) {
        out << "set title 'mean error, " << name << " estimator'\n"
            << "plot '" << csv_path << "' using (strcol(2) eq '" << name
            << "' ? column(1) : NaN):3 with lines lw 2 title 'bias', \\\n"
            << "     '' using (strcol(2) eq '" << name
            << "' ? column(1) : NaN):5 with lines dt 3 title 'ci lo', \\\n"
            << "     '' using (strcol(2) eq '" << name
            << "' ? column(1) : NaN):6 with lines dt 3 title 'ci hi'\n";
    }
    out << "unset multiplot\n";
}

void export_plot_script(const std::string& csv_path, const std::string& script_path) {
    std::ofstream out(script_path);
    if (!out) {
        throw IoError("export_plot_script: cannot open '" + script_path + "' for writing");
    }
    write_plot_script(csv_path, out);
    if (!out.good()) {
        throw IoError("export_plot_script: write failed for '" + script_path + "'");
    }
}

}  // namespace rho_lite

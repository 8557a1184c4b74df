// rho-lite: AR(1) correlation estimation toolkit.
//
// Subcommands: generate, estimate, fit, complexity, experiment. Data goes to
// stdout (or --output), logs to stderr. Exit codes: 0 success, 2 config or
// usage error, 3 I/O error, 4 numeric degeneracy.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rho_lite/ar1.hpp"
#include "rho_lite/complexity.hpp"
#include "rho_lite/estimators.hpp"
#include "rho_lite/montecarlo.hpp"
#include "rho_lite/pwl_fit.hpp"
#include "rho_lite/streaming.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitDegenerate = 4;

std::string fmt_double(double v, const char* spec = "%.12g") {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

// Output sink: --output PATH or stdout for "-".
struct Sink {
    std::unique_ptr<std::ofstream> file;
    std::ostream* out = &std::cout;

    explicit Sink(const std::string& path) {
        if (path != "-") {
            file = std::make_unique<std::ofstream>(path);
            if (!*file) {
                throw rho_lite::IoError("cannot open '" + path + "' for writing");
            }
            out = file.get();
        }
    }
    std::ostream& stream() { return *out; }
};

std::vector<double> read_samples(const std::string& path, bool raw_i16) {
    std::unique_ptr<std::ifstream> file;
    std::istream* in = &std::cin;
    if (path != "-") {
        file = std::make_unique<std::ifstream>(path, raw_i16 ? std::ios::binary : std::ios::in);
        if (!*file) {
            throw rho_lite::IoError("cannot open '" + path + "' for reading");
        }
        in = file.get();
    }
    std::vector<double> samples;
    if (raw_i16) {
        unsigned char bytes[2];
        while (in->read(reinterpret_cast<char*>(bytes), 2)) {
            const auto u = static_cast<std::uint16_t>(bytes[0] | (bytes[1] << 8));
            samples.push_back(static_cast<double>(static_cast<std::int16_t>(u)));
        }
    } else {
        double v;
        while (*in >> v) {
            samples.push_back(v);
        }
        if (!in->eof() && in->fail()) {
            throw rho_lite::IoError("malformed sample stream in '" + path + "'");
        }
    }
    return samples;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("RHO_LITE_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("RHO_LITE_SEED is not an unsigned integer");
        }
    }
    return 0;
}

// Minimal aligned text table.
void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t c = 0; c < row.size(); ++c) {
            widths[c] = std::max(widths[c], row[c].size());
        }
    }
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << row[c];
            if (c + 1 < row.size()) {
                out << std::string(widths[c] - row[c].size() + 2, ' ');
            }
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

struct GenerateArgs {
    double rho = 0.0;
    double sigma = 0.0;
    double sigma2 = 0.0;
    double coverage = 0.0;
    double bound = 1.0;
    std::size_t n = 0;
    std::string init = "stationary";
    std::size_t burn_in = 1024;
};

double resolve_sigma(double sigma, double sigma2, double coverage, double bound) {
    if (sigma > 0.0) return sigma;
    if (sigma2 > 0.0) return std::sqrt(sigma2);
    const double cov = coverage > 0.0 ? coverage : 0.90;
    const double resolved = rho_lite::noise_sigma_for_coverage(cov, bound);
    std::cerr << "resolved noise sigma = " << fmt_double(resolved, "%.4f") << " (coverage "
              << fmt_double(cov, "%.4g") << " within +-" << fmt_double(bound, "%.4g") << ")\n";
    return resolved;
}

int run_generate(const GenerateArgs& args, std::uint64_t seed, const std::string& output) {
    const double sigma = resolve_sigma(args.sigma, args.sigma2, args.coverage, args.bound);
    const rho_lite::Ar1Params params{args.rho, sigma};
    const auto init =
        args.init == "burn-in" ? rho_lite::InitMode::burn_in : rho_lite::InitMode::stationary;
    const auto series = rho_lite::generate_ar1(params, args.n, seed, init, args.burn_in);
    Sink sink(output);
    for (double v : series) {
        sink.stream() << fmt_double(v, "%.17g") << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// estimate
// ---------------------------------------------------------------------------

struct EstimateArgs {
    std::string input = "-";
    bool raw_i16 = false;
    std::string estimator = "all";
    bool streaming = false;
    std::size_t window = 512;
    int fixed_point_bits = 0;  // 0: not requested
    std::string format = "csv";
};

void print_estimates(std::ostream& out, const std::string& format,
                     const std::vector<std::pair<std::string, double>>& values) {
    if (format == "table") {
        std::vector<std::vector<std::string>> rows{{"estimator", "estimate"}};
        for (const auto& [name, value] : values) {
            rows.push_back({name, fmt_double(value)});
        }
        print_table(out, rows);
    } else {
        out << "estimator,estimate\n";
        for (const auto& [name, value] : values) {
            out << name << ',' << fmt_double(value) << '\n';
        }
    }
}

int run_estimate_batch(const EstimateArgs& args, const std::vector<double>& samples,
                       std::ostream& out) {
    const auto lambda_of = [&samples]() {
        return rho_lite::lambda_hat(rho_lite::sign_process(samples)).value;
    };
    std::vector<std::pair<std::string, double>> values;
    if (args.estimator == "acf" || args.estimator == "all") {
        values.emplace_back("acf", rho_lite::acf_estimate(samples));
    }
    if (args.estimator == "kedem" || args.estimator == "all") {
        values.emplace_back("kedem", rho_lite::kedem_rho(lambda_of()));
    }
    if (args.estimator == "proposed" || args.estimator == "all") {
        values.emplace_back("proposed", rho_lite::piecewise_rho(lambda_of()));
    }
    if (args.estimator == "proposed-dyadic" || args.estimator == "all") {
        values.emplace_back("proposed-dyadic", rho_lite::piecewise_rho_dyadic(lambda_of()));
    }
    print_estimates(out, args.format, values);
    return 0;
}

int run_estimate_streaming(const EstimateArgs& args, const std::vector<double>& samples,
                           std::ostream& out) {
    rho_lite::WindowConfig wcfg;
    wcfg.window_n = args.window;
    if (args.fixed_point_bits > 0) {
        wcfg.input_format = rho_lite::QFormat{args.fixed_point_bits, args.fixed_point_bits - 2};
    }
    wcfg.validate();

    out << "sample_index,estimate\n";
    bool warned_degenerate = false;

    if (args.estimator == "acf") {
        rho_lite::SlidingAcfCorrelator correlator(wcfg);
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const auto est = correlator.push(rho_lite::quantize(samples[i], wcfg.input_format));
            if (est.has_value()) {
                out << (i + 1) << ',' << fmt_double(*est) << '\n';
            } else if (correlator.last_window_degenerate() && !warned_degenerate) {
                std::cerr << "degenerate window at sample " << (i + 1) << "; no estimate\n";
                warned_degenerate = true;
            }
        }
        return 0;
    }

    const auto backend = args.estimator == "kedem" ? rho_lite::RhoBackend::cordic
                                                   : rho_lite::RhoBackend::dyadic_pwl;
    rho_lite::RhoPipeline pipeline(wcfg, backend);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto est = pipeline.push(rho_lite::quantize(samples[i], wcfg.input_format));
        if (est.has_value()) {
            out << (i + 1) << ',' << fmt_double(est->to_real()) << '\n';
        }
    }
    return 0;
}

int run_estimate(const EstimateArgs& args, const std::string& output) {
    if (!args.streaming && args.fixed_point_bits > 0) {
        throw std::invalid_argument("--fixed-point applies to --streaming mode only");
    }
    if (args.streaming && (args.estimator == "all" || args.estimator == "proposed-dyadic")) {
        // The streaming proposed datapath is the dyadic one; pick a concrete backend.
        throw std::invalid_argument(
            "--streaming needs --estimator acf, kedem or proposed (proposed streams the "
            "shift-add datapath)");
    }
    const auto samples = read_samples(args.input, args.raw_i16);
    if (samples.size() < 2) {
        throw std::invalid_argument("need at least 2 input samples");
    }
    Sink sink(output);
    return args.streaming ? run_estimate_streaming(args, samples, sink.stream())
                          : run_estimate_batch(args, samples, sink.stream());
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

struct FitArgs {
    std::size_t segments = 5;
    std::size_t grid_size = 10001;
    bool antisymmetric = false;
    std::size_t population = 40;
    std::size_t max_iterations = 400;
    std::vector<std::int64_t> dyadic_caps{32, 63};  // denominator value, numerator cap
    std::string mode = "cost-aware";
    std::string model_out;
    std::string format = "csv";
};

nlohmann::json model_to_json(const rho_lite::PiecewiseLinearModel& model) {
    return nlohmann::json{{"breakpoints", model.breakpoints},
                          {"intercepts", model.intercepts},
                          {"slopes", model.slopes}};
}

int run_fit(const FitArgs& args, std::uint64_t seed, const std::string& output) {
    if (args.dyadic_caps.size() != 2 || args.dyadic_caps[0] < 1 || args.dyadic_caps[1] < 1) {
        throw std::invalid_argument("--dyadic-caps expects DENOMINATOR NUMERATOR, both positive");
    }
    const double den = static_cast<double>(args.dyadic_caps[0]);
    const double log2_den = std::log2(den);
    if (log2_den != std::floor(log2_den)) {
        throw std::invalid_argument("--dyadic-caps denominator must be a power of two");
    }
    rho_lite::DyadicCaps caps;
    caps.max_log2_denominator = static_cast<int>(log2_den);
    caps.max_numerator = args.dyadic_caps[1];
    const auto mode = args.mode == "closest" ? rho_lite::DyadicMode::closest_value
                                             : rho_lite::DyadicMode::cost_aware;

    rho_lite::FitConfig cfg;
    cfg.n_segments = args.segments;
    cfg.grid_size = args.grid_size;
    cfg.antisymmetry_constraint = args.antisymmetric;
    cfg.population = args.population;
    cfg.max_iterations = args.max_iterations;
    cfg.seed = seed;

    const rho_lite::TargetFn target = [](double lam) {
        return std::cos(std::numbers::pi * (1.0 - lam));
    };
    const rho_lite::FitResult result = rho_lite::fit_piecewise(target, cfg);
    const rho_lite::PiecewiseLinearModel quantized =
        rho_lite::quantize_model(result.model, caps, mode);
    const rho_lite::MaxError quantized_err =
        rho_lite::max_abs_error(quantized, target, cfg.grid_size);

    Sink sink(output);
    std::ostream& out = sink.stream();
    std::vector<std::vector<std::string>> rows{
        {"segment", "from", "to", "intercept", "slope", "dyadic_intercept", "dyadic_slope"}};
    for (std::size_t k = 0; k < result.model.segment_count(); ++k) {
        rows.push_back({std::to_string(k + 1), fmt_double(result.model.breakpoints[k], "%.6g"),
                        fmt_double(result.model.breakpoints[k + 1], "%.6g"),
                        fmt_double(result.model.intercepts[k], "%.6g"),
                        fmt_double(result.model.slopes[k], "%.6g"),
                        fmt_double(quantized.intercepts[k], "%.6g"),
                        fmt_double(quantized.slopes[k], "%.6g")});
    }
    if (args.format == "table") {
        print_table(out, rows);
    } else {
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                out << row[c] << (c + 1 < row.size() ? "," : "");
            }
            out << '\n';
        }
    }
    out << "max_error," << fmt_double(result.max_error) << '\n';
    out << "max_error_dyadic," << fmt_double(quantized_err.error) << '\n';

    if (!args.model_out.empty()) {
        nlohmann::json doc{{"model", model_to_json(result.model)},
                           {"max_error", result.max_error},
                           {"dyadic_model", model_to_json(quantized)},
                           {"dyadic_max_error", quantized_err.error},
                           {"grid_size", cfg.grid_size},
                           {"seed", cfg.seed},
                           {"generations", result.generations}};
        std::ofstream model_file(args.model_out);
        if (!model_file) {
            throw rho_lite::IoError("cannot open '" + args.model_out + "' for writing");
        }
        model_file << doc.dump(2) << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// complexity
// ---------------------------------------------------------------------------

int run_complexity(std::size_t n, std::uint64_t seed, const std::string& format,
                   const std::string& output) {
    using rho_lite::EstimatorKind;
    Sink sink(output);
    std::ostream& out = sink.stream();

    std::vector<std::vector<std::string>> rows{{"estimator", "n", "mult", "div", "add", "shift",
                                                "cmp", "measured_mult", "measured_div",
                                                "measured_add", "measured_shift", "measured_cmp"}};
    for (EstimatorKind kind :
         {EstimatorKind::acf, EstimatorKind::kedem, EstimatorKind::proposed}) {
        const auto formula = rho_lite::formula_op_count(kind, n);
        const auto measured = rho_lite::measured_op_count(kind, n, seed);
        rows.push_back({rho_lite::to_string(kind), std::to_string(n),
                        std::to_string(formula.multiplications), std::to_string(formula.divisions),
                        std::to_string(formula.additions), std::to_string(formula.shifts),
                        std::to_string(formula.comparisons),
                        std::to_string(measured.multiplications),
                        std::to_string(measured.divisions), std::to_string(measured.additions),
                        std::to_string(measured.shifts), std::to_string(measured.comparisons)});
    }
    if (format == "table") {
        print_table(out, rows);
    } else {
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                out << row[c] << (c + 1 < row.size() ? "," : "");
            }
            out << '\n';
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// experiment
// ---------------------------------------------------------------------------

struct ExperimentArgs {
    std::string config_file;
    std::size_t replicates = 1000;
    std::size_t length = 512;
    double grid_start = -0.96;
    double grid_stop = 0.96;
    double grid_step = 0.04;
    std::string grid_list;
    double sigma = 0.0;
    double sigma2 = 0.0;
    double coverage = 0.0;
    double bound = 1.0;
    std::uint64_t base_seed = 0;
    bool base_seed_set = false;
    bool clamp = false;
    bool strict_paper = false;
    bool hardware = false;
    std::string init = "stationary";
    std::string plot_script;
};

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw rho_lite::IoError("cannot open config file '" + path + "'");
    }
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config file '" + path + "' line " +
                                        std::to_string(line_no) + ": expected key=value");
        }
        const auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        kv[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
    }
    return kv;
}

std::vector<double> parse_grid_list(const std::string& csv) {
    std::vector<double> grid;
    std::istringstream in(csv);
    std::string token;
    while (std::getline(in, token, ',')) {
        grid.push_back(std::stod(token));
    }
    return grid;
}

int run_experiment(ExperimentArgs args, const CLI::App* cmd, std::uint64_t global_seed,
                   const std::string& output) {
    if (!args.config_file.empty()) {
        // Flags win over file values: only keys whose flag was not given apply.
        const auto kv = parse_config_file(args.config_file);
        const auto not_set = [cmd](const char* flag) { return cmd->count(flag) == 0; };
        const auto get = [&kv](const char* key) -> std::optional<std::string> {
            const auto it = kv.find(key);
            return it == kv.end() ? std::nullopt : std::optional{it->second};
        };
        if (const auto v = get("replicates"); v && not_set("--replicates"))
            args.replicates = std::stoull(*v);
        if (const auto v = get("length"); v && not_set("--length")) args.length = std::stoull(*v);
        if (const auto v = get("grid-start"); v && not_set("--grid-start"))
            args.grid_start = std::stod(*v);
        if (const auto v = get("grid-stop"); v && not_set("--grid-stop"))
            args.grid_stop = std::stod(*v);
        if (const auto v = get("grid-step"); v && not_set("--grid-step"))
            args.grid_step = std::stod(*v);
        if (const auto v = get("grid"); v && not_set("--grid")) args.grid_list = *v;
        if (const auto v = get("sigma"); v && not_set("--sigma")) args.sigma = std::stod(*v);
        if (const auto v = get("sigma2"); v && not_set("--sigma2")) args.sigma2 = std::stod(*v);
        if (const auto v = get("coverage"); v && not_set("--coverage"))
            args.coverage = std::stod(*v);
        if (const auto v = get("bound"); v && not_set("--bound")) args.bound = std::stod(*v);
        if (const auto v = get("base-seed"); v && not_set("--base-seed")) {
            args.base_seed = std::stoull(*v);
            args.base_seed_set = true;
        }
        if (const auto v = get("clamp"); v && not_set("--clamp")) args.clamp = *v == "true";
        if (const auto v = get("strict-paper"); v && not_set("--strict-paper"))
            args.strict_paper = *v == "true";
        if (const auto v = get("hardware"); v && not_set("--hardware"))
            args.hardware = *v == "true";
        if (const auto v = get("init"); v && not_set("--init")) args.init = *v;
        if (const auto v = get("plot-script"); v && not_set("--plot-script"))
            args.plot_script = *v;
    }

    rho_lite::ExperimentConfig cfg;
    cfg.replicates = args.replicates;
    cfg.series_length = args.length;
    if (!args.grid_list.empty()) {
        cfg.rho_grid = parse_grid_list(args.grid_list);
    } else if (cmd->count("--grid-start") != 0 || cmd->count("--grid-stop") != 0 ||
               cmd->count("--grid-step") != 0 || !args.config_file.empty()) {
        cfg.rho_grid.clear();
        if (!(args.grid_step > 0.0)) {
            throw std::invalid_argument("--grid-step must be positive");
        }
        for (double rho = args.grid_start; rho <= args.grid_stop + 1e-12; rho += args.grid_step) {
            cfg.rho_grid.push_back(rho);
        }
    }
    if (args.sigma > 0.0) {
        cfg.noise_sigma = args.sigma;
    } else if (args.sigma2 > 0.0) {
        cfg.noise_sigma = std::sqrt(args.sigma2);
    } else if (args.coverage > 0.0) {
        cfg.coverage = args.coverage;
        cfg.coverage_bound = args.bound;
    }
    cfg.base_seed = args.base_seed_set ? args.base_seed : global_seed;
    cfg.clamp_outputs = args.clamp;
    cfg.path = args.hardware ? rho_lite::EstimatorPath::hardware_fixed
                             : rho_lite::EstimatorPath::batch_float;
    cfg.init = args.init == "burn-in" ? rho_lite::InitMode::burn_in
                                      : rho_lite::InitMode::stationary;
    if (args.strict_paper) {
        cfg.map_strict_endpoints();
    }
    cfg.validate();

    std::cerr << "experiment: " << cfg.rho_grid.size() << " grid points, " << cfg.replicates
              << " replicates, N = " << cfg.series_length
              << ", sigma = " << fmt_double(cfg.resolved_noise_sigma(), "%.4f") << '\n';

    const rho_lite::BiasReport report = rho_lite::run_bias_experiment(cfg);
    std::cerr << "max per-replicate |proposed - kedem| = "
              << fmt_double(report.max_abs_proposed_minus_kedem, "%.6g") << '\n';

    Sink sink(output);
    rho_lite::write_report_csv(report, sink.stream());
    if (!args.plot_script.empty()) {
        rho_lite::export_plot_script(output == "-" ? "bias_report.csv" : output,
                                     args.plot_script);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AR(1) correlation estimation toolkit"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string output = "-";
    app.add_option("--seed", seed, "RNG seed (default: RHO_LITE_SEED env or 0)")
        ->each([&seed_given](const std::string&) { seed_given = true; });
    app.add_option("--output", output, "output path, '-' for stdout")->capture_default_str();

    GenerateArgs gen;
    CLI::App* cmd_generate = app.add_subcommand("generate", "emit an AR(1) sample path");
    cmd_generate->fallthrough();
    cmd_generate->add_option("--rho", gen.rho, "correlation coefficient, |rho| < 1")->required();
    cmd_generate->add_option("--sigma", gen.sigma, "innovation standard deviation");
    cmd_generate->add_option("--sigma2", gen.sigma2, "innovation variance");
    cmd_generate->add_option("--coverage", gen.coverage,
                             "choose sigma so this fraction of noise lands within +-bound");
    cmd_generate->add_option("--bound", gen.bound, "coverage bound")->capture_default_str();
    cmd_generate->add_option("--n", gen.n, "number of samples")->required();
    cmd_generate->add_option("--init", gen.init, "stationary | burn-in")->capture_default_str();
    cmd_generate->add_option("--burn-in", gen.burn_in, "burn-in prefix length")
        ->capture_default_str();

    EstimateArgs est;
    CLI::App* cmd_estimate = app.add_subcommand("estimate", "estimate rho from a sample stream");
    cmd_estimate->fallthrough();
    cmd_estimate->add_option("--input", est.input, "sample file, '-' for stdin")
        ->capture_default_str();
    cmd_estimate->add_flag("--raw-i16", est.raw_i16, "input is raw little-endian int16 samples");
    cmd_estimate
        ->add_option("--estimator", est.estimator, "acf | kedem | proposed | proposed-dyadic | all")
        ->capture_default_str();
    cmd_estimate->add_flag("--streaming", est.streaming, "sliding-window mode, one row per sample");
    cmd_estimate->add_option("--window", est.window, "streaming window size")
        ->capture_default_str();
    cmd_estimate->add_option("--fixed-point", est.fixed_point_bits,
                             "streaming word length in bits (e.g. 10)");
    cmd_estimate->add_option("--format", est.format, "csv | table")->capture_default_str();

    FitArgs fit;
    CLI::App* cmd_fit =
        app.add_subcommand("fit", "fit a piecewise-linear model to cos(pi(1-lambda))");
    cmd_fit->fallthrough();
    cmd_fit->add_option("--segments", fit.segments, "number of segments")->capture_default_str();
    cmd_fit->add_option("--grid-size", fit.grid_size, "evaluation grid points")
        ->capture_default_str();
    cmd_fit->add_flag("--antisymmetric", fit.antisymmetric, "mirror breakpoints around 1/2");
    cmd_fit->add_option("--population", fit.population, "outer search population")
        ->capture_default_str();
    cmd_fit->add_option("--max-iterations", fit.max_iterations, "outer search generations")
        ->capture_default_str();
    cmd_fit->add_option("--dyadic-caps", fit.dyadic_caps,
                        "constant quantization caps: DENOMINATOR NUMERATOR")
        ->expected(2);
    cmd_fit->add_option("--mode", fit.mode, "dyadic mode: closest | cost-aware")
        ->capture_default_str();
    cmd_fit->add_option("--model-out", fit.model_out, "write the fitted model as JSON");
    cmd_fit->add_option("--format", fit.format, "csv | table")->capture_default_str();

    std::size_t complexity_n = 512;
    std::string complexity_format = "csv";
    CLI::App* cmd_complexity =
        app.add_subcommand("complexity", "per-estimate arithmetic budgets, formula vs measured");
    cmd_complexity->fallthrough();
    cmd_complexity->add_option("--n", complexity_n, "window size")->capture_default_str();
    cmd_complexity->add_option("--format", complexity_format, "csv | table")
        ->capture_default_str();

    ExperimentArgs exp;
    CLI::App* cmd_experiment =
        app.add_subcommand("experiment", "replicated bias experiment over a rho grid");
    cmd_experiment->fallthrough();
    cmd_experiment->add_option("--config", exp.config_file, "key=value config file");
    cmd_experiment->add_option("--replicates", exp.replicates)->capture_default_str();
    cmd_experiment->add_option("--length", exp.length, "series length N")->capture_default_str();
    cmd_experiment->add_option("--grid-start", exp.grid_start)->capture_default_str();
    cmd_experiment->add_option("--grid-stop", exp.grid_stop)->capture_default_str();
    cmd_experiment->add_option("--grid-step", exp.grid_step)->capture_default_str();
    cmd_experiment->add_option("--grid", exp.grid_list, "explicit comma-separated rho list");
    cmd_experiment->add_option("--sigma", exp.sigma, "innovation standard deviation");
    cmd_experiment->add_option("--sigma2", exp.sigma2, "innovation variance");
    cmd_experiment->add_option("--coverage", exp.coverage, "derive sigma from noise coverage");
    cmd_experiment->add_option("--bound", exp.bound)->capture_default_str();
    cmd_experiment->add_option("--base-seed", exp.base_seed, "seed of replicate 0")
        ->each([&exp](const std::string&) { exp.base_seed_set = true; });
    cmd_experiment->add_flag("--clamp", exp.clamp, "clamp estimates to [-1, 1]");
    cmd_experiment->add_flag("--strict-paper", exp.strict_paper,
                             "map grid endpoints +-1 to +-(1 - 1e-6) instead of rejecting");
    cmd_experiment->add_flag("--hardware", exp.hardware,
                             "route estimators through the fixed-point streaming models");
    cmd_experiment->add_option("--init", exp.init, "stationary | burn-in")->capture_default_str();
    cmd_experiment->add_option("--plot-script", exp.plot_script, "write a gnuplot script here");

    try {
        app.parse(argc, argv);
        if (!seed_given) {
            seed = default_seed();
        }
        if (cmd_generate->parsed()) return run_generate(gen, seed, output);
        if (cmd_estimate->parsed()) return run_estimate(est, output);
        if (cmd_fit->parsed()) return run_fit(fit, seed, output);
        if (cmd_complexity->parsed())
            return run_complexity(complexity_n, seed, complexity_format, output);
        if (cmd_experiment->parsed()) return run_experiment(exp, cmd_experiment, seed, output);
        return kExitConfig;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);  // --help
        }
        app.exit(e);
        return kExitConfig;
    } catch (const rho_lite::DegenerateInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const rho_lite::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

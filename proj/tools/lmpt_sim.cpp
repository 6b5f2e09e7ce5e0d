// Command-line front end for the 1-bit detection simulator.
//
// Subcommands:
//   optimize-thresholds  design the quantizer threshold for a noise level
//   simulate-roc         Monte Carlo ROC curves (presets: fig1, fig2)
//   check-asymptotics    sample-vs-theory diagnostics for the statistics
//   equivalence          sensor-count tradeoff run (centralized vs LR bits)
//
// Every run writes its fully resolved configuration to
// <out>/config_resolved.txt; rerunning a subcommand with
// `--config <that file>` reproduces the outputs byte for byte.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

#include "CLI11.hpp"

#include "lmpt/config.hpp"
#include "lmpt/experiments.hpp"
#include "lmpt/fisher_opt.hpp"

namespace {

using lmpt::cli::CliConfig;

struct CommonFlags {
    std::string preset;
    std::string config_file;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::uint64_t workers = 0;
    bool fast = false;

    CLI::Option* out_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* workers_opt = nullptr;
};

struct ModelFlags {
    std::uint64_t q = 0, n = 0;
    double noise_var = 0, sparsity = 0, nonzero_var = 0;
    std::string generator, detectors, pfa_grid;
    std::uint64_t trials = 0, trials_h0 = 0, trials_h1 = 0;

    CLI::Option* q_opt = nullptr;
    CLI::Option* n_opt = nullptr;
    CLI::Option* noise_opt = nullptr;
    CLI::Option* sparsity_opt = nullptr;
    CLI::Option* nonzero_opt = nullptr;
    CLI::Option* generator_opt = nullptr;
    CLI::Option* detectors_opt = nullptr;
    CLI::Option* pfa_opt = nullptr;
    CLI::Option* trials_opt = nullptr;
    CLI::Option* trials_h0_opt = nullptr;
    CLI::Option* trials_h1_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonFlags& f)
{
    cmd->add_option("--preset", f.preset,
                    "Named parameter set: fig1 (300-sensor ROC) or fig2 "
                    "(sensor-count tradeoff; assumes signal variance 8)");
    cmd->add_option("--config", f.config_file,
                    "Key=value config file (e.g. a config_resolved.txt sidecar)");
    f.out_opt = cmd->add_option("--out", f.out_dir, "Output directory");
    f.seed_opt = cmd->add_option("--seed", f.seed, "RNG seed");
    f.workers_opt =
        cmd->add_option("--workers", f.workers,
                        "Worker threads (0 = machine parallelism); results do "
                        "not depend on this");
    cmd->add_flag("--fast", f.fast,
                  "Downscale to 4000 trials unless trials are set explicitly");
}

void add_model(CLI::App* cmd, ModelFlags& f)
{
    f.q_opt = cmd->add_option("--q", f.q, "Number of sensors");
    f.n_opt = cmd->add_option("--n", f.n, "Signal dimension");
    f.noise_opt = cmd->add_option("--noise-var", f.noise_var, "Noise variance");
    f.sparsity_opt =
        cmd->add_option("--sparsity", f.sparsity, "Sparsity level p in [0,1)");
    f.nonzero_opt = cmd->add_option("--nonzero-var", f.nonzero_var,
                                    "Variance of active signal coordinates");
    f.generator_opt = cmd->add_option("--generator", f.generator,
                                      "Observation model: exact | asymptotic");
    f.detectors_opt = cmd->add_option(
        "--detectors", f.detectors,
        "Comma list of detectors: im1bit, onebit, clmpt");
    f.pfa_opt = cmd->add_option("--pfa-grid", f.pfa_grid,
                                "Comma list of false-alarm targets in (0,1)");
    f.trials_opt =
        cmd->add_option("--trials", f.trials, "Trials for both hypotheses");
    f.trials_h0_opt = cmd->add_option("--trials-h0", f.trials_h0, "H0 trials");
    f.trials_h1_opt = cmd->add_option("--trials-h1", f.trials_h1, "H1 trials");
}

// Precedence: defaults, then preset, then config file, then --fast, then
// explicit flags.
void resolve_common(CliConfig& cfg, const CommonFlags& f, const char* command)
{
    cfg.command = command;
    if (!f.preset.empty())
        lmpt::cli::apply_preset(cfg, f.preset);
    if (!f.config_file.empty()) {
        auto kv = lmpt::cli::read_kv_file(f.config_file);
        const auto cmd_it = kv.find("command");
        if (cmd_it != kv.end() && cmd_it->second != cfg.command)
            throw std::invalid_argument(
                "config file was written by subcommand '" + cmd_it->second +
                "', not '" + cfg.command + "'");
        lmpt::cli::apply_kv(cfg, kv);
        cfg.command = command;
    }
    if (f.fast) {
        cfg.fast_mode = true;
        cfg.experiment.trials_h0 = 4000;
        cfg.experiment.trials_h1 = 4000;
    }
    if (f.out_opt->count())
        cfg.out_dir = f.out_dir;
    if (f.seed_opt->count())
        cfg.experiment.seed = f.seed;
    if (f.workers_opt->count())
        cfg.experiment.workers = f.workers;
}

void resolve_model(CliConfig& cfg, const ModelFlags& f)
{
    auto& exp = cfg.experiment;
    if (f.q_opt->count())
        exp.q_sensors = f.q;
    if (f.n_opt->count())
        exp.n_dims = f.n;
    if (f.noise_opt->count())
        exp.noise_var = f.noise_var;
    if (f.sparsity_opt->count())
        exp.sparsity = f.sparsity;
    if (f.nonzero_opt->count())
        exp.nonzero_var = f.nonzero_var;
    if (f.generator_opt->count())
        exp.generator = lmpt::cli::generator_from_token(f.generator);
    if (f.detectors_opt->count()) {
        exp.detectors.clear();
        std::string token;
        for (char c : f.detectors + ",") {
            if (c == ',') {
                if (!token.empty())
                    exp.detectors.push_back(lmpt::cli::detector_from_token(token));
                token.clear();
            } else if (!std::isspace(static_cast<unsigned char>(c))) {
                token += c;
            }
        }
    }
    if (f.pfa_opt->count()) {
        exp.pfa_grid.clear();
        std::string token;
        for (char c : f.pfa_grid + ",") {
            if (c == ',') {
                if (!token.empty())
                    exp.pfa_grid.push_back(std::stod(token));
                token.clear();
            } else if (!std::isspace(static_cast<unsigned char>(c))) {
                token += c;
            }
        }
    }
    if (f.trials_opt->count()) {
        exp.trials_h0 = f.trials;
        exp.trials_h1 = f.trials;
    }
    if (f.trials_h0_opt->count())
        exp.trials_h0 = f.trials_h0;
    if (f.trials_h1_opt->count())
        exp.trials_h1 = f.trials_h1;
}

std::string prepare_out_dir(const CliConfig& cfg)
{
    std::filesystem::create_directories(cfg.out_dir);
    return cfg.out_dir;
}

void write_sidecar(const CliConfig& cfg)
{
    const auto path =
        std::filesystem::path(cfg.out_dir) / "config_resolved.txt";
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path.string());
    out << lmpt::cli::serialize(cfg);
}

void warn_if_noisy(const CliConfig& cfg)
{
    const std::size_t min_trials =
        std::min(cfg.experiment.trials_h0, cfg.experiment.trials_h1);
    if (min_trials < 1000)
        std::fprintf(stderr,
                     "warning: %zu trials gives per-point standard errors up "
                     "to ~%.3f; estimates will be noisy\n",
                     min_trials, 0.5 / std::sqrt(static_cast<double>(min_trials)));
}

int cmd_optimize_thresholds(const CliConfig& cfg)
{
    if (!(cfg.opt_sigma_w > 0.0))
        throw std::invalid_argument("--sigma-w must be positive");

    const double sigma_w = cfg.opt_sigma_w;
    lmpt::PsoConfig pso = cfg.experiment.pso;
    pso.seed = cfg.experiment.seed;
    pso.search_lo *= sigma_w;
    pso.search_hi *= sigma_w;

    std::function<double(double)> objective;
    if (cfg.opt_kind == lmpt::QuantizerKind::LR)
        objective = [sigma_w](double t) { return lmpt::psi_lr(t, sigma_w); };
    else
        objective = [sigma_w](double t) { return lmpt::psi_direct(t, sigma_w); };
    const lmpt::OptResult res = lmpt::pso_maximize(objective, pso);

    const double factor = res.max_value / 4.0;
    const std::string out_dir = prepare_out_dir(cfg);
    const auto bank_path =
        std::filesystem::path(out_dir) /
        (std::string("bank_") + lmpt::cli::quantizer_token(cfg.opt_kind) + ".txt");
    lmpt::cli::write_bank_file(bank_path.string(), cfg.opt_kind, {res.argmax});
    write_sidecar(cfg);

    std::printf("kind = %s\n", lmpt::cli::quantizer_token(cfg.opt_kind));
    std::printf("sigma_w = %.17g\n", sigma_w);
    std::printf("argmax = %.17g\n", res.argmax);
    std::printf("objective = %.17g\n", res.max_value);
    std::printf("fi_factor = %.17g\n", factor);
    std::printf("equivalence_vs_clmpt = %.17g\n", 0.5 / factor);
    std::printf("converged_runs = %zu\n", res.converged_runs);
    std::printf("restart_spread = %.17g\n", res.spread);
    std::printf("resampled_particles = %zu\n", res.resampled_particles);
    std::printf("bank_file = %s\n", bank_path.c_str());
    return 0;
}

int run_equivalence_to_files(const CliConfig& cfg)
{
    const auto result = lmpt::run_equivalence(cfg.experiment, cfg.q_reference,
                                              cfg.forced_ratio);
    const std::string out_dir = prepare_out_dir(cfg);
    const auto csv_path = std::filesystem::path(out_dir) / "equivalence.csv";
    lmpt::emit_equivalence_csv(result, csv_path.string());
    write_sidecar(cfg);
    std::printf("q_reference = %zu\n", result.q_reference);
    std::printf("q_quantized = %zu\n", result.q_quantized);
    std::printf("ratio = %.17g\n", result.ratio);
    std::printf("max_abs_pd_gap = %.17g\n", result.max_abs_pd_gap);
    std::printf("csv = %s\n", csv_path.c_str());
    return 0;
}

int cmd_simulate_roc(const CliConfig& cfg)
{
    warn_if_noisy(cfg);
    if (cfg.equivalence_mode)
        return run_equivalence_to_files(cfg);
    const auto curves = lmpt::run_roc(cfg.experiment);
    const std::string out_dir = prepare_out_dir(cfg);
    const auto csv_path = std::filesystem::path(out_dir) / "roc.csv";
    lmpt::emit_roc_csv(curves, csv_path.string());
    write_sidecar(cfg);
    std::printf("csv = %s\n", csv_path.c_str());
    return 0;
}

int cmd_check_asymptotics(const CliConfig& cfg)
{
    warn_if_noisy(cfg);
    std::vector<lmpt::NormalityRecord> records;
    for (lmpt::DetectorKind kind : cfg.diag_detectors) {
        auto recs = lmpt::run_normality(cfg.experiment, kind);
        records.insert(records.end(), recs.begin(), recs.end());
    }
    const std::string out_dir = prepare_out_dir(cfg);
    const auto csv_path = std::filesystem::path(out_dir) / "normality.csv";
    lmpt::emit_normality_csv(records, csv_path.string());
    write_sidecar(cfg);
    std::printf("csv = %s\n", csv_path.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Monte Carlo simulator for 1-bit distributed detection of "
                 "sparse stochastic signals"};
    app.require_subcommand(1);

    auto* opt_cmd = app.add_subcommand(
        "optimize-thresholds",
        "Maximize the per-sensor Fisher information over the quantizer threshold");
    CommonFlags opt_common;
    add_common(opt_cmd, opt_common);
    std::string opt_kind;
    double opt_sigma_w = 0.0;
    auto* kind_opt = opt_cmd->add_option("--kind", opt_kind,
                                         "Quantizer kind: lr | direct");
    auto* sigma_opt =
        opt_cmd->add_option("--sigma-w", opt_sigma_w, "Noise standard deviation");

    auto* roc_cmd = app.add_subcommand("simulate-roc",
                                       "Monte Carlo ROC curves to CSV");
    CommonFlags roc_common;
    ModelFlags roc_model;
    add_common(roc_cmd, roc_common);
    add_model(roc_cmd, roc_model);
    std::uint64_t roc_qc = 0;
    double roc_ratio = 0.0;
    auto* roc_qc_opt = roc_cmd->add_option(
        "--qc", roc_qc, "Reference sensor count for tradeoff presets");
    auto* roc_ratio_opt = roc_cmd->add_option(
        "--ratio", roc_ratio, "Force the sensor-count ratio (0 = derive)");

    auto* asym_cmd = app.add_subcommand(
        "check-asymptotics", "Sample-vs-theory diagnostics for the statistics");
    CommonFlags asym_common;
    ModelFlags asym_model;
    add_common(asym_cmd, asym_common);
    add_model(asym_cmd, asym_model);
    std::string asym_detectors;
    auto* asym_det_opt = asym_cmd->add_option(
        "--detector", asym_detectors, "Comma list of detectors to diagnose");

    auto* eq_cmd = app.add_subcommand(
        "equivalence", "Centralized-vs-quantized sensor-count tradeoff");
    CommonFlags eq_common;
    ModelFlags eq_model;
    add_common(eq_cmd, eq_common);
    add_model(eq_cmd, eq_model);
    std::uint64_t eq_qc = 0;
    double eq_ratio = 0.0;
    auto* eq_qc_opt =
        eq_cmd->add_option("--qc", eq_qc, "Reference sensor count");
    auto* eq_ratio_opt = eq_cmd->add_option(
        "--ratio", eq_ratio, "Force the sensor-count ratio (0 = derive)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (opt_cmd->parsed()) {
            CliConfig cfg = lmpt::cli::default_config();
            resolve_common(cfg, opt_common, "optimize-thresholds");
            if (kind_opt->count())
                cfg.opt_kind = lmpt::cli::quantizer_from_token(opt_kind);
            if (sigma_opt->count())
                cfg.opt_sigma_w = opt_sigma_w;
            return cmd_optimize_thresholds(cfg);
        }
        if (roc_cmd->parsed()) {
            CliConfig cfg = lmpt::cli::default_config();
            resolve_common(cfg, roc_common, "simulate-roc");
            resolve_model(cfg, roc_model);
            if (roc_qc_opt->count()) {
                cfg.q_reference = roc_qc;
                cfg.equivalence_mode = true;
            }
            if (roc_ratio_opt->count())
                cfg.forced_ratio = roc_ratio;
            cfg.experiment.validate();
            return cmd_simulate_roc(cfg);
        }
        if (asym_cmd->parsed()) {
            CliConfig cfg = lmpt::cli::default_config();
            resolve_common(cfg, asym_common, "check-asymptotics");
            resolve_model(cfg, asym_model);
            if (asym_det_opt->count()) {
                cfg.diag_detectors.clear();
                std::string token;
                for (char c : asym_detectors + ",") {
                    if (c == ',') {
                        if (!token.empty())
                            cfg.diag_detectors.push_back(
                                lmpt::cli::detector_from_token(token));
                        token.clear();
                    } else if (!std::isspace(static_cast<unsigned char>(c))) {
                        token += c;
                    }
                }
            }
            if (cfg.diag_detectors.empty())
                throw std::invalid_argument("no detectors to diagnose");
            cfg.experiment.validate();
            return cmd_check_asymptotics(cfg);
        }
        if (eq_cmd->parsed()) {
            CliConfig cfg = lmpt::cli::default_config();
            resolve_common(cfg, eq_common, "equivalence");
            resolve_model(cfg, eq_model);
            cfg.equivalence_mode = true;
            if (eq_qc_opt->count())
                cfg.q_reference = eq_qc;
            if (eq_ratio_opt->count())
                cfg.forced_ratio = eq_ratio;
            warn_if_noisy(cfg);
            cfg.experiment.validate();
            return run_equivalence_to_files(cfg);
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}

#pragma once

#include <map>
#include <string>
#include <vector>

#include "lmpt/experiments.hpp"

// Run configuration shared by the command-line front end and its sidecar
// files. The on-disk format is one `key = value` per line (lists
// comma-separated, '#' starts a comment); every run writes its fully resolved
// configuration back out, and feeding that file to the same subcommand
// reproduces the run byte for byte.

namespace lmpt::cli {

struct CliConfig {
    std::string command; // simulate-roc | optimize-thresholds | ...
    ExperimentConfig experiment;
    std::string out_dir = "out";
    bool fast_mode = false;
    int format_version = 1;

    // Sensor-count comparison settings (equivalence runs).
    bool equivalence_mode = false;
    std::size_t q_reference = 100;
    double forced_ratio = 0.0; // 0 = derive from Fisher-information factors

    // Distribution-diagnostic settings (check-asymptotics).
    std::vector<DetectorKind> diag_detectors;

    // Threshold-design settings (optimize-thresholds).
    QuantizerKind opt_kind = QuantizerKind::LR;
    double opt_sigma_w = 1.0;
};

CliConfig default_config();

// fig1: the 300-sensor ROC comparison of the two bit detectors.
// fig2: the sensor-count tradeoff run (centralized at 100 sensors vs the
//       LR-bit detector at the derived count). Throws on unknown names.
void apply_preset(CliConfig& config, const std::string& name);

const char* detector_token(DetectorKind kind);
DetectorKind detector_from_token(const std::string& token);
const char* generator_token(GeneratorKind kind);
GeneratorKind generator_from_token(const std::string& token);
const char* quantizer_token(QuantizerKind kind);
QuantizerKind quantizer_from_token(const std::string& token);

// Raw key/value pairs in file order. Throws on malformed lines.
std::map<std::string, std::string> read_kv_file(const std::string& path);

// Applies recognized keys onto the config; unknown keys are an error so a
// typo in a hand-edited file cannot silently do nothing.
void apply_kv(CliConfig& config,
              const std::map<std::string, std::string>& kv);

// Canonical text form: fixed key order, 17-significant-digit floats, so
// identical configs serialize identically.
std::string serialize(const CliConfig& config);

// Quantizer bank files: `kind = ...` plus either one threshold broadcast to
// all sensors or a full comma-separated list.
std::string serialize_bank(QuantizerKind kind,
                           const std::vector<double>& thresholds);
void write_bank_file(const std::string& path, QuantizerKind kind,
                     const std::vector<double>& thresholds);

} // namespace lmpt::cli

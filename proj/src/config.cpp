#include "lmpt/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace lmpt::cli {

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_commas(const std::string& s)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(trim(s.substr(start)));
            break;
        }
        out.push_back(trim(s.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

double parse_double(const std::string& key, const std::string& value)
{
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw std::invalid_argument("config: bad numeric value for " + key +
                                    ": '" + value + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value)
{
    char* end = nullptr;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
        throw std::invalid_argument("config: bad integer value for " + key +
                                    ": '" + value + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& value)
{
    if (value == "1" || value == "true")
        return true;
    if (value == "0" || value == "false")
        return false;
    throw std::invalid_argument("config: bad boolean value for " + key + ": '" +
                                value + "'");
}

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join_doubles(const std::vector<double>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            out += ',';
        out += format_double(values[i]);
    }
    return out;
}

} // namespace

const char* detector_token(DetectorKind kind)
{
    return detector_name(kind);
}

DetectorKind detector_from_token(const std::string& token)
{
    if (token == "im1bit")
        return DetectorKind::Im1Bit;
    if (token == "clmpt")
        return DetectorKind::Clmpt;
    if (token == "onebit")
        return DetectorKind::OneBit;
    throw std::invalid_argument("config: unknown detector '" + token + "'");
}

const char* generator_token(GeneratorKind kind)
{
    return kind == GeneratorKind::Exact ? "exact" : "asymptotic";
}

GeneratorKind generator_from_token(const std::string& token)
{
    if (token == "exact")
        return GeneratorKind::Exact;
    if (token == "asymptotic")
        return GeneratorKind::Asymptotic;
    throw std::invalid_argument("config: unknown generator '" + token + "'");
}

const char* quantizer_token(QuantizerKind kind)
{
    return kind == QuantizerKind::LR ? "lr" : "direct";
}

QuantizerKind quantizer_from_token(const std::string& token)
{
    if (token == "lr")
        return QuantizerKind::LR;
    if (token == "direct")
        return QuantizerKind::Direct;
    throw std::invalid_argument("config: unknown quantizer kind '" + token + "'");
}

CliConfig default_config()
{
    CliConfig cfg;
    cfg.experiment.detectors = {DetectorKind::Im1Bit, DetectorKind::OneBit};
    cfg.experiment.pfa_grid = {0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
    cfg.diag_detectors = {DetectorKind::Im1Bit, DetectorKind::Clmpt,
                          DetectorKind::OneBit};
    return cfg;
}

void apply_preset(CliConfig& config, const std::string& name)
{
    auto& exp = config.experiment;
    if (name == "fig1") {
        // 300-sensor ROC comparison; the signal variance is not part of the
        // published setting and defaults to 8 like the tradeoff experiment.
        exp.q_sensors = 300;
        exp.n_dims = 1000;
        exp.noise_var = 1.0;
        exp.sparsity = 0.05;
        exp.nonzero_var = 8.0;
        exp.generator = GeneratorKind::Exact;
        exp.detectors = {DetectorKind::Im1Bit, DetectorKind::OneBit};
        exp.trials_h0 = 10000;
        exp.trials_h1 = 10000;
        exp.pfa_grid = {0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
        config.equivalence_mode = false;
        return;
    }
    if (name == "fig2") {
        exp.n_dims = 1000;
        exp.noise_var = 1.0;
        exp.sparsity = 0.05;
        exp.nonzero_var = 8.0;
        exp.generator = GeneratorKind::Exact;
        exp.trials_h0 = 10000;
        exp.trials_h1 = 10000;
        exp.pfa_grid = {0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
        config.equivalence_mode = true;
        config.q_reference = 100;
        config.forced_ratio = 0.0;
        return;
    }
    throw std::invalid_argument("unknown preset '" + name + "'");
}

std::map<std::string, std::string> read_kv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("config: cannot open " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: missing '=' at " + path + ":" +
                                        std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config: empty key at " + path + ":" +
                                        std::to_string(lineno));
        kv[key] = value;
    }
    return kv;
}

void apply_kv(CliConfig& config, const std::map<std::string, std::string>& kv)
{
    auto& exp = config.experiment;
    for (const auto& [key, value] : kv) {
        if (key == "command") {
            config.command = value;
        } else if (key == "q") {
            exp.q_sensors = parse_u64(key, value);
        } else if (key == "n") {
            exp.n_dims = parse_u64(key, value);
        } else if (key == "noise_var") {
            exp.noise_var = parse_double(key, value);
        } else if (key == "sparsity") {
            exp.sparsity = parse_double(key, value);
        } else if (key == "nonzero_var") {
            exp.nonzero_var = parse_double(key, value);
        } else if (key == "generator") {
            exp.generator = generator_from_token(value);
        } else if (key == "detectors") {
            exp.detectors.clear();
            for (const auto& token : split_commas(value))
                exp.detectors.push_back(detector_from_token(token));
        } else if (key == "trials_h0") {
            exp.trials_h0 = parse_u64(key, value);
        } else if (key == "trials_h1") {
            exp.trials_h1 = parse_u64(key, value);
        } else if (key == "pfa_grid") {
            exp.pfa_grid.clear();
            for (const auto& token : split_commas(value))
                exp.pfa_grid.push_back(parse_double(key, token));
        } else if (key == "seed") {
            exp.seed = parse_u64(key, value);
        } else if (key == "workers") {
            exp.workers = parse_u64(key, value);
        } else if (key == "out_dir") {
            config.out_dir = value;
        } else if (key == "fast_mode") {
            config.fast_mode = parse_bool(key, value);
        } else if (key == "format_version") {
            config.format_version = static_cast<int>(parse_u64(key, value));
        } else if (key == "equivalence_mode") {
            config.equivalence_mode = parse_bool(key, value);
        } else if (key == "q_reference") {
            config.q_reference = parse_u64(key, value);
        } else if (key == "forced_ratio") {
            config.forced_ratio = parse_double(key, value);
        } else if (key == "diag_detectors") {
            config.diag_detectors.clear();
            for (const auto& token : split_commas(value))
                config.diag_detectors.push_back(detector_from_token(token));
        } else if (key == "opt_kind") {
            config.opt_kind = quantizer_from_token(value);
        } else if (key == "opt_sigma_w") {
            config.opt_sigma_w = parse_double(key, value);
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
}

std::string serialize(const CliConfig& config)
{
    const auto& exp = config.experiment;
    std::string out;
    out += "command = " + config.command + "\n";
    out += "q = " + std::to_string(exp.q_sensors) + "\n";
    out += "n = " + std::to_string(exp.n_dims) + "\n";
    out += "noise_var = " + format_double(exp.noise_var) + "\n";
    out += "sparsity = " + format_double(exp.sparsity) + "\n";
    out += "nonzero_var = " + format_double(exp.nonzero_var) + "\n";
    out += std::string("generator = ") + generator_token(exp.generator) + "\n";
    out += "detectors = ";
    for (std::size_t i = 0; i < exp.detectors.size(); ++i) {
        if (i)
            out += ',';
        out += detector_token(exp.detectors[i]);
    }
    out += '\n';
    out += "trials_h0 = " + std::to_string(exp.trials_h0) + "\n";
    out += "trials_h1 = " + std::to_string(exp.trials_h1) + "\n";
    out += "pfa_grid = " + join_doubles(exp.pfa_grid) + "\n";
    out += "seed = " + std::to_string(exp.seed) + "\n";
    out += "workers = " + std::to_string(exp.workers) + "\n";
    out += "out_dir = " + config.out_dir + "\n";
    out += std::string("fast_mode = ") + (config.fast_mode ? "1" : "0") + "\n";
    out += "format_version = " + std::to_string(config.format_version) + "\n";
    out += std::string("equivalence_mode = ") +
           (config.equivalence_mode ? "1" : "0") + "\n";
    out += "q_reference = " + std::to_string(config.q_reference) + "\n";
    out += "forced_ratio = " + format_double(config.forced_ratio) + "\n";
    out += "diag_detectors = ";
    for (std::size_t i = 0; i < config.diag_detectors.size(); ++i) {
        if (i)
            out += ',';
        out += detector_token(config.diag_detectors[i]);
    }
    out += '\n';
    out += std::string("opt_kind = ") + quantizer_token(config.opt_kind) + "\n";
    out += "opt_sigma_w = " + format_double(config.opt_sigma_w) + "\n";
    return out;
}

std::string serialize_bank(QuantizerKind kind,
                           const std::vector<double>& thresholds)
{
    if (thresholds.empty())
        throw std::invalid_argument("serialize_bank: empty threshold list");
    bool all_equal = true;
    for (double t : thresholds)
        if (t != thresholds.front())
            all_equal = false;
    std::string out = std::string("kind = ") + quantizer_token(kind) + "\n";
    out += "thresholds = ";
    out += all_equal ? format_double(thresholds.front())
                     : join_doubles(thresholds);
    out += '\n';
    return out;
}

void write_bank_file(const std::string& path, QuantizerKind kind,
                     const std::vector<double>& thresholds)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("write_bank_file: cannot open " + path);
    out << serialize_bank(kind, thresholds);
    if (!out)
        throw std::runtime_error("write_bank_file: write failed for " + path);
}

} // namespace lmpt::cli

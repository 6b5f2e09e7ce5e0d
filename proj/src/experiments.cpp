#include "lmpt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "lmpt/math_kernel.hpp"

namespace lmpt {

void ExperimentConfig::validate() const
{
    if (q_sensors == 0 || n_dims == 0)
        throw std::invalid_argument("ExperimentConfig: Q and N must be at least 1");
    if (!(noise_var > 0.0))
        throw std::invalid_argument("ExperimentConfig: noise_var must be positive");
    if (!(sparsity >= 0.0 && sparsity < 1.0))
        throw std::invalid_argument("ExperimentConfig: sparsity must lie in [0, 1)");
    if (!(nonzero_var > 0.0))
        throw std::invalid_argument("ExperimentConfig: nonzero_var must be positive");
    if (detectors.empty())
        throw std::invalid_argument("ExperimentConfig: no detectors selected");
    if (trials_h0 == 0 || trials_h1 == 0)
        throw std::invalid_argument("ExperimentConfig: trials must be at least 1");
    if (pfa_grid.empty())
        throw std::invalid_argument("ExperimentConfig: empty pfa grid");
    double prev = 0.0;
    for (double v : pfa_grid) {
        if (!(v > 0.0 && v < 1.0))
            throw std::invalid_argument(
                "ExperimentConfig: pfa values must lie strictly inside (0, 1)");
        if (!(v > prev))
            throw std::invalid_argument(
                "ExperimentConfig: pfa grid must be strictly increasing");
        prev = v;
    }
    pso.validate();
}

const char* detector_name(DetectorKind kind)
{
    switch (kind) {
    case DetectorKind::Im1Bit:
        return "im1bit";
    case DetectorKind::Clmpt:
        return "clmpt";
    case DetectorKind::OneBit:
        return "onebit";
    }
    return "unknown";
}

namespace {

std::size_t resolve_workers(std::size_t requested)
{
    if (requested != 0)
        return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs fn over [0, count) split into contiguous chunks, one thread per chunk.
// The first worker exception, if any, is rethrown on the calling thread.
void parallel_for_trials(std::size_t count, std::size_t workers,
                         const std::function<void(std::size_t, std::size_t)>& fn)
{
    workers = std::min(resolve_workers(workers), std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        fn(0, count);
        return;
    }
    const std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end)
            break;
        pool.emplace_back([&, begin, end] {
            try {
                fn(begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

// One detector's ready-to-run evaluator over a raw observation row.
struct DetectorEval {
    DetectorKind kind;
    QuantizedStatistic quantized;     // bit detectors
    CentralizedStatistic centralized; // clmpt
    std::vector<double> thresholds;   // quantizer thresholds for bit kinds

    double operator()(const double* row, std::size_t qn) const
    {
        switch (kind) {
        case DetectorKind::Im1Bit: {
            double s = quantized.base;
            for (std::size_t q = 0; q < qn; ++q)
                if (std::abs(row[q]) >= thresholds[q])
                    s += quantized.bit_weight[q];
            return s;
        }
        case DetectorKind::OneBit: {
            double s = quantized.base;
            for (std::size_t q = 0; q < qn; ++q)
                if (row[q] > thresholds[q])
                    s += quantized.bit_weight[q];
            return s;
        }
        case DetectorKind::Clmpt:
            return centralized(row, qn);
        }
        return 0.0;
    }
};

DetectorEval make_eval(DetectorKind kind, const NetworkModel& network,
                       const PsoConfig& pso)
{
    DetectorEval eval;
    eval.kind = kind;
    if (kind == DetectorKind::Clmpt) {
        eval.centralized = make_centralized_statistic(network);
        return eval;
    }
    const auto qkind = kind == DetectorKind::Im1Bit ? QuantizerKind::LR
                                                    : QuantizerKind::Direct;
    QuantizerBank bank = optimize_bank(network, qkind, pso);
    eval.quantized = make_quantized_statistic(network, bank);
    eval.thresholds = std::move(bank.thresholds);
    return eval;
}

// statistics[d][t] = detector d's statistic on trial t.
std::vector<std::vector<double>> simulate_statistics(
    const NetworkModel& network, const SignalModel& signal,
    const std::vector<DetectorEval>& evals, Hypothesis hypothesis,
    GeneratorKind generator, std::size_t trials, std::uint64_t seed,
    std::size_t workers)
{
    const std::size_t qn = network.q();
    std::vector<std::vector<double>> statistics(
        evals.size(), std::vector<double>(trials, 0.0));
    parallel_for_trials(trials, workers, [&](std::size_t begin, std::size_t end) {
        std::vector<double> row(qn);
        for (std::size_t t = begin; t < end; ++t) {
            fill_trial_row(network, signal, hypothesis, generator, seed, t,
                           row.data());
            for (std::size_t d = 0; d < evals.size(); ++d)
                statistics[d][t] = evals[d](row.data(), qn);
        }
    });
    return statistics;
}

double exceed_fraction(const std::vector<double>& stats, double threshold)
{
    std::size_t count = 0;
    for (double s : stats)
        if (s > threshold)
            ++count;
    return static_cast<double>(count) / static_cast<double>(stats.size());
}

RocCurve build_curve(DetectorKind kind, const std::vector<double>& pfa_grid,
                     const std::vector<double>& h0_stats,
                     const std::vector<double>& h1_stats)
{
    RocCurve curve;
    curve.detector = kind;
    curve.trials_h0 = h0_stats.size();
    curve.trials_h1 = h1_stats.size();
    for (double pfa : pfa_grid) {
        const double threshold = gaussian_upper_tail_inverse(pfa);
        RocPoint pt;
        pt.pfa_nominal = pfa;
        pt.pfa_empirical = exceed_fraction(h0_stats, threshold);
        pt.pd_empirical = exceed_fraction(h1_stats, threshold);
        pt.stderr_pd = std::sqrt(pt.pd_empirical * (1.0 - pt.pd_empirical) /
                                 static_cast<double>(h1_stats.size()));
        curve.points.push_back(pt);
    }
    return curve;
}

} // namespace

std::vector<RocCurve> run_roc(const ExperimentConfig& config)
{
    config.validate();
    const NetworkModel network =
        make_network(config.q_sensors, config.n_dims, config.noise_var,
                     config.seed);
    const SignalModel signal(config.sparsity, config.nonzero_var, config.n_dims);

    PsoConfig pso = config.pso;
    pso.seed = config.seed;
    std::vector<DetectorEval> evals;
    for (DetectorKind kind : config.detectors)
        evals.push_back(make_eval(kind, network, pso));

    const auto h0 = simulate_statistics(network, signal, evals, Hypothesis::H0,
                                        config.generator, config.trials_h0,
                                        config.seed, config.workers);
    const auto h1 = simulate_statistics(network, signal, evals, Hypothesis::H1,
                                        config.generator, config.trials_h1,
                                        config.seed, config.workers);

    std::vector<RocCurve> curves;
    for (std::size_t d = 0; d < evals.size(); ++d)
        curves.push_back(build_curve(config.detectors[d], config.pfa_grid,
                                     h0[d], h1[d]));
    return curves;
}

EquivalenceResult run_equivalence(const ExperimentConfig& base,
                                  std::size_t q_reference, double forced_ratio)
{
    if (q_reference == 0)
        throw std::invalid_argument("run_equivalence: q_reference must be >= 1");

    EquivalenceResult result;
    result.q_reference = q_reference;

    {
        // The ratio calculus needs a homogeneous network; the generated
        // unit-norm gains qualify. Build the reference-size network for the
        // check, then reuse the same seed for both runs.
        const NetworkModel probe = make_network(q_reference, base.n_dims,
                                                base.noise_var, base.seed);
        PsoConfig pso = base.pso;
        pso.seed = base.seed;
        result.ratio = forced_ratio > 0.0
                           ? forced_ratio
                           : sensor_equivalence(DetectorKind::Clmpt,
                                                DetectorKind::Im1Bit, probe, pso);
    }
    result.q_quantized =
        static_cast<std::size_t>(std::llround(result.ratio *
                                              static_cast<double>(q_reference)));
    if (result.q_quantized == 0)
        result.q_quantized = 1;

    ExperimentConfig ref_cfg = base;
    ref_cfg.q_sensors = q_reference;
    ref_cfg.detectors = {DetectorKind::Clmpt};
    ExperimentConfig quant_cfg = base;
    quant_cfg.q_sensors = result.q_quantized;
    quant_cfg.detectors = {DetectorKind::Im1Bit};

    result.reference = run_roc(ref_cfg).front();
    result.quantized = run_roc(quant_cfg).front();

    double gap = 0.0;
    for (std::size_t i = 0; i < result.reference.points.size(); ++i)
        gap = std::max(gap, std::abs(result.reference.points[i].pd_empirical -
                                     result.quantized.points[i].pd_empirical));
    result.max_abs_pd_gap = gap;
    return result;
}

std::vector<NormalityRecord> run_normality(const ExperimentConfig& config,
                                           DetectorKind detector)
{
    ExperimentConfig cfg = config;
    cfg.detectors = {detector};
    cfg.validate();

    const NetworkModel network =
        make_network(cfg.q_sensors, cfg.n_dims, cfg.noise_var, cfg.seed);
    const SignalModel signal(cfg.sparsity, cfg.nonzero_var, cfg.n_dims);
    PsoConfig pso = cfg.pso;
    pso.seed = cfg.seed;

    std::vector<DetectorEval> evals{make_eval(detector, network, pso)};
    std::optional<QuantizerBank> bank;
    if (detector != DetectorKind::Clmpt)
        bank.emplace(detector == DetectorKind::Im1Bit ? QuantizerKind::LR
                                                      : QuantizerKind::Direct,
                     evals.front().thresholds);
    const double mu_theory =
        theoretical_mean(detector, network, signal, bank);

    std::vector<NormalityRecord> records;
    for (Hypothesis hyp : {Hypothesis::H0, Hypothesis::H1}) {
        const std::size_t trials =
            hyp == Hypothesis::H0 ? cfg.trials_h0 : cfg.trials_h1;
        auto stats = simulate_statistics(network, signal, evals, hyp,
                                         cfg.generator, trials, cfg.seed,
                                         cfg.workers);
        auto& sample = stats.front();

        NormalityRecord rec;
        rec.detector = detector;
        rec.hypothesis = hyp;
        rec.n = sample.size();
        double sum = 0.0;
        for (double v : sample)
            sum += v;
        rec.mean = sum / static_cast<double>(rec.n);
        double ss = 0.0;
        for (double v : sample)
            ss += (v - rec.mean) * (v - rec.mean);
        rec.variance = rec.n > 1 ? ss / static_cast<double>(rec.n - 1) : 0.0;
        rec.theoretical_mean = hyp == Hypothesis::H0 ? 0.0 : mu_theory;
        rec.ks_stat = ks_statistic_vs_normal(sample, rec.theoretical_mean);
        rec.ks_pass_1pct = rec.ks_stat <= ks_critical_1pct(rec.n);
        records.push_back(rec);
    }
    return records;
}

double ks_statistic_vs_normal(std::vector<double> sample, double mean)
{
    if (sample.empty())
        throw std::invalid_argument("ks_statistic_vs_normal: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double cdf = 1.0 - gaussian_upper_tail(sample[i] - mean);
        const double hi = (static_cast<double>(i) + 1.0) / n - cdf;
        const double lo = cdf - static_cast<double>(i) / n;
        d = std::max(d, std::max(hi, lo));
    }
    return d;
}

double ks_critical_1pct(std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("ks_critical_1pct: empty sample");
    return 1.6276 / std::sqrt(static_cast<double>(n));
}

namespace {

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_string(const std::string& content, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("emit_csv: cannot open " + path);
    out << content;
    if (!out)
        throw std::runtime_error("emit_csv: write failed for " + path);
}

void append_curve(std::string& out, const RocCurve& curve)
{
    for (const auto& pt : curve.points) {
        out += detector_name(curve.detector);
        out += ',';
        out += format_double(pt.pfa_nominal);
        out += ',';
        out += format_double(pt.pfa_empirical);
        out += ',';
        out += format_double(pt.pd_empirical);
        out += ',';
        out += format_double(pt.stderr_pd);
        out += ',';
        out += std::to_string(curve.trials_h0);
        out += ',';
        out += std::to_string(curve.trials_h1);
        out += '\n';
    }
}

const char* kRocHeader =
    "detector,pfa_nominal,pfa_empirical,pd_empirical,stderr_pd,trials_h0,trials_h1\n";

} // namespace

std::string roc_csv_string(const std::vector<RocCurve>& curves)
{
    if (curves.empty())
        throw std::invalid_argument("roc_csv_string: no curves");
    std::string out = kRocHeader;
    for (const auto& curve : curves)
        append_curve(out, curve);
    return out;
}

std::string normality_csv_string(const std::vector<NormalityRecord>& records)
{
    if (records.empty())
        throw std::invalid_argument("normality_csv_string: no records");
    std::string out =
        "detector,hypothesis,n,mean,variance,ks_stat,ks_pass_1pct,theoretical_mean\n";
    for (const auto& rec : records) {
        out += detector_name(rec.detector);
        out += ',';
        out += rec.hypothesis == Hypothesis::H0 ? "H0" : "H1";
        out += ',';
        out += std::to_string(rec.n);
        out += ',';
        out += format_double(rec.mean);
        out += ',';
        out += format_double(rec.variance);
        out += ',';
        out += format_double(rec.ks_stat);
        out += ',';
        out += rec.ks_pass_1pct ? "true" : "false";
        out += ',';
        out += format_double(rec.theoretical_mean);
        out += '\n';
    }
    return out;
}

std::string equivalence_csv_string(const EquivalenceResult& result)
{
    std::string out = kRocHeader;
    append_curve(out, result.reference);
    append_curve(out, result.quantized);
    out += "#max_abs_pd_gap,";
    out += format_double(result.max_abs_pd_gap);
    out += '\n';
    return out;
}

void emit_roc_csv(const std::vector<RocCurve>& curves, const std::string& path)
{
    write_string(roc_csv_string(curves), path);
}

void emit_normality_csv(const std::vector<NormalityRecord>& records,
                        const std::string& path)
{
    write_string(normality_csv_string(records), path);
}

void emit_equivalence_csv(const EquivalenceResult& result,
                          const std::string& path)
{
    write_string(equivalence_csv_string(result), path);
}

} // namespace lmpt

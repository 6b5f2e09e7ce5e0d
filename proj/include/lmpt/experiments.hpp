#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lmpt/detectors.hpp"
#include "lmpt/fisher_opt.hpp"
#include "lmpt/signal_model.hpp"

// Monte Carlo experiment engine. One simulated trial produces one observation
// row shared by every detector under test (paired comparisons), each detector
// reduces it to its normalized statistic, and ROC points come from sweeping
// the statistic array against the per-pfa thresholds. Trials are partitioned
// across worker threads; because every random draw is keyed by trial index,
// the output is bit-identical for any worker count.

namespace lmpt {

struct ExperimentConfig {
    std::size_t q_sensors = 300;
    std::size_t n_dims = 1000;
    double noise_var = 1.0;
    double sparsity = 0.05;
    double nonzero_var = 8.0;
    GeneratorKind generator = GeneratorKind::Exact;
    std::vector<DetectorKind> detectors;
    std::size_t trials_h0 = 10000;
    std::size_t trials_h1 = 10000;
    std::vector<double> pfa_grid;
    std::uint64_t seed = 7;
    std::size_t workers = 0; // 0 picks the machine's thread count
    PsoConfig pso;           // used when a detector needs an optimized bank

    void validate() const;
};

struct RocPoint {
    double pfa_nominal;
    double pfa_empirical;
    double pd_empirical;
    double stderr_pd;
};

struct RocCurve {
    DetectorKind detector;
    std::vector<RocPoint> points;
    std::size_t trials_h0 = 0;
    std::size_t trials_h1 = 0;
};

struct EquivalenceResult {
    RocCurve reference; // centralized detector at q_ref sensors
    RocCurve quantized; // bit detector at round(ratio * q_ref) sensors
    double ratio = 0.0;
    std::size_t q_reference = 0;
    std::size_t q_quantized = 0;
    double max_abs_pd_gap = 0.0;
};

struct NormalityRecord {
    DetectorKind detector;
    Hypothesis hypothesis;
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0; // unbiased sample variance
    double ks_stat = 0.0;  // distance to N(theoretical_mean, 1)
    bool ks_pass_1pct = false;
    double theoretical_mean = 0.0;
};

const char* detector_name(DetectorKind kind);

// Simulates both hypotheses once and returns one curve per configured
// detector, all evaluated on the same observation stream.
std::vector<RocCurve> run_roc(const ExperimentConfig& config);

// The sensor-count tradeoff experiment: centralized detector at q_ref
// sensors against the LR-bit detector at round(ratio * q_ref) sensors, where
// ratio comes from the Fisher-information factors (or is forced by the
// caller, e.g. to 1 for a same-size comparison). The two networks share a
// seed, so the smaller one's sensors are a prefix of the larger one's.
EquivalenceResult run_equivalence(const ExperimentConfig& base,
                                  std::size_t q_reference,
                                  double forced_ratio = 0.0);

// Distribution diagnostics for one detector: sample moments and the KS
// distance of the normalized statistic against its predicted unit-variance
// Gaussian law, under both hypotheses.
std::vector<NormalityRecord> run_normality(const ExperimentConfig& config,
                                           DetectorKind detector);

// One-sample KS distance between the sample and N(mean, 1).
double ks_statistic_vs_normal(std::vector<double> sample, double mean);

// Asymptotic 1% KS critical value, 1.6276 / sqrt(n).
double ks_critical_1pct(std::size_t n);

// CSV writers. Floats carry 17 significant digits so emitted numbers
// round-trip exactly; identical results produce byte-identical files.
void emit_roc_csv(const std::vector<RocCurve>& curves, const std::string& path);
void emit_normality_csv(const std::vector<NormalityRecord>& records,
                        const std::string& path);
void emit_equivalence_csv(const EquivalenceResult& result,
                          const std::string& path);

std::string roc_csv_string(const std::vector<RocCurve>& curves);
std::string normality_csv_string(const std::vector<NormalityRecord>& records);
std::string equivalence_csv_string(const EquivalenceResult& result);

} // namespace lmpt

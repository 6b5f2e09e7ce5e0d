#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lmpt/rng.hpp"

// Sparse-signal observation model. A network of Q sensors each sees a scalar
//   y_q = h_q' s_q + w_q
// where the length-N signals s_q share one Bernoulli(p) support vector per
// trial, nonzero entries are N(0, sigma0_sq) independently per sensor, and
// w_q is N(0, noise_var). Under H0 the signal term is absent. The asymptotic
// generator replaces the signal sum by its large-N Gaussian limit
// N(0, p*sigma0_sq*|h_q|^2 + noise_var).

namespace lmpt {

enum class Hypothesis { H0, H1 };
enum class GeneratorKind { Exact, Asymptotic };

struct NetworkModel {
    // gains[q] is sensor q's length-N gain vector; gain_sq[q] caches |h_q|^2.
    std::vector<std::vector<double>> gains;
    std::vector<double> gain_sq;
    double noise_var = 1.0;

    NetworkModel(std::vector<std::vector<double>> gains_in, double noise_var_in);

    std::size_t q() const { return gains.size(); }
    std::size_t n() const { return gains.empty() ? 0 : gains.front().size(); }

    // True when all |h_q|^2 agree to within a relative 1e-9; the closed-form
    // sensor-count tradeoffs are only defined in that regime.
    bool homogeneous() const;
};

struct SignalModel {
    double sparsity;    // p in [0, 1)
    double nonzero_var; // sigma0_sq > 0
    std::size_t dim;    // N

    SignalModel(double p, double sigma0_sq, std::size_t n);
};

struct ObservationBatch {
    std::vector<double> values; // trials x Q, row major
    std::size_t trials = 0;
    std::size_t sensors = 0;
    Hypothesis hypothesis = Hypothesis::H0;
    GeneratorKind generator = GeneratorKind::Exact;
    std::uint64_t seed = 0;
    // Set when H1 was requested with p = 0: the batch is distributed as H0.
    bool degenerate_h1 = false;

    double at(std::size_t trial, std::size_t sensor) const
    {
        return values[trial * sensors + sensor];
    }
};

// Unit-norm gain vectors, standard normal draws normalized per sensor.
// Sensor q's vector depends on (seed, q) only, so two networks built from the
// same seed agree on their common sensors regardless of Q.
std::vector<std::vector<double>> make_gains(std::size_t q_count, std::size_t n,
                                            std::uint64_t seed);

NetworkModel make_network(std::size_t q_count, std::size_t n, double noise_var,
                          std::uint64_t seed);

// One shared Bernoulli(p) support draw (the joint sparsity pattern of a trial).
std::vector<std::uint8_t> draw_support(const SignalModel& signal,
                                       rng::SplitMix64& stream);

// Fills out[0..Q-1] with one trial's observations. This is the primitive the
// Monte Carlo engine shards over workers: the draw depends only on
// (seed, hypothesis, trial_index, sensor), never on evaluation order.
void fill_trial_row(const NetworkModel& network, const SignalModel& signal,
                    Hypothesis hypothesis, GeneratorKind generator,
                    std::uint64_t seed, std::uint64_t trial_index, double* out);

ObservationBatch generate_exact(const NetworkModel& network,
                                const SignalModel& signal,
                                Hypothesis hypothesis, std::size_t trials,
                                std::uint64_t seed);

ObservationBatch generate_asymptotic(const NetworkModel& network,
                                     const SignalModel& signal,
                                     Hypothesis hypothesis, std::size_t trials,
                                     std::uint64_t seed);

// Debug dump, one "trial,sensor,value" row per observation. Not a stable
// format.
void write_batch_csv(const ObservationBatch& batch, const std::string& path);

} // namespace lmpt

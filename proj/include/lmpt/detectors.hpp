#pragma once

#include <optional>
#include <vector>

#include "lmpt/math_kernel.hpp"
#include "lmpt/quantizers.hpp"
#include "lmpt/signal_model.hpp"

// Fusion-center side. Every detector reduces a trial to one scalar statistic
// that is asymptotically N(0,1) under H0, so a false-alarm target pfa maps to
// the fixed threshold Qinv(pfa) with no knowledge of p or sigma0_sq:
//
//   im1bit: score test on LR-quantized bits (the proposed detector),
//   onebit: score test on sign-quantized bits (baseline),
//   clmpt:  score test on the unquantized observations (centralized bound).
//
// The quantized statistics are affine in the bit vector; the per-sensor
// weights follow from the derivative of the bit PMF in the sparsity at p = 0,
// normalized by the root of the summed Fisher information. The signal
// variance scales score and root-FI identically and cancels, which is why
// none of the statistics needs it.

namespace lmpt {

enum class DetectorKind { Im1Bit, Clmpt, OneBit };

struct DetectorSpec {
    DetectorKind kind;
    std::optional<QuantizerBank> bank; // required unless kind == Clmpt
    Probability pfa;

    DetectorSpec(DetectorKind k, std::optional<QuantizerBank> b, Probability fa);
};

struct Decision {
    double statistic;
    double threshold;
    Hypothesis declared;
};

// Precomputed affine form T(report) = base + sum of bit_weight[q] over set
// bits. Building it costs a few tail evaluations per sensor; applying it is a
// masked sum, which is what the Monte Carlo loops run.
struct QuantizedStatistic {
    std::vector<double> bit_weight;
    double base = 0.0;

    double operator()(const BitReport& report) const;
};

// Works for either bank kind; throws if the bank carries no information at
// all (zero total Fisher information, e.g. every direct threshold at 0).
QuantizedStatistic make_quantized_statistic(const NetworkModel& network,
                                            const QuantizerBank& bank);

// Precomputed centralized statistic: weighted energy deviation
// [sum of |h_q|^2 (y_q^2/sigma_w^2 - 1)] / sqrt(2 sum of |h_q|^4).
struct CentralizedStatistic {
    std::vector<double> y_sq_weight;
    double base = 0.0;

    double operator()(const double* row, std::size_t q_count) const;
};

CentralizedStatistic make_centralized_statistic(const NetworkModel& network);

// The proposed fusion rule in its unnormalized form: a weighted sum over set
// bits with weight tau_q |h_q|^2 exp(-tau_q^2/(2 sigma_w^2)) /
// {[1/2 - Q(tau_q/sigma_w)] Q(tau_q/sigma_w)}. Same ranking as the
// normalized statistic (positive affine relation); kept for transparency.
double im1bit_statistic_raw(const BitReport& bits, const NetworkModel& network,
                            const std::vector<double>& taus);

double im1bit_statistic_normalized(const BitReport& bits,
                                   const NetworkModel& network,
                                   const QuantizerBank& bank);

double onebit_statistic(const BitReport& bits, const NetworkModel& network,
                        const QuantizerBank& bank);

double clmpt_statistic(const double* row, const NetworkModel& network);

// Fixed-level test on a normalized statistic: declare H1 iff the statistic
// strictly exceeds Qinv(pfa). Ties go to H0.
Decision decide(double statistic, Probability pfa);

// Predicted H1 mean of the normalized statistic, p * sqrt(FI at p = 0).
// Unlike the statistics themselves this needs the true p and sigma0_sq; it is
// a ground-truth prediction used by diagnostics, not by the running detector.
double theoretical_mean(DetectorKind kind, const NetworkModel& network,
                        const SignalModel& signal,
                        const std::optional<QuantizerBank>& bank);

} // namespace lmpt

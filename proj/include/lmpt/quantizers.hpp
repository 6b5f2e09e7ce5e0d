#pragma once

#include <cstdint>
#include <vector>

#include "lmpt/math_kernel.hpp"
#include "lmpt/signal_model.hpp"

// Local 1-bit processing at the sensors. Two designs:
//
//   LR:     b = 1 iff LR(y) >= lambda, where the likelihood ratio of the
//           variance-mixture model is c0*exp(c1*y^2), monotone in |y|; so the
//           deployed rule is simply b = 1 iff |y| >= tau. tau is the only
//           runtime parameter.
//   Direct: z = 1 iff y > zeta (plain sign quantizer on the shifted sample).
//
// The induced bit PMFs under either hypothesis are closed-form Gaussian
// tails; the fusion statistics and all threshold design run on those.

namespace lmpt {

enum class QuantizerKind { LR, Direct };

struct QuantizerBank {
    QuantizerKind kind;
    std::vector<double> thresholds; // tau_q (LR, all > 0) or zeta_q (Direct)

    QuantizerBank(QuantizerKind k, std::vector<double> t);
};

struct BitReport {
    std::vector<std::uint8_t> bits;
    QuantizerKind kind;
};

// c0 = sqrt(sigma_w^2 / v), c1 = p*sigma0^2*|h|^2 / (2*sigma_w^2*v) with
// v = p*sigma0^2*|h|^2 + sigma_w^2 the per-observation variance under H1.
struct LrCoefficients {
    double c0;
    double c1;
};
LrCoefficients lr_coefficients(double gain_sq, const SignalModel& signal,
                               double noise_var);

// Likelihood ratio of a single observation, c0*exp(c1*y^2). Returns exactly 1
// when p = 0 (the two hypotheses coincide).
double lr_value(double y, double gain_sq, const SignalModel& signal,
                double noise_var);

// The |y|-threshold equivalent to LR-thresholding at lambda:
// tau = sqrt(ln(lambda/c0)/c1). Requires lambda > c0, else the comparison
// b = (LR >= lambda) is constant and no positive tau exists.
double lambda_to_tau(double lambda, double gain_sq, const SignalModel& signal,
                     double noise_var);

BitReport quantize_lr(const double* row, std::size_t q_count,
                      const QuantizerBank& bank);
BitReport quantize_direct(const double* row, std::size_t q_count,
                          const QuantizerBank& bank);

// P(b = 1) for the LR quantizer: 2*Q(tau/sigma_w) under H0, and the same
// expression with the H1-inflated standard deviation under H1.
Probability bit_pmf_lr(double tau, Hypothesis hypothesis, double gain_sq,
                       const SignalModel& signal, double noise_var);

// P(z = 1) for the direct quantizer: one-sided tail Q(zeta/sd), no factor 2.
Probability bit_pmf_direct(double zeta, Hypothesis hypothesis, double gain_sq,
                           const SignalModel& signal, double noise_var);

} // namespace lmpt

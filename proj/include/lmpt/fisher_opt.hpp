#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lmpt/detectors.hpp"
#include "lmpt/quantizers.hpp"
#include "lmpt/signal_model.hpp"

// Fisher information of the quantized and centralized score tests, and the
// threshold design built on it. For a single sensor the information at p = 0
// factors as
//
//   FI = psi(threshold/sigma_w) * sigma0^4 |h|^4 / (4 sigma_w^4)
//
// with psi a scale-free kernel depending only on the quantizer kind, so
// maximizing FI decouples into one 1-D problem per sensor, and in fact into a
// single problem since psi is the same for all of them. The maximization runs
// a restarted particle swarm; a dense grid search in the tests guards against
// the swarm settling on anything but the global optimum.

namespace lmpt {

struct PsoConfig {
    std::size_t swarm_size = 50;
    std::size_t iterations = 200;
    double inertia = 0.7;
    double cognitive_weight = 1.5;
    double social_weight = 1.5;
    std::size_t restarts = 10;
    double search_lo = 1e-4; // scaled by sigma_w in optimize_bank
    double search_hi = 10.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct OptResult {
    double argmax = 0.0;
    double max_value = 0.0;
    std::size_t converged_runs = 0;
    double spread = 0.0; // max pairwise distance among restart argmaxes
    std::size_t resampled_particles = 0; // non-finite objective probes
};

// FI kernel of the LR-bit sensor: g(x) / [(1/2 - Q(x)) Q(x)] at x = tau/sigma_w.
// Defined for tau > 0 only (footnote convention: nonpositive tau gives a
// constant bit).
double psi_lr(double tau, double sigma_w);

// FI kernel of the sign-bit sensor: g(x) / [Q(x) (1 - Q(x))] at x = zeta/sigma_w.
double psi_direct(double zeta, double sigma_w);

// d P(bit = 1 | H1; p) / dp for one sensor, any evaluation sparsity.
double bit_pmf_derivative(QuantizerKind kind, double threshold, double p_eval,
                          double gain_sq, double sigma0_sq, double noise_var);

// Summed Fisher information of the bit vector at sparsity p_eval.
double fisher_im1bit(const NetworkModel& network, const SignalModel& signal,
                     const std::vector<double>& taus, double p_eval);
double fisher_onebit(const NetworkModel& network, const SignalModel& signal,
                     const std::vector<double>& zetas, double p_eval);

// Fisher information of the centralized (unquantized) score test at p = 0:
// sum of sigma0^4 |h_q|^4 / (2 sigma_w^4). Independent of p.
double fisher_clmpt(const NetworkModel& network, const SignalModel& signal);

// Restarted particle swarm on a scalar objective over (lo, hi). Probe points
// where the objective comes back non-finite are re-sampled uniformly and
// counted in the result. Deterministic for a fixed config.
OptResult pso_maximize(const std::function<double(double)>& objective,
                       const PsoConfig& config);

// Best thresholds for a whole network. The kernel depends on the threshold
// only through threshold/sigma_w, so one swarm run serves every sensor; the
// bank still carries per-sensor entries.
QuantizerBank optimize_bank(const NetworkModel& network, QuantizerKind kind,
                            const PsoConfig& config);

// Per-sensor FI factor of a detector kind in the homogeneous case, i.e. the
// constant k in FI_sensor = k * sigma0^4 |h|^4 / sigma_w^4 at the optimal
// threshold: 1/2 for the centralized test, max psi / 4 for the bit tests.
double fi_factor(DetectorKind kind, double sigma_w, const PsoConfig& config);

// Sensor-count ratio making the quantized detector match the reference
// detector's deflection: factor(reference) / factor(quantized). Only
// meaningful when all sensors are alike, hence the homogeneity requirement.
double sensor_equivalence(DetectorKind reference, DetectorKind quantized,
                          const NetworkModel& network, const PsoConfig& config);

} // namespace lmpt

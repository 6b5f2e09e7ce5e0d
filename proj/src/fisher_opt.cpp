#include "lmpt/fisher_opt.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "lmpt/math_kernel.hpp"
#include "lmpt/rng.hpp"

namespace lmpt {

void PsoConfig::validate() const
{
    if (swarm_size < 2)
        throw std::invalid_argument("PsoConfig: swarm_size must be at least 2");
    if (iterations < 1)
        throw std::invalid_argument("PsoConfig: iterations must be at least 1");
    if (!(inertia > 0.0 && inertia < 1.0))
        throw std::invalid_argument("PsoConfig: inertia must lie in (0, 1)");
    if (!(cognitive_weight >= 0.0) || !(social_weight >= 0.0))
        throw std::invalid_argument("PsoConfig: negative acceleration weight");
    if (restarts < 1)
        throw std::invalid_argument("PsoConfig: restarts must be at least 1");
    if (!(search_lo > 0.0) || !(search_hi > search_lo) ||
        !std::isfinite(search_hi))
        throw std::invalid_argument("PsoConfig: need 0 < search_lo < search_hi");
}

double psi_lr(double tau, double sigma_w)
{
    if (!(tau > 0.0))
        throw std::domain_error("psi_lr: tau must be positive");
    if (!(sigma_w > 0.0))
        throw std::domain_error("psi_lr: sigma_w must be positive");
    const double x = tau / sigma_w;
    // (1/2 - Q(x)) Q(x) written as erf(x/sqrt2)/2 * Q(x) so the small-x
    // difference does not cancel.
    const double denom = 0.5 * one_minus_two_tails(x) * gaussian_upper_tail(x);
    return g_func(x) / denom;
}

double psi_direct(double zeta, double sigma_w)
{
    if (!(sigma_w > 0.0))
        throw std::domain_error("psi_direct: sigma_w must be positive");
    const double x = zeta / sigma_w;
    const double denom = gaussian_upper_tail(x) * gaussian_upper_tail(-x);
    return g_func(x) / denom;
}

double bit_pmf_derivative(QuantizerKind kind, double threshold, double p_eval,
                          double gain_sq, double sigma0_sq, double noise_var)
{
    if (!(p_eval >= 0.0 && p_eval < 1.0))
        throw std::domain_error("bit_pmf_derivative: p_eval must lie in [0, 1)");
    const double v = p_eval * sigma0_sq * gain_sq + noise_var;
    if (!(v > 0.0))
        throw std::domain_error("bit_pmf_derivative: nonpositive variance");
    const double x = threshold / std::sqrt(v);
    // d/dp of k*Q(threshold/sqrt(v(p))) with k = 2 (two-sided bit) or 1.
    const double common = gaussian_pdf(x) * threshold * sigma0_sq * gain_sq /
                          (v * std::sqrt(v));
    return kind == QuantizerKind::LR ? common : 0.5 * common;
}

namespace {

double fisher_quantized(const NetworkModel& network, const SignalModel& signal,
                        const std::vector<double>& thresholds, double p_eval,
                        QuantizerKind kind)
{
    if (thresholds.size() != network.q())
        throw std::invalid_argument("fisher: threshold list size mismatch");
    const double sigma0_sq = signal.nonzero_var;
    double total = 0.0;
    for (std::size_t q = 0; q < network.q(); ++q) {
        const double thr = thresholds[q];
        if (kind == QuantizerKind::LR && !(thr > 0.0))
            throw std::domain_error("fisher: LR threshold must be positive");
        const double v = p_eval * sigma0_sq * network.gain_sq[q] +
                         network.noise_var;
        const double x = thr / std::sqrt(v);
        double p1, p1_comp;
        if (kind == QuantizerKind::LR) {
            p1 = 2.0 * gaussian_upper_tail(x);
            p1_comp = one_minus_two_tails(x);
        } else {
            p1 = gaussian_upper_tail(x);
            p1_comp = gaussian_upper_tail(-x);
        }
        if (!(p1 > 0.0 && p1_comp > 0.0))
            continue; // sensor carries no information at this threshold
        const double d = bit_pmf_derivative(kind, thr, p_eval,
                                            network.gain_sq[q], sigma0_sq,
                                            network.noise_var);
        total += d * d / (p1 * p1_comp);
    }
    return total;
}

} // namespace

double fisher_im1bit(const NetworkModel& network, const SignalModel& signal,
                     const std::vector<double>& taus, double p_eval)
{
    return fisher_quantized(network, signal, taus, p_eval, QuantizerKind::LR);
}

double fisher_onebit(const NetworkModel& network, const SignalModel& signal,
                     const std::vector<double>& zetas, double p_eval)
{
    return fisher_quantized(network, signal, zetas, p_eval,
                            QuantizerKind::Direct);
}

double fisher_clmpt(const NetworkModel& network, const SignalModel& signal)
{
    const double s0 = signal.nonzero_var;
    const double sw2 = network.noise_var;
    double total = 0.0;
    for (double h2 : network.gain_sq)
        total += s0 * s0 * h2 * h2 / (2.0 * sw2 * sw2);
    return total;
}

namespace {

struct RestartOutcome {
    double argmax;
    double value;
    std::size_t resampled;
};

RestartOutcome pso_single_run(const std::function<double(double)>& objective,
                              const PsoConfig& cfg, std::uint64_t restart)
{
    auto stream = rng::make_stream(cfg.seed, {rng::kTagPso, restart});
    std::uniform_real_distribution<double> in_box(cfg.search_lo, cfg.search_hi);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double range = cfg.search_hi - cfg.search_lo;

    std::size_t resampled = 0;
    auto eval = [&](double& x) {
        // Re-sample a probe point whose objective is non-finite; after too
        // many failures the objective itself is broken.
        for (int attempt = 0; attempt < 128; ++attempt) {
            const double v = objective(x);
            if (std::isfinite(v))
                return v;
            ++resampled;
            x = in_box(stream);
        }
        throw std::runtime_error("pso_maximize: objective is non-finite "
                                 "everywhere near the search interval");
    };

    const std::size_t n = cfg.swarm_size;
    std::vector<double> pos(n), vel(n), best_pos(n), best_val(n);
    double gbest_pos = 0.0;
    double gbest_val = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        pos[i] = in_box(stream);
        vel[i] = (unit(stream) - 0.5) * range;
        const double v = eval(pos[i]);
        best_pos[i] = pos[i];
        best_val[i] = v;
        if (v > gbest_val) {
            gbest_val = v;
            gbest_pos = pos[i];
        }
    }

    for (std::size_t it = 0; it < cfg.iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            vel[i] = cfg.inertia * vel[i] +
                     cfg.cognitive_weight * unit(stream) * (best_pos[i] - pos[i]) +
                     cfg.social_weight * unit(stream) * (gbest_pos - pos[i]);
            pos[i] += vel[i];
            if (pos[i] < cfg.search_lo) {
                pos[i] = cfg.search_lo;
                vel[i] = 0.0;
            } else if (pos[i] > cfg.search_hi) {
                pos[i] = cfg.search_hi;
                vel[i] = 0.0;
            }
            const double v = eval(pos[i]);
            if (v > best_val[i]) {
                best_val[i] = v;
                best_pos[i] = pos[i];
            }
            if (v > gbest_val) {
                gbest_val = v;
                gbest_pos = pos[i];
            }
        }
    }
    return {gbest_pos, gbest_val, resampled};
}

} // namespace

OptResult pso_maximize(const std::function<double(double)>& objective,
                       const PsoConfig& config)
{
    config.validate();

    std::vector<RestartOutcome> runs;
    runs.reserve(config.restarts);
    for (std::size_t r = 0; r < config.restarts; ++r)
        runs.push_back(pso_single_run(objective, config, r));

    OptResult out;
    out.max_value = -std::numeric_limits<double>::infinity();
    for (const auto& run : runs) {
        out.resampled_particles += run.resampled;
        if (run.value > out.max_value) {
            out.max_value = run.value;
            out.argmax = run.argmax;
        }
    }
    double lo = runs.front().argmax, hi = runs.front().argmax;
    for (const auto& run : runs) {
        lo = std::min(lo, run.argmax);
        hi = std::max(hi, run.argmax);
        // A restart counts as converged when it reached the same objective
        // level as the best one, up to tight relative slack.
        if (run.value >= out.max_value -
                             1e-9 * std::max(1.0, std::abs(out.max_value)))
            ++out.converged_runs;
    }
    out.spread = hi - lo;
    return out;
}

QuantizerBank optimize_bank(const NetworkModel& network, QuantizerKind kind,
                            const PsoConfig& config)
{
    const double sigma_w = std::sqrt(network.noise_var);
    PsoConfig scaled = config;
    scaled.search_lo = config.search_lo * sigma_w;
    scaled.search_hi = config.search_hi * sigma_w;

    // The kernel is one and the same function of threshold/sigma_w for every
    // sensor, so the per-sensor problems share a single argmax.
    std::function<double(double)> objective;
    if (kind == QuantizerKind::LR)
        objective = [sigma_w](double t) { return psi_lr(t, sigma_w); };
    else
        objective = [sigma_w](double t) { return psi_direct(t, sigma_w); };

    const OptResult res = pso_maximize(objective, scaled);
    return QuantizerBank(kind, std::vector<double>(network.q(), res.argmax));
}

double fi_factor(DetectorKind kind, double sigma_w, const PsoConfig& config)
{
    if (!(sigma_w > 0.0))
        throw std::domain_error("fi_factor: sigma_w must be positive");
    if (kind == DetectorKind::Clmpt)
        return 0.5;

    PsoConfig scaled = config;
    scaled.search_lo = config.search_lo * sigma_w;
    scaled.search_hi = config.search_hi * sigma_w;
    std::function<double(double)> objective;
    if (kind == DetectorKind::Im1Bit)
        objective = [sigma_w](double t) { return psi_lr(t, sigma_w); };
    else
        objective = [sigma_w](double t) { return psi_direct(t, sigma_w); };
    return pso_maximize(objective, scaled).max_value / 4.0;
}

double sensor_equivalence(DetectorKind reference, DetectorKind quantized,
                          const NetworkModel& network, const PsoConfig& config)
{
    if (!network.homogeneous())
        throw std::domain_error(
            "sensor_equivalence: defined only for homogeneous gains");
    const double sigma_w = std::sqrt(network.noise_var);
    return fi_factor(reference, sigma_w, config) /
           fi_factor(quantized, sigma_w, config);
}

} // namespace lmpt

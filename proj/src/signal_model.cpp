#include "lmpt/signal_model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>

namespace lmpt {

NetworkModel::NetworkModel(std::vector<std::vector<double>> gains_in,
                           double noise_var_in)
    : gains(std::move(gains_in)), noise_var(noise_var_in)
{
    if (gains.empty())
        throw std::invalid_argument("NetworkModel: need at least one sensor");
    if (!(noise_var > 0.0))
        throw std::invalid_argument("NetworkModel: noise_var must be positive");
    const std::size_t n = gains.front().size();
    if (n == 0)
        throw std::invalid_argument("NetworkModel: gain vectors must be nonempty");
    gain_sq.reserve(gains.size());
    for (const auto& h : gains) {
        if (h.size() != n)
            throw std::invalid_argument("NetworkModel: ragged gain vectors");
        double s = 0.0;
        for (double v : h) {
            if (!std::isfinite(v))
                throw std::invalid_argument("NetworkModel: non-finite gain");
            s += v * v;
        }
        gain_sq.push_back(s);
    }
}

bool NetworkModel::homogeneous() const
{
    const double ref = gain_sq.front();
    for (double g : gain_sq)
        if (std::abs(g - ref) > 1e-9 * std::max(1.0, std::abs(ref)))
            return false;
    return true;
}

SignalModel::SignalModel(double p, double sigma0_sq, std::size_t n)
    : sparsity(p), nonzero_var(sigma0_sq), dim(n)
{
    if (!(p >= 0.0 && p < 1.0))
        throw std::invalid_argument("SignalModel: sparsity must lie in [0, 1)");
    if (!(sigma0_sq > 0.0))
        throw std::invalid_argument("SignalModel: nonzero_var must be positive");
    if (n == 0)
        throw std::invalid_argument("SignalModel: dim must be at least 1");
}

std::vector<std::vector<double>> make_gains(std::size_t q_count, std::size_t n,
                                            std::uint64_t seed)
{
    if (q_count == 0 || n == 0)
        throw std::invalid_argument("make_gains: Q and N must be at least 1");

    std::vector<std::vector<double>> gains(q_count);
    for (std::size_t q = 0; q < q_count; ++q) {
        auto stream = rng::make_stream(seed, {rng::kTagGains, q});
        std::normal_distribution<double> normal(0.0, 1.0);
        auto& h = gains[q];
        h.resize(n);
        double norm_sq = 0.0;
        do {
            norm_sq = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                h[i] = normal(stream);
                norm_sq += h[i] * h[i];
            }
        } while (norm_sq == 0.0); // all-zero draw: redraw (probability zero)
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (double& v : h)
            v *= inv;
    }
    return gains;
}

NetworkModel make_network(std::size_t q_count, std::size_t n, double noise_var,
                          std::uint64_t seed)
{
    return NetworkModel(make_gains(q_count, n, seed), noise_var);
}

std::vector<std::uint8_t> draw_support(const SignalModel& signal,
                                       rng::SplitMix64& stream)
{
    std::vector<std::uint8_t> u(signal.dim, 0);
    if (signal.sparsity == 0.0)
        return u;
    std::bernoulli_distribution coin(signal.sparsity);
    for (std::size_t i = 0; i < signal.dim; ++i)
        u[i] = coin(stream) ? 1 : 0;
    return u;
}

namespace {

std::uint64_t hyp_tag(Hypothesis h)
{
    return h == Hypothesis::H0 ? 0u : 1u;
}

void fill_row_exact(const NetworkModel& network, const SignalModel& signal,
                    Hypothesis hypothesis, std::uint64_t seed,
                    std::uint64_t trial, double* out)
{
    const std::size_t qn = network.q();
    const double sigma_w = std::sqrt(network.noise_var);
    const bool with_signal =
        hypothesis == Hypothesis::H1 && signal.sparsity > 0.0;

    // Active coordinate indices, shared by every sensor in this trial.
    std::vector<std::size_t> active;
    if (with_signal) {
        auto support_stream =
            rng::make_stream(seed, {rng::kTagSupport, hyp_tag(hypothesis), trial});
        std::bernoulli_distribution coin(signal.sparsity);
        for (std::size_t i = 0; i < signal.dim; ++i)
            if (coin(support_stream))
                active.push_back(i);
    }

    const double sigma0 = std::sqrt(signal.nonzero_var);
    for (std::size_t q = 0; q < qn; ++q) {
        auto stream = rng::make_stream(
            seed, {rng::kTagSensor, hyp_tag(hypothesis), trial, q});
        double y = 0.0;
        if (with_signal) {
            std::normal_distribution<double> sig(0.0, sigma0);
            const auto& h = network.gains[q];
            for (std::size_t i : active)
                y += h[i] * sig(stream);
        }
        std::normal_distribution<double> noise(0.0, sigma_w);
        out[q] = y + noise(stream);
    }
}

void fill_row_asymptotic(const NetworkModel& network, const SignalModel& signal,
                         Hypothesis hypothesis, std::uint64_t seed,
                         std::uint64_t trial, double* out)
{
    const bool with_signal =
        hypothesis == Hypothesis::H1 && signal.sparsity > 0.0;
    for (std::size_t q = 0; q < network.q(); ++q) {
        double var = network.noise_var;
        if (with_signal)
            var += signal.sparsity * signal.nonzero_var * network.gain_sq[q];
        auto stream = rng::make_stream(
            seed, {rng::kTagSensor, hyp_tag(hypothesis), trial, q});
        std::normal_distribution<double> draw(0.0, std::sqrt(var));
        out[q] = draw(stream);
    }
}

ObservationBatch generate(const NetworkModel& network, const SignalModel& signal,
                          Hypothesis hypothesis, std::size_t trials,
                          std::uint64_t seed, GeneratorKind kind)
{
    if (trials == 0)
        throw std::invalid_argument("generate: trials must be at least 1");
    if (signal.dim != network.n())
        throw std::invalid_argument("generate: signal dim does not match network");

    ObservationBatch batch;
    batch.trials = trials;
    batch.sensors = network.q();
    batch.hypothesis = hypothesis;
    batch.generator = kind;
    batch.seed = seed;
    batch.degenerate_h1 =
        hypothesis == Hypothesis::H1 && signal.sparsity == 0.0;
    batch.values.resize(trials * network.q());
    for (std::size_t t = 0; t < trials; ++t)
        fill_trial_row(network, signal, hypothesis, kind, seed, t,
                       batch.values.data() + t * network.q());
    return batch;
}

} // namespace

void fill_trial_row(const NetworkModel& network, const SignalModel& signal,
                    Hypothesis hypothesis, GeneratorKind generator,
                    std::uint64_t seed, std::uint64_t trial_index, double* out)
{
    if (generator == GeneratorKind::Exact)
        fill_row_exact(network, signal, hypothesis, seed, trial_index, out);
    else
        fill_row_asymptotic(network, signal, hypothesis, seed, trial_index, out);
}

ObservationBatch generate_exact(const NetworkModel& network,
                                const SignalModel& signal,
                                Hypothesis hypothesis, std::size_t trials,
                                std::uint64_t seed)
{
    return generate(network, signal, hypothesis, trials, seed,
                    GeneratorKind::Exact);
}

ObservationBatch generate_asymptotic(const NetworkModel& network,
                                     const SignalModel& signal,
                                     Hypothesis hypothesis, std::size_t trials,
                                     std::uint64_t seed)
{
    return generate(network, signal, hypothesis, trials, seed,
                    GeneratorKind::Asymptotic);
}

void write_batch_csv(const ObservationBatch& batch, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_batch_csv: cannot open " + path);
    out << "trial,sensor,value\n";
    char buf[64];
    for (std::size_t t = 0; t < batch.trials; ++t)
        for (std::size_t q = 0; q < batch.sensors; ++q) {
            std::snprintf(buf, sizeof buf, "%.17g", batch.at(t, q));
            out << t << ',' << q << ',' << buf << '\n';
        }
    if (!out)
        throw std::runtime_error("write_batch_csv: write failed for " + path);
}

} // namespace lmpt

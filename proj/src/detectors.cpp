#include "lmpt/detectors.hpp"

#include <cmath>
#include <stdexcept>

#include "lmpt/fisher_opt.hpp"

namespace lmpt {

DetectorSpec::DetectorSpec(DetectorKind k, std::optional<QuantizerBank> b,
                           Probability fa)
    : kind(k), bank(std::move(b)), pfa(fa)
{
    if (kind == DetectorKind::Clmpt) {
        if (bank)
            throw std::invalid_argument("DetectorSpec: centralized detector takes no bank");
    } else {
        if (!bank)
            throw std::invalid_argument("DetectorSpec: quantized detector needs a bank");
        const auto want = kind == DetectorKind::Im1Bit ? QuantizerKind::LR
                                                       : QuantizerKind::Direct;
        if (bank->kind != want)
            throw std::invalid_argument("DetectorSpec: bank kind does not match detector");
    }
    const double fa_v = pfa.value();
    if (!(fa_v > 0.0 && fa_v < 1.0))
        throw std::invalid_argument("DetectorSpec: pfa must lie strictly inside (0, 1)");
}

double QuantizedStatistic::operator()(const BitReport& report) const
{
    if (report.bits.size() != bit_weight.size())
        throw std::invalid_argument("QuantizedStatistic: report size mismatch");
    double s = base;
    for (std::size_t q = 0; q < bit_weight.size(); ++q)
        if (report.bits[q])
            s += bit_weight[q];
    return s;
}

QuantizedStatistic make_quantized_statistic(const NetworkModel& network,
                                            const QuantizerBank& bank)
{
    const std::size_t qn = network.q();
    if (bank.thresholds.size() != qn)
        throw std::invalid_argument("make_quantized_statistic: bank size mismatch");

    // Score of the bit log-PMF in the sparsity at p = 0:
    //   score_q(b) = D_q (b - P0_q) / (P0_q (1 - P0_q)),  D_q = dP(b=1)/dp|0,
    // summed over sensors and divided by the root of summed FI. The signal
    // variance enters D_q linearly and FI quadratically, so it drops out;
    // everything below is evaluated with it set to 1.
    QuantizedStatistic stat;
    stat.bit_weight.resize(qn);
    double fi_total = 0.0;
    double base_unscaled = 0.0;
    const double sigma_w = std::sqrt(network.noise_var);
    for (std::size_t q = 0; q < qn; ++q) {
        const double thr = bank.thresholds[q];
        const double d = bit_pmf_derivative(bank.kind, thr, 0.0,
                                            network.gain_sq[q], 1.0,
                                            network.noise_var);
        const double x = thr / sigma_w;
        double p0, p0_comp; // P(b=1|H0) and its complement
        if (bank.kind == QuantizerKind::LR) {
            p0 = 2.0 * gaussian_upper_tail(x);
            p0_comp = one_minus_two_tails(x); // 1 - 2Q(x) without cancellation
        } else {
            p0 = gaussian_upper_tail(x);
            p0_comp = gaussian_upper_tail(-x);
        }
        if (!(p0 > 0.0 && p0_comp > 0.0))
            throw std::domain_error(
                "make_quantized_statistic: degenerate bit distribution");
        stat.bit_weight[q] = d / (p0 * p0_comp);
        base_unscaled -= d / p0_comp;
        fi_total += d * d / (p0 * p0_comp);
    }
    if (!(fi_total > 0.0))
        throw std::domain_error(
            "make_quantized_statistic: bank carries no information");
    const double inv_root = 1.0 / std::sqrt(fi_total);
    for (double& w : stat.bit_weight)
        w *= inv_root;
    stat.base = base_unscaled * inv_root;
    return stat;
}

double CentralizedStatistic::operator()(const double* row,
                                        std::size_t q_count) const
{
    if (q_count != y_sq_weight.size())
        throw std::invalid_argument("CentralizedStatistic: row size mismatch");
    double s = base;
    for (std::size_t q = 0; q < q_count; ++q)
        s += y_sq_weight[q] * row[q] * row[q];
    return s;
}

CentralizedStatistic make_centralized_statistic(const NetworkModel& network)
{
    CentralizedStatistic stat;
    const std::size_t qn = network.q();
    double sum_h4 = 0.0;
    double sum_h2 = 0.0;
    for (std::size_t q = 0; q < qn; ++q) {
        sum_h4 += network.gain_sq[q] * network.gain_sq[q];
        sum_h2 += network.gain_sq[q];
    }
    const double denom = std::sqrt(2.0 * sum_h4);
    stat.y_sq_weight.resize(qn);
    for (std::size_t q = 0; q < qn; ++q)
        stat.y_sq_weight[q] = network.gain_sq[q] / (network.noise_var * denom);
    stat.base = -sum_h2 / denom;
    return stat;
}

double im1bit_statistic_raw(const BitReport& bits, const NetworkModel& network,
                            const std::vector<double>& taus)
{
    if (bits.kind != QuantizerKind::LR)
        throw std::invalid_argument("im1bit_statistic_raw: need LR bits");
    if (bits.bits.size() != network.q() || taus.size() != network.q())
        throw std::invalid_argument("im1bit_statistic_raw: size mismatch");
    const double sigma_w = std::sqrt(network.noise_var);
    double s = 0.0;
    for (std::size_t q = 0; q < network.q(); ++q) {
        if (!bits.bits[q])
            continue;
        const double tau = taus[q];
        if (!(tau > 0.0))
            throw std::domain_error("im1bit_statistic_raw: tau must be positive");
        const double x = tau / sigma_w;
        const double tail = gaussian_upper_tail(x);
        const double half_gap = 0.5 * one_minus_two_tails(x); // 1/2 - Q(x)
        s += tau * network.gain_sq[q] *
             std::exp(-tau * tau / (2.0 * network.noise_var)) /
             (half_gap * tail);
    }
    return s;
}

double im1bit_statistic_normalized(const BitReport& bits,
                                   const NetworkModel& network,
                                   const QuantizerBank& bank)
{
    if (bank.kind != QuantizerKind::LR || bits.kind != QuantizerKind::LR)
        throw std::invalid_argument("im1bit_statistic_normalized: need LR bank");
    return make_quantized_statistic(network, bank)(bits);
}

double onebit_statistic(const BitReport& bits, const NetworkModel& network,
                        const QuantizerBank& bank)
{
    if (bank.kind != QuantizerKind::Direct || bits.kind != QuantizerKind::Direct)
        throw std::invalid_argument("onebit_statistic: need a direct bank");
    return make_quantized_statistic(network, bank)(bits);
}

double clmpt_statistic(const double* row, const NetworkModel& network)
{
    return make_centralized_statistic(network)(row, network.q());
}

Decision decide(double statistic, Probability pfa)
{
    const double fa = pfa.value();
    if (!(fa > 0.0 && fa < 1.0))
        throw std::domain_error("decide: pfa must lie strictly inside (0, 1)");
    const double threshold = gaussian_upper_tail_inverse(fa);
    return {statistic, threshold,
            statistic > threshold ? Hypothesis::H1 : Hypothesis::H0};
}

double theoretical_mean(DetectorKind kind, const NetworkModel& network,
                        const SignalModel& signal,
                        const std::optional<QuantizerBank>& bank)
{
    double fi = 0.0;
    switch (kind) {
    case DetectorKind::Clmpt:
        fi = fisher_clmpt(network, signal);
        break;
    case DetectorKind::Im1Bit:
        if (!bank || bank->kind != QuantizerKind::LR)
            throw std::invalid_argument("theoretical_mean: need an LR bank");
        fi = fisher_im1bit(network, signal, bank->thresholds, 0.0);
        break;
    case DetectorKind::OneBit:
        if (!bank || bank->kind != QuantizerKind::Direct)
            throw std::invalid_argument("theoretical_mean: need a direct bank");
        fi = fisher_onebit(network, signal, bank->thresholds, 0.0);
        break;
    }
    return signal.sparsity * std::sqrt(fi);
}

} // namespace lmpt

#include "lmpt/quantizers.hpp"

#include <cmath>
#include <stdexcept>

namespace lmpt {

QuantizerBank::QuantizerBank(QuantizerKind k, std::vector<double> t)
    : kind(k), thresholds(std::move(t))
{
    if (thresholds.empty())
        throw std::invalid_argument("QuantizerBank: empty threshold list");
    for (double v : thresholds) {
        if (!std::isfinite(v))
            throw std::invalid_argument("QuantizerBank: non-finite threshold");
        // A nonpositive |y|-threshold makes the LR bit constant 1 and the
        // sensor uninformative; reject at construction.
        if (kind == QuantizerKind::LR && !(v > 0.0))
            throw std::invalid_argument(
                "QuantizerBank: LR thresholds must be positive");
    }
}

LrCoefficients lr_coefficients(double gain_sq, const SignalModel& signal,
                               double noise_var)
{
    if (!(noise_var > 0.0))
        throw std::domain_error("lr_coefficients: noise_var must be positive");
    if (!(gain_sq >= 0.0))
        throw std::domain_error("lr_coefficients: negative gain_sq");
    const double ps = signal.sparsity * signal.nonzero_var * gain_sq;
    const double v = ps + noise_var;
    return {std::sqrt(noise_var / v), ps / (2.0 * noise_var * v)};
}

double lr_value(double y, double gain_sq, const SignalModel& signal,
                double noise_var)
{
    if (!std::isfinite(y))
        throw std::domain_error("lr_value: non-finite observation");
    if (signal.sparsity == 0.0)
        return 1.0;
    const auto [c0, c1] = lr_coefficients(gain_sq, signal, noise_var);
    return c0 * std::exp(c1 * y * y);
}

double lambda_to_tau(double lambda, double gain_sq, const SignalModel& signal,
                     double noise_var)
{
    if (signal.sparsity == 0.0)
        throw std::domain_error("lambda_to_tau: degenerate ratio at p = 0");
    const auto [c0, c1] = lr_coefficients(gain_sq, signal, noise_var);
    if (!(lambda > c0))
        throw std::domain_error(
            "lambda_to_tau: lambda must exceed the LR's minimum value c0");
    return std::sqrt(std::log(lambda / c0) / c1);
}

BitReport quantize_lr(const double* row, std::size_t q_count,
                      const QuantizerBank& bank)
{
    if (bank.kind != QuantizerKind::LR)
        throw std::invalid_argument("quantize_lr: bank kind mismatch");
    if (bank.thresholds.size() != q_count)
        throw std::invalid_argument("quantize_lr: row/bank size mismatch");
    BitReport report{std::vector<std::uint8_t>(q_count), QuantizerKind::LR};
    for (std::size_t q = 0; q < q_count; ++q)
        report.bits[q] = std::abs(row[q]) >= bank.thresholds[q] ? 1 : 0;
    return report;
}

BitReport quantize_direct(const double* row, std::size_t q_count,
                          const QuantizerBank& bank)
{
    if (bank.kind != QuantizerKind::Direct)
        throw std::invalid_argument("quantize_direct: bank kind mismatch");
    if (bank.thresholds.size() != q_count)
        throw std::invalid_argument("quantize_direct: row/bank size mismatch");
    BitReport report{std::vector<std::uint8_t>(q_count), QuantizerKind::Direct};
    for (std::size_t q = 0; q < q_count; ++q)
        report.bits[q] = row[q] > bank.thresholds[q] ? 1 : 0;
    return report;
}

namespace {

// Effective sparsity seen by the bit PMFs: 0 under H0, p under H1.
double effective_p(Hypothesis hypothesis, const SignalModel& signal)
{
    return hypothesis == Hypothesis::H1 ? signal.sparsity : 0.0;
}

} // namespace

Probability bit_pmf_lr(double tau, Hypothesis hypothesis, double gain_sq,
                       const SignalModel& signal, double noise_var)
{
    if (!(tau > 0.0))
        throw std::domain_error("bit_pmf_lr: tau must be positive");
    const double x = f_func(tau, effective_p(hypothesis, signal), gain_sq,
                            signal.nonzero_var, noise_var);
    return Probability(2.0 * gaussian_upper_tail(x));
}

Probability bit_pmf_direct(double zeta, Hypothesis hypothesis, double gain_sq,
                           const SignalModel& signal, double noise_var)
{
    const double x = f_func(zeta, effective_p(hypothesis, signal), gain_sq,
                            signal.nonzero_var, noise_var);
    return Probability(gaussian_upper_tail(x));
}

} // namespace lmpt

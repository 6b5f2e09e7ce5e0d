#include "lmpt/math_kernel.hpp"

#include <cmath>
#include <limits>

namespace lmpt {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
} // namespace

double gaussian_upper_tail(double x)
{
    if (!std::isfinite(x))
        throw std::domain_error("gaussian_upper_tail: non-finite argument");
    return 0.5 * std::erfc(x * kInvSqrt2);
}

double gaussian_pdf(double x)
{
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double one_minus_two_tails(double x)
{
    return std::erf(x * kInvSqrt2);
}

double gaussian_upper_tail_inverse(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("gaussian_upper_tail_inverse: p must lie in (0, 1)");
    if (p == 0.5)
        return 0.0;

    // Symmetry: solve on p < 0.5 where the tail formula is well conditioned.
    if (p > 0.5)
        return -gaussian_upper_tail_inverse(1.0 - p);

    // Starting point from the classic asymptotic expansion of the tail.
    double t = std::sqrt(-2.0 * std::log(p));
    double x = t - (2.30753 + 0.27061 * t) / (1.0 + t * (0.99229 + 0.04481 * t));

    // Newton on Q(x) - p with bisection fallback. Q is monotone, so a
    // bracketing interval is easy to maintain.
    double lo = 0.0, hi = 40.0;
    for (int it = 0; it < 60; ++it) {
        double q = gaussian_upper_tail(x);
        if (q > p)
            lo = x;
        else
            hi = x;
        double step = (q - p) / gaussian_pdf(x);
        double next = x - step;
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x))) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

double g_func(double x)
{
    constexpr double kInv2Pi = 0.15915494309189533577;
    return x * x * kInv2Pi * std::exp(-x * x);
}

double f_func(double x, double t, double gain_sq, double sigma0_sq,
              double sigma_w_sq)
{
    if (!(sigma_w_sq > 0.0))
        throw std::domain_error("f_func: sigma_w_sq must be positive");
    double v = t * sigma0_sq * gain_sq + sigma_w_sq;
    if (!(v > 0.0))
        throw std::domain_error("f_func: nonpositive variance");
    return x / std::sqrt(v);
}

} // namespace lmpt

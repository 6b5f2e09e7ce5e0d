#pragma once

#include <stdexcept>

// Scalar numeric kernel shared by every layer above: Gaussian tail
// probabilities, their inverse, and the two small helper functions that the
// threshold-design objectives are built from. Everything here is pure and
// thread-safe.

namespace lmpt {

// A probability value, validated on construction. Used at API boundaries so
// that a raw double can't silently arrive outside [0, 1].
class Probability {
public:
    explicit Probability(double v) : v_(v) {
        if (!(v >= 0.0 && v <= 1.0))
            throw std::domain_error("Probability outside [0, 1]");
    }
    double value() const { return v_; }

private:
    double v_;
};

// Upper-tail probability of the standard normal, P(Z >= x).
// Relative error stays below 1e-12 for |x| <= 8 (it is limited only by the
// library erfc, which is correctly rounded to ~1 ulp).
double gaussian_upper_tail(double x);

// Standard normal density.
double gaussian_pdf(double x);

// Inverse of gaussian_upper_tail on (0, 1). Newton iteration with a bisection
// safeguard; accepted when the residual round-trips to ~1e-13 relative.
// Throws std::domain_error for p outside the open interval.
double gaussian_upper_tail_inverse(double p);

// g(x) = (x^2 / 2*pi) * exp(-x^2). Even, vanishes at 0 and at infinity.
// Numerator of both Fisher-information objectives.
double g_func(double x);

// f(x, t) = x / sqrt(t*sigma0_sq*gain_sq + sigma_w_sq): rescales a threshold
// by the standard deviation of an observation with signal fraction t.
// Requires sigma_w_sq > 0 and a nonnegative variance under the root.
double f_func(double x, double t, double gain_sq, double sigma0_sq,
              double sigma_w_sq);

// 1 - 2*Q(x) evaluated without cancellation (equals erf(x/sqrt(2))).
// Denominator piece of the likelihood-ratio quantizer objective.
double one_minus_two_tails(double x);

} // namespace lmpt

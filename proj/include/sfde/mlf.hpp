#pragma once

namespace sfde {

/// Parameters of the two-parameter Mittag-Leffler function E_{a,b}.
struct MlfParams {
  double a{1.0};  // (0, 1]
  double b{1.0};  // (0, 4]

  void validate() const;
};

/// E_{a,b}(x) = sum_k x^k / Gamma(a k + b) on the closed negative half-line.
///
/// Regimes, all to about 1e-10 absolute:
///   |x| <= 1          Taylor series with a tail bound,
///   0 < a < 1, b < 3/4+a Hankel contour collapsed onto the negative real axis
///                     and integrated by tanh-sinh quadrature,
///   b >= 3/4+a        downward recurrence E_{a,b} = (E_{a,b-a} - 1/Gamma(b-a)) / x,
///   a = 1             exp, or the Euler integral for E_{1,b} when b > 1.
/// Throws DomainError for x > 0 or parameters outside MlfParams.
double mittag_leffler(const MlfParams& params, double x);
double mittag_leffler(double a, double b, double x);

namespace detail {
double mittag_leffler_taylor(double a, double b, double x);
double mittag_leffler_integral(double a, double b, double x);
}  // namespace detail

}  // namespace sfde

#pragma once

// Grunwald-Letnikov convolution quadrature: weights of (1 - z)^beta and the
// discrete fractional integral / derivative they define.

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "sfde/errors.hpp"

namespace sfde {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Power-series coefficients b_0..b_N of (1 - z)^beta for a step size tau.
/// beta > 0 gives a fractional derivative of order beta, beta < 0 a
/// fractional integral of order -beta.
template <typename Scalar = double>
struct WeightTable {
  Scalar beta{0};
  Scalar tau{1};
  VectorX<Scalar> weights;

  Eigen::Index size() const { return weights.size(); }
  Scalar operator[](Eigen::Index j) const { return weights[j]; }
};

/// b_0 = 1, b_j = b_{j-1} (j - 1 - beta) / j, for j = 1..count.
template <typename Scalar = double>
WeightTable<Scalar> gl_weights(Scalar beta, Eigen::Index count, Scalar tau = Scalar(1)) {
  using std::abs;
  if (!(abs(beta) < Scalar(1))) {
    throw DomainError("gl_weights: beta must satisfy |beta| < 1, got beta = " +
                      std::to_string(static_cast<double>(beta)));
  }
  if (count < 1) {
    throw DomainError("gl_weights: count must be >= 1, got count = " + std::to_string(count));
  }
  if (!(tau > Scalar(0))) {
    throw DomainError("gl_weights: tau must be positive");
  }
  WeightTable<Scalar> table;
  table.beta = beta;
  table.tau = tau;
  table.weights.resize(count + 1);
  table.weights[0] = Scalar(1);
  for (Eigen::Index j = 1; j <= count; ++j) {
    table.weights[j] = table.weights[j - 1] * (Scalar(j - 1) - beta) / Scalar(j);
  }
  return table;
}

/// Entry n is tau^{-beta} sum_{k=0}^{n} b_{n-k} v^k. With beta = -gamma this is
/// the Grunwald-Letnikov approximation of the Riemann-Liouville integral of
/// order gamma at t_n.
template <typename Scalar, typename Derived>
VectorX<Scalar> conv_quad(const WeightTable<Scalar>& table, const Eigen::MatrixBase<Derived>& samples) {
  using std::pow;
  const Eigen::Index n = samples.size();
  if (n > table.size()) {
    throw LengthError("conv_quad: " + std::to_string(n) + " samples exceed weight table length " +
                      std::to_string(table.size()));
  }
  const Scalar scale = pow(table.tau, -table.beta);
  VectorX<Scalar> out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    // sum_k b_{i-k} v^k, accumulated oldest first
    Scalar acc(0);
    for (Eigen::Index k = 0; k <= i; ++k) acc += table.weights[i - k] * samples[k];
    out[i] = scale * acc;
  }
  return out;
}

}  // namespace sfde

#pragma once

// Spectral reference solutions on the discrete spectrum of A_h: the
// Mittag-Leffler forms of the solution operators E(t), Ebar(t), the scalar
// modal form of the time stepper, and decay-exponent probes.

#include <vector>

#include <Eigen/Core>

#include "sfde/fem1d.hpp"
#include "sfde/stepper.hpp"

namespace sfde {

struct ModalProblem {
  double lambda{1.0};
  double alpha{0.5};
  double gamma{0.0};
};

/// E_{alpha,1}(-lambda t^alpha): modal action of E(t).
double kernel_E(const ModalProblem& problem, double t);

/// t^{alpha+gamma-1} E_{alpha,alpha+gamma}(-lambda t^alpha): modal action of Ebar(t),
/// the inverse Laplace transform of z^{-gamma} / (z^alpha + lambda). Needs t > 0.
double kernel_Ebar(const ModalProblem& problem, double t);

/// E_h(t) P_h u0 = sum_j E_{alpha,1}(-lambda_j t^alpha) (u0, phi_j) phi_j.
VectorXd deterministic_reference(const ModelConfig& config, const FemSpace& space, const EigenBasis& eigen,
                                 const VectorXd& u0, double t);

/// Scalar run of the scheme for one eigenmode:
/// (1 + tau^alpha lambda) u^n = u^0 - sum_{k=1}^{n-1} b^{(alpha)}_{n-k} (u^k - u^0)
///                              + tau^{alpha+gamma-1} sum_{k=1}^{n} b^{(-gamma)}_{n-k} q^k.
/// Returns u^0..u^N.
VectorXd modal_recursion(const ModelConfig& config, double lambda, const VectorXd& modal_noise,
                         double u0_modal = 0.0);

/// max_j lambda_j^{kappa/2} |kernel_Ebar(lambda_j, t)|, i.e. ||A_h^{kappa/2} Ebar_h(t)||.
double smoothing_norm(const EigenBasis& eigen, double alpha, double gamma, double kappa, double t);

/// Least-squares slope of log smoothing_norm against log t over t_grid.
double smoothing_probe(const FemSpace& space, const EigenBasis& eigen, double alpha, double gamma, double kappa,
                       const std::vector<double>& t_grid);

/// Log-spaced grid from lo to hi inclusive with the given points per decade.
std::vector<double> log_grid(double lo, double hi, int per_decade);

/// Ordinary least-squares slope of y against x.
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sfde

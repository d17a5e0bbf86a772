#include "sfde/verify.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include "sfde/fem1d.hpp"
#include "sfde/fracquad.hpp"
#include "sfde/lab.hpp"
#include "sfde/mlf.hpp"
#include "sfde/noise.hpp"
#include "sfde/oracle.hpp"
#include "sfde/stepper.hpp"

namespace sfde {

namespace {

CheckResult within(std::string name, double observed, double expected, double tol) {
  return {std::move(name), std::abs(observed - expected) <= tol, observed, expected, tol};
}

// (-1)^j Gamma(beta+1) / (Gamma(j+1) Gamma(beta-j+1)) = Gamma(j-beta) / (Gamma(-beta) j!)
double binomial_lgamma(double beta, int j) {
  if (j == 0) return 1.0;
  if (beta == 0.0) return 0.0;
  int s1 = 1, s2 = 1;
  const long double l1 = ::lgammal_r(j - static_cast<long double>(beta), &s1);
  const long double l2 = ::lgammal_r(-static_cast<long double>(beta), &s2);
  return static_cast<double>(s1 * s2 * std::exp(l1 - l2 - std::lgamma(j + 1.0L)));
}

CheckResult check_weights_lgamma() {
  double worst = 0.0;
  for (double beta : {-0.9, -0.5, -0.3, 0.3, 0.5, 0.9}) {
    const auto table = gl_weights(beta, 512);
    for (int j = 0; j <= 512; ++j) {
      const double ref = binomial_lgamma(beta, j);
      worst = std::max(worst, std::abs(table[j] - ref) / std::abs(ref));
    }
  }
  return within("weights_vs_lgamma_rel", worst, 0.0, 1e-12);
}

CheckResult check_weights_inverse() {
  double worst = 0.0;
  for (double beta : {0.3, 0.5, 0.9}) {
    const auto d = gl_weights(beta, 512);
    const auto i = gl_weights(-beta, 512);
    for (int n = 0; n <= 512; ++n) {
      double acc = 0.0;
      for (int k = 0; k <= n; ++k) acc += d[k] * i[n - k];
      worst = std::max(worst, std::abs(acc - (n == 0 ? 1.0 : 0.0)));
    }
  }
  return within("weights_convolution_inverse", worst, 0.0, 1e-12);
}

CheckResult check_gl_integral_of_one() {
  // worst relative error scaled by N; first order means it stays below 1.5
  double worst = 0.0;
  for (double gamma : {0.3, 0.5, 0.9}) {
    for (int n : {64, 256, 1024}) {
      const auto table = gl_weights(-gamma, n, 1.0 / n);
      const VectorXd ones = VectorXd::Ones(n + 1);
      const double approx = conv_quad(table, ones)[n];
      const double exact = 1.0 / std::tgamma(1.0 + gamma);
      worst = std::max(worst, std::abs(approx - exact) / exact * n);
    }
  }
  return {"gl_integral_of_one_rel_times_N", worst <= 1.5, worst, 0.0, 1.5};
}

CheckResult check_mlf_exp() {
  double worst = 0.0;
  for (int i = 0; i <= 500; ++i) {
    const double x = 0.1 * i;
    worst = std::max(worst, std::abs(mittag_leffler(1.0, 1.0, -x) - std::exp(-x)));
  }
  return within("mlf_unit_order_vs_exp", worst, 0.0, 1e-10);
}

CheckResult check_mlf_erfc() {
  return within("mlf_half_order_vs_erfc", mittag_leffler(0.5, 1.0, -1.0), std::exp(1.0) * std::erfc(1.0), 1e-8);
}

CheckResult check_mlf_recurrence() {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> ua(0.1, 1.0), ub(0.1, 2.0), ux(0.0, 100.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double a = ua(gen), b = ub(gen), x = -ux(gen);
    const double lhs = mittag_leffler(a, b, x);
    const double rhs = 1.0 / std::tgamma(b) + x * mittag_leffler(a, a + b, x);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return within("mlf_recurrence_residual", worst, 0.0, 1e-9);
}

CheckResult check_fem_eigenvalues() {
  const FemSpace space = build_space(16);
  const EigenBasis eig = generalized_eigs(space);
  double worst = 0.0;
  const double h = space.h;
  for (Index j = 0; j < eig.size(); ++j) {
    const double c = std::cos((j + 1) * std::numbers::pi * h);
    const double exact = 6.0 / (h * h) * (1.0 - c) / (2.0 + c);
    worst = std::max(worst, std::abs(eig.values[j] - exact) / exact);
  }
  return within("fem_eigenvalues_closed_form_rel", worst, 0.0, 1e-9);
}

CheckResult check_modal_equivalence() {
  const FemSpace space = build_space(64);
  const EigenBasis eig = generalized_eigs(space);
  const NoiseModel model = noise_model_for(space, 2.0);
  double worst = 0.0;
  for (auto [alpha, gamma] : {std::pair{0.3, 0.9}, std::pair{0.6, 0.5}, std::pair{0.8, 0.3}}) {
    const ModelConfig config = make_config(alpha, gamma, 1.0, 128, InitialData::named("sin"));
    const IncrementMatrix incs = sample_increments(model, config.N, config.tau(), StreamKey{7, 0});
    const MatrixXd loads = noise_loads(model, incs, space);
    const SolveResult sol = FractionalStepper(config, space).solve_with_loads(loads);
    const MatrixXd modal_noise = eig.vectors.transpose() * loads;  // dim x N
    const VectorXd modal_u0 = eig.coordinates(space, config.u0.project(space));
    const MatrixXd coords = eig.vectors.transpose() * space.mass.dense() * sol.states.transpose();
    for (Index j = 0; j < eig.size(); ++j) {
      const VectorXd u = modal_recursion(config, eig.values[j], modal_noise.row(j).transpose(), modal_u0[j]);
      worst = std::max(worst, (u - coords.row(j).transpose()).cwiseAbs().maxCoeff());
    }
  }
  return within("stepper_modal_equivalence", worst, 0.0, 1e-9);
}

CheckResult check_deterministic_rate() {
  const FemSpace space = build_space(256);
  const EigenBasis eig = generalized_eigs(space);
  const std::vector<int> grid{40, 80, 160, 320, 640};
  double worst = 0.0;
  for (double alpha : {0.3, 0.5, 0.8}) {
    std::vector<double> errs;
    for (int n : grid) {
      const ModelConfig config = make_config(alpha, 0.5, 1.0, n, InitialData::named("sin"));
      const VectorXd u0 = config.u0.project(space);
      const VectorXd ref = deterministic_reference(config, space, eig, u0, 1.0);
      const VectorXd un = FractionalStepper(config, space).solve_deterministic().final_state();
      errs.push_back(l2_norm(space, un - ref));
    }
    const double rate = fit_rate(errs, grid).slope;
    if (alpha == 0.3 || std::abs(rate - 1.0) > std::abs(worst - 1.0)) worst = rate;
  }
  return within("deterministic_temporal_rate", worst, 1.0, 0.1);
}

std::vector<CheckResult> check_smoothing() {
  const FemSpace space = build_space(256);
  const EigenBasis eig = generalized_eigs(space);
  const auto grid = log_grid(1e-6, 1e-4, 8);
  std::vector<CheckResult> out;
  const double alpha = 0.6, gamma = 0.5;
  for (double kappa : {0.0, 1.0, 2.0}) {
    const double slope = smoothing_probe(space, eig, alpha, gamma, kappa, grid);
    out.push_back(within("smoothing_slope_kappa" + std::to_string(static_cast<int>(kappa)), slope,
                         (1.0 - 0.5 * kappa) * alpha + gamma - 1.0, 0.05));
  }
  return out;
}

std::vector<CheckResult> check_noise() {
  std::vector<CheckResult> out;
  const NoiseModel model{2.0, 100};
  const double tau = 0.01;
  const IncrementMatrix a = sample_increments(model, 100, tau, StreamKey{42, 3});
  const IncrementMatrix b = sample_increments(model, 100, tau, StreamKey{42, 3});
  out.push_back(within("noise_stream_determinism", (a.increments - b.increments).cwiseAbs().maxCoeff(), 0.0, 0.0));
  const double n = static_cast<double>(a.increments.size());
  const double mean = a.increments.mean();
  const double var = (a.increments.array() - mean).square().sum() / (n - 1.0);
  out.push_back(within("noise_increment_variance", var, tau, 3.0 * tau * std::sqrt(2.0 / (n - 1.0))));
  out.push_back(within("noise_increment_mean", mean, 0.0, 3.0 * std::sqrt(tau / n)));
  return out;
}

}  // namespace

std::vector<CheckResult> run_verification_suite() {
  std::vector<CheckResult> out;
  out.push_back(check_weights_lgamma());
  out.push_back(check_weights_inverse());
  out.push_back(check_gl_integral_of_one());
  out.push_back(check_mlf_exp());
  out.push_back(check_mlf_erfc());
  out.push_back(check_mlf_recurrence());
  out.push_back(check_fem_eigenvalues());
  out.push_back(check_modal_equivalence());
  out.push_back(check_deterministic_rate());
  for (auto& c : check_smoothing()) out.push_back(std::move(c));
  for (auto& c : check_noise()) out.push_back(std::move(c));
  return out;
}

void print_check(std::ostream& out, const CheckResult& c) {
  out << "CHECK " << c.name << ' ' << (c.pass ? "pass" : "fail") << ' ' << format_real(c.observed) << ' '
      << format_real(c.expected) << ' ' << format_real(c.tolerance) << '\n';
}

}  // namespace sfde

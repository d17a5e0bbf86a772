#include "sfde/oracle.hpp"

#include <cmath>

#include "sfde/errors.hpp"
#include "sfde/fracquad.hpp"
#include "sfde/mlf.hpp"

namespace sfde {

double kernel_E(const ModalProblem& p, double t) {
  if (!(t >= 0.0)) throw DomainError("kernel_E: t must be >= 0");
  if (t == 0.0) return 1.0;
  return mittag_leffler(p.alpha, 1.0, -p.lambda * std::pow(t, p.alpha));
}

double kernel_Ebar(const ModalProblem& p, double t) {
  if (!(t > 0.0)) throw DomainError("kernel_Ebar: t must be > 0");
  const double b = p.alpha + p.gamma;
  return std::pow(t, b - 1.0) * mittag_leffler(p.alpha, b, -p.lambda * std::pow(t, p.alpha));
}

VectorXd deterministic_reference(const ModelConfig& config, const FemSpace& space, const EigenBasis& eigen,
                                 const VectorXd& u0, double t) {
  if (!(t >= 0.0 && t <= config.T * (1.0 + 1e-14))) throw DomainError("deterministic_reference: t outside [0, T]");
  const VectorXd coords = eigen.coordinates(space, u0);
  VectorXd damped(coords.size());
  for (Index j = 0; j < coords.size(); ++j) {
    damped[j] = kernel_E({eigen.values[j], config.alpha, config.gamma}, t) * coords[j];
  }
  return eigen.vectors * damped;
}

VectorXd modal_recursion(const ModelConfig& config, double lambda, const VectorXd& modal_noise, double u0_modal) {
  const int steps = config.N;
  if (modal_noise.size() != steps) throw ContractError("modal_recursion: need N modal noise values");
  const double tau = config.tau();
  const auto bd = gl_weights(config.alpha, steps, tau);
  const auto bi = gl_weights(-config.gamma, steps, tau);
  const double lhs = 1.0 + std::pow(tau, config.alpha) * lambda;
  const double noise_scale = std::pow(tau, config.alpha + config.gamma - 1.0);
  VectorXd u(steps + 1);
  u[0] = u0_modal;
  for (int n = 1; n <= steps; ++n) {
    double rhs = u0_modal;
    for (int k = 1; k < n; ++k) rhs -= bd[n - k] * (u[k] - u0_modal);
    double noise = 0.0;
    for (int k = 1; k <= n; ++k) noise += bi[n - k] * modal_noise[k - 1];
    u[n] = (rhs + noise_scale * noise) / lhs;
  }
  return u;
}

double smoothing_norm(const EigenBasis& eigen, double alpha, double gamma, double kappa, double t) {
  double best = 0.0;
  for (Index j = 0; j < eigen.size(); ++j) {
    const double lambda = eigen.values[j];
    const double v = std::pow(lambda, 0.5 * kappa) * std::abs(kernel_Ebar({lambda, alpha, gamma}, t));
    best = std::max(best, v);
  }
  return best;
}

double smoothing_probe(const FemSpace& /*space*/, const EigenBasis& eigen, double alpha, double gamma, double kappa,
                       const std::vector<double>& t_grid) {
  if (t_grid.size() < 2) throw ConfigError("smoothing_probe: need at least two time points");
  std::vector<double> lx, ly;
  for (double t : t_grid) {
    if (!(t > 0.0 && t <= 1.0)) throw DomainError("smoothing_probe: grid points must lie in (0, 1]");
    lx.push_back(std::log(t));
    ly.push_back(std::log(smoothing_norm(eigen, alpha, gamma, kappa, t)));
  }
  return least_squares_slope(lx, ly);
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0 && hi > lo) || per_decade < 1) throw ConfigError("log_grid: need 0 < lo < hi");
  const double decades = std::log10(hi / lo);
  const int intervals = std::max(1, static_cast<int>(std::ceil(decades * per_decade - 1e-9)));
  std::vector<double> out;
  for (int i = 0; i <= intervals; ++i) out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / intervals));
  return out;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("least_squares_slope: need >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw ConfigError("least_squares_slope: abscissae are all equal");
  return sxy / sxx;
}

}  // namespace sfde

#pragma once

// Fully discrete scheme: linear finite elements in space, Grunwald-Letnikov
// convolution quadrature in time for both the Caputo derivative and the
// fractional integral of the noise.

#include <functional>
#include <string>

#include <Eigen/Core>

#include "sfde/fem1d.hpp"
#include "sfde/fracquad.hpp"
#include "sfde/noise.hpp"
#include "sfde/tridiag.hpp"

namespace sfde {

using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Initial data: zero, a function projected by l2_project, or nodal values.
struct InitialData {
  enum class Kind { Zero, Function, Nodal };

  Kind kind{Kind::Zero};
  std::string name{"zero"};
  std::function<double(double)> function;
  VectorXd nodal;

  static InitialData zero();
  static InitialData from_function(std::function<double(double)> f, std::string name = "function");
  static InitialData from_nodal(VectorXd values);
  /// "zero", "sin" (sin(pi x)) or "sin<k>" (sin(k pi x)).
  static InitialData named(const std::string& name);

  bool is_zero() const { return kind == Kind::Zero; }
  VectorXd project(const FemSpace& space) const;
};

struct ModelConfig {
  double alpha{0.5};
  double gamma{0.5};
  double T{1.0};
  int N{1};
  InitialData u0;

  double tau() const { return T / N; }
  /// alpha in (0,1], gamma in [0,1], alpha + gamma > 1/2, T > 0, N >= 1.
  void validate() const;
};

ModelConfig make_config(double alpha, double gamma, double T, int N, InitialData u0 = InitialData::zero());

struct SolveResult {
  RowMatrixXd states;  // (N+1) x dim, row n holds U^n
  ModelConfig config;
  StreamKey key;

  VectorXd final_state() const { return states.row(states.rows() - 1).transpose(); }
};

/// Precomputes the weight tables and the factorization of mass + tau^alpha
/// stiffness for one (config, space) pair; solve() can then be called for
/// many trajectories concurrently.
class FractionalStepper {
 public:
  FractionalStepper(ModelConfig config, const FemSpace& space);

  const ModelConfig& config() const { return config_; }
  const FemSpace& space() const { return *space_; }
  const WeightTable<double>& derivative_weights() const { return derivative_; }
  const WeightTable<double>& integral_weights() const { return integral_; }

  /// Runs the scheme with the noise loads of incs (first model.L modes).
  SolveResult solve(const NoiseModel& model, const IncrementMatrix& incs) const;
  /// Runs the scheme with explicit load vectors g^1..g^N as columns.
  SolveResult solve_with_loads(const MatrixXd& loads) const;
  /// Zero noise.
  SolveResult solve_deterministic() const;

 private:
  SolveResult run(const MatrixXd* loads) const;

  ModelConfig config_;
  const FemSpace* space_;
  WeightTable<double> derivative_;  // b^{(alpha)}
  WeightTable<double> integral_;    // b^{(-gamma)}
  TridiagLdlt<double> system_;
};

SolveResult solve_trajectory(const ModelConfig& config, const FemSpace& space, const NoiseModel& model,
                             const IncrementMatrix& incs);

/// Phi(v) = int v^2 dx = v^T mass v.
double weak_functional(const FemSpace& space, const VectorXd& v);

}  // namespace sfde

#include "sfde/stepper.hpp"

#include <cmath>
#include <numbers>

#include "sfde/errors.hpp"

namespace sfde {

InitialData InitialData::zero() { return {}; }

InitialData InitialData::from_function(std::function<double(double)> f, std::string name) {
  InitialData d;
  d.kind = Kind::Function;
  d.name = std::move(name);
  d.function = std::move(f);
  return d;
}

InitialData InitialData::from_nodal(VectorXd values) {
  InitialData d;
  d.kind = Kind::Nodal;
  d.name = "nodal";
  d.nodal = std::move(values);
  return d;
}

InitialData InitialData::named(const std::string& name) {
  if (name == "zero" || name == "0") return zero();
  if (name.rfind("sin", 0) == 0) {
    int k = 1;
    if (name.size() > 3) {
      try {
        std::size_t used = 0;
        k = std::stoi(name.substr(3), &used);
        if (used != name.size() - 3 || k < 1) throw ConfigError("");
      } catch (const std::exception&) {
        throw ConfigError("unknown initial data '" + name + "' (expected zero, sin or sin<k>)");
      }
    }
    const double freq = k * std::numbers::pi;
    return from_function([freq](double x) { return std::sin(freq * x); }, name);
  }
  throw ConfigError("unknown initial data '" + name + "' (expected zero, sin or sin<k>)");
}

VectorXd InitialData::project(const FemSpace& space) const {
  switch (kind) {
    case Kind::Zero:
      return VectorXd::Zero(space.dim());
    case Kind::Function:
      return l2_project(space, function);
    case Kind::Nodal:
      if (nodal.size() != space.dim()) throw ContractError("InitialData: nodal vector does not match space");
      return nodal;
  }
  return VectorXd::Zero(space.dim());
}

void ModelConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0, 1]");
  if (!(alpha + gamma > 0.5)) {
    throw ConfigError("condition alpha + gamma > 1/2 violated (alpha = " + std::to_string(alpha) +
                      ", gamma = " + std::to_string(gamma) + ")");
  }
  if (!(T > 0.0)) throw ConfigError("horizon T must be positive");
  if (N < 1) throw ConfigError("number of time steps N must be >= 1");
}

ModelConfig make_config(double alpha, double gamma, double T, int N, InitialData u0) {
  ModelConfig c{alpha, gamma, T, N, std::move(u0)};
  c.validate();
  return c;
}

FractionalStepper::FractionalStepper(ModelConfig config, const FemSpace& space)
    : config_(std::move(config)), space_(&space) {
  config_.validate();
  if (config_.alpha >= 1.0) throw DomainError("FractionalStepper: alpha must lie in (0, 1)");
  const double tau = config_.tau();
  derivative_ = gl_weights(config_.alpha, config_.N, tau);
  integral_ = gl_weights(-config_.gamma, config_.N, tau);
  system_.compute(space.mass.scaled_sum(1.0, space.stiffness, std::pow(tau, config_.alpha)));
}

SolveResult FractionalStepper::solve(const NoiseModel& model, const IncrementMatrix& incs) const {
  if (incs.steps() != config_.N) throw ContractError("solve: increment matrix has the wrong number of steps");
  if (std::abs(incs.tau - config_.tau()) > 1e-12 * config_.tau()) {
    throw ContractError("solve: increment step size does not match config tau");
  }
  const MatrixXd loads = noise_loads(model, incs, *space_);
  SolveResult r = run(&loads);
  r.key = incs.key;
  return r;
}

SolveResult FractionalStepper::solve_with_loads(const MatrixXd& loads) const {
  if (loads.rows() != space_->dim() || loads.cols() != config_.N) {
    throw ContractError("solve_with_loads: load matrix must be dim x N");
  }
  return run(&loads);
}

SolveResult FractionalStepper::solve_deterministic() const { return run(nullptr); }

SolveResult FractionalStepper::run(const MatrixXd* loads) const {
  const int steps = config_.N;
  const Index dim = space_->dim();
  const double tau = config_.tau();
  const double noise_scale = std::pow(tau, config_.alpha + config_.gamma - 1.0);

  // Reversed tables: rev_d[j] = b^{(alpha)}_{N-j}, rev_i[j] = b^{(-gamma)}_{N-1-j},
  // so that the history weights of step n are contiguous segments.
  VectorXd rev_d(steps), rev_i(steps);
  for (int j = 0; j < steps; ++j) {
    rev_d[j] = derivative_[steps - j];
    rev_i[j] = integral_[steps - 1 - j];
  }

  SolveResult result;
  result.config = config_;
  result.states.resize(steps + 1, dim);
  const VectorXd u0 = config_.u0.project(*space_);
  const VectorXd mass_u0 = space_->mass.apply(u0);
  result.states.row(0) = u0.transpose();

  MatrixXd history(dim, steps);  // column k-1 holds mass (U^k - U^0)
  VectorXd rhs(dim);
  for (int n = 1; n <= steps; ++n) {
    rhs = mass_u0;
    if (n > 1) rhs.noalias() -= history.leftCols(n - 1) * rev_d.segment(steps - n + 1, n - 1);
    if (loads != nullptr) rhs.noalias() += noise_scale * (loads->leftCols(n) * rev_i.segment(steps - n, n));
    system_.solve_in_place(rhs);
    result.states.row(n) = rhs.transpose();
    history.col(n - 1) = space_->mass.apply(rhs - u0);
  }
  return result;
}

SolveResult solve_trajectory(const ModelConfig& config, const FemSpace& space, const NoiseModel& model,
                             const IncrementMatrix& incs) {
  return FractionalStepper(config, space).solve(model, incs);
}

double weak_functional(const FemSpace& space, const VectorXd& v) {
  if (v.size() != space.dim()) throw ContractError("weak_functional: vector does not match space");
  return space.mass.quadratic(v);
}

}  // namespace sfde

#include "sfde/fem1d.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "sfde/errors.hpp"

namespace sfde {

FemSpace build_space(int intervals) {
  if (intervals < 2) {
    throw ConfigError("build_space: need at least 2 intervals, got M = " + std::to_string(intervals));
  }
  FemSpace s;
  s.intervals = intervals;
  s.h = 1.0 / intervals;
  const Index n = intervals - 1;
  s.nodes.resize(n);
  for (Index i = 0; i < n; ++i) s.nodes[i] = static_cast<double>(i + 1) / intervals;
  s.mass.diag = VectorXd::Constant(n, 2.0 * s.h / 3.0);
  s.mass.off = VectorXd::Constant(n - 1, s.h / 6.0);
  s.stiffness.diag = VectorXd::Constant(n, 2.0 / s.h);
  s.stiffness.off = VectorXd::Constant(n - 1, -1.0 / s.h);
  s.mass_factor.compute(s.mass);
  return s;
}

VectorXd mass_solve(const FemSpace& space, const VectorXd& rhs) { return space.mass_factor.solve(rhs); }

VectorXd l2_project(const FemSpace& space, const std::function<double(double)>& f) {
  // Gauss-Legendre, 3 points on [-1, 1]
  static constexpr double gx[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
  static constexpr double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const Index n = space.dim();
  const double h = space.h;
  VectorXd load = VectorXd::Zero(n);
  for (int e = 0; e < space.intervals; ++e) {
    const double left = e * h;
    for (int q = 0; q < 3; ++q) {
      const double xi = 0.5 * (gx[q] + 1.0);  // local coordinate in [0,1]
      const double w = 0.5 * h * gw[q] * f(left + xi * h);
      // element e = [x_e, x_{e+1}] carries the hats of global nodes e and e+1
      if (e >= 1) load[e - 1] += w * (1.0 - xi);
      if (e + 1 <= n) load[e] += w * xi;
    }
  }
  return mass_solve(space, load);
}

VectorXd sine_load(const FemSpace& space, int ell) {
  if (ell < 1) throw DomainError("sine_load: mode index must be >= 1, got ell = " + std::to_string(ell));
  const double pi = std::numbers::pi;
  const double h = space.h;
  const double k = ell * pi;
  // int sqrt(2) sin(k x) phi_i(x) dx = sqrt(2) * 2 (1 - cos(k h)) sin(k x_i) / (k^2 h)
  const double factor = std::sqrt(2.0) * 2.0 * (1.0 - std::cos(k * h)) / (k * k * h);
  VectorXd out(space.dim());
  for (Index i = 0; i < space.dim(); ++i) out[i] = factor * std::sin(k * space.nodes[i]);
  return out;
}

MatrixXd sine_load_matrix(const FemSpace& space, int modes) {
  MatrixXd out(space.dim(), modes);
  for (int ell = 1; ell <= modes; ++ell) out.col(ell - 1) = sine_load(space, ell);
  return out;
}

EigenBasis generalized_eigs(const FemSpace& space) {
  const Index n = space.dim();
  if (n > kMaxEigenDim) {
    throw CapabilityError("generalized_eigs: dimension " + std::to_string(n) + " exceeds cap " +
                          std::to_string(kMaxEigenDim));
  }
  // L = chol(mass) is lower bidiagonal; C = L^{-1} K L^{-T} is dense symmetric.
  const VectorXd& d = space.mass_factor.pivots();
  const VectorXd& l = space.mass_factor.multipliers();
  MatrixXd chol = MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    chol(i, i) = std::sqrt(d[i]);
    if (i + 1 < n) chol(i + 1, i) = l[i] * std::sqrt(d[i]);
  }
  const auto lower = chol.triangularView<Eigen::Lower>();
  MatrixXd c = lower.solve(space.stiffness.dense());
  c = lower.solve(c.transpose()).eval();
  c = 0.5 * (c + c.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(c);
  if (solver.info() != Eigen::Success) throw DomainError("generalized_eigs: eigensolver failed");
  EigenBasis basis;
  basis.values = solver.eigenvalues();
  basis.vectors = chol.transpose().triangularView<Eigen::Upper>().solve(solver.eigenvectors());
  // fix signs so that the first nonnegligible entry is positive
  for (Index j = 0; j < n; ++j) {
    Index i = 0;
    while (i + 1 < n && std::abs(basis.vectors(i, j)) < 1e-8 * basis.vectors.col(j).cwiseAbs().maxCoeff()) ++i;
    if (basis.vectors(i, j) < 0) basis.vectors.col(j) *= -1.0;
  }
  return basis;
}

VectorXd EigenBasis::coordinates(const FemSpace& space, const VectorXd& v) const {
  return vectors.transpose() * space.mass.apply(v);
}

VectorXd prolong(const FemSpace& coarse, const VectorXd& v, const FemSpace& fine) {
  if (v.size() != coarse.dim()) throw ContractError("prolong: vector does not match coarse space");
  if (fine.intervals % coarse.intervals != 0) {
    throw ConfigError("prolong: fine mesh (M = " + std::to_string(fine.intervals) +
                      ") is not nested in coarse mesh (M = " + std::to_string(coarse.intervals) + ")");
  }
  const int r = fine.intervals / coarse.intervals;
  if (r == 1) return v;
  auto coarse_value = [&](int node) { return (node <= 0 || node >= coarse.intervals) ? 0.0 : v[node - 1]; };
  VectorXd out(fine.dim());
  for (int j = 1; j < fine.intervals; ++j) {
    const int cell = j / r;
    const int offset = j % r;
    const double t = static_cast<double>(offset) / r;
    out[j - 1] = (1.0 - t) * coarse_value(cell) + t * coarse_value(cell + 1);
  }
  return out;
}

double l2_norm(const FemSpace& space, const VectorXd& v) {
  if (v.size() != space.dim()) throw ContractError("l2_norm: vector does not match space");
  return std::sqrt(std::max(0.0, space.mass.quadratic(v)));
}

VectorXd interpolate(const FemSpace& space, const std::function<double(double)>& f) {
  VectorXd out(space.dim());
  for (Index i = 0; i < space.dim(); ++i) out[i] = f(space.nodes[i]);
  return out;
}

}  // namespace sfde

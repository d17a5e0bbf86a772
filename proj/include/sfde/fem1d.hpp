#pragma once

// Continuous piecewise-linear Galerkin space on (0,1) with homogeneous
// Dirichlet data. Unknowns are the M-1 interior nodal values.

#include <functional>

#include <Eigen/Core>

#include "sfde/tridiag.hpp"

namespace sfde {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

struct FemSpace {
  int intervals{0};  // M
  double h{0.0};     // 1 / M
  VectorXd nodes;    // x_i = i h, i = 1..M-1
  SymTridiag<double> mass;
  SymTridiag<double> stiffness;
  TridiagLdlt<double> mass_factor;

  Index dim() const { return intervals - 1; }
};

/// Generalized eigenpairs of (stiffness, mass): ascending values and
/// mass-orthonormal eigenvectors stored as columns.
struct EigenBasis {
  VectorXd values;
  MatrixXd vectors;

  Index size() const { return values.size(); }
  /// Mass-weighted coordinates (v, phi_j)_M of a nodal vector.
  VectorXd coordinates(const FemSpace& space, const VectorXd& v) const;
};

inline constexpr Index kMaxEigenDim = 4096;

FemSpace build_space(int intervals);

/// Solves mass c = (f, phi_i) with 3-point Gauss quadrature per element.
VectorXd l2_project(const FemSpace& space, const std::function<double(double)>& f);

/// Load vector (e_ell, phi_i) of the Dirichlet Laplacian eigenfunction
/// e_ell = sqrt(2) sin(ell pi x), in closed form.
VectorXd sine_load(const FemSpace& space, int ell);

/// dim x L matrix whose column ell-1 is sine_load(space, ell).
MatrixXd sine_load_matrix(const FemSpace& space, int modes);

/// Full generalized eigendecomposition via Cholesky reduction of the mass
/// matrix. Throws CapabilityError above kMaxEigenDim unknowns.
EigenBasis generalized_eigs(const FemSpace& space);

/// Nodal values on `fine` of the piecewise-linear function with nodal values
/// `v` on `coarse`; fine.intervals must be a multiple of coarse.intervals.
VectorXd prolong(const FemSpace& coarse, const VectorXd& v, const FemSpace& fine);

/// sqrt(v^T mass v).
double l2_norm(const FemSpace& space, const VectorXd& v);

/// Nodal interpolant of f on the interior nodes.
VectorXd interpolate(const FemSpace& space, const std::function<double(double)>& f);

/// Solves mass x = rhs.
VectorXd mass_solve(const FemSpace& space, const VectorXd& rhs);

}  // namespace sfde

#pragma once

// Symmetric tridiagonal operators and their LDL^T factorization.

#include <Eigen/Core>

#include "sfde/errors.hpp"

namespace sfde {

template <typename Scalar = double>
struct SymTridiag {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector diag;  // size n
  Vector off;   // size n - 1, entry i couples rows i and i + 1

  Eigen::Index rows() const { return diag.size(); }

  template <typename Derived>
  Vector apply(const Eigen::MatrixBase<Derived>& v) const {
    const Eigen::Index n = rows();
    if (v.size() != n) throw ContractError("SymTridiag::apply: dimension mismatch");
    Vector out = diag.cwiseProduct(v);
    if (n > 1) {
      out.head(n - 1) += off.cwiseProduct(v.tail(n - 1));
      out.tail(n - 1) += off.cwiseProduct(v.head(n - 1));
    }
    return out;
  }

  template <typename Derived>
  Scalar quadratic(const Eigen::MatrixBase<Derived>& v) const {
    return v.dot(apply(v));
  }

  Matrix dense() const {
    const Eigen::Index n = rows();
    Matrix a = Matrix::Zero(n, n);
    a.diagonal() = diag;
    if (n > 1) {
      a.template diagonal<1>() = off;
      a.template diagonal<-1>() = off;
    }
    return a;
  }

  SymTridiag scaled_sum(Scalar a, const SymTridiag& other, Scalar b) const {
    if (other.rows() != rows()) throw ContractError("SymTridiag: dimension mismatch");
    return {a * diag + b * other.diag, a * off + b * other.off};
  }
};

/// LDL^T factorization of an SPD symmetric tridiagonal matrix (Thomas
/// elimination without pivoting). Factor once, solve many times.
template <typename Scalar = double>
class TridiagLdlt {
 public:
  using Vector = typename SymTridiag<Scalar>::Vector;

  TridiagLdlt() = default;
  explicit TridiagLdlt(const SymTridiag<Scalar>& a) { compute(a); }

  void compute(const SymTridiag<Scalar>& a) {
    const Eigen::Index n = a.rows();
    d_.resize(n);
    l_.resize(n > 0 ? n - 1 : 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      Scalar pivot = a.diag[i];
      if (i > 0) pivot -= l_[i - 1] * l_[i - 1] * d_[i - 1];
      if (!(pivot > Scalar(0))) throw DomainError("TridiagLdlt: matrix is not positive definite");
      d_[i] = pivot;
      if (i + 1 < n) l_[i] = a.off[i] / pivot;
    }
  }

  Eigen::Index rows() const { return d_.size(); }

  template <typename Derived>
  Vector solve(const Eigen::MatrixBase<Derived>& rhs) const {
    Vector x = rhs;
    solve_in_place(x);
    return x;
  }

  void solve_in_place(Eigen::Ref<Vector> x) const {
    const Eigen::Index n = rows();
    if (x.size() != n) throw ContractError("TridiagLdlt::solve: dimension mismatch");
    for (Eigen::Index i = 1; i < n; ++i) x[i] -= l_[i - 1] * x[i - 1];
    x.array() /= d_.array();
    for (Eigen::Index i = n - 2; i >= 0; --i) x[i] -= l_[i] * x[i + 1];
  }

  /// Diagonal of D; the Cholesky factor is L * sqrt(D).
  const Vector& pivots() const { return d_; }
  const Vector& multipliers() const { return l_; }

 private:
  Vector d_;
  Vector l_;
};

}  // namespace sfde

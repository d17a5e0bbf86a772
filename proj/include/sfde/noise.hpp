#pragma once

// Truncated Karhunen-Loeve Q-Wiener increments with counter-based,
// trajectory-keyed randomness.

#include <array>
#include <cstdint>
#include <iosfwd>

#include <Eigen/Core>

#include "sfde/fem1d.hpp"

namespace sfde {

/// Covariance with eigenvalues gamma_ell = ell^{-m} on the sine basis,
/// truncated after L modes.
struct NoiseModel {
  double m{2.0};
  int L{1};

  double eigenvalue(int ell) const;
  void validate() const;
};

/// The default truncation L = N_h, the FEM dimension.
NoiseModel noise_model_for(const FemSpace& space, double m);

struct StreamKey {
  std::uint64_t seed{0};
  std::uint64_t trajectory{0};

  friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

/// Brownian increments d beta_ell^k, row ell-1, column k-1.
struct IncrementMatrix {
  MatrixXd increments;
  double tau{0.0};
  StreamKey key;
  int coarsening{1};  // product of coarsen_increments factors applied

  Index modes() const { return increments.rows(); }
  Index steps() const { return increments.cols(); }
};

/// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Standard normal variate number `index` of the substream (seed, trajectory, mode).
/// Uniforms take the top 53 bits of a 64-bit Philox output and are mapped
/// through the normal quantile (inverse CDF).
double stream_normal(const StreamKey& key, std::uint32_t mode, std::uint64_t index);

/// L x N increments sqrt(tau) * N(0,1). Row ell depends only on
/// (seed, trajectory, ell), so enlarging L keeps existing rows.
IncrementMatrix sample_increments(const NoiseModel& model, int steps, double tau, const StreamKey& key);

/// Sums blocks of r consecutive increments: the same Wiener path on a grid r
/// times coarser.
IncrementMatrix coarsen_increments(const IncrementMatrix& fine, int factor);

/// g^k_i = sum_{ell <= L} gamma_ell^{1/2} d beta_ell^k (e_ell, phi_i), the load
/// vector of P_h dW^k. Step index k is 1-based; f^0 = 0 is never requested.
VectorXd noise_load(const NoiseModel& model, const IncrementMatrix& incs, int k, const FemSpace& space);

/// All N load vectors as the columns of a dim x N matrix. Uses the first
/// model.L rows of incs.
MatrixXd noise_loads(const NoiseModel& model, const IncrementMatrix& incs, const FemSpace& space);

/// Binary dump: "SFNZ1", then little-endian u64 L, u64 N, f64 tau, u64 seed,
/// u64 trajectory, then L*N f64 values row-major.
void write_increments(std::ostream& out, const IncrementMatrix& incs);
IncrementMatrix read_increments(std::istream& in);

}  // namespace sfde

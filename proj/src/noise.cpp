#include "sfde/noise.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "sfde/errors.hpp"

namespace sfde {

double NoiseModel::eigenvalue(int ell) const { return std::pow(static_cast<double>(ell), -m); }

void NoiseModel::validate() const {
  if (!(m >= 0.0)) throw ConfigError("NoiseModel: decay exponent m must be >= 0");
  if (L < 1) throw ConfigError("NoiseModel: truncation L must be >= 1");
}

NoiseModel noise_model_for(const FemSpace& space, double m) {
  return NoiseModel{m, static_cast<int>(space.dim())};
}

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

double stream_normal(const StreamKey& key, std::uint32_t mode, std::uint64_t index) {
  const std::uint64_t block = index / 2;
  const auto out = philox4x32(
      {static_cast<std::uint32_t>(block), mode, static_cast<std::uint32_t>(key.trajectory),
       static_cast<std::uint32_t>(key.trajectory >> 32)},
      {static_cast<std::uint32_t>(key.seed), static_cast<std::uint32_t>(key.seed >> 32)});
  const int half = static_cast<int>(index % 2);
  const std::uint64_t bits = (static_cast<std::uint64_t>(out[2 * half]) << 32) | out[2 * half + 1];
  const double u = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  static const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, u);
}

IncrementMatrix sample_increments(const NoiseModel& model, int steps, double tau, const StreamKey& key) {
  model.validate();
  if (steps < 1) throw ConfigError("sample_increments: need at least one step");
  if (!(tau > 0.0)) throw ConfigError("sample_increments: tau must be positive");
  if (steps > (1 << 30)) throw ConfigError("sample_increments: too many steps for the counter layout");
  IncrementMatrix out;
  out.tau = tau;
  out.key = key;
  out.increments.resize(model.L, steps);
  const double scale = std::sqrt(tau);
  for (int ell = 1; ell <= model.L; ++ell) {
    for (int k = 0; k < steps; ++k) {
      out.increments(ell - 1, k) = scale * stream_normal(key, static_cast<std::uint32_t>(ell), k);
    }
  }
  return out;
}

IncrementMatrix coarsen_increments(const IncrementMatrix& fine, int factor) {
  if (factor < 1) throw ConfigError("coarsen_increments: factor must be >= 1");
  if (fine.steps() % factor != 0) {
    throw ConfigError("coarsen_increments: " + std::to_string(fine.steps()) + " steps not divisible by " +
                      std::to_string(factor));
  }
  if (factor == 1) return fine;
  IncrementMatrix out;
  out.tau = fine.tau * factor;
  out.key = fine.key;
  out.coarsening = fine.coarsening * factor;
  const Index coarse_steps = fine.steps() / factor;
  out.increments.resize(fine.modes(), coarse_steps);
  for (Index k = 0; k < coarse_steps; ++k) {
    out.increments.col(k) = fine.increments.middleCols(k * factor, factor).rowwise().sum();
  }
  return out;
}

namespace {

void check_modes(const NoiseModel& model, const IncrementMatrix& incs) {
  if (incs.modes() < model.L) {
    throw ContractError("noise: increment matrix has " + std::to_string(incs.modes()) +
                        " modes, model needs L = " + std::to_string(model.L));
  }
}

}  // namespace

VectorXd noise_load(const NoiseModel& model, const IncrementMatrix& incs, int k, const FemSpace& space) {
  check_modes(model, incs);
  if (k < 1 || k > incs.steps()) {
    throw ContractError("noise_load: step index must lie in 1..N (f^0 = 0 by convention), got k = " +
                        std::to_string(k));
  }
  VectorXd out = VectorXd::Zero(space.dim());
  for (int ell = 1; ell <= model.L; ++ell) {
    const double coef = std::sqrt(model.eigenvalue(ell)) * incs.increments(ell - 1, k - 1);
    if (coef != 0.0) out += coef * sine_load(space, ell);
  }
  return out;
}

MatrixXd noise_loads(const NoiseModel& model, const IncrementMatrix& incs, const FemSpace& space) {
  check_modes(model, incs);
  VectorXd root(model.L);
  for (int ell = 1; ell <= model.L; ++ell) root[ell - 1] = std::sqrt(model.eigenvalue(ell));
  const MatrixXd basis = sine_load_matrix(space, model.L);
  return basis * (root.asDiagonal() * incs.increments.topRows(model.L));
}

namespace {

constexpr char kMagic[5] = {'S', 'F', 'N', 'Z', '1'};

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(sizeof(T) == 8);
  std::uint64_t bits;
  std::memcpy(&bits, &value, 8);
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

template <typename T>
T get_le(std::istream& in) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char*>(buf), 8)) throw ConfigError("read_increments: truncated input");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  T value;
  std::memcpy(&value, &bits, 8);
  return value;
}

}  // namespace

void write_increments(std::ostream& out, const IncrementMatrix& incs) {
  out.write(kMagic, sizeof(kMagic));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(incs.modes()));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(incs.steps()));
  put_le<double>(out, incs.tau);
  put_le<std::uint64_t>(out, incs.key.seed);
  put_le<std::uint64_t>(out, incs.key.trajectory);
  for (Index r = 0; r < incs.modes(); ++r)
    for (Index c = 0; c < incs.steps(); ++c) put_le<double>(out, incs.increments(r, c));
}

IncrementMatrix read_increments(std::istream& in) {
  char magic[5];
  if (!in.read(magic, 5) || std::memcmp(magic, kMagic, 5) != 0) {
    throw ConfigError("read_increments: bad magic, expected SFNZ1");
  }
  IncrementMatrix incs;
  const auto modes = get_le<std::uint64_t>(in);
  const auto steps = get_le<std::uint64_t>(in);
  if (modes == 0 || steps == 0 || modes > (1u << 20) || steps > (1u << 30)) {
    throw ConfigError("read_increments: implausible dimensions");
  }
  incs.tau = get_le<double>(in);
  incs.key.seed = get_le<std::uint64_t>(in);
  incs.key.trajectory = get_le<std::uint64_t>(in);
  incs.increments.resize(static_cast<Index>(modes), static_cast<Index>(steps));
  for (Index r = 0; r < incs.modes(); ++r)
    for (Index c = 0; c < incs.steps(); ++c) incs.increments(r, c) = get_le<double>(in);
  return incs;
}

}  // namespace sfde

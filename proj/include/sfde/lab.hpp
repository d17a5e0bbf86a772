#pragma once

// Monte Carlo convergence studies with common random numbers.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sfde/fem1d.hpp"

namespace sfde {

enum class StudyMode { Temporal, Spatial };

struct StudyPlan {
  StudyMode mode{StudyMode::Temporal};
  double alpha{0.6};
  double gamma{0.5};
  double m{2.0};
  std::optional<double> s;  // noise regularity index for predicted rates
  std::vector<int> levels;  // N values (temporal) or M values (spatial)
  int reference{3200};
  int trajectories{100};
  double t_star{0.01};
  std::uint64_t seed{42};
  int mesh{100};         // spatial intervals in temporal mode
  int time_steps{200};   // time steps in spatial mode
  std::optional<int> truncation;  // KL modes; default N_h of each mesh
  bool zero_noise{false};
  std::string u0{"zero"};
  int workers{1};

  /// Regularity index used for predicted rates: explicit s, else
  /// clamp(1 - m, 0, 1) (m >= 1 read as trace class s = 0, white noise m = 0 as s = 1).
  double regularity_index() const;
  /// Throws ConfigError on any plan invariant violation.
  void validate() const;
};

/// Temporal design: t* = 0.01, M = 100, N in {40,...,640}, reference N = 3200.
StudyPlan temporal_plan(double alpha, double gamma, double m);
/// Spatial design: t* = 1, 200 time steps, M in {10,...,160}, reference M = 320.
StudyPlan spatial_plan(double alpha, double gamma, double m);

struct Rate {
  double exponent{0.0};
  bool minus_epsilon{false};  // the bound holds for exponent - eps, any eps > 0

  std::string str() const;
};

struct PredictedRates {
  Rate strong_time;
  Rate strong_space;
  Rate weak_time;
  Rate weak_space;
};

/// Theoretical convergence exponents for regularity index s in [0,1].
PredictedRates predicted_rates(double alpha, double gamma, double s, bool u0_zero = true);

struct RateFit {
  double slope{0.0};
  std::vector<double> pairwise;  // log(e_i / e_{i+1}) / log(p_{i+1} / p_i)
};

/// Least-squares slope of log(error) against log(1/param); param is N for
/// temporal and M = 1/h for spatial refinement.
RateFit fit_rate(const std::vector<double>& errors, const std::vector<int>& params);

/// sqrt((1/P) sum_p ||ref_p - level_p||^2) in the reference space; level
/// solutions must already live in that space.
double strong_error(const std::vector<VectorXd>& ref, const std::vector<VectorXd>& level, const FemSpace& space);

/// |(1/P) sum Phi(ref_p) - (1/P) sum Phi(level_p)|, each Phi in its own space.
double weak_error(const std::vector<VectorXd>& ref, const FemSpace& ref_space, const std::vector<VectorXd>& level,
                  const FemSpace& level_space);

struct LevelError {
  int param{0};
  double strong{0.0};
  double weak{0.0};
  double weak_signed{0.0};  // mean Phi(ref) - mean Phi(level)
  double strong_ratio{0.0}; // pairwise rate against the previous level; NaN on the first
  double weak_ratio{0.0};
};

struct ErrorReport {
  StudyMode mode{StudyMode::Temporal};
  std::vector<LevelError> levels;
  double fitted_strong{0.0};
  double fitted_weak{0.0};
  PredictedRates predicted;
  double predicted_strong{0.0};
  double predicted_weak{0.0};
  int trajectories{0};
  std::uint64_t seed{0};
  double wall_seconds{0.0};
};

ErrorReport run_study(const StudyPlan& plan);

/// CSV with 17 significant digits; wall time is deliberately left out so that
/// equal plans give byte-identical files.
void write_report_csv(std::ostream& out, const ErrorReport& report);

struct HolderPlan {
  double alpha{0.6};
  double gamma{0.5};
  double m{2.0};
  int mesh{32};
  double t1{0.1};
  double tau{1e-4};
  std::vector<int> lags{8, 16, 32, 64, 128, 256};  // t2 - t1 in steps
  int trajectories{100};
  std::uint64_t seed{42};
  int workers{1};

  void validate() const;
};

struct HolderReport {
  std::vector<double> deltas;
  std::vector<double> mean_square;  // E ||u(t1 + delta) - u(t1)||^2
  double fitted_exponent{0.0};
  double expected_exponent{0.0};    // min(2, 2 (alpha + gamma - 1/2))
};

HolderReport holder_probe(const HolderPlan& plan);
void write_holder_csv(std::ostream& out, const HolderReport& report);

/// Formats a double with 17 significant digits.
std::string format_real(double v);

}  // namespace sfde

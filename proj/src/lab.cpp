#include "sfde/lab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "sfde/errors.hpp"
#include "sfde/noise.hpp"
#include "sfde/oracle.hpp"
#include "sfde/stepper.hpp"

namespace sfde {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs body(p) for p = 0..count-1 on `workers` threads. Each index is
// processed exactly once; callers write results into slot p only.
template <typename Body>
void parallel_for(int count, int workers, Body&& body) {
  workers = std::clamp(workers, 1, std::max(1, count));
  if (workers == 1) {
    for (int p = 0; p < count; ++p) body(p);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int p = w; p < count; p += workers) body(p);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Rate::str() const { return format_real(exponent) + (minus_epsilon ? "-eps" : ""); }

double StudyPlan::regularity_index() const {
  if (s) return *s;
  return std::clamp(1.0 - m, 0.0, 1.0);
}

void StudyPlan::validate() const {
  make_config(alpha, gamma, t_star, 1).validate();
  if (alpha >= 1.0) throw ConfigError("study: alpha must lie in (0, 1)");
  if (!(m >= 0.0)) throw ConfigError("study: noise exponent m must be >= 0");
  if (s && !(*s >= 0.0 && *s <= 1.0)) throw ConfigError("study: s must lie in [0, 1]");
  if (levels.size() < 2) throw ConfigError("study: need at least two refinement levels");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 1) throw ConfigError("study: refinement levels must be positive");
    if (i > 0 && levels[i] <= levels[i - 1]) throw ConfigError("study: refinement levels must be strictly increasing");
  }
  if (reference <= levels.back()) throw ConfigError("study: reference must be strictly finer than every level");
  for (int level : levels) {
    if (reference % level != 0) {
      throw ConfigError("study: level " + std::to_string(level) + " does not divide reference " +
                        std::to_string(reference));
    }
  }
  if (mode == StudyMode::Spatial && levels.front() < 2) throw ConfigError("study: spatial levels need M >= 2");
  if (trajectories < 1) throw ConfigError("study: need at least one trajectory");
  if (!(t_star > 0.0)) throw ConfigError("study: evaluation time must be positive");
  if (mode == StudyMode::Temporal && mesh < 2) throw ConfigError("study: mesh must have M >= 2");
  if (mode == StudyMode::Spatial && time_steps < 1) throw ConfigError("study: need at least one time step");
  if (truncation && *truncation < 1) throw ConfigError("study: truncation must be >= 1");
  if (workers < 1) throw ConfigError("study: workers must be >= 1");
  InitialData::named(u0);
}

StudyPlan temporal_plan(double alpha, double gamma, double m) {
  StudyPlan p;
  p.mode = StudyMode::Temporal;
  p.alpha = alpha;
  p.gamma = gamma;
  p.m = m;
  p.levels = {40, 80, 160, 320, 640};
  p.reference = 3200;
  p.t_star = 0.01;
  p.mesh = 100;
  return p;
}

StudyPlan spatial_plan(double alpha, double gamma, double m) {
  StudyPlan p;
  p.mode = StudyMode::Spatial;
  p.alpha = alpha;
  p.gamma = gamma;
  p.m = m;
  p.levels = {10, 20, 40, 80, 160};
  p.reference = 320;
  p.t_star = 1.0;
  p.time_steps = 200;
  return p;
}

PredictedRates predicted_rates(double alpha, double gamma, double s, bool u0_zero) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("predicted_rates: alpha must lie in (0, 1]");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("predicted_rates: gamma must lie in [0, 1]");
  if (!(alpha + gamma > 0.5)) throw DomainError("predicted_rates: condition alpha + gamma > 1/2 violated");
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("predicted_rates: s must lie in [0, 1]");
  if (!(s < 2.0 - (1.0 - 2.0 * gamma) / alpha)) {
    throw DomainError("predicted_rates: noise too rough, need s < 2 - (1 - 2 gamma) / alpha");
  }
  // Smooth nonzero initial data contributes O(tau + h^2), which never lowers
  // the capped rates below, so u0_zero does not change the result.
  (void)u0_zero;
  const bool heat = alpha == 1.0 && gamma == 0.0;
  const double base = (1.0 - 0.5 * s) * alpha + gamma;  // smoothing exponent + 1
  PredictedRates r;

  const double eta = base - 0.5;
  r.strong_time = {std::min(1.0, eta), eta <= 1.0};

  const double r_strong = gamma < 0.5 ? (1.0 - 2.0 * gamma) / alpha : 0.0;
  r.strong_space = {std::min(2.0, 2.0 - s - r_strong), gamma <= 0.5 && !heat};

  // largest admissible moment p: 1/p = max(0, 1 - base)
  const double inv_p = std::max(0.0, 1.0 - base);
  if (s == 0.0) {
    r.weak_time = {std::min(1.0, alpha + gamma), alpha + gamma <= 1.0};
  } else {
    const double eta_w = base - inv_p;
    r.weak_time = {std::min(1.0, eta_w), eta_w <= 1.0};
  }
  const double r_weak = std::max(0.0, 2.0 / alpha * (inv_p - gamma));
  r.weak_space = {std::min(2.0, 2.0 - s - r_weak), r_weak > 0.0};
  return r;
}

RateFit fit_rate(const std::vector<double>& errors, const std::vector<int>& params) {
  if (errors.size() != params.size() || errors.size() < 2) {
    throw ConfigError("fit_rate: need at least two levels with one error each");
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!(errors[i] > 0.0) || params[i] < 1) throw DomainError("fit_rate: errors and grid values must be positive");
    lx.push_back(-std::log(static_cast<double>(params[i])));
    ly.push_back(std::log(errors[i]));
  }
  RateFit fit;
  fit.slope = least_squares_slope(lx, ly);
  for (std::size_t i = 0; i + 1 < lx.size(); ++i) {
    fit.pairwise.push_back((ly[i] - ly[i + 1]) / (lx[i] - lx[i + 1]));
  }
  return fit;
}

double strong_error(const std::vector<VectorXd>& ref, const std::vector<VectorXd>& level, const FemSpace& space) {
  if (ref.size() != level.size() || ref.empty()) throw ContractError("strong_error: trajectory counts differ");
  double acc = 0.0;
  for (std::size_t p = 0; p < ref.size(); ++p) {
    const double e = l2_norm(space, ref[p] - level[p]);
    acc += e * e;
  }
  return std::sqrt(acc / static_cast<double>(ref.size()));
}

double weak_error(const std::vector<VectorXd>& ref, const FemSpace& ref_space, const std::vector<VectorXd>& level,
                  const FemSpace& level_space) {
  if (ref.size() != level.size() || ref.empty()) throw ContractError("weak_error: trajectory counts differ");
  double mean_ref = 0.0, mean_level = 0.0;
  for (std::size_t p = 0; p < ref.size(); ++p) {
    mean_ref += weak_functional(ref_space, ref[p]);
    mean_level += weak_functional(level_space, level[p]);
  }
  const double n = static_cast<double>(ref.size());
  return std::abs(mean_ref / n - mean_level / n);
}

namespace {

// Per-trajectory contributions, reduced in trajectory order afterwards.
struct TrajectoryRecord {
  std::vector<double> sq_error;  // ||ref - level||^2 per level
  std::vector<double> phi_level;
  double phi_ref{0.0};
};

std::vector<TrajectoryRecord> run_temporal(const StudyPlan& plan) {
  const FemSpace space = build_space(plan.mesh);
  const InitialData u0 = InitialData::named(plan.u0);
  const NoiseModel model{plan.m, plan.truncation.value_or(static_cast<int>(space.dim()))};
  const FractionalStepper ref_stepper(make_config(plan.alpha, plan.gamma, plan.t_star, plan.reference, u0), space);
  std::vector<FractionalStepper> steppers;
  for (int n : plan.levels) steppers.emplace_back(make_config(plan.alpha, plan.gamma, plan.t_star, n, u0), space);

  std::vector<TrajectoryRecord> records(plan.trajectories);
  parallel_for(plan.trajectories, plan.workers, [&](int p) {
    TrajectoryRecord& rec = records[p];
    VectorXd ref;
    std::vector<VectorXd> sols;
    if (plan.zero_noise) {
      ref = ref_stepper.solve_deterministic().final_state();
      for (const auto& st : steppers) sols.push_back(st.solve_deterministic().final_state());
    } else {
      const IncrementMatrix incs = sample_increments(model, plan.reference, plan.t_star / plan.reference,
                                                     StreamKey{plan.seed, static_cast<std::uint64_t>(p)});
      ref = ref_stepper.solve(model, incs).final_state();
      for (std::size_t i = 0; i < steppers.size(); ++i) {
        const int factor = plan.reference / plan.levels[i];
        sols.push_back(steppers[i].solve(model, coarsen_increments(incs, factor)).final_state());
      }
    }
    rec.phi_ref = weak_functional(space, ref);
    for (const auto& u : sols) {
      const double e = l2_norm(space, ref - u);
      rec.sq_error.push_back(e * e);
      rec.phi_level.push_back(weak_functional(space, u));
    }
  });
  return records;
}

std::vector<TrajectoryRecord> run_spatial(const StudyPlan& plan) {
  const FemSpace ref_space = build_space(plan.reference);
  std::vector<FemSpace> spaces;
  spaces.reserve(plan.levels.size());
  for (int mesh : plan.levels) spaces.push_back(build_space(mesh));
  const InitialData u0 = InitialData::named(plan.u0);
  const ModelConfig config = make_config(plan.alpha, plan.gamma, plan.t_star, plan.time_steps, u0);

  auto modes_for = [&](const FemSpace& s) { return plan.truncation.value_or(static_cast<int>(s.dim())); };
  const NoiseModel ref_model{plan.m, modes_for(ref_space)};
  std::vector<NoiseModel> models;
  int max_modes = ref_model.L;
  for (const auto& s : spaces) {
    models.push_back(NoiseModel{plan.m, modes_for(s)});
    max_modes = std::max(max_modes, models.back().L);
  }
  const FractionalStepper ref_stepper(config, ref_space);
  std::vector<FractionalStepper> steppers;
  for (const auto& s : spaces) steppers.emplace_back(config, s);

  std::vector<TrajectoryRecord> records(plan.trajectories);
  parallel_for(plan.trajectories, plan.workers, [&](int p) {
    TrajectoryRecord& rec = records[p];
    VectorXd ref;
    std::vector<VectorXd> sols;
    if (plan.zero_noise) {
      ref = ref_stepper.solve_deterministic().final_state();
      for (const auto& st : steppers) sols.push_back(st.solve_deterministic().final_state());
    } else {
      // One draw of the largest mode set; every mesh uses a prefix of it.
      const IncrementMatrix incs = sample_increments(NoiseModel{plan.m, max_modes}, plan.time_steps, config.tau(),
                                                     StreamKey{plan.seed, static_cast<std::uint64_t>(p)});
      ref = ref_stepper.solve(ref_model, incs).final_state();
      for (std::size_t i = 0; i < steppers.size(); ++i) sols.push_back(steppers[i].solve(models[i], incs).final_state());
    }
    rec.phi_ref = weak_functional(ref_space, ref);
    for (std::size_t i = 0; i < sols.size(); ++i) {
      const double e = l2_norm(ref_space, ref - prolong(spaces[i], sols[i], ref_space));
      rec.sq_error.push_back(e * e);
      rec.phi_level.push_back(weak_functional(spaces[i], sols[i]));
    }
  });
  return records;
}

}  // namespace

ErrorReport run_study(const StudyPlan& plan) {
  plan.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::vector<TrajectoryRecord> records =
      plan.mode == StudyMode::Temporal ? run_temporal(plan) : run_spatial(plan);

  ErrorReport report;
  report.mode = plan.mode;
  report.trajectories = plan.trajectories;
  report.seed = plan.seed;
  const double count = static_cast<double>(plan.trajectories);
  const std::size_t nlev = plan.levels.size();
  double phi_ref = 0.0;
  std::vector<double> sq(nlev, 0.0), phi(nlev, 0.0);
  for (const auto& rec : records) {  // trajectory order
    phi_ref += rec.phi_ref;
    for (std::size_t i = 0; i < nlev; ++i) {
      sq[i] += rec.sq_error[i];
      phi[i] += rec.phi_level[i];
    }
  }
  std::vector<double> strong, weak;
  for (std::size_t i = 0; i < nlev; ++i) {
    LevelError le;
    le.param = plan.levels[i];
    le.strong = std::sqrt(sq[i] / count);
    le.weak_signed = phi_ref / count - phi[i] / count;
    le.weak = std::abs(le.weak_signed);
    strong.push_back(le.strong);
    weak.push_back(le.weak);
    report.levels.push_back(le);
  }
  auto fit_or_nan = [&](const std::vector<double>& errs, std::vector<double>* pairwise) {
    for (double e : errs)
      if (!(e > 0.0)) return kNaN;
    const RateFit fit = fit_rate(errs, plan.levels);
    *pairwise = fit.pairwise;
    return fit.slope;
  };
  std::vector<double> strong_pairs, weak_pairs;
  report.fitted_strong = fit_or_nan(strong, &strong_pairs);
  report.fitted_weak = fit_or_nan(weak, &weak_pairs);
  for (std::size_t i = 0; i < nlev; ++i) {
    report.levels[i].strong_ratio = (i > 0 && i - 1 < strong_pairs.size()) ? strong_pairs[i - 1] : kNaN;
    report.levels[i].weak_ratio = (i > 0 && i - 1 < weak_pairs.size()) ? weak_pairs[i - 1] : kNaN;
  }
  try {
    report.predicted = predicted_rates(plan.alpha, plan.gamma, plan.regularity_index(), plan.u0 == "zero");
    const bool temporal = plan.mode == StudyMode::Temporal;
    report.predicted_strong = temporal ? report.predicted.strong_time.exponent : report.predicted.strong_space.exponent;
    report.predicted_weak = temporal ? report.predicted.weak_time.exponent : report.predicted.weak_space.exponent;
  } catch (const DomainError&) {
    report.predicted_strong = kNaN;
    report.predicted_weak = kNaN;
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

void write_report_csv(std::ostream& out, const ErrorReport& report) {
  out << "level,param,strong_error,weak_error,strong_ratio,weak_ratio\n";
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const LevelError& le = report.levels[i];
    out << i << ',' << le.param << ',' << format_real(le.strong) << ',' << format_real(le.weak) << ','
        << format_real(le.strong_ratio) << ',' << format_real(le.weak_ratio) << '\n';
  }
  out << "fitted_strong_rate,fitted_weak_rate,predicted_strong,predicted_weak,trajectories,seed\n";
  out << format_real(report.fitted_strong) << ',' << format_real(report.fitted_weak) << ','
      << format_real(report.predicted_strong) << ',' << format_real(report.predicted_weak) << ','
      << report.trajectories << ',' << report.seed << '\n';
}

void HolderPlan::validate() const {
  make_config(alpha, gamma, 1.0, 1).validate();
  if (alpha >= 1.0) throw ConfigError("holder: alpha must lie in (0, 1)");
  if (!(m >= 0.0)) throw ConfigError("holder: noise exponent m must be >= 0");
  if (mesh < 2) throw ConfigError("holder: mesh must have M >= 2");
  if (!(t1 > 0.0) || !(tau > 0.0) || tau > t1) throw ConfigError("holder: need 0 < tau <= t1");
  if (lags.empty()) throw ConfigError("holder: need at least one lag");
  for (int lag : lags)
    if (lag < 0) throw ConfigError("holder: lags must be >= 0");
  if (trajectories < 1) throw ConfigError("holder: need at least one trajectory");
  if (workers < 1) throw ConfigError("holder: workers must be >= 1");
}

HolderReport holder_probe(const HolderPlan& plan) {
  plan.validate();
  const FemSpace space = build_space(plan.mesh);
  const NoiseModel model = noise_model_for(space, plan.m);
  const int first = static_cast<int>(std::lround(plan.t1 / plan.tau));
  const int max_lag = *std::max_element(plan.lags.begin(), plan.lags.end());
  const int steps = first + max_lag;
  const ModelConfig config = make_config(plan.alpha, plan.gamma, steps * plan.tau, steps);
  const FractionalStepper stepper(config, space);

  std::vector<std::vector<double>> per_traj(plan.trajectories);
  parallel_for(plan.trajectories, plan.workers, [&](int p) {
    const IncrementMatrix incs =
        sample_increments(model, steps, config.tau(), StreamKey{plan.seed, static_cast<std::uint64_t>(p)});
    const SolveResult sol = stepper.solve(model, incs);
    const VectorXd base = sol.states.row(first).transpose();
    for (int lag : plan.lags) {
      const VectorXd diff = sol.states.row(first + lag).transpose() - base;
      per_traj[p].push_back(space.mass.quadratic(diff));
    }
  });

  HolderReport report;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < plan.lags.size(); ++i) {
    double acc = 0.0;
    for (const auto& v : per_traj) acc += v[i];
    const double delta = plan.lags[i] * config.tau();
    const double ms = acc / plan.trajectories;
    report.deltas.push_back(delta);
    report.mean_square.push_back(ms);
    if (plan.lags[i] > 0 && ms > 0.0) {
      lx.push_back(std::log(delta));
      ly.push_back(std::log(ms));
    }
  }
  report.fitted_exponent = lx.size() >= 2 ? least_squares_slope(lx, ly) : kNaN;
  report.expected_exponent = std::min(2.0, 2.0 * (plan.alpha + plan.gamma - 0.5));
  return report;
}

void write_holder_csv(std::ostream& out, const HolderReport& report) {
  out << "delta,mean_square_increment\n";
  for (std::size_t i = 0; i < report.deltas.size(); ++i) {
    out << format_real(report.deltas[i]) << ',' << format_real(report.mean_square[i]) << '\n';
  }
  out << "fitted_exponent,expected_exponent\n";
  out << format_real(report.fitted_exponent) << ',' << format_real(report.expected_exponent) << '\n';
}

}  // namespace sfde

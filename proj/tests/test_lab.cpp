#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sfde/errors.hpp"
#include "sfde/lab.hpp"
#include "sfde/stepper.hpp"

using namespace sfde;

TEST_CASE("error estimators") {
  const FemSpace s = build_space(8);
  std::vector<VectorXd> a{VectorXd::Random(7), VectorXd::Random(7)};
  CHECK(strong_error(a, a, s) == 0.0);
  CHECK(weak_error(a, s, a, s) == 0.0);

  std::vector<VectorXd> ref{a[0]};
  ref[0][2] += 1.0;
  VectorXd e = VectorXd::Zero(7);
  e[2] = 1.0;
  CHECK(strong_error(ref, {a[0]}, s) == doctest::Approx(l2_norm(s, e)));

  const std::vector<VectorXd> zeros{VectorXd::Zero(7), VectorXd::Zero(7)};
  const FemSpace c = build_space(4);
  const std::vector<VectorXd> lv{VectorXd::Ones(3), 2.0 * VectorXd::Ones(3)};
  const double mean_phi = 0.5 * (weak_functional(c, lv[0]) + weak_functional(c, lv[1]));
  CHECK(weak_error(zeros, s, lv, c) == doctest::Approx(mean_phi));
  CHECK_THROWS(strong_error(a, {a[0]}, s));
}

TEST_CASE("rate fitting") {
  const std::vector<int> n{40, 80, 160, 320, 640};
  CHECK(fit_rate({16, 8, 4, 2, 1}, n).slope == doctest::Approx(1.0));
  CHECK(fit_rate({3, 3, 3, 3, 3}, n).slope == doctest::Approx(0.0).epsilon(1e-14));
  const RateFit fit = fit_rate({6.68e-1, 6.38e-1, 6.07e-1, 5.55e-1, 4.98e-1}, n);
  CHECK(std::abs(fit.slope - 0.10) <= 0.02);
  CHECK(fit.pairwise.size() == 4);
  CHECK(fit.pairwise[0] == doctest::Approx(std::log2(6.68 / 6.38)));
  CHECK_THROWS(fit_rate({1.0}, {10}));
  CHECK_THROWS(fit_rate({1.0, -1.0}, {10, 20}));
}

TEST_CASE("predicted rates") {
  const PredictedRates heat = predicted_rates(1.0, 0.0, 0.0);
  CHECK(heat.strong_time.exponent == doctest::Approx(0.5));
  CHECK(heat.strong_time.minus_epsilon);
  CHECK(heat.strong_space.exponent == doctest::Approx(1.0));
  CHECK_FALSE(heat.strong_space.minus_epsilon);
  CHECK(heat.strong_time.str() == "0.5-eps");

  CHECK(predicted_rates(0.5, 0.6, 0.0).strong_space.exponent == doctest::Approx(2.0));
  CHECK(predicted_rates(0.9, 0.8, 0.0).strong_space.exponent == doctest::Approx(2.0));

  const PredictedRates t2 = predicted_rates(0.4, 0.3, 0.0);
  CHECK(t2.strong_time.exponent == doctest::Approx(0.2));
  CHECK(t2.weak_time.exponent == doctest::Approx(0.7));
  CHECK(predicted_rates(0.6, 0.5, 0.0).strong_time.exponent == doctest::Approx(0.6));
  CHECK(predicted_rates(0.6, 0.5, 0.0).weak_time.exponent == doctest::Approx(1.0));

  // rougher noise never improves a rate
  for (auto [a, g] : {std::pair{0.5, 0.4}, std::pair{0.8, 0.6}, std::pair{0.9, 0.1}}) {
    const PredictedRates smooth = predicted_rates(a, g, 0.0);
    const PredictedRates rough = predicted_rates(a, g, 0.5);
    CHECK(rough.strong_time.exponent <= smooth.strong_time.exponent);
    CHECK(rough.strong_space.exponent <= smooth.strong_space.exponent);
  }
  CHECK_THROWS(predicted_rates(0.2, 0.3, 0.0));
  CHECK_THROWS(predicted_rates(0.5, 0.5, 1.5));
}

TEST_CASE("plans") {
  const StudyPlan t = temporal_plan(0.6, 0.5, 2.0);
  CHECK(t.t_star == 0.01);
  CHECK(t.mesh == 100);
  CHECK(t.reference == 3200);
  CHECK_NOTHROW(t.validate());
  CHECK(t.regularity_index() == 0.0);
  CHECK(temporal_plan(0.5, 0.4, 0.0).regularity_index() == 1.0);
  const StudyPlan s = spatial_plan(0.5, 0.2, 2.0);
  CHECK(s.time_steps == 200);
  CHECK(s.reference == 320);
  CHECK_NOTHROW(s.validate());

  StudyPlan bad = t;
  bad.levels = {80, 40};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = t;
  bad.reference = 640;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = t;
  bad.levels = {40, 70};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = s;
  bad.levels = {10, 30};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = t;
  bad.gamma = -0.1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = t;
  bad.trajectories = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("deterministic sub-study") {
  StudyPlan p = temporal_plan(0.5, 0.5, 2.0);
  p.trajectories = 1;
  p.zero_noise = true;
  p.u0 = "sin";
  p.t_star = 1.0;
  p.mesh = 64;
  const ErrorReport r = run_study(p);
  CHECK(r.levels.size() == 5);
  CHECK(std::abs(r.fitted_strong - 1.0) <= 0.1);
  for (std::size_t i = 1; i < r.levels.size(); ++i) CHECK(r.levels[i].strong < r.levels[i - 1].strong);
}

TEST_CASE("small studies are reproducible across worker counts") {
  StudyPlan p = temporal_plan(0.6, 0.5, 2.0);
  p.levels = {10, 20, 40};
  p.reference = 160;
  p.mesh = 16;
  p.trajectories = 12;
  std::string first;
  for (int w : {1, 3, 8}) {
    p.workers = w;
    std::ostringstream out;
    write_report_csv(out, run_study(p));
    if (first.empty())
      first = out.str();
    else
      CHECK(out.str() == first);
  }
  CHECK(first.rfind("level,param,strong_error,weak_error,strong_ratio,weak_ratio\n", 0) == 0);
  CHECK(first.find("fitted_strong_rate,fitted_weak_rate,predicted_strong,predicted_weak,trajectories,seed\n") !=
        std::string::npos);

  StudyPlan q = spatial_plan(0.5, 0.2, 2.0);
  q.levels = {4, 8};
  q.reference = 16;
  q.time_steps = 20;
  q.trajectories = 6;
  std::ostringstream a, b;
  q.workers = 1;
  write_report_csv(a, run_study(q));
  q.workers = 4;
  write_report_csv(b, run_study(q));
  CHECK(a.str() == b.str());
}

TEST_CASE("different seeds give different errors") {
  StudyPlan p = temporal_plan(0.6, 0.5, 2.0);
  p.levels = {10, 20};
  p.reference = 40;
  p.mesh = 8;
  p.trajectories = 4;
  const double e1 = run_study(p).levels[0].strong;
  p.seed = 43;
  CHECK(run_study(p).levels[0].strong != e1);
}

TEST_CASE("holder probe") {
  HolderPlan h;
  h.lags = {0, 8, 16, 32, 64, 128, 256};
  h.trajectories = 100;
  const HolderReport r = holder_probe(h);
  CHECK(r.mean_square[0] == 0.0);
  CHECK(r.expected_exponent == doctest::Approx(1.2));
  CHECK(std::abs(r.fitted_exponent - 1.2) <= 0.3);

  HolderPlan heat;
  heat.alpha = 0.99;
  heat.gamma = 0.0;
  heat.trajectories = 100;
  const HolderReport hr = holder_probe(heat);
  CHECK(std::abs(hr.fitted_exponent - 1.0) <= 0.3);

  std::ostringstream out;
  write_holder_csv(out, r);
  CHECK(out.str().rfind("delta,", 0) == 0);
}

TEST_CASE("number formatting") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(std::nan("")) == "nan");
  CHECK(format_real(2.0) == "2");
}

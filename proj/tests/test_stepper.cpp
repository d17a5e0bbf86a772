#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sfde/errors.hpp"
#include "sfde/lab.hpp"
#include "sfde/oracle.hpp"
#include "sfde/stepper.hpp"

using namespace sfde;
using std::numbers::pi;

TEST_CASE("config validation") {
  CHECK_NOTHROW(make_config(0.3, 0.21, 1.0, 10).validate());
  CHECK_THROWS_AS(make_config(0.2, 0.3, 1.0, 10).validate(), ConfigError);
  CHECK_THROWS_AS(make_config(0.0, 0.9, 1.0, 10).validate(), ConfigError);
  CHECK_THROWS_AS(make_config(0.5, 1.5, 1.0, 10).validate(), ConfigError);
  CHECK_THROWS_AS(make_config(0.5, 0.5, 0.0, 10).validate(), ConfigError);
  CHECK_THROWS_AS(make_config(0.5, 0.5, 1.0, 0).validate(), ConfigError);
  CHECK(make_config(0.5, 0.5, 2.0, 8).tau() == 0.25);
  CHECK_THROWS(InitialData::named("cos"));
}

TEST_CASE("zero data stays zero") {
  const FemSpace s = build_space(16);
  const NoiseModel q = noise_model_for(s, 2.0);
  const ModelConfig c = make_config(0.6, 0.5, 1.0, 20);
  IncrementMatrix incs{MatrixXd::Zero(q.L, 20), c.tau(), {}, 1};
  const SolveResult r = solve_trajectory(c, s, q, incs);
  CHECK(r.states.rows() == 21);
  CHECK(r.states.cols() == 15);
  CHECK(r.states.isZero(0.0));
}

TEST_CASE("initial row and linearity") {
  const FemSpace s = build_space(32);
  const ModelConfig c1 = make_config(0.5, 0.5, 1.0, 40, InitialData::named("sin"));
  const ModelConfig c2 = make_config(0.5, 0.5, 1.0, 40, InitialData::from_function([](double x) {
    return 2.0 * std::sin(pi * x);
  }));
  const SolveResult a = FractionalStepper(c1, s).solve_deterministic();
  const SolveResult b = FractionalStepper(c2, s).solve_deterministic();
  CHECK((a.states.row(0).transpose() - l2_project(s, [](double x) { return std::sin(pi * x); })).isZero(0.0));
  CHECK((b.states - 2.0 * a.states).cwiseAbs().maxCoeff() <= 1e-14);

  // noise and data superpose
  const NoiseModel q = noise_model_for(s, 2.0);
  const auto incs = sample_increments(q, 40, c1.tau(), {11, 0});
  const SolveResult both = FractionalStepper(c1, s).solve(q, incs);
  const SolveResult noise_only = FractionalStepper(make_config(0.5, 0.5, 1.0, 40), s).solve(q, incs);
  CHECK((both.states - a.states - noise_only.states).cwiseAbs().maxCoeff() <= 1e-13);
  CHECK(both.key == incs.key);
}

TEST_CASE("mismatched noise is a contract violation") {
  const FemSpace s = build_space(8);
  const FractionalStepper st(make_config(0.5, 0.5, 1.0, 10), s);
  CHECK_THROWS_AS(st.solve_with_loads(MatrixXd::Zero(7, 9)), ContractError);
  CHECK_THROWS_AS(st.solve_with_loads(MatrixXd::Zero(6, 10)), ContractError);
  const NoiseModel q = noise_model_for(s, 2.0);
  const auto wrong_tau = sample_increments(q, 10, 0.2, {1, 0});
  CHECK_THROWS_AS(st.solve(q, wrong_tau), ContractError);
  CHECK_THROWS_AS(FractionalStepper(make_config(1.0, 0.0, 1.0, 10), s), DomainError);
}

TEST_CASE("modal equivalence") {
  const FemSpace s = build_space(64);
  const EigenBasis e = generalized_eigs(s);
  const NoiseModel q = noise_model_for(s, 1.0);
  for (auto [alpha, gamma] : {std::pair{0.3, 0.9}, std::pair{0.6, 0.5}, std::pair{0.8, 0.3}, std::pair{0.7, 0.0}}) {
    const ModelConfig c = make_config(alpha, gamma, 1.0, 128, InitialData::named("sin3"));
    const auto incs = sample_increments(q, c.N, c.tau(), {2, 5});
    const MatrixXd loads = noise_loads(q, incs, s);
    const SolveResult r = FractionalStepper(c, s).solve_with_loads(loads);
    const MatrixXd modal_noise = e.vectors.transpose() * loads;
    const VectorXd modal_u0 = e.coordinates(s, r.states.row(0).transpose());
    const MatrixXd coords = e.vectors.transpose() * s.mass.dense() * r.states.transpose();
    double worst = 0.0;
    for (Index j = 0; j < e.size(); ++j) {
      const VectorXd u = modal_recursion(c, e.values[j], modal_noise.row(j).transpose(), modal_u0[j]);
      worst = std::max(worst, (u - coords.row(j).transpose()).cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("deterministic temporal rate") {
  const FemSpace s = build_space(256);
  const EigenBasis e = generalized_eigs(s);
  const std::vector<int> grid{40, 80, 160, 320, 640};
  for (double alpha : {0.3, 0.5, 0.8}) {
    std::vector<double> errs;
    for (int n : grid) {
      const ModelConfig c = make_config(alpha, 0.5, 1.0, n, InitialData::named("sin"));
      const VectorXd ref = deterministic_reference(c, s, e, c.u0.project(s), 1.0);
      errs.push_back(l2_norm(s, FractionalStepper(c, s).solve_deterministic().final_state() - ref));
    }
    CHECK(std::abs(fit_rate(errs, grid).slope - 1.0) <= 0.1);
  }
}

TEST_CASE("weak functional") {
  const FemSpace s = build_space(256);
  CHECK(weak_functional(s, VectorXd::Zero(s.dim())) == 0.0);
  const VectorXd v = interpolate(s, [](double x) { return std::sin(pi * x); });
  CHECK(std::abs(weak_functional(s, v) - 0.5) <= 1e-4);
  CHECK(std::abs(weak_functional(s, v) - std::pow(l2_norm(s, v), 2)) <= 1e-14);
}

TEST_CASE("trace class noise stays bounded") {
  const FemSpace s = build_space(32);
  const NoiseModel q = noise_model_for(s, 2.0);
  for (int n : {40, 160, 640}) {
    const ModelConfig c = make_config(0.6, 0.5, 1.0, n);
    const FractionalStepper st(c, s);
    std::vector<double> peaks;
    for (int p = 0; p < 100; ++p) {
      const SolveResult r = st.solve(q, sample_increments(q, n, c.tau(), {8, static_cast<std::uint64_t>(p)}));
      double peak = 0.0;
      for (Index k = 0; k < r.states.rows(); ++k) peak = std::max(peak, l2_norm(s, r.states.row(k).transpose()));
      CHECK(std::isfinite(peak));
      peaks.push_back(peak);
    }
    std::vector<double> sorted = peaks;
    std::nth_element(sorted.begin(), sorted.begin() + 50, sorted.end());
    CHECK(*std::max_element(peaks.begin(), peaks.end()) <= 10.0 * sorted[50]);
  }
}

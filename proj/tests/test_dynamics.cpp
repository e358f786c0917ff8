#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "gda/dynamics.hpp"
#include "gda/errors.hpp"
#include "gda/spectral.hpp"
#include "support/oracles.hpp"

using namespace gda;
using dynamics::RunOptions;
using dynamics::Status;
using linalg::Matrix;
using linalg::Vector;
using operators::Algorithm;
using operators::AlgorithmConfig;

TEST_CASE("run: Alt-GDA reference deltas and convergence") {
  const auto g = games::scalar_game(1, 10, 1);
  const auto traj = dynamics::run(g, {Algorithm::AltGda, 0.05, {}}, {1.0, 1.0});
  CHECK(traj.deltas[0] == doctest::Approx(2.0));
  CHECK(traj.deltas[1] == doctest::Approx(1.583125).epsilon(1e-14));
  CHECK(traj.status == Status::Converged);
  CHECK(traj.deltas.back() <= 1e-12);
  CHECK(traj.final_iter == static_cast<long>(traj.deltas.size()) - 1);
  // d+p = 2 <= 4: the state track is recorded by default.
  REQUIRE(traj.states.has_value());
  CHECK((*traj.states)[1][0] == doctest::Approx(0.45).epsilon(1e-14));
  CHECK((*traj.states)[1][1] == doctest::Approx(1.175).epsilon(1e-14));
}

TEST_CASE("run: half-step path equals the operator path") {
  const auto g = games::scalar_game(1, 10, 1);
  RunOptions half;
  half.use_half_step = true;
  const auto t1 = dynamics::run(g, {Algorithm::AltGda, 0.05, {}}, {1.0, 1.0}, half);
  const auto t2 = dynamics::run(g, {Algorithm::AltGda, 0.05, {}}, {1.0, 1.0});
  REQUIRE(t1.deltas.size() == t2.deltas.size());
  for (std::size_t t = 0; t < t1.deltas.size(); ++t)
    CHECK(std::abs(t1.deltas[t] - t2.deltas[t]) <= 1e-9 * (1.0 + t2.deltas[t]));

  RunOptions bad;
  bad.use_half_step = true;
  CHECK_THROWS_AS(dynamics::run(g, {Algorithm::SimGda, 0.05, {}}, {1.0, 1.0}, bad),
                  ParameterError);
}

TEST_CASE("run: Sim-GDA diverges on the bilinear game") {
  const auto g = games::scalar_game(0, 10, 0);
  RunOptions opts;
  opts.max_iters = 100000;
  const auto traj = dynamics::run(g, {Algorithm::SimGda, 0.01, {}}, {1.0, 1.0}, opts);
  CHECK(traj.status == Status::Diverged);
  // squared distance grows by the factor 1 + eta^2 sigma^2 = 1.01 per step
  CHECK(traj.deltas[1] / traj.deltas[0] == doctest::Approx(1.01).epsilon(1e-12));
  CHECK(traj.deltas.back() > 1e12);
}

TEST_CASE("run: equilibrium start converges at t = 0") {
  const auto g = games::scalar_game(1, 10, 1);
  const auto traj = dynamics::run(g, {Algorithm::AltGda, 0.05, {}}, {0.0, 0.0});
  CHECK(traj.status == Status::Converged);
  CHECK(traj.final_iter == 0);
  CHECK(traj.deltas == std::vector<double>{0.0});
}

TEST_CASE("run: augmented layouts measure Delta on the z_t half only") {
  const auto g = games::scalar_game(1, 10, 1);
  const auto traj = dynamics::run(g, {Algorithm::OgdaSim, 0.05, {}}, {1.0, 1.0});
  CHECK(traj.deltas[0] == doctest::Approx(2.0));  // not 4.0 from the duplicated buffer
  CHECK(traj.status == Status::Converged);

  const auto nm = dynamics::run(g, {Algorithm::Nm, 0.05, -0.3}, {1.0, 1.0});
  CHECK(nm.deltas[0] == doctest::Approx(2.0));
}

TEST_CASE("run: non-finite state raises a numerical failure naming the last good iterate") {
  // Sim on the bilinear game at eta = 1 grows by ~101x per step; with the
  // ceiling disabled the state overflows to inf within a few hundred steps.
  const auto g = games::scalar_game(0, 10, 0);
  RunOptions opts;
  opts.max_iters = 100000;
  opts.stop = 0.0;
  opts.ceiling = std::numeric_limits<double>::infinity();
  try {
    dynamics::run(g, {Algorithm::SimGda, 1.0, {}}, {1.0, 1.0}, opts);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("last good Delta") != std::string::npos);
    CHECK(std::string(e.what()).find("last good iterate") != std::string::npos);
  }
}

TEST_CASE("run: option validation and max-iters status") {
  const auto g = games::scalar_game(1, 10, 1);
  RunOptions bad;
  bad.stop = 1.0;
  bad.ceiling = 0.5;
  CHECK_THROWS_AS(dynamics::run(g, {Algorithm::AltGda, 0.05, {}}, {1.0, 1.0}, bad),
                  ParameterError);
  CHECK_THROWS_AS(dynamics::run(g, {Algorithm::AltGda, 0.05, {}}, {1.0}, RunOptions{}),
                  DimensionError);

  RunOptions capped;
  capped.max_iters = 3;
  const auto traj = dynamics::run(g, {Algorithm::AltGda, 0.05, {}}, {1.0, 1.0}, capped);
  CHECK(traj.status == Status::MaxIters);
  CHECK(traj.deltas.size() == 4);
}

TEST_CASE("property: run deltas match matrix-power application") {
  for (std::uint64_t seed : {3ull, 14ull, 59ull}) {
    const auto g = oracles::random_scsc(seed, 2, 1, seed % 2 == 0);
    const AlgorithmConfig config{Algorithm::AltGda, 0.07, {}};
    RunOptions opts;
    opts.max_iters = 1000;
    opts.stop = 0.0;
    const auto traj = dynamics::run(g, config, {1.0, -1.0, 0.5}, opts);

    const auto op = operators::build_operator(g, config);
    Matrix power = Matrix::identity(op.dim());
    Vector z0 = {1.0, -1.0, 0.5};
    for (long t = 0; t <= 1000; t += 250) {
      Vector zt = power * z0;
      const double delta = linalg::norm_sq(zt);
      CHECK(std::abs(delta - traj.deltas[static_cast<std::size_t>(t)]) <=
            1e-9 * (1.0 + delta));
      for (int k = 0; k < 250 && t + k < 1000; ++k) power = op.matrix * power;
    }
  }
}

TEST_CASE("estimate_rate: exact geometric input recovers the rate") {
  dynamics::Trajectory traj;
  traj.deltas.resize(200);
  for (std::size_t t = 0; t < traj.deltas.size(); ++t)
    traj.deltas[t] = 2.0 * std::pow(0.9025, static_cast<double>(t));
  const auto est = dynamics::estimate_rate(traj, 0.5);
  CHECK(std::abs(est.rho_hat - 0.95) <= 1e-9);
  CHECK(est.r2 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(est.t0 >= 20);  // first 10% excluded
}

TEST_CASE("estimate_rate: Alt-GDA scalar run sits within 1e-3 of the spectral radius") {
  const auto g = games::scalar_game(1, 10, 1);
  const auto traj = dynamics::run(g, {Algorithm::AltGda, 0.05, {}}, {1.0, 1.0});
  const auto est = dynamics::estimate_rate(traj, 0.5);
  CHECK(std::abs(est.rho_hat - 0.95) <= 1e-3);
}

TEST_CASE("estimate_rate: diverging Sim bilinear run estimates sqrt(1.01)") {
  const auto g = games::scalar_game(0, 10, 0);
  RunOptions opts;
  opts.max_iters = 100000;
  const auto traj = dynamics::run(g, {Algorithm::SimGda, 0.01, {}}, {1.0, 1.0}, opts);
  const auto est = dynamics::estimate_rate(traj, 0.5);
  CHECK(est.rho_hat == doctest::Approx(std::sqrt(1.01)).epsilon(1e-9));
  CHECK(est.rho_hat > 1.0);
}

TEST_CASE("estimate_rate: error paths") {
  dynamics::Trajectory tiny;
  tiny.deltas = {1.0, 0.5, 0.25};
  CHECK_THROWS_AS(dynamics::estimate_rate(tiny, 0.5), ParameterError);

  dynamics::Trajectory zeros;
  zeros.deltas.assign(100, 0.0);
  CHECK_THROWS_AS(dynamics::estimate_rate(zeros, 0.5), ParameterError);
}

TEST_CASE("trajectory_2d: the three single-coordinate games") {
  // SCSC middle game: Sim spirals inward slowly; 100 tuned steps shrink Delta.
  const auto scsc = games::scalar_game(1, 10, 1);
  const auto sim_pts = dynamics::trajectory_2d(scsc, {Algorithm::SimGda, 0.01, {}}, {1, 1}, 100);
  CHECK(sim_pts.size() == 101);
  const double d0 = 2.0;
  const auto& last = sim_pts.back();
  CHECK(last.first * last.first + last.second * last.second < d0);

  // bilinear: Alt stays bounded over 20 steps at eta = 0.08.
  const auto bil = games::scalar_game(0, 10, 0);
  const auto alt_pts = dynamics::trajectory_2d(bil, {Algorithm::AltGda, 0.08, {}}, {1, 1}, 20);
  const auto& b20 = alt_pts.back();
  const double ratio = (b20.first * b20.first + b20.second * b20.second) / d0;
  CHECK(ratio >= 0.5);
  CHECK(ratio <= 2.0);

  // strong concavity in y only: both converge, Alt in 20 steps beats Sim in 100.
  const auto nosc = games::scalar_game(0, 10, 2);
  const auto sim_n = dynamics::trajectory_2d(nosc, {Algorithm::SimGda, 0.01, {}}, {1, 1}, 100);
  const auto alt_n = dynamics::trajectory_2d(nosc, {Algorithm::AltGda, 0.08, {}}, {1, 1}, 20);
  const auto dsq = [](const std::pair<double, double>& z) {
    return z.first * z.first + z.second * z.second;
  };
  CHECK(dsq(alt_n.back()) < dsq(sim_n.back()));
  CHECK(dsq(sim_n.back()) < d0);

  CHECK_THROWS_AS(dynamics::trajectory_2d(oracles::random_scsc(1, 2, 2),
                                          {Algorithm::SimGda, 0.01, {}}, {1, 1}, 10),
                  DimensionError);
}

TEST_CASE("property: rate estimates track the spectral radius on random SCSC runs") {
  int within = 0, total = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const int d = 1 + static_cast<int>(seed % 3);
    const int p = 1 + static_cast<int>((seed / 3) % 3);
    const auto g = oracles::random_scsc(seed * 53, d, p, seed % 2 == 0);
    const auto cb = games::class_bounds(g);
    const AlgorithmConfig config{Algorithm::AltGda, 1.0 / (2.0 * cb.l), {}};
    const double rho = spectral::analyze(g, config).rho;

    SplitMix64 rng(seed * 1009);
    Vector init(static_cast<std::size_t>(d + p));
    for (auto& v : init) v = rng.next_gaussian();
    RunOptions opts;
    opts.max_iters = 200000;
    const auto traj = dynamics::run(g, config, init, opts);
    if (traj.status != Status::Converged) continue;
    const auto est = dynamics::estimate_rate(traj, 0.5);
    ++total;
    if (std::abs(est.rho_hat - rho) <= 0.01 * rho) ++within;
  }
  CHECK(total >= 25);
  CHECK(within == total);
}

TEST_CASE("trajectory CSV: header, row count, formatting") {
  const auto g = games::scalar_game(1, 10, 1);
  RunOptions opts;
  opts.max_iters = 5;
  const auto traj = dynamics::run(g, {Algorithm::AltGda, 0.05, {}}, {1.0, 1.0}, opts);
  std::ostringstream os;
  dynamics::write_trajectory_csv(os, traj, {"gda test", "seed: 1"});
  const auto text = os.str();
  CHECK(text.find("# gda test\n# seed: 1\niter,delta,x,y\n") == 0);
  CHECK(text.find("0,2.0000000000000000e+00,1,1\n") != std::string::npos);
  // one header + 6 data rows
  int rows = 0;
  for (char ch : text)
    if (ch == '\n') ++rows;
  CHECK(rows == 2 + 1 + 6);

  // least_squares degenerate input
  CHECK_THROWS_AS(dynamics::least_squares({1.0}, {2.0}), ParameterError);
  CHECK_THROWS_AS(dynamics::least_squares({1.0, 1.0}, {2.0, 3.0}), ParameterError);
}

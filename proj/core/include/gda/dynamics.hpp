#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gda/games.hpp"
#include "gda/operators.hpp"

namespace gda::dynamics {

using games::QuadraticGame;
using linalg::Vector;
using operators::AlgorithmConfig;

enum class Status { Converged, MaxIters, Diverged };

const char* status_name(Status s);

struct Trajectory {
  AlgorithmConfig config;
  games::Provenance game_ref;
  int d = 0, p = 0;            // player dimensions of the source game
  Vector init;                 // plain z_0 = (x_0, y_0)
  std::vector<double> deltas;  // deltas[t] = Delta_t, starting at Delta_0
  std::optional<std::vector<Vector>> states;  // plain z_t track, when recorded
  Status status = Status::MaxIters;
  long final_iter = 0;  // iteration at which the run stopped
};

struct RunOptions {
  long max_iters = 1'000'000;
  double stop = 1e-12;     // Converged when Delta <= stop
  double ceiling = 1e12;   // Diverged when Delta > ceiling
  // Record the z_t track; defaults to (d + p) <= 4.
  std::optional<bool> record_states;
  // Drive Alt-GDA by the two sequential half updates instead of the operator
  // matrix (Alt-GDA only; both paths agree to rounding).
  bool use_half_step = false;
};

// Iterates the update operator from the plain initial state (augmented
// layouts warm-start with z_{-1} = z_0), recording Delta each step. Delta is
// always measured on the z_t half of the state.
Trajectory run(const QuadraticGame& g, const AlgorithmConfig& config, const Vector& init,
               const RunOptions& opts = {});

struct RateEstimate {
  double rho_hat = 0;
  long t0 = 0, t1 = 0;  // fitted window [t0, t1)
  double r2 = 0;
};

// Least-squares slope s of log Delta_t over the tail window (first 10% always
// excluded); Delta is a squared distance, so rho_hat = exp(s / 2).
RateEstimate estimate_rate(const Trajectory& traj, double tail_fraction = 0.5);

// Raw (x, y) iterate pairs of a 1x1 game, for plotting; identical to run's
// state track with a fixed step count.
std::vector<std::pair<double, double>> trajectory_2d(const QuadraticGame& g,
                                                     const AlgorithmConfig& config,
                                                     std::pair<double, double> init,
                                                     int iters);

// CSV: header "iter,delta[,x,y...]", deltas in scientific notation with 17
// significant digits. Provenance lines are '#'-prefixed and caller-supplied.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::vector<std::string>& provenance_lines = {});

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};

LinearFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace gda::dynamics

#include "gda/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "gda/errors.hpp"

namespace gda::dynamics {

namespace {

double delta_of(const Vector& state, int plain_dim) {
  double acc = 0.0;
  for (int i = 0; i < plain_dim; ++i) acc += state[static_cast<std::size_t>(i)] *
                                              state[static_cast<std::size_t>(i)];
  return acc;
}

void matvec_into(const linalg::Matrix& m, const Vector& in, Vector& out) {
  const int n = m.rows();
  const double* row = m.data().data();
  for (int i = 0; i < n; ++i, row += n) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += row[j] * in[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = acc;
  }
}

}  // namespace

const char* status_name(Status s) {
  switch (s) {
    case Status::Converged: return "converged";
    case Status::MaxIters: return "max-iters";
    case Status::Diverged: return "diverged";
  }
  return "max-iters";
}

Trajectory run(const QuadraticGame& g, const AlgorithmConfig& config, const Vector& init,
               const RunOptions& opts) {
  if (!(opts.stop < opts.ceiling)) throw ParameterError("run: stop must be below ceiling");
  if (opts.max_iters < 0) throw ParameterError("run: max_iters must be >= 0");
  const int plain_dim = g.d() + g.p();
  if (static_cast<int>(init.size()) != plain_dim)
    throw DimensionError("run: init must be the plain (x, y) state");
  if (opts.use_half_step && config.algorithm != operators::Algorithm::AltGda)
    throw ParameterError("run: half-step path is Alt-GDA only");

  const auto op = operators::build_operator(g, config);
  const bool augmented = op.layout == operators::StateLayout::Augmented;
  const bool record =
      opts.record_states ? *opts.record_states : plain_dim <= 4;

  Trajectory traj;
  traj.config = config;
  traj.game_ref = g.provenance;
  traj.d = g.d();
  traj.p = g.p();
  traj.init = init;
  if (record) traj.states.emplace();

  Vector state = augmented ? operators::augment_state(init) : init;
  Vector scratch(state.size());

  double delta = delta_of(state, plain_dim);
  traj.deltas.push_back(delta);
  if (record) traj.states->push_back(Vector(init.begin(), init.end()));
  if (delta <= opts.stop) {
    traj.status = Status::Converged;
    traj.final_iter = 0;
    return traj;
  }
  if (delta > opts.ceiling) {
    traj.status = Status::Diverged;
    traj.final_iter = 0;
    return traj;
  }

  const int d = g.d();
  for (long t = 1; t <= opts.max_iters; ++t) {
    if (opts.use_half_step) {
      Vector x(state.begin(), state.begin() + d);
      Vector y(state.begin() + d, state.end());
      auto [xn, yn] = operators::half_step_alt(g, config.eta, x, y);
      std::copy(xn.begin(), xn.end(), state.begin());
      std::copy(yn.begin(), yn.end(), state.begin() + d);
    } else {
      matvec_into(op.matrix, state, scratch);
      state.swap(scratch);
    }
    delta = delta_of(state, plain_dim);
    if (!std::isfinite(delta)) {
      std::string msg = "run: non-finite state at iteration " + std::to_string(t) +
                        ", last good Delta = " + linalg::format_double(traj.deltas.back());
      if (plain_dim <= 8 && record && !traj.states->empty()) {
        msg += ", last good iterate = (";
        const auto& last = traj.states->back();
        for (std::size_t i = 0; i < last.size(); ++i)
          msg += (i ? ", " : "") + linalg::format_double(last[i]);
        msg += ")";
      }
      throw NumericalError(msg);
    }
    traj.deltas.push_back(delta);
    if (record)
      traj.states->push_back(Vector(state.begin(), state.begin() + plain_dim));
    traj.final_iter = t;
    if (delta <= opts.stop) {
      traj.status = Status::Converged;
      return traj;
    }
    if (delta > opts.ceiling) {
      traj.status = Status::Diverged;
      return traj;
    }
  }
  traj.status = Status::MaxIters;
  traj.final_iter = opts.max_iters;
  return traj;
}

LinearFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw ParameterError("least_squares: need at least two points");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw ParameterError("least_squares: degenerate abscissa");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.slope * xs[i] + fit.intercept);
    ss_res += e * e;
    ss_tot += (ys[i] - my) * (ys[i] - my);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

RateEstimate estimate_rate(const Trajectory& traj, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
    throw ParameterError("estimate_rate: tail_fraction must be in (0, 1]");
  const long n = static_cast<long>(traj.deltas.size());
  // First 10% of the run is always excluded (transients).
  const long burn_in = (n + 9) / 10;
  long t0 = std::max(burn_in, n - static_cast<long>(std::floor(tail_fraction * n)));
  const long t1 = n;
  if (t1 - t0 < 10) throw ParameterError("estimate_rate: fewer than 10 tail points");

  std::vector<double> ts, ys;
  for (long t = t0; t < t1; ++t) {
    const double d = traj.deltas[static_cast<std::size_t>(t)];
    if (d <= 0.0)
      throw ParameterError("estimate_rate: zero Delta inside the fit window");
    ts.push_back(static_cast<double>(t));
    ys.push_back(std::log(d));
  }
  const auto fit = least_squares(ts, ys);
  RateEstimate est;
  // Delta is a squared distance: per-step state contraction is exp(slope/2).
  est.rho_hat = std::exp(0.5 * fit.slope);
  est.t0 = t0;
  est.t1 = t1;
  est.r2 = fit.r2;
  return est;
}

std::vector<std::pair<double, double>> trajectory_2d(const QuadraticGame& g,
                                                     const AlgorithmConfig& config,
                                                     std::pair<double, double> init,
                                                     int iters) {
  if (g.d() != 1 || g.p() != 1) throw DimensionError("trajectory_2d: requires d = p = 1");
  if (iters < 0) throw ParameterError("trajectory_2d: iters must be >= 0");
  RunOptions opts;
  opts.max_iters = iters;
  opts.stop = 0.0;
  opts.ceiling = std::numeric_limits<double>::infinity();
  opts.record_states = true;
  const auto traj = run(g, config, {init.first, init.second}, opts);
  std::vector<std::pair<double, double>> points;
  points.reserve(traj.states->size());
  for (const auto& s : *traj.states) points.emplace_back(s[0], s[1]);
  return points;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::vector<std::string>& provenance_lines) {
  for (const auto& line : provenance_lines) os << "# " << line << '\n';
  const bool with_states = traj.states.has_value() && !traj.states->empty();
  os << "iter,delta";
  if (with_states) {
    // The 1x1 game gets the short x,y header; otherwise per-player indices.
    if (traj.d == 1 && traj.p == 1) {
      os << ",x,y";
    } else {
      for (int i = 0; i < traj.d; ++i) os << ",x" << i;
      for (int i = 0; i < traj.p; ++i) os << ",y" << i;
    }
  }
  os << '\n';
  for (std::size_t t = 0; t < traj.deltas.size(); ++t) {
    os << t << ',' << linalg::format_double_scientific(traj.deltas[t]);
    if (with_states)
      for (double v : (*traj.states)[t]) os << ',' << linalg::format_double(v);
    os << '\n';
  }
}

}  // namespace gda::dynamics

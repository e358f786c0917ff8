#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "gda/dynamics.hpp"
#include "gda/errors.hpp"
#include "gda/spectral.hpp"
#include "gda/version.hpp"

namespace gda::cli {

namespace {

using dynamics::RunOptions;
using games::QuadraticGame;
using linalg::format_double;
using operators::Algorithm;
using operators::AlgorithmConfig;
using operators::algorithm_name;

std::string underscored(Algorithm a) {
  std::string name = algorithm_name(a);
  for (char& ch : name)
    if (ch == '-') ch = '_';
  return name;
}

std::string provenance_block(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += "# " + l + "\n";
  return out;
}

std::string trajectory_csv(const dynamics::Trajectory& traj,
                           const std::vector<std::string>& provenance) {
  std::ostringstream os;
  dynamics::write_trajectory_csv(os, traj, provenance);
  return os.str();
}

// First iteration whose Delta reaches the threshold, -1 if never.
long iters_to_threshold(const std::vector<double>& deltas, double threshold) {
  for (std::size_t t = 0; t < deltas.size(); ++t)
    if (deltas[t] <= threshold) return static_cast<long>(t);
  return -1;
}

}  // namespace

std::vector<std::string> base_provenance(const Context& ctx) {
  return {std::string("gda ") + kVersion, "command: " + ctx.command_line,
          "seed: " + std::to_string(ctx.seed)};
}

std::vector<std::string> game_provenance(const games::Provenance& prov) {
  return {"game: generator=" + prov.generator + " seed=" + std::to_string(prov.seed),
          "game-params: " + prov.params};
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os << content;
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

int cmd_fig1(const Context& ctx) {
  std::filesystem::create_directories(ctx.out);
  // Single-coordinate games: coupling 10, with the three curvature patterns.
  const struct {
    const char* tag;
    double a, c;
  } game_rows[] = {{"bilinear", 0.0, 0.0}, {"scsc", 1.0, 1.0}, {"nosc", 0.0, 2.0}};
  const struct {
    const char* tag;
    Algorithm algo;
    double eta;
    long steps;
  } runs[] = {{"sim", Algorithm::SimGda, 0.01, 100}, {"alt", Algorithm::AltGda, 0.08, 20}};

  for (const auto& gr : game_rows) {
    const auto g = games::scalar_game(gr.a, 10.0, gr.c);
    for (const auto& r : runs) {
      RunOptions opts;
      opts.max_iters = r.steps;
      opts.stop = 0.0;
      opts.ceiling = std::numeric_limits<double>::infinity();
      opts.record_states = true;
      const auto traj = dynamics::run(g, {r.algo, r.eta, {}}, {1.0, 1.0}, opts);
      auto prov = base_provenance(ctx);
      prov.push_back(std::string("figure: fig1 ") + gr.tag);
      prov.push_back("objective: 0.5*" + format_double(gr.a) + "*x^2 + 10*x*y - 0.5*" +
                     format_double(gr.c) + "*y^2");
      prov.push_back(std::string("algorithm: ") + algorithm_name(r.algo) +
                     " eta=" + format_double(r.eta) + " steps=" + std::to_string(r.steps));
      prov.push_back("init: x0=1 y0=1");
      write_text_file(ctx.out / (std::string(r.tag) + "_" + gr.tag + ".csv"),
                      trajectory_csv(traj, prov));
    }
  }
  std::cout << "fig1: wrote 6 trajectory files to " << ctx.out.string() << "\n";
  return 0;
}

int cmd_fig2(const Context& ctx) {
  std::filesystem::create_directories(ctx.out);
  // f(x, y) = 0.3 x^2 + 1.2 x y - 0.3 y^2  ->  a = c = 0.6, b = 1.2.
  const auto g = games::scalar_game(0.6, 1.2, 0.6);
  const auto etas = linalg::logspace(1e-3, 1.0, 100);

  auto prov = base_provenance(ctx);
  prov.push_back("figure: fig2  game: a=0.6 b=1.2 c=0.6");
  prov.push_back("eta-sweep: 100 log-spaced points on [1e-3, 1]");

  std::string eig_csv = provenance_block(prov) + "algo,eta,re,im\n";
  std::string circles_csv = provenance_block(prov) + "algo,eta_star,radius\n";

  for (Algorithm algo : {Algorithm::SimGda, Algorithm::AltGda}) {
    double best_rho = std::numeric_limits<double>::infinity();
    double best_eta = etas.front();
    for (double eta : etas) {
      const auto report = spectral::analyze(g, {algo, eta, {}});
      for (const auto& v : report.spectrum.values)
        eig_csv += std::string(algorithm_name(algo)) + "," + format_double(eta) + "," +
                   format_double(v.real()) + "," + format_double(v.imag()) + "\n";
      if (report.rho < best_rho) {
        best_rho = report.rho;
        best_eta = eta;
      }
    }
    circles_csv += std::string(algorithm_name(algo)) + "," + format_double(best_eta) + "," +
                   format_double(best_rho) + "\n";
  }
  write_text_file(ctx.out / "fig2_eigenvalues.csv", eig_csv);
  write_text_file(ctx.out / "fig2_circles.csv", circles_csv);
  std::cout << "fig2: wrote eigenvalue sweep and convergence circles to " << ctx.out.string()
            << "\n";
  return 0;
}

int cmd_fig3_left(const Context& ctx, const Fig3LeftOptions& opts) {
  std::filesystem::create_directories(ctx.out);
  const auto g = games::gen_scsc(opts.dim, ctx.seed, opts.coupling_std);
  const auto cb = games::class_bounds(g);
  if (!cb.kappa) throw RegimeError("fig3-left: generated game has no condition number");
  const double kappa = *cb.kappa;

  std::vector<Algorithm> algos = {Algorithm::SimGda, Algorithm::AltGda, Algorithm::Eg,
                                  Algorithm::OgdaSim, Algorithm::Nm};
  if (opts.include_ogda_alt) algos.push_back(Algorithm::OgdaAlt);

  const auto eta_grid = spectral::default_eta_grid();
  const auto beta_grid = spectral::default_beta_grid();
  const linalg::Vector init(static_cast<std::size_t>(g.d() + g.p()), 1.0);

  std::string summary = provenance_block(base_provenance(ctx)) +
                        provenance_block(game_provenance(g.provenance)) +
                        "# kappa (class bounds): " + format_double(kappa) + "\n" +
                        "# ogda-alt rows are an extension beyond the five-method figure\n" +
                        "algo,eta_star,beta_star,rho_star,iters_to_1e-10,rho_hat,fit_r2,"
                        "status,final_iter\n";

  long max_recorded = 0;
  for (Algorithm algo : algos) {
    const auto tuned = spectral::tune(g, algo, eta_grid,
                                      algo == Algorithm::Nm ? beta_grid
                                                            : std::vector<double>{});
    RunOptions ropts;
    ropts.max_iters = opts.max_iters;
    ropts.stop = opts.stop;
    ropts.record_states = false;
    const auto traj = dynamics::run(g, tuned.best_config, init, ropts);
    max_recorded = std::max(max_recorded, static_cast<long>(traj.deltas.size()) - 1);

    auto prov = base_provenance(ctx);
    for (auto& l : game_provenance(g.provenance)) prov.push_back(l);
    prov.push_back(std::string("figure: fig3-left  algorithm: ") + algorithm_name(algo));
    prov.push_back("tuned: eta=" + format_double(tuned.best_config.eta) +
                   (tuned.best_config.beta
                        ? " beta=" + format_double(*tuned.best_config.beta)
                        : std::string()) +
                   " rho=" + format_double(tuned.best_report.rho));
    if (algo == Algorithm::OgdaSim || algo == Algorithm::OgdaAlt || algo == Algorithm::Nm)
      prov.push_back("layout: augmented (warm start z_prev = z0)");
    if (algo == Algorithm::OgdaAlt)
      prov.push_back("note: extra algorithm beyond the five-method set");
    write_text_file(ctx.out / (underscored(algo) + ".csv"), trajectory_csv(traj, prov));

    std::string rho_hat = "-", fit_r2 = "-";
    try {
      const auto est = dynamics::estimate_rate(traj, 0.5);
      rho_hat = format_double(est.rho_hat);
      fit_r2 = format_double(est.r2);
    } catch (const ParameterError&) {
      // short or flat runs have no usable tail; keep the placeholder
    }
    summary += std::string(algorithm_name(algo)) + "," +
               format_double(tuned.best_config.eta) + "," +
               (tuned.best_config.beta ? format_double(*tuned.best_config.beta)
                                       : std::string()) +
               "," + format_double(tuned.best_report.rho) + "," +
               std::to_string(iters_to_threshold(traj.deltas, 1e-10)) + "," + rho_hat + "," +
               fit_r2 + "," + dynamics::status_name(traj.status) + "," +
               std::to_string(traj.final_iter) + "\n";
  }

  // Worst-case reference curve Delta_0 (1 - 1/kappa)^t.
  {
    auto prov = base_provenance(ctx);
    prov.push_back("figure: fig3-left reference curve Delta0*(1-1/kappa)^t, kappa=" +
                   format_double(kappa));
    std::string ref = provenance_block(prov) + "iter,delta\n";
    const double delta0 = linalg::norm_sq(init);
    double value = delta0;
    const double rate = 1.0 - 1.0 / kappa;
    for (long t = 0; t <= max_recorded; ++t) {
      ref += std::to_string(t) + "," + linalg::format_double_scientific(value) + "\n";
      value *= rate;
    }
    write_text_file(ctx.out / "reference.csv", ref);
  }
  write_text_file(ctx.out / "summary.csv", summary);
  std::cout << "fig3-left: wrote " << algos.size() << " curves + reference + summary to "
            << ctx.out.string() << "\n";
  return 0;
}

int cmd_fig3_right(const Context& ctx, const Fig3RightOptions& opts) {
  std::filesystem::create_directories(ctx.out);
  if (opts.n_min < 3.16 || opts.n_max > 1000.0)
    throw ParameterError("fig3-right: N values must lie within [sqrt(10), 1e3]");

  std::vector<Algorithm> algos = {Algorithm::SimGda, Algorithm::AltGda, Algorithm::Eg,
                                  Algorithm::OgdaSim, Algorithm::Nm};
  if (opts.include_ogda_alt) algos.push_back(Algorithm::OgdaAlt);

  const auto eta_grid = spectral::default_eta_grid();
  const auto beta_grid = spectral::default_beta_grid();
  const auto n_values = linalg::logspace(opts.n_min, opts.n_max, opts.n_count);

  auto prov = base_provenance(ctx);
  prov.push_back("figure: fig3-right  dim=" + std::to_string(opts.dim) + " n-count=" +
                 std::to_string(opts.n_count) + " seeds=" + std::to_string(opts.num_seeds));
  prov.push_back("seeds: " + std::to_string(ctx.seed) + ".." +
                 std::to_string(ctx.seed + static_cast<std::uint64_t>(opts.num_seeds) - 1));
  if (opts.include_ogda_alt)
    prov.push_back("ogda-alt rows are an extension beyond the five-method figure");

  std::string scaling = provenance_block(prov) +
                        "kappa,algo,rho,inv_neg_log_rho,eta_star,beta_star,seed,n_param\n";
  std::vector<std::pair<double, double>> fit_points;  // per-algo (log kappa, log -1/log rho)
  std::string slopes = provenance_block(prov) + "algo,slope,intercept,r2,n_points\n";

  struct Row {
    double kappa, rho, inv_neg_log;
  };
  std::vector<std::vector<Row>> rows(algos.size());

  for (double n_param : n_values) {
    for (int s = 0; s < opts.num_seeds; ++s) {
      const std::uint64_t seed = ctx.seed + static_cast<std::uint64_t>(s);
      const auto g = games::gen_scaling_instance(opts.dim, n_param, seed);
      const double kappa = games::condition_number_empirical(g);
      for (std::size_t ai = 0; ai < algos.size(); ++ai) {
        const Algorithm algo = algos[ai];
        const auto tuned = spectral::tune(g, algo, eta_grid,
                                          algo == Algorithm::Nm ? beta_grid
                                                                : std::vector<double>{});
        const double rho = tuned.best_report.rho;
        const double inv_neg_log = rho < 1.0 ? -1.0 / std::log(rho)
                                             : std::numeric_limits<double>::quiet_NaN();
        if (rho < 1.0) rows[ai].push_back({kappa, rho, inv_neg_log});
        scaling += format_double(kappa) + "," + algorithm_name(algo) + "," +
                   format_double(rho) + "," + format_double(inv_neg_log) + "," +
                   format_double(tuned.best_config.eta) + "," +
                   (tuned.best_config.beta ? format_double(*tuned.best_config.beta)
                                           : std::string()) +
                   "," + std::to_string(seed) + "," + format_double(n_param) + "\n";
      }
    }
  }

  for (std::size_t ai = 0; ai < algos.size(); ++ai) {
    std::vector<double> xs, ys;
    for (const auto& r : rows[ai]) {
      xs.push_back(std::log(r.kappa));
      ys.push_back(std::log(r.inv_neg_log));
    }
    if (xs.size() < 2) continue;
    const auto fit = dynamics::least_squares(xs, ys);
    slopes += std::string(algorithm_name(algos[ai])) + "," + format_double(fit.slope) + "," +
              format_double(fit.intercept) + "," + format_double(fit.r2) + "," +
              std::to_string(xs.size()) + "\n";
  }

  write_text_file(ctx.out / "scaling.csv", scaling);
  write_text_file(ctx.out / "slopes.csv", slopes);
  std::cout << "fig3-right: wrote scaling.csv (" << n_values.size() << " N-values x "
            << opts.num_seeds << " seeds) and slopes.csv to " << ctx.out.string() << "\n";
  return 0;
}

}  // namespace gda::cli

// gda: spectral analysis and benchmarking of gradient descent-ascent variants
// on quadratic minimax games.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "experiments.hpp"
#include "gda/dynamics.hpp"
#include "gda/errors.hpp"
#include "gda/spectral.hpp"
#include "gda/version.hpp"

namespace {

using namespace gda;
using cli::Context;
using cli::write_text_file;
using games::QuadraticGame;
using operators::Algorithm;
using operators::AlgorithmConfig;

std::string join_args(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Flat key=value config support with flags-over-file precedence: file entries
// are appended as options unless the flag already appears on the command line.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;

  std::ifstream is(config_path);
  if (!is) throw IoError("cannot open config file '" + config_path + "'");
  const auto has_flag = [&args](const std::string& flag) {
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
  };
  std::vector<std::string> out = args;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto text = trimmed(line);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ParseError(config_path + ":" + std::to_string(lineno) +
                       ": expected key=value, got '" + text + "'");
    const auto key = trimmed(text.substr(0, eq));
    const auto value = trimmed(text.substr(eq + 1));
    if (key.empty())
      throw ParseError(config_path + ":" + std::to_string(lineno) + ": empty key");
    const std::string flag = "--" + key;
    if (!has_flag(flag)) out.push_back(flag + "=" + value);
  }
  return out;
}

// Game source flags shared by spectrum/tune/run/check.
struct GameFlags {
  std::string game_file;
  std::string generator;
  int dim = 2;
  int dim_p = 0;  // 0: same as dim
  double coupling_std = 0.1;
  double n_max = 10.0;
  double a = 0.0, b = 0.0, c = 0.0;

  void attach(CLI::App* app) {
    app->add_option("--game-file", game_file, "load the game from a gda-game file");
    app->add_option("--gen", generator,
                    "generator: scsc | scaling | bilinear | nosc (uses --seed)")
        ->check(CLI::IsMember({"scsc", "scaling", "bilinear", "nosc"}));
    app->add_option("--dim", dim, "generator primal dimension")->check(CLI::PositiveNumber);
    app->add_option("--dim-p", dim_p, "generator dual dimension (default: --dim)");
    app->add_option("--coupling-std", coupling_std, "gen scsc: std of the coupling entries");
    app->add_option("--n-max", n_max, "gen scaling: largest n in the eigenvalue grid");
    app->add_option("--a", a, "scalar game: A coefficient");
    app->add_option("--b", b, "scalar game: B coefficient");
    app->add_option("--c", c, "scalar game: C coefficient");
  }

  QuadraticGame build(std::uint64_t seed) const {
    if (!game_file.empty()) {
      std::ifstream is(game_file);
      if (!is) throw IoError("cannot open game file '" + game_file + "'");
      return games::read_game(is);
    }
    if (!generator.empty()) {
      const int p = dim_p > 0 ? dim_p : dim;
      if (generator == "scsc") return games::gen_scsc(dim, seed, coupling_std);
      if (generator == "scaling") return games::gen_scaling_instance(dim, n_max, seed);
      if (generator == "bilinear") return games::gen_bilinear(dim, p, seed);
      if (generator == "nosc") return games::gen_strong_concave_only(dim, p, seed);
      throw ParameterError("unknown generator '" + generator + "'");
    }
    return games::scalar_game(a, b, c);
  }
};

std::vector<double> parse_values(const std::string& spec, const char* what) {
  std::vector<double> out;
  std::istringstream is(spec);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if (tok.empty()) continue;
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ParameterError(std::string(what) + ": bad value '" + tok + "'");
    }
  }
  if (out.empty()) throw ParameterError(std::string(what) + ": empty list '" + spec + "'");
  return out;
}

// "log:LO:HI:N", "lin:LO:HI:N", or comma-separated explicit values.
std::vector<double> parse_grid(const std::string& spec, const char* what) {
  if (spec.rfind("log:", 0) == 0 || spec.rfind("lin:", 0) == 0) {
    std::string rest = spec.substr(4);
    for (char& ch : rest)
      if (ch == ':') ch = ',';
    const auto vals = parse_values(rest, what);
    if (vals.size() != 3)
      throw ParameterError(std::string(what) + ": grid spec needs LO:HI:N, got '" + spec +
                           "'");
    const int count = static_cast<int>(vals[2]);
    return spec[1] == 'o' ? linalg::logspace(vals[0], vals[1], count)
                          : linalg::linspace(vals[0], vals[1], count);
  }
  return parse_values(spec, what);
}

std::vector<Algorithm> parse_algos(const std::vector<std::string>& names,
                                   Algorithm fallback) {
  if (names.empty()) return {fallback};
  std::vector<Algorithm> out;
  for (const auto& n : names) out.push_back(operators::parse_algorithm(n));
  return out;
}

std::string underscored_name(Algorithm a) {
  std::string s = operators::algorithm_name(a);
  for (char& ch : s)
    if (ch == '-') ch = '_';
  return s;
}

std::string report_file_text(const Context& ctx, const QuadraticGame& g,
                             const spectral::SpectralReport& report) {
  std::ostringstream os;
  for (const auto& l : cli::base_provenance(ctx)) os << "# " << l << '\n';
  for (const auto& l : cli::game_provenance(g.provenance)) os << "# " << l << '\n';
  spectral::write_report(os, report);
  return os.str();
}

int run_spectrum(const Context& ctx, const GameFlags& gf,
                 const std::vector<std::string>& algo_names, double eta,
                 std::optional<double> beta) {
  const auto g = gf.build(ctx.seed);
  std::filesystem::create_directories(ctx.out);
  for (Algorithm algo : parse_algos(algo_names, Algorithm::SimGda)) {
    AlgorithmConfig config{algo, eta, algo == Algorithm::Nm ? beta : std::nullopt};
    const auto report = spectral::analyze(g, config);
    write_text_file(ctx.out / ("spectrum_" + underscored_name(algo) + ".txt"),
                    report_file_text(ctx, g, report));
    std::cout << operators::algorithm_name(algo) << " eta=" << linalg::format_double(eta)
              << " rho=" << linalg::format_double(report.rho) << "\n";
  }
  return 0;
}

int run_tune(const Context& ctx, const GameFlags& gf,
             const std::vector<std::string>& algo_names, const std::string& eta_grid_spec,
             const std::string& beta_grid_spec) {
  const auto g = gf.build(ctx.seed);
  std::filesystem::create_directories(ctx.out);
  const auto eta_grid = eta_grid_spec.empty() ? spectral::default_eta_grid()
                                              : parse_grid(eta_grid_spec, "--eta-grid");
  for (Algorithm algo : parse_algos(algo_names, Algorithm::SimGda)) {
    std::vector<double> beta_grid;
    if (algo == Algorithm::Nm)
      beta_grid = beta_grid_spec.empty() ? spectral::default_beta_grid()
                                         : parse_grid(beta_grid_spec, "--beta-grid");
    const auto tuned = spectral::tune(g, algo, eta_grid, beta_grid);
    std::ostringstream os;
    for (const auto& l : cli::base_provenance(ctx)) os << "# " << l << '\n';
    for (const auto& l : cli::game_provenance(g.provenance)) os << "# " << l << '\n';
    os << "eta_star " << linalg::format_double(tuned.best_config.eta) << '\n';
    os << "beta_star "
       << (tuned.best_config.beta ? linalg::format_double(*tuned.best_config.beta)
                                  : std::string("-"))
       << '\n';
    os << "rho_star " << linalg::format_double(tuned.best_report.rho) << '\n';
    spectral::write_report(os, tuned.best_report);
    write_text_file(ctx.out / ("tune_" + underscored_name(algo) + ".txt"), os.str());
    std::cout << operators::algorithm_name(algo)
              << ": eta*=" << linalg::format_double(tuned.best_config.eta)
              << (tuned.best_config.beta
                      ? " beta*=" + linalg::format_double(*tuned.best_config.beta)
                      : std::string())
              << " rho*=" << linalg::format_double(tuned.best_report.rho) << "\n";
  }
  return 0;
}

int run_run(const Context& ctx, const GameFlags& gf,
            const std::vector<std::string>& algo_names, double eta,
            std::optional<double> beta, std::optional<long> steps, long max_iters,
            double stop, double ceiling, const std::string& init_spec) {
  const auto g = gf.build(ctx.seed);
  std::filesystem::create_directories(ctx.out);
  linalg::Vector init(static_cast<std::size_t>(g.d() + g.p()), 1.0);
  if (!init_spec.empty()) {
    const auto vals = parse_values(init_spec, "--init");
    if (static_cast<int>(vals.size()) != g.d() + g.p())
      throw ParameterError("--init must supply d+p components");
    init = vals;
  }
  for (Algorithm algo : parse_algos(algo_names, Algorithm::SimGda)) {
    AlgorithmConfig config{algo, eta, algo == Algorithm::Nm ? beta : std::nullopt};
    dynamics::RunOptions opts;
    if (steps) {
      opts.max_iters = *steps;
      opts.stop = 0.0;
      opts.ceiling = std::numeric_limits<double>::infinity();
    } else {
      opts.max_iters = max_iters;
      opts.stop = stop;
      opts.ceiling = ceiling;
    }
    const auto traj = dynamics::run(g, config, init, opts);
    auto prov = cli::base_provenance(ctx);
    for (auto& l : cli::game_provenance(g.provenance)) prov.push_back(l);
    prov.push_back(std::string("algorithm: ") + operators::algorithm_name(algo) +
                   " eta=" + linalg::format_double(eta) +
                   (config.beta ? " beta=" + linalg::format_double(*config.beta)
                                : std::string()));
    if (algo == Algorithm::OgdaSim || algo == Algorithm::OgdaAlt || algo == Algorithm::Nm)
      prov.push_back("layout: augmented (warm start z_prev = z0)");
    prov.push_back(std::string("status: ") + dynamics::status_name(traj.status) +
                   " at iter " + std::to_string(traj.final_iter));
    std::ostringstream os;
    dynamics::write_trajectory_csv(os, traj, prov);
    write_text_file(ctx.out / ("run_" + underscored_name(algo) + ".csv"), os.str());
    std::cout << operators::algorithm_name(algo) << ": " << dynamics::status_name(traj.status)
              << " final Delta=" << linalg::format_double(traj.deltas.back()) << " after "
              << traj.final_iter << " iters\n";
  }
  return 0;
}

int run_check(const Context& ctx, const GameFlags& gf, const std::string& theorem,
              double eta) {
  const auto g = gf.build(ctx.seed);
  std::filesystem::create_directories(ctx.out);
  const auto id = spectral::parse_theorem(theorem);
  const auto bounds = spectral::check_theorem(g, eta, id);
  const Algorithm algo =
      (id == spectral::TheoremId::BilinearAlt || id == spectral::TheoremId::AltScsc ||
       id == spectral::TheoremId::AltNoSc)
          ? Algorithm::AltGda
          : Algorithm::SimGda;
  auto report = spectral::analyze(g, {algo, eta, {}});
  report.bounds = bounds;
  write_text_file(ctx.out / ("check_" + theorem + ".txt"), report_file_text(ctx, g, report));
  std::cout << theorem << ": " << (bounds.pass ? "pass" : "FAIL")
            << " rho=" << linalg::format_double(report.rho)
            << (bounds.slack ? " slack=" + linalg::format_double(*bounds.slack)
                             : std::string())
            << "\n";
  return bounds.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral analysis of gradient descent-ascent on quadratic minimax games"};
  app.set_version_flag("--version", std::string("gda ") + gda::kVersion);
  app.require_subcommand(1);

  Context ctx;
  ctx.command_line = join_args(argc, argv);

  std::string config_path;  // handled by expand_config before parsing
  const auto add_common = [&ctx, &config_path](CLI::App* sub) {
    sub->add_option("--seed", ctx.seed, "experiment seed")->capture_default_str();
    sub->add_option("--out", ctx.out, "output directory")->capture_default_str();
    sub->add_option("--config", config_path,
                    "flat key=value config file (flags take precedence)");
  };

  // spectrum
  auto* sp = app.add_subcommand("spectrum", "eigenvalues and spectral radius of an operator");
  GameFlags sp_game;
  sp_game.attach(sp);
  add_common(sp);
  std::vector<std::string> sp_algos;
  double sp_eta = 0.1;
  double sp_beta = -0.5;
  sp->add_option("--algo", sp_algos, "algorithm (repeatable)");
  sp->add_option("--eta", sp_eta, "step size")->capture_default_str();
  sp->add_option("--beta", sp_beta, "nm momentum")->capture_default_str();

  // tune
  auto* tn = app.add_subcommand("tune", "grid-search the step size (and nm momentum)");
  GameFlags tn_game;
  tn_game.attach(tn);
  add_common(tn);
  std::vector<std::string> tn_algos;
  std::string tn_eta_grid, tn_beta_grid;
  tn->add_option("--algo", tn_algos, "algorithm (repeatable)");
  tn->add_option("--eta-grid", tn_eta_grid, "log:LO:HI:N | lin:LO:HI:N | v1,v2,...");
  tn->add_option("--beta-grid", tn_beta_grid, "nm momentum grid (same syntax)");

  // run
  auto* rn = app.add_subcommand("run", "iterate an algorithm and record Delta_t");
  GameFlags rn_game;
  rn_game.attach(rn);
  add_common(rn);
  std::vector<std::string> rn_algos;
  double rn_eta = 0.1, rn_stop = 1e-12, rn_ceiling = 1e12;
  double rn_beta = -0.5;
  long rn_max_iters = 1000000;
  std::optional<long> rn_steps;
  std::string rn_init;
  rn->add_option("--algo", rn_algos, "algorithm (repeatable)");
  rn->add_option("--eta", rn_eta, "step size")->capture_default_str();
  rn->add_option("--beta", rn_beta, "nm momentum")->capture_default_str();
  rn->add_option("--steps", rn_steps, "run exactly this many steps (no stopping rule)");
  rn->add_option("--max-iters", rn_max_iters, "iteration cap")->capture_default_str();
  rn->add_option("--stop", rn_stop, "convergence threshold on Delta")->capture_default_str();
  rn->add_option("--ceiling", rn_ceiling, "divergence ceiling on Delta")
      ->capture_default_str();
  rn->add_option("--init", rn_init, "comma-separated initial state (default: all ones)");

  // check
  auto* ck = app.add_subcommand("check", "theorem bound checker (nonzero exit on violation)");
  GameFlags ck_game;
  ck_game.attach(ck);
  add_common(ck);
  std::string ck_theorem;
  double ck_eta = 0.05;
  ck->add_option("--theorem", ck_theorem,
                 "bilinear_sim | bilinear_alt | sim_scsc | alt_scsc | sim_nosc | alt_nosc")
      ->required();
  ck->add_option("--eta", ck_eta, "step size")->capture_default_str();

  // figures
  auto* f1 = app.add_subcommand("fig1", "trajectories on the three 1x1 games");
  add_common(f1);

  auto* f2 = app.add_subcommand("fig2", "eigenvalue sweep and convergence circles");
  add_common(f2);

  auto* f3l = app.add_subcommand("fig3-left", "tuned convergence curves on the d=100 game");
  add_common(f3l);
  gda::cli::Fig3LeftOptions f3l_opts;
  f3l->add_option("--dim", f3l_opts.dim, "game dimension")->capture_default_str();
  f3l->add_option("--coupling-std", f3l_opts.coupling_std, "coupling entry std")
      ->capture_default_str();
  f3l->add_option("--max-iters", f3l_opts.max_iters, "iteration cap")->capture_default_str();
  f3l->add_option("--stop", f3l_opts.stop, "convergence threshold")->capture_default_str();
  f3l->add_flag("!--no-ogda-alt", f3l_opts.include_ogda_alt, "drop the ogda-alt extension");

  auto* f3r = app.add_subcommand("fig3-right", "iteration complexity vs condition number");
  add_common(f3r);
  gda::cli::Fig3RightOptions f3r_opts;
  f3r->add_option("--dim", f3r_opts.dim, "game dimension")->capture_default_str();
  f3r->add_option("--n-count", f3r_opts.n_count, "number of N values")->capture_default_str();
  f3r->add_option("--n-min", f3r_opts.n_min, "smallest N")->capture_default_str();
  f3r->add_option("--n-max", f3r_opts.n_max, "largest N")->capture_default_str();
  f3r->add_option("--seeds", f3r_opts.num_seeds, "seeds per N (base --seed)")
      ->capture_default_str();
  f3r->add_flag("!--no-ogda-alt", f3r_opts.include_ogda_alt, "drop the ogda-alt extension");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(args);
    std::reverse(args.begin(), args.end());  // CLI11 consumes reversed args
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const gda::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (sp->parsed())
      return run_spectrum(ctx, sp_game, sp_algos, sp_eta,
                          sp->count("--beta") ? std::optional<double>(sp_beta)
                                              : std::nullopt);
    if (tn->parsed()) return run_tune(ctx, tn_game, tn_algos, tn_eta_grid, tn_beta_grid);
    if (rn->parsed())
      return run_run(ctx, rn_game, rn_algos, rn_eta,
                     rn->count("--beta") ? std::optional<double>(rn_beta) : std::nullopt,
                     rn_steps, rn_max_iters, rn_stop, rn_ceiling, rn_init);
    if (ck->parsed()) return run_check(ctx, ck_game, ck_theorem, ck_eta);
    if (f1->parsed()) return gda::cli::cmd_fig1(ctx);
    if (f2->parsed()) return gda::cli::cmd_fig2(ctx);
    if (f3l->parsed()) return gda::cli::cmd_fig3_left(ctx, f3l_opts);
    if (f3r->parsed()) return gda::cli::cmd_fig3_right(ctx, f3r_opts);
  } catch (const gda::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gda/games.hpp"

namespace gda::cli {

struct Context {
  std::string command_line;
  std::uint64_t seed = 1;
  std::filesystem::path out = "out";
};

// Provenance comment lines shared by every output file.
std::vector<std::string> base_provenance(const Context& ctx);
std::vector<std::string> game_provenance(const games::Provenance& prov);

void write_text_file(const std::filesystem::path& path, const std::string& content);

int cmd_fig1(const Context& ctx);
int cmd_fig2(const Context& ctx);

struct Fig3LeftOptions {
  int dim = 100;
  double coupling_std = 0.01;  // class-bound kappa of exactly 100 at dim=100
  long max_iters = 100000;
  double stop = 1e-12;
  bool include_ogda_alt = true;
};
int cmd_fig3_left(const Context& ctx, const Fig3LeftOptions& opts);

struct Fig3RightOptions {
  int dim = 20;
  int n_count = 12;
  double n_min = 3.1622776601683795;  // sqrt(10)
  double n_max = 1000.0;
  int num_seeds = 5;
  bool include_ogda_alt = true;
};
int cmd_fig3_right(const Context& ctx, const Fig3RightOptions& opts);

}  // namespace gda::cli

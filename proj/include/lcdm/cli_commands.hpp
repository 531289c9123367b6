#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lcdm/dataset.hpp"
#include "lcdm/mc.hpp"

// Command implementations, kept separate from main() so they are unit-testable
// in-process. Each run_* maps errors to the CLI exit codes:
//   0 success, 2 input parse error, 3 semantic/config error, 4 numerical error.
namespace lcdm::cli {

struct LcdmArgs {
  std::string mesh_path;
  std::string grid_path;
  std::string out_path;
  int threads = 0;
};

struct PooledArgs {
  std::string distances_path;
  std::string out_prefix;            // writes <prefix>_{descriptives,omnibus,pairwise}.csv
  double trim_lo = -0.5;
  double trim_hi = 5.5;
  std::vector<std::string> tests;    // empty = full roster
  std::string correction = "holm";   // pairwise family correction
  double alpha = 0.05;
};

struct CensorArgs {
  std::string distances_path;
  std::string out_path;              // curve CSV
  double delta = 0.01;
  double d_max = 5.5;
  double analysis_lo = 0.5;
  double trim_lo = -0.5;
  double trim_hi = 5.5;
  std::vector<std::string> tests;    // empty = full roster
  std::string correction = "bh";
  std::string alternative = "two";   // pairwise direction(s)
  std::size_t min_n = 10;
};

struct SimulateArgs {
  std::string case_name = "null_l";
  std::string mode = "pooled";       // pooled | censor
  std::array<std::size_t, 3> sizes = {1000, 1000, 1000};
  std::size_t n_mc = 2000;
  double alpha = 0.05;
  std::uint64_t seed = kDefaultSeed;
  int threads = 0;
  std::string out_path;
  std::vector<std::string> tests;    // empty = default roster
  std::string alternative = "less";  // pairwise direction
  std::string correction = "none";   // censor mode: extra corrected columns
  std::optional<double> delta, d_max, analysis_lo;  // censor grid overrides
  std::size_t min_n = 10;
};

int run_lcdm(const LcdmArgs& args, const std::string& command_line);
int run_pooled(const PooledArgs& args, const std::string& command_line);
int run_censor(const CensorArgs& args, const std::string& command_line);
int run_simulate(const SimulateArgs& args, const std::string& command_line);

// Full CLI: subcommands lcdm/pooled/censor/simulate, key=value config file
// via --config (command-line flags take precedence).
int main_with_args(int argc, const char* const* argv);

}  // namespace lcdm::cli

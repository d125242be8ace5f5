#ifndef BENTCABLE_TOOLS_CLI_HPP
#define BENTCABLE_TOOLS_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace bentcable::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kFitFailure = 3, kVerifyFailure = 4 };

struct RunConfig {
  std::string subcommand;
  std::string input;
  std::vector<std::string> families;
  std::uint64_t seed = 20240101;
  int generations = 5000;
  int population = 100;
  int phases = 2;
  std::string out;
  std::string plot_data;
  double level = 0.95;
  std::pair<double, double> quantiles{0.025, 0.975};
  std::pair<int, int> grid{40, 40};
  // simulate
  std::string params;
  std::pair<double, double> x_range{0.0, 1.0};
  int n = 100;
  int replicates = 1;
  int subunits = 1;
  double sigma = 0.0;
  // verify
  long long draws = 1000000;
};

/// Parses argv-style arguments (without the program name) and runs the subcommand.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace bentcable::cli

#endif  // BENTCABLE_TOOLS_CLI_HPP

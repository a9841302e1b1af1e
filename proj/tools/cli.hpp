#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "flexhedge/model.hpp"
#include "flexhedge/scenario.hpp"

namespace flexhedge::cli {

enum ExitCode : int { kOk = 0, kViolations = 1, kUsage = 2, kInfeasible = 3, kFailure = 4 };

struct LineOverride {
  BusId from = 0;
  BusId to = 0;
  std::optional<double> limit_mw;  // nullopt = unbounded
};

struct RunConfig {
  std::optional<std::filesystem::path> input;   // case file
  std::optional<std::string> preset;            // generation spec
  std::optional<std::filesystem::path> prices;  // wholesale series override for a preset
  std::vector<double> pi_des;                   // 1 or 24 values; falls back to caps in the case file
  std::optional<BusId> cap_bus;                 // default: every price-constrained bus
  scenario::LineLimitCase line_case;
  std::vector<LineOverride> line_overrides;
  std::filesystem::path out_dir = "flexhedge_out";
  std::vector<std::string> formats = {"csv", "json"};
  std::uint64_t seed = 7;
  bool allow_infeasible = false;

  /// Empty iff the config is usable.
  std::vector<std::string> problems() const;
};

struct SweepConfig {
  RunConfig base;
  std::vector<double> pi_values;
  std::vector<scenario::LineLimitCase> cases = {scenario::LineLimitCase::infinite(),
                                                scenario::LineLimitCase::finite()};
};

struct DualityDemoConfig {
  double marginal_cost = 80.0;
  double marginal_utility = 75.0;
  double p_min = 0.0;
  double p_max = 1.0;
  double capacity = kInf;
  std::optional<double> pi_des = 70.0;
  std::optional<std::filesystem::path> dump_dir;
};

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepConfig& config, std::ostream& out, std::ostream& err);
int cmd_validate(const std::filesystem::path& path, std::ostream& out, std::ostream& err);
int cmd_duality_demo(const DualityDemoConfig& config, std::ostream& out, std::ostream& err);

/// Full command line front-end (argv[0] is the program name).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace flexhedge::cli

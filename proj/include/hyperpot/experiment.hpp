#pragma once

#include "hyperpot/json_io.hpp"
#include "hyperpot/orlicz.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hyperpot {

/// One experiment: an instance family, a kernel, an exponent p and the
/// suites to run at each resolution.
///
///   instance.type   cyclic {n} | conjugacy {group, metric_scale}
///                   | chebyshev {M} | bessel {alpha, grid_size, step, extent}
///                   | file {table, space}
///   resolutions     values substituted for n / M / grid_size, coarse first
///   suites          axioms haar conditions weak11 strongpp domination
///                   hedberg theorem corollary dilation
struct ExperimentConfig {
  std::string name = "experiment";
  Json instance;
  KernelSpec kernel;
  double p = 2.0;
  std::optional<double> corollary_alpha;  // defaults to kernel.alpha
  std::vector<std::string> suites;
  std::vector<std::size_t> resolutions;
  std::uint64_t seed = 1;
  std::filesystem::path base_dir;  // for relative file instances
};

inline const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> names = {"axioms",   "haar",    "conditions", "weak11",    "strongpp",
                                                 "domination", "hedberg", "theorem",    "corollary", "dilation"};
  return names;
}

KernelSpec kernel_from_json(const Json& j);
Json kernel_to_json(const KernelSpec& spec);

/// A config file holds either one experiment or {"experiments": [...]}.
std::vector<ExperimentConfig> parse_experiments(const Json& j, const std::filesystem::path& base_dir = {});

/// Builds the instance at the given resolution (nullopt: as written).
ConvolutionTable build_instance(const Json& instance, std::optional<std::size_t> resolution,
                                const std::filesystem::path& base_dir = {});

struct ExperimentResult {
  Json report;  // one entry of report.json's "experiments"
  bool pass = true;
};

/// Runs every suite; writes per-suite CSV and SVG files into out_dir when it
/// is non-empty.
ExperimentResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// Whole-file driver: writes out_dir/report.json and returns the exit code
/// (0 all suites pass, 1 some suite failed, 2 usage or config error).
int run_config_file(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                    std::ostream& log);

}  // namespace hyperpot

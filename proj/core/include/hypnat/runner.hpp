#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hypnat/scenario.hpp"

namespace hypnat {

struct RunOverrides {
  std::optional<double> r_max;
  std::optional<double> epsilon;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
  /// Restrict the run to tasks of one type (CLI subcommands).
  std::optional<std::string> only_type;
};

struct RunResult {
  int exit_code = 0;  // 0 ok, 1 validation, 2 task failure
  std::vector<std::string> artifacts;
  std::string error;
};

/// Executes the scenario tasks in order, writing each artifact together with
/// a JSON metadata sidecar. Fixed seed implies bit-identical artifacts.
RunResult run_scenario(const Scenario& scenario, const RunOverrides& overrides);

/// Rejection sampler for the standard ideal-quadrilateral fundamental domain
/// of the level-two congruence group (vertices -1, 0, 1, infinity in the
/// upper half-plane): points with hyperbolic-area weights, total weight an
/// unbiased estimate of the domain area.
std::vector<std::pair<HPoint, double>> uhp_ideal_quadrilateral_sampler(
    std::size_t samples, double y_min, Rng& rng);

}  // namespace hypnat

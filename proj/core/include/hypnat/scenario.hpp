#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hypnat/representation.hpp"

namespace hypnat {

/// One [task.*] block: the type after the dot plus its key/value lines.
struct TaskSpec {
  std::string type;
  int index = 0;  // position in the scenario, used for RNG stream splitting
  int line = 0;
  std::map<std::string, std::string> kv;
  std::vector<std::pair<std::string, std::string>> repeated;  // key, value

  bool has(const std::string& key) const { return kv.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback = "") const;
  double get_num(const std::string& key, double fallback) const;
};

struct FamilySpec {
  std::string kind;  // "conjugation" | "interpolation"
  Vec axis;                           // conjugation: spatial direction in H^n
  std::vector<double> lengths;        // conjugation: boost lengths
  std::vector<double> taus;           // interpolation: path parameters in (0,1]
  std::map<std::string, std::string> other_images;  // interpolation endpoint
};

struct ScenarioParams {
  double r_max = 8.0;
  std::size_t cap = 50'000'000;
  double slack = 2.0;
  double dedup_tol = 1e-6;
  std::optional<double> epsilon;
  std::optional<double> s;
  std::uint64_t seed = 1;
  int profile_samples = 20000;
  int threads = 0;
  std::optional<std::pair<double, double>> window;
  double grid_step = 0.25;
};

struct Scenario {
  std::string name;
  std::shared_ptr<const GroupSpec> group;
  std::optional<Representation> representation;
  std::optional<FamilySpec> family;
  ScenarioParams params;
  std::vector<TaskSpec> tasks;
};

/// Parses the line-oriented scenario format: [section] headers followed by
/// `key = values` lines, matrices row-major and whitespace-separated.
/// Errors carry the file name and line number.
Scenario parse_scenario_file(const std::string& path);
Scenario parse_scenario_text(const std::string& text, const std::string& name);

}  // namespace hypnat

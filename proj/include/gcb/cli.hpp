#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gcb/entropy.hpp"
#include "gcb/space.hpp"

namespace gcb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitConfig = 2;

enum class Task { Entropy, SphereEntropy, Volume, Minkowski, Flow, Relative, Delta, Verify };

const char* to_string(Task task);

struct SpaceConfig {
  std::string model = "tree";  // tree | hyperbolic | euclidean | graph
  int branching = 2;
  int dim = 2;
  std::string graph;  // edge-list path for graph models
  std::size_t base_vertex = 0;
  std::optional<PackingParams> packing;
  std::optional<double> delta_hint;
  std::optional<std::size_t> sample_cap;
};

struct TGrid {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;
  std::vector<double> values() const;
};

struct FlowConfig {
  double mesh = 0.05;  // angular mesh of line families
  std::optional<double> depth;
  std::optional<int> backward_depth;
};

struct RunConfig {
  SpaceConfig space;
  Task task = Task::Entropy;
  double r = 1.0;
  TGrid T;
  std::string weight = "exp-half";
  std::optional<std::string> subset;
  double tau = 1.0;
  double mesh = 0.0;  // sampling mesh; 0 selects each task's default
  Window window;
  FlowConfig flow;
  std::string relative_series = "covering";  // covering | minkowski | measure | flow
  std::vector<std::string> checks;           // verify task; empty selects the defaults
  std::uint64_t seed = 0;
};

/// Validates a config object. Unknown keys are rejected by name; malformed
/// values raise Validation, structural problems Parse.
RunConfig parse_config(const nlohmann::ordered_json& j);
/// Reads and validates a config file; JSON syntax errors report the line.
RunConfig load_config(const std::string& path);

/// The resolved config, with every default filled in.
nlohmann::ordered_json to_json(const RunConfig& config);

Space build_space(const SpaceConfig& config);

struct Artifact {
  std::string name;
  std::string contents;
};

struct RunResult {
  int status = kExitOk;
  std::string summary;  // "task=<t> slope=<s> residual=<r>"
  std::vector<Artifact> artifacts;
};

/// Runs a task in memory. Library errors propagate as gcb::Error.
RunResult run(const RunConfig& config);

/// Writes artifacts into `dir`, creating it when missing.
void write_artifacts(const RunResult& result, const std::string& dir);

/// Asymptotic equivalence of two CSV series; prints the maximal deviation.
int compare(const std::string& a, const std::string& b, double eps, double T_eps,
            std::ostream& out);

}  // namespace gcb::cli

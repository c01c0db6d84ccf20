#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace causalmask {

// One rollout: row-major (steps x dim) arrays for states, observations and
// actions. A trajectory shorter than the manifest horizon was truncated by
// the numerical blow-up guard.
struct Trajectory {
  int steps = 0;
  int d_s = 0;
  int d_o = 0;
  int d_a = 0;
  std::vector<double> states;
  std::vector<double> observations;
  std::vector<double> actions;
  bool truncated = false;

  // t is 0-based here; public spec-facing indices are 1-based and converted
  // at the call sites.
  double state(int t, int i) const { return states[static_cast<std::size_t>(t) * d_s + i]; }
  double obs(int t, int i) const { return observations[static_cast<std::size_t>(t) * d_o + i]; }
  double action(int t, int i) const { return actions[static_cast<std::size_t>(t) * d_a + i]; }
};

struct DatasetManifest {
  std::string source;     // "cartpole", "reacher", or "fixture:<name>"
  std::string init_mode;  // "intervened" or "confounded"
  std::uint64_t rng_seed = 0;
  int n = 0;
  int d_s = 0;
  int d_o = 0;
  int d_a = 0;
  int steps = 0;
  std::string constants;  // JSON text with source-specific constants
};

struct Dataset {
  std::vector<Trajectory> trajectories;
  DatasetManifest manifest;

  int size() const { return static_cast<int>(trajectories.size()); }
  // Shortest trajectory; the usable horizon for dependence tests.
  int min_steps() const;
};

// JSON Lines, one trajectory per line: {"t":T,"s":[[..]],"o":[[..]],"a":[[..]]}.
// Floats printed with 17 significant digits so a read/write round trip is
// byte-identical.
void write_dataset_jsonl(const Dataset& data, const std::string& path);
Dataset read_dataset_jsonl(const std::string& data_path, const std::string& manifest_path);

void write_manifest(const DatasetManifest& manifest, const std::string& path);
DatasetManifest read_manifest(const std::string& path);

// Sidecar naming convention: data.jsonl -> data.manifest.json.
std::string default_manifest_path(const std::string& data_path);

// printf %.17g, the float format used by every text artifact we emit.
std::string format_double(double v);

}  // namespace causalmask

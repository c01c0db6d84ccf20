#include "causalmask/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace causalmask {

int Dataset::min_steps() const {
  int least = manifest.steps;
  for (const auto& traj : trajectories) least = std::min(least, traj.steps);
  return least;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void append_matrix(std::string& out, const std::vector<double>& flat, int rows, int cols) {
  out += '[';
  for (int t = 0; t < rows; ++t) {
    if (t > 0) out += ',';
    out += '[';
    for (int i = 0; i < cols; ++i) {
      if (i > 0) out += ',';
      out += format_double(flat[static_cast<std::size_t>(t) * cols + i]);
    }
    out += ']';
  }
  out += ']';
}

std::vector<double> read_matrix(const nlohmann::json& j, int expected_cols, int* rows_out) {
  std::vector<double> flat;
  int rows = 0;
  for (const auto& row : j) {
    if (static_cast<int>(row.size()) != expected_cols)
      throw std::runtime_error("dataset row width does not match manifest dims");
    for (const auto& v : row) flat.push_back(v.get<double>());
    ++rows;
  }
  *rows_out = rows;
  return flat;
}

}  // namespace

void write_dataset_jsonl(const Dataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  std::string line;
  for (const auto& traj : data.trajectories) {
    line.clear();
    line += "{\"t\":";
    line += std::to_string(traj.steps);
    line += ",\"s\":";
    append_matrix(line, traj.states, traj.steps, traj.d_s);
    line += ",\"o\":";
    append_matrix(line, traj.observations, traj.steps, traj.d_o);
    line += ",\"a\":";
    append_matrix(line, traj.actions, traj.steps, traj.d_a);
    line += "}\n";
    out << line;
  }
}

Dataset read_dataset_jsonl(const std::string& data_path, const std::string& manifest_path) {
  Dataset data;
  data.manifest = read_manifest(manifest_path);

  std::ifstream in(data_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset: " + data_path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    Trajectory traj;
    traj.steps = j.at("t").get<int>();
    traj.d_s = data.manifest.d_s;
    traj.d_o = data.manifest.d_o;
    traj.d_a = data.manifest.d_a;
    int rows = 0;
    traj.states = read_matrix(j.at("s"), traj.d_s, &rows);
    if (rows != traj.steps) throw std::runtime_error("state row count mismatch");
    traj.observations = read_matrix(j.at("o"), traj.d_o, &rows);
    if (rows != traj.steps) throw std::runtime_error("observation row count mismatch");
    traj.actions = read_matrix(j.at("a"), traj.d_a, &rows);
    if (rows != traj.steps) throw std::runtime_error("action row count mismatch");
    traj.truncated = traj.steps < data.manifest.steps;
    data.trajectories.push_back(std::move(traj));
  }
  if (data.size() != data.manifest.n)
    throw std::runtime_error("trajectory count does not match manifest");
  return data;
}

void write_manifest(const DatasetManifest& manifest, const std::string& path) {
  nlohmann::json j;
  j["source"] = manifest.source;
  j["init_mode"] = manifest.init_mode;
  j["rng_seed"] = manifest.rng_seed;
  j["n"] = manifest.n;
  j["dims"] = {manifest.d_s, manifest.d_o, manifest.d_a};
  j["steps"] = manifest.steps;
  if (!manifest.constants.empty()) j["constants"] = nlohmann::json::parse(manifest.constants);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

DatasetManifest read_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open manifest: " + path);
  nlohmann::json j;
  in >> j;
  DatasetManifest m;
  m.source = j.at("source").get<std::string>();
  m.init_mode = j.at("init_mode").get<std::string>();
  m.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  m.n = j.at("n").get<int>();
  m.d_s = j.at("dims").at(0).get<int>();
  m.d_o = j.at("dims").at(1).get<int>();
  m.d_a = j.at("dims").at(2).get<int>();
  m.steps = j.at("steps").get<int>();
  if (j.contains("constants")) m.constants = j.at("constants").dump();
  return m;
}

std::string default_manifest_path(const std::string& data_path) {
  const auto dot = data_path.rfind('.');
  const std::string stem = dot == std::string::npos ? data_path : data_path.substr(0, dot);
  return stem + ".manifest.json";
}

}  // namespace causalmask

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "causalmask/causal_graph.hpp"
#include "causalmask/rng.hpp"

namespace causalmask {

struct NoiseSpec {
  enum class Family { Uniform, Gaussian };
  Family family = Family::Uniform;
  double p0 = 0.0;  // uniform lo / gaussian mean
  double p1 = 1.0;  // uniform hi / gaussian sd

  double draw(StreamRng& rng) const;

  static NoiseSpec uniform(double lo, double hi) { return {Family::Uniform, lo, hi}; }
  static NoiseSpec gaussian(double mean, double sd) { return {Family::Gaussian, mean, sd}; }
};

// Distributional interventions reuse the same two families; initial-state
// interventions must have everywhere-nonzero density on the state space.
using DensitySpec = NoiseSpec;

// Monomial: coef * prod(parent_pos ^ exponent), total degree <= 3.
struct PolyTerm {
  double coef = 0.0;
  std::vector<std::pair<int, int>> powers;  // (parent position, exponent)
};

// Deterministic map (parent values, noise draw) -> value. Parents are stored
// in a fixed order; the set must equal the node's graph parents.
struct StructuralEquation {
  enum class Form { Affine, Polynomial, TanhAffine };

  Form form = Form::Affine;
  std::vector<NodeId> parents;
  double c0 = 0.0;
  std::vector<double> coeffs;
  std::vector<PolyTerm> terms;
  double tanh_gain = 0.0;
  double tanh_bias = 0.0;
  double noise_scale = 0.0;

  double evaluate(std::span<const double> parent_values, double noise) const;

  static StructuralEquation affine(std::vector<NodeId> parents, double c0,
                                   std::vector<double> coeffs, double noise_scale);
  static StructuralEquation polynomial(std::vector<NodeId> parents, double c0,
                                       std::vector<PolyTerm> terms, double noise_scale);
  // c0 + gain * tanh(sum coeffs_i * p_i + bias) + noise_scale * u
  static StructuralEquation tanh_affine(std::vector<NodeId> parents, double c0, double gain,
                                        std::vector<double> coeffs, double bias,
                                        double noise_scale);
};

struct InterventionSpec {
  std::map<NodeId, double> constants;
  std::map<NodeId, DensitySpec> distributions;

  bool empty() const { return constants.empty() && distributions.empty(); }
};

struct SampleBatch {
  int n = 0;
  std::map<NodeId, std::vector<double>> values;
  std::uint64_t rng_seed = 0;

  const std::vector<double>& at(const NodeId& node) const;
};

// Structural causal model over a CausalGraph: one equation plus one
// independent exogenous noise per endogenous node; the scalar seed W1 is
// drawn from U(seed_range). Immutable after construction; sampling is pure
// given (intervention, n, rng_seed) and is bit-identical at any thread count
// because each (node, sample) pair owns a derived RNG stream.
class Scm {
 public:
  Scm(CausalGraph graph, std::map<NodeId, StructuralEquation> equations,
      std::map<NodeId, NoiseSpec> noise, std::pair<double, double> seed_range);

  const CausalGraph& graph() const { return graph_; }
  const std::pair<double, double>& seed_range() const { return seed_range_; }
  const std::map<NodeId, StructuralEquation>& equations() const { return equations_; }
  const std::map<NodeId, NoiseSpec>& noise() const { return noise_; }

  SampleBatch sample(const InterventionSpec& intervention, int n, std::uint64_t rng_seed) const;
  // Plain loop over samples; the parallel path must match it bitwise.
  SampleBatch sample_serial(const InterventionSpec& intervention, int n,
                            std::uint64_t rng_seed) const;

  nlohmann::json to_json() const;
  static Scm from_json(const nlohmann::json& j);

 private:
  void evaluate_sample(const InterventionSpec& intervention, int sample_idx,
                       std::uint64_t rng_seed, std::vector<double>& scratch,
                       SampleBatch& batch) const;
  void validate_intervention(const InterventionSpec& intervention) const;

  CausalGraph graph_;
  std::map<NodeId, StructuralEquation> equations_;
  std::map<NodeId, NoiseSpec> noise_;
  std::pair<double, double> seed_range_;
  std::vector<NodeId> topo_order_;
  std::map<NodeId, int> topo_pos_;
};

// Stable 64-bit tag for per-node RNG stream derivation.
std::uint64_t node_stream_tag(const NodeId& node);

}  // namespace causalmask

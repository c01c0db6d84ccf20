#include "causalmask/scm.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace causalmask {

double NoiseSpec::draw(StreamRng& rng) const {
  switch (family) {
    case Family::Uniform:
      return rng.uniform(p0, p1);
    case Family::Gaussian:
      return rng.gaussian(p0, p1);
  }
  return 0.0;
}

StructuralEquation StructuralEquation::affine(std::vector<NodeId> parents, double c0,
                                              std::vector<double> coeffs, double noise_scale) {
  if (parents.size() != coeffs.size())
    throw std::invalid_argument("affine equation needs one coefficient per parent");
  StructuralEquation eq;
  eq.form = Form::Affine;
  eq.parents = std::move(parents);
  eq.c0 = c0;
  eq.coeffs = std::move(coeffs);
  eq.noise_scale = noise_scale;
  return eq;
}

StructuralEquation StructuralEquation::polynomial(std::vector<NodeId> parents, double c0,
                                                  std::vector<PolyTerm> terms,
                                                  double noise_scale) {
  StructuralEquation eq;
  eq.form = Form::Polynomial;
  eq.parents = std::move(parents);
  eq.c0 = c0;
  eq.terms = std::move(terms);
  eq.noise_scale = noise_scale;
  for (const auto& term : eq.terms) {
    int degree = 0;
    for (const auto& [pos, exp] : term.powers) {
      if (pos < 0 || pos >= static_cast<int>(eq.parents.size()))
        throw std::invalid_argument("polynomial term references unknown parent");
      if (exp < 1) throw std::invalid_argument("polynomial exponent must be >= 1");
      degree += exp;
    }
    if (degree > 3) throw std::invalid_argument("polynomial degree is capped at 3");
  }
  return eq;
}

StructuralEquation StructuralEquation::tanh_affine(std::vector<NodeId> parents, double c0,
                                                   double gain, std::vector<double> coeffs,
                                                   double bias, double noise_scale) {
  if (parents.size() != coeffs.size())
    throw std::invalid_argument("tanh-affine equation needs one coefficient per parent");
  StructuralEquation eq;
  eq.form = Form::TanhAffine;
  eq.parents = std::move(parents);
  eq.c0 = c0;
  eq.tanh_gain = gain;
  eq.coeffs = std::move(coeffs);
  eq.tanh_bias = bias;
  eq.noise_scale = noise_scale;
  return eq;
}

double StructuralEquation::evaluate(std::span<const double> parent_values, double noise) const {
  double value = c0;
  switch (form) {
    case Form::Affine:
      for (std::size_t i = 0; i < coeffs.size(); ++i) value += coeffs[i] * parent_values[i];
      break;
    case Form::Polynomial:
      for (const auto& term : terms) {
        double prod = term.coef;
        for (const auto& [pos, exp] : term.powers) {
          for (int k = 0; k < exp; ++k) prod *= parent_values[pos];
        }
        value += prod;
      }
      break;
    case Form::TanhAffine: {
      double arg = tanh_bias;
      for (std::size_t i = 0; i < coeffs.size(); ++i) arg += coeffs[i] * parent_values[i];
      value += tanh_gain * std::tanh(arg);
      break;
    }
  }
  return value + noise_scale * noise;
}

const std::vector<double>& SampleBatch::at(const NodeId& node) const {
  auto it = values.find(node);
  if (it == values.end()) throw std::invalid_argument("no samples for node " + node_label(node));
  return it->second;
}

std::uint64_t node_stream_tag(const NodeId& node) {
  return (static_cast<std::uint64_t>(node.kind) << 56) |
         (static_cast<std::uint64_t>(static_cast<std::uint32_t>(node.time)) << 24) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(node.index) & 0xFFFFFF);
}

Scm::Scm(CausalGraph graph, std::map<NodeId, StructuralEquation> equations,
         std::map<NodeId, NoiseSpec> noise, std::pair<double, double> seed_range)
    : graph_(std::move(graph)),
      equations_(std::move(equations)),
      noise_(std::move(noise)),
      seed_range_(seed_range) {
  if (!(seed_range_.first < seed_range_.second))
    throw std::invalid_argument("seed range must be a nonempty interval");

  for (const auto& node : graph_.nodes()) {
    if (node.kind == NodeKind::Seed) continue;
    auto eq = equations_.find(node);
    if (eq == equations_.end())
      throw std::invalid_argument("missing structural equation for " + node_label(node));
    std::set<NodeId> eq_parents(eq->second.parents.begin(), eq->second.parents.end());
    if (eq_parents.size() != eq->second.parents.size())
      throw std::invalid_argument("duplicate parent in equation for " + node_label(node));
    if (eq_parents != graph_.parents(node))
      throw std::invalid_argument("equation inputs must equal graph parents for " +
                                  node_label(node));
    if (!noise_.count(node))
      throw std::invalid_argument("missing noise spec for " + node_label(node));
  }
  for (const auto& [node, eq] : equations_) {
    if (!graph_.contains(node))
      throw std::invalid_argument("equation for unknown node " + node_label(node));
    if (node.kind == NodeKind::Seed)
      throw std::invalid_argument("the seed node is drawn from seed_range, not an equation");
  }

  topo_order_ = graph_.topological_order();
  for (std::size_t i = 0; i < topo_order_.size(); ++i)
    topo_pos_[topo_order_[i]] = static_cast<int>(i);
}

void Scm::validate_intervention(const InterventionSpec& intervention) const {
  for (const auto& [node, value] : intervention.constants) {
    if (!graph_.contains(node))
      throw std::invalid_argument("intervention on unknown node " + node_label(node));
    if (intervention.distributions.count(node))
      throw std::invalid_argument("contradictory overlay: " + node_label(node) +
                                  " has both a constant and a distributional intervention");
    (void)value;
  }
  for (const auto& [node, spec] : intervention.distributions) {
    if (!graph_.contains(node))
      throw std::invalid_argument("intervention on unknown node " + node_label(node));
    (void)spec;
  }
}

void Scm::evaluate_sample(const InterventionSpec& intervention, int sample_idx,
                          std::uint64_t rng_seed, std::vector<double>& scratch,
                          SampleBatch& batch) const {
  std::vector<double> parent_values;
  for (std::size_t pos = 0; pos < topo_order_.size(); ++pos) {
    const NodeId& node = topo_order_[pos];
    double value = 0.0;

    auto const_it = intervention.constants.find(node);
    auto dist_it = intervention.distributions.find(node);
    if (const_it != intervention.constants.end()) {
      value = const_it->second;
    } else if (dist_it != intervention.distributions.end()) {
      StreamRng rng = StreamRng::derive(rng_seed, node_stream_tag(node),
                                        static_cast<std::uint64_t>(sample_idx));
      value = dist_it->second.draw(rng);
    } else if (node.kind == NodeKind::Seed) {
      StreamRng rng = StreamRng::derive(rng_seed, node_stream_tag(node),
                                        static_cast<std::uint64_t>(sample_idx));
      value = rng.uniform(seed_range_.first, seed_range_.second);
    } else {
      const StructuralEquation& eq = equations_.at(node);
      parent_values.clear();
      for (const auto& parent : eq.parents) parent_values.push_back(scratch[topo_pos_.at(parent)]);
      StreamRng rng = StreamRng::derive(rng_seed, node_stream_tag(node),
                                        static_cast<std::uint64_t>(sample_idx));
      const double noise = noise_.at(node).draw(rng);
      value = eq.evaluate(parent_values, noise);
    }

    scratch[pos] = value;
    batch.values.find(node)->second[sample_idx] = value;
  }
}

SampleBatch Scm::sample(const InterventionSpec& intervention, int n,
                        std::uint64_t rng_seed) const {
  if (n < 1) throw std::invalid_argument("sample count must be >= 1");
  validate_intervention(intervention);

  SampleBatch batch;
  batch.n = n;
  batch.rng_seed = rng_seed;
  for (const auto& node : graph_.nodes()) batch.values[node].resize(n);

#ifdef _OPENMP
#pragma omp parallel
  {
    std::vector<double> scratch(topo_order_.size());
#pragma omp for schedule(static)
    for (int i = 0; i < n; ++i) evaluate_sample(intervention, i, rng_seed, scratch, batch);
  }
#else
  std::vector<double> scratch(topo_order_.size());
  for (int i = 0; i < n; ++i) evaluate_sample(intervention, i, rng_seed, scratch, batch);
#endif
  return batch;
}

SampleBatch Scm::sample_serial(const InterventionSpec& intervention, int n,
                               std::uint64_t rng_seed) const {
  if (n < 1) throw std::invalid_argument("sample count must be >= 1");
  validate_intervention(intervention);

  SampleBatch batch;
  batch.n = n;
  batch.rng_seed = rng_seed;
  for (const auto& node : graph_.nodes()) batch.values[node].resize(n);

  std::vector<double> scratch(topo_order_.size());
  for (int i = 0; i < n; ++i) evaluate_sample(intervention, i, rng_seed, scratch, batch);
  return batch;
}

namespace {

nlohmann::json node_ref(const NodeId& node) {
  return {std::string(1, kind_letter(node.kind)), node.time, node.index};
}

NodeId node_from_ref(const nlohmann::json& j) {
  return {kind_from_letter(j.at(0).get<std::string>().at(0)), j.at(1).get<int>(),
          j.at(2).get<int>()};
}

nlohmann::json noise_to_json(const NoiseSpec& spec) {
  nlohmann::json j;
  j["family"] = spec.family == NoiseSpec::Family::Uniform ? "uniform" : "gaussian";
  j["p0"] = spec.p0;
  j["p1"] = spec.p1;
  return j;
}

NoiseSpec noise_from_json(const nlohmann::json& j) {
  NoiseSpec spec;
  const std::string family = j.at("family").get<std::string>();
  if (family == "uniform")
    spec.family = NoiseSpec::Family::Uniform;
  else if (family == "gaussian")
    spec.family = NoiseSpec::Family::Gaussian;
  else
    throw std::invalid_argument("unknown noise family: " + family);
  spec.p0 = j.at("p0").get<double>();
  spec.p1 = j.at("p1").get<double>();
  return spec;
}

}  // namespace

nlohmann::json Scm::to_json() const {
  nlohmann::json j = graph_to_json(graph_);
  j["seed_range"] = {seed_range_.first, seed_range_.second};

  nlohmann::json equations = nlohmann::json::array();
  for (const auto& [node, eq] : equations_) {
    nlohmann::json e;
    e["node"] = node_ref(node);
    e["c0"] = eq.c0;
    e["noise_scale"] = eq.noise_scale;
    nlohmann::json parents = nlohmann::json::array();
    for (const auto& p : eq.parents) parents.push_back(node_ref(p));
    e["parents"] = std::move(parents);
    switch (eq.form) {
      case StructuralEquation::Form::Affine:
        e["form"] = "affine";
        e["coeffs"] = eq.coeffs;
        break;
      case StructuralEquation::Form::Polynomial: {
        e["form"] = "polynomial";
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& term : eq.terms) {
          nlohmann::json t;
          t["coef"] = term.coef;
          nlohmann::json powers = nlohmann::json::array();
          for (const auto& [pos, exp] : term.powers) powers.push_back({pos, exp});
          t["powers"] = std::move(powers);
          terms.push_back(std::move(t));
        }
        e["terms"] = std::move(terms);
        break;
      }
      case StructuralEquation::Form::TanhAffine:
        e["form"] = "tanh_affine";
        e["coeffs"] = eq.coeffs;
        e["gain"] = eq.tanh_gain;
        e["bias"] = eq.tanh_bias;
        break;
    }
    equations.push_back(std::move(e));
  }
  j["equations"] = std::move(equations);

  nlohmann::json noise = nlohmann::json::array();
  for (const auto& [node, spec] : noise_) {
    nlohmann::json entry = noise_to_json(spec);
    entry["node"] = node_ref(node);
    noise.push_back(std::move(entry));
  }
  j["noise"] = std::move(noise);
  return j;
}

Scm Scm::from_json(const nlohmann::json& j) {
  CausalGraph graph = graph_from_json(j);
  std::pair<double, double> seed_range{j.at("seed_range").at(0).get<double>(),
                                       j.at("seed_range").at(1).get<double>()};

  std::map<NodeId, StructuralEquation> equations;
  for (const auto& e : j.at("equations")) {
    const NodeId node = node_from_ref(e.at("node"));
    std::vector<NodeId> parents;
    for (const auto& p : e.at("parents")) parents.push_back(node_from_ref(p));
    const std::string form = e.at("form").get<std::string>();
    const double c0 = e.at("c0").get<double>();
    const double noise_scale = e.at("noise_scale").get<double>();
    if (form == "affine") {
      equations.emplace(node, StructuralEquation::affine(
                                  std::move(parents), c0,
                                  e.at("coeffs").get<std::vector<double>>(), noise_scale));
    } else if (form == "polynomial") {
      std::vector<PolyTerm> terms;
      for (const auto& t : e.at("terms")) {
        PolyTerm term;
        term.coef = t.at("coef").get<double>();
        for (const auto& p : t.at("powers"))
          term.powers.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
        terms.push_back(std::move(term));
      }
      equations.emplace(node, StructuralEquation::polynomial(std::move(parents), c0,
                                                             std::move(terms), noise_scale));
    } else if (form == "tanh_affine") {
      equations.emplace(
          node, StructuralEquation::tanh_affine(std::move(parents), c0,
                                                e.at("gain").get<double>(),
                                                e.at("coeffs").get<std::vector<double>>(),
                                                e.at("bias").get<double>(), noise_scale));
    } else {
      throw std::invalid_argument("unknown equation form: " + form);
    }
  }

  std::map<NodeId, NoiseSpec> noise;
  for (const auto& entry : j.at("noise")) {
    noise.emplace(node_from_ref(entry.at("node")), noise_from_json(entry));
  }
  return Scm(std::move(graph), std::move(equations), std::move(noise), seed_range);
}

}  // namespace causalmask

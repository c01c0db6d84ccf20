#include "causalmask/fixtures.hpp"

#include <stdexcept>
#include <utility>

namespace causalmask {

namespace {

constexpr double kPureNoiseScale = 0.3;

// Smooth seed-driven assignment: gain * tanh(slope * (w - mid)) + noise. The
// slope/width product keeps the map strictly monotone and far from constant
// over the seed interval.
StructuralEquation seed_driven(double gain, double slope, double seed_lo, double seed_hi,
                               double noise_scale) {
  const double mid = 0.5 * (seed_lo + seed_hi);
  return StructuralEquation::tanh_affine({seed_node()}, 0.0, gain, {slope}, -slope * mid,
                                         noise_scale);
}

StructuralEquation pure_noise(double scale) {
  return StructuralEquation::affine({}, 0.0, {}, scale);
}

std::map<NodeId, NoiseSpec> gaussian_noise_for_all(const CausalGraph& graph) {
  std::map<NodeId, NoiseSpec> noise;
  for (const auto& node : graph.nodes()) {
    if (node.kind == NodeKind::Seed) continue;
    noise.emplace(node, NoiseSpec::gaussian(0.0, 1.0));
  }
  return noise;
}

InterventionSpec uniform_state_init(const CausalGraph& graph, double lo, double hi) {
  InterventionSpec iv;
  for (int i = 1; i <= graph.dims().d_s; ++i) {
    iv.distributions.emplace(state_node(1, i), DensitySpec::uniform(lo, hi));
  }
  return iv;
}

FixtureBundle build_prop1_fork(int horizon) {
  GraphTemplate tmpl;
  tmpl.dims = {1, 2, 1};
  tmpl.edges = {
      {NodeKind::State, 1, NodeKind::Observation, 2, 0},
      {NodeKind::Observation, 2, NodeKind::Action, 1, 0},
      {NodeKind::State, 1, NodeKind::State, 1, 1},
      {NodeKind::Action, 1, NodeKind::State, 1, 1},
  };
  tmpl.seed_targets = {{NodeKind::State, 1}, {NodeKind::Observation, 1}};
  CausalGraph graph = unroll(tmpl, horizon);

  std::map<NodeId, StructuralEquation> eq;
  eq.emplace(state_node(1, 1), seed_driven(0.9, 3.0, 0.0, 1.0, 0.05));
  eq.emplace(obs_node(1, 1), seed_driven(1.0, 2.5, 0.0, 1.0, 0.05));
  for (int t = 1; t <= horizon; ++t) {
    if (t >= 2) {
      eq.emplace(state_node(t, 1),
                 StructuralEquation::affine({state_node(t - 1, 1), action_node(t - 1, 1)}, 0.0,
                                            {0.7, 0.5}, 0.05));
      eq.emplace(obs_node(t, 1), pure_noise(kPureNoiseScale));
    }
    eq.emplace(obs_node(t, 2),
               StructuralEquation::affine({state_node(t, 1)}, 0.0, {0.9}, 0.05));
    eq.emplace(action_node(t, 1),
               StructuralEquation::affine({obs_node(t, 2)}, 0.0, {-0.6}, 0.05));
  }

  auto noise = gaussian_noise_for_all(graph);
  InterventionSpec iv = uniform_state_init(graph, -1.0, 1.0);
  Scm scm(std::move(graph), std::move(eq), std::move(noise), {0.0, 1.0});

  return FixtureBundle{"prop1_fork", std::move(scm),     std::move(iv), {true, false},
                       {false, false}, {1},               {2}};
}

FixtureBundle build_fig1(int horizon) {
  GraphTemplate tmpl;
  tmpl.dims = {2, 3, 1};
  tmpl.edges = {
      {NodeKind::State, 1, NodeKind::Observation, 2, 0},
      {NodeKind::State, 2, NodeKind::Observation, 3, 0},
      {NodeKind::Observation, 2, NodeKind::Action, 1, 0},
      {NodeKind::Observation, 3, NodeKind::Action, 1, 0},
      {NodeKind::State, 1, NodeKind::State, 1, 1},
      {NodeKind::State, 2, NodeKind::State, 2, 1},
      {NodeKind::Action, 1, NodeKind::State, 1, 1},
      {NodeKind::Action, 1, NodeKind::State, 2, 1},
      {NodeKind::Action, 1, NodeKind::Observation, 1, 1},
  };
  tmpl.seed_targets = {{NodeKind::State, 1}, {NodeKind::State, 2}, {NodeKind::Observation, 1}};
  CausalGraph graph = unroll(tmpl, horizon);

  std::map<NodeId, StructuralEquation> eq;
  eq.emplace(state_node(1, 1), seed_driven(0.9, 3.2, 0.0, 1.0, 0.05));
  eq.emplace(state_node(1, 2), seed_driven(0.9, -2.6, 0.0, 1.0, 0.05));
  eq.emplace(obs_node(1, 1), seed_driven(1.0, 2.5, 0.0, 1.0, 0.05));
  for (int t = 1; t <= horizon; ++t) {
    if (t >= 2) {
      for (int i = 1; i <= 2; ++i) {
        eq.emplace(state_node(t, i),
                   StructuralEquation::affine({state_node(t - 1, i), action_node(t - 1, 1)}, 0.0,
                                              {0.7, 0.5}, 0.05));
      }
      eq.emplace(obs_node(t, 1),
                 StructuralEquation::affine({action_node(t - 1, 1)}, 0.0, {0.8}, 0.05));
    }
    eq.emplace(obs_node(t, 2),
               StructuralEquation::affine({state_node(t, 1)}, 0.0, {0.9}, 0.05));
    eq.emplace(obs_node(t, 3),
               StructuralEquation::affine({state_node(t, 2)}, 0.0, {0.9}, 0.05));
    eq.emplace(action_node(t, 1), StructuralEquation::affine({obs_node(t, 2), obs_node(t, 3)},
                                                             0.0, {-0.5, -0.5}, 0.05));
  }

  auto noise = gaussian_noise_for_all(graph);
  InterventionSpec iv = uniform_state_init(graph, -1.0, 1.0);
  Scm scm(std::move(graph), std::move(eq), std::move(noise), {0.0, 1.0});

  return FixtureBundle{"fig1",
                       std::move(scm),
                       std::move(iv),
                       {true, false, false},
                       {false, false, false},
                       {1},
                       {2, 3}};
}

FixtureBundle build_pure_noise_obs(int horizon) {
  GraphTemplate tmpl;
  tmpl.dims = {1, 2, 1};
  tmpl.edges = {
      {NodeKind::State, 1, NodeKind::Observation, 1, 0},
      {NodeKind::Observation, 1, NodeKind::Action, 1, 0},
      {NodeKind::State, 1, NodeKind::State, 1, 1},
      {NodeKind::Action, 1, NodeKind::State, 1, 1},
  };
  tmpl.seed_targets = {{NodeKind::State, 1}};
  CausalGraph graph = unroll(tmpl, horizon);

  std::map<NodeId, StructuralEquation> eq;
  eq.emplace(state_node(1, 1), seed_driven(0.9, 3.0, 0.0, 1.0, 0.05));
  for (int t = 1; t <= horizon; ++t) {
    if (t >= 2) {
      eq.emplace(state_node(t, 1),
                 StructuralEquation::affine({state_node(t - 1, 1), action_node(t - 1, 1)}, 0.0,
                                            {0.7, 0.5}, 0.05));
    }
    eq.emplace(obs_node(t, 1),
               StructuralEquation::affine({state_node(t, 1)}, 0.0, {0.9}, 0.05));
    eq.emplace(obs_node(t, 2), pure_noise(0.4));
    eq.emplace(action_node(t, 1),
               StructuralEquation::affine({obs_node(t, 1)}, 0.0, {-0.6}, 0.05));
  }

  auto noise = gaussian_noise_for_all(graph);
  InterventionSpec iv = uniform_state_init(graph, -1.0, 1.0);
  Scm scm(std::move(graph), std::move(eq), std::move(noise), {0.0, 1.0});

  return FixtureBundle{"pure_noise_obs", std::move(scm), std::move(iv), {false, true},
                       {false, true},    {2},            {1}};
}

}  // namespace

std::string fixture_name_string(FixtureName name) {
  switch (name) {
    case FixtureName::Fig1:
      return "fig1";
    case FixtureName::Prop1Fork:
      return "prop1_fork";
    case FixtureName::CausalObs:
      return "causal_obs";
    case FixtureName::PureNoiseObs:
      return "pure_noise_obs";
  }
  return "?";
}

FixtureName fixture_from_string(const std::string& name) {
  if (name == "fig1") return FixtureName::Fig1;
  if (name == "prop1_fork") return FixtureName::Prop1Fork;
  if (name == "causal_obs") return FixtureName::CausalObs;
  if (name == "pure_noise_obs") return FixtureName::PureNoiseObs;
  throw std::invalid_argument("unknown fixture: " + name);
}

std::vector<FixtureName> all_fixtures() {
  return {FixtureName::Fig1, FixtureName::Prop1Fork, FixtureName::CausalObs,
          FixtureName::PureNoiseObs};
}

CausalObsParams random_causal_obs_params(StreamRng& rng) {
  auto signed_mag = [&](double lo, double hi) {
    const double mag = rng.uniform(lo, hi);
    return rng.next_double() < 0.5 ? -mag : mag;
  };
  CausalObsParams p;
  p.obs_coeff = signed_mag(0.5, 1.2);
  p.action_coeff = signed_mag(0.5, 1.2);
  p.state_gain = signed_mag(0.5, 0.9);
  p.action_gain = signed_mag(0.5, 1.2);
  p.seed_gain = signed_mag(0.6, 1.2);
  p.seed_slope = signed_mag(2.0, 4.0);
  p.nuisance_slope = signed_mag(2.0, 4.0);
  p.seed_lo = rng.uniform(-2.0, 2.0);
  p.seed_hi = p.seed_lo + rng.uniform(0.5, 2.0);
  p.obs_noise = rng.uniform(0.03, 0.08);
  p.action_noise = rng.uniform(0.03, 0.08);
  p.state_noise = rng.uniform(0.03, 0.08);
  return p;
}

FixtureBundle make_causal_obs(const CausalObsParams& params, int horizon) {
  GraphTemplate tmpl;
  tmpl.dims = {1, 2, 1};
  tmpl.edges = {
      {NodeKind::State, 1, NodeKind::Observation, 1, 0},
      {NodeKind::Observation, 1, NodeKind::Action, 1, 0},
      {NodeKind::State, 1, NodeKind::State, 1, 1},
      {NodeKind::Action, 1, NodeKind::State, 1, 1},
  };
  tmpl.seed_targets = {{NodeKind::State, 1}, {NodeKind::Observation, 2}};
  CausalGraph graph = unroll(tmpl, horizon);

  std::map<NodeId, StructuralEquation> eq;
  eq.emplace(state_node(1, 1), seed_driven(params.seed_gain, params.seed_slope, params.seed_lo,
                                           params.seed_hi, params.state_noise));
  eq.emplace(obs_node(1, 2), seed_driven(1.0, params.nuisance_slope, params.seed_lo,
                                         params.seed_hi, 0.05));
  for (int t = 1; t <= horizon; ++t) {
    if (t >= 2) {
      eq.emplace(state_node(t, 1),
                 StructuralEquation::affine({state_node(t - 1, 1), action_node(t - 1, 1)}, 0.0,
                                            {params.state_gain, params.action_gain},
                                            params.state_noise));
      eq.emplace(obs_node(t, 2), pure_noise(kPureNoiseScale));
    }
    eq.emplace(obs_node(t, 1), StructuralEquation::affine({state_node(t, 1)}, 0.0,
                                                          {params.obs_coeff}, params.obs_noise));
    eq.emplace(action_node(t, 1),
               StructuralEquation::affine({obs_node(t, 1)}, 0.0, {params.action_coeff},
                                          params.action_noise));
  }

  auto noise = gaussian_noise_for_all(graph);
  InterventionSpec iv = uniform_state_init(graph, -1.0, 1.0);
  Scm scm(std::move(graph), std::move(eq), std::move(noise),
          {params.seed_lo, params.seed_hi});

  return FixtureBundle{"causal_obs",  std::move(scm), std::move(iv), {false, true},
                       {false, false}, {2},            {1}};
}

FixtureBundle fixture(FixtureName name, int horizon) {
  if (horizon < 1) throw std::invalid_argument("fixture horizon must be >= 1");
  switch (name) {
    case FixtureName::Fig1:
      return build_fig1(horizon);
    case FixtureName::Prop1Fork:
      return build_prop1_fork(horizon);
    case FixtureName::CausalObs:
      return make_causal_obs(CausalObsParams{}, horizon);
    case FixtureName::PureNoiseObs:
      return build_pure_noise_obs(horizon);
  }
  throw std::invalid_argument("unknown fixture");
}

Dataset fixture_dataset(const FixtureBundle& bundle, bool intervened, int n,
                        std::uint64_t rng_seed) {
  const InterventionSpec empty;
  const InterventionSpec& iv = intervened ? bundle.intervened_init : empty;
  const SampleBatch batch = bundle.scm.sample(iv, n, rng_seed);

  const GraphDims dims = bundle.scm.graph().dims();
  const int steps = bundle.scm.graph().horizon();

  Dataset data;
  data.manifest.source = "fixture:" + bundle.name;
  data.manifest.init_mode = intervened ? "intervened" : "confounded";
  data.manifest.rng_seed = rng_seed;
  data.manifest.n = n;
  data.manifest.d_s = dims.d_s;
  data.manifest.d_o = dims.d_o;
  data.manifest.d_a = dims.d_a;
  data.manifest.steps = steps;

  data.trajectories.resize(n);
  for (int i = 0; i < n; ++i) {
    Trajectory& traj = data.trajectories[i];
    traj.steps = steps;
    traj.d_s = dims.d_s;
    traj.d_o = dims.d_o;
    traj.d_a = dims.d_a;
    traj.states.resize(static_cast<std::size_t>(steps) * dims.d_s);
    traj.observations.resize(static_cast<std::size_t>(steps) * dims.d_o);
    traj.actions.resize(static_cast<std::size_t>(steps) * dims.d_a);
  }
  for (int t = 1; t <= steps; ++t) {
    for (int s = 1; s <= dims.d_s; ++s) {
      const auto& column = batch.at(state_node(t, s));
      for (int i = 0; i < n; ++i)
        data.trajectories[i].states[static_cast<std::size_t>(t - 1) * dims.d_s + (s - 1)] =
            column[i];
    }
    for (int o = 1; o <= dims.d_o; ++o) {
      const auto& column = batch.at(obs_node(t, o));
      for (int i = 0; i < n; ++i)
        data.trajectories[i].observations[static_cast<std::size_t>(t - 1) * dims.d_o + (o - 1)] =
            column[i];
    }
    for (int a = 1; a <= dims.d_a; ++a) {
      const auto& column = batch.at(action_node(t, a));
      for (int i = 0; i < n; ++i)
        data.trajectories[i].actions[static_cast<std::size_t>(t - 1) * dims.d_a + (a - 1)] =
            column[i];
    }
  }
  return data;
}

}  // namespace causalmask

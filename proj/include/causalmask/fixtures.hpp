#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "causalmask/dataset.hpp"
#include "causalmask/scm.hpp"

namespace causalmask {

enum class FixtureName { Fig1, Prop1Fork, CausalObs, PureNoiseObs };

std::string fixture_name_string(FixtureName name);
FixtureName fixture_from_string(const std::string& name);
std::vector<FixtureName> all_fixtures();

// A fully specified SCM plus the ground-truth causal facts the verification
// suites assert against. The SCM is the natural (seed-driven) system;
// intervened_init is the everywhere-nonzero uniform initial-state overlay.
struct FixtureBundle {
  std::string name;
  Scm scm;
  InterventionSpec intervened_init;
  std::vector<bool> mask_intervened;   // expected Algorithm-1 mask with the overlay
  std::vector<bool> mask_confounded;   // expected mask on the natural system
  std::vector<int> nuisance_obs;       // 1-based seed-driven observation indices
  std::vector<int> causal_obs;         // 1-based indices that must never be masked
};

FixtureBundle fixture(FixtureName name, int horizon = 3);

// Randomized parameterization of the causal-observation fixture: coefficient
// magnitudes in [0.5, 1.2] with random signs, random uniform seed range,
// uniform initial-state intervention. Drives the conservativeness suite.
struct CausalObsParams {
  double obs_coeff = 0.9;
  double action_coeff = -0.6;
  double state_gain = 0.7;
  double action_gain = 0.5;
  double seed_gain = 0.9;
  double seed_slope = 3.0;
  double nuisance_slope = 2.5;
  double seed_lo = 0.0;
  double seed_hi = 1.0;
  double obs_noise = 0.05;
  double action_noise = 0.05;
  double state_noise = 0.05;
};

CausalObsParams random_causal_obs_params(StreamRng& rng);
FixtureBundle make_causal_obs(const CausalObsParams& params, int horizon = 3);

// Samples the fixture SCM (with or without the initial-state overlay) and
// reshapes the batch into trajectories.
Dataset fixture_dataset(const FixtureBundle& bundle, bool intervened, int n,
                        std::uint64_t rng_seed);

}  // namespace causalmask

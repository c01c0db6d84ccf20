#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "causalmask/dataset.hpp"

namespace causalmask {

struct MaskConfig {
  int horizon = 3;       // reaction horizon H; tests cover t' in [1, H]
  double gamma = 1e-3;   // Hoeffding threshold
};

struct ObservationMask {
  std::vector<bool> bits;  // true = masked

  int d_o() const { return static_cast<int>(bits.size()); }
  friend bool operator==(const ObservationMask&, const ObservationMask&) = default;
};

// Every Hoeffding statistic behind one mask computation, plus the derived
// potential-cause table. state_obs is D(S1[s], O1[o]); state_action is
// D(S1[s], A_t'[a]). All layouts row-major in the listed index order.
struct DependenceReport {
  int d_s = 0;
  int d_o = 0;
  int d_a = 0;
  int horizon = 0;
  double gamma = 0.0;
  std::vector<double> state_obs;          // [s][o]
  std::vector<double> state_action;       // [s][a][t'-1]
  std::vector<std::uint8_t> potential_cause;  // [o][a][t'-1]

  double d_state_obs(int s, int o) const;          // 1-based
  double d_state_action(int s, int a, int t_prime) const;
  bool is_potential_cause(int o, int a, int t_prime) const;
};

// Eq.-(3) potential-cause check at t=1 over one dataset, one pair per
// trajectory: OR over s of [D(S1[s],O1[o]) > gamma AND D(S1[s],A_t'[a]) > gamma].
// Indices are 1-based; t_prime in [1, H].
bool check_potential_cause(const Dataset& data, int o_idx, int a_idx, int t_prime,
                           const MaskConfig& cfg);

// Algorithm 1. Precomputes the d_S x d_O and d_S x d_A x H test matrices once
// (parallel across tests), then reduces; bits[o] is set iff no (a, t') has a
// potential cause. Identical output to compute_mask_reference.
std::pair<ObservationMask, DependenceReport> compute_mask(const Dataset& data,
                                                          const MaskConfig& cfg);

// Literal nested-loop transcription with early exit, kept as the serial
// reference for tests and benchmarks.
ObservationMask compute_mask_reference(const Dataset& data, const MaskConfig& cfg);

// Mask recomputed from the report alone; must equal the returned mask.
ObservationMask mask_from_report(const DependenceReport& report);

struct VerificationReport {
  int trials = 0;
  int violations = 0;
  std::vector<std::string> notes;
};

// Theorem-1 harness: randomized causal-observation fixtures, intervened
// initial states; a violation is a genuinely causal observation coordinate
// getting masked.
VerificationReport verify_conservativeness(int trials, int n_per_trial, std::uint64_t rng_seed);

// Theorem-2 harness: for every shipped fixture, masks with and without the
// initial-state intervention; a violation is a coordinate masked without
// intervention but unmasked with it.
VerificationReport verify_monotonicity(int trials, int n_per_trial, std::uint64_t rng_seed);

// Proposition-1 harness on the fork fixture: counts seeds where the nuisance
// is masked under intervention and unmasked without.
struct Prop1Report {
  int trials = 0;
  int masked_with_intervention = 0;
  int unmasked_without_intervention = 0;
};
Prop1Report verify_prop1(int trials, int n_per_trial, std::uint64_t rng_seed);

int monotonicity_violations(const ObservationMask& without_intervention,
                            const ObservationMask& with_intervention);

// {"gamma": g, "horizon": H, "mask": [0,1,...], "dims": [dS,dO,dA]}
void write_mask_json(const ObservationMask& mask, const MaskConfig& cfg, int d_s, int d_a,
                     const std::string& path);
ObservationMask read_mask_json(const std::string& path);

// CSV rows (kind, s_idx, target_idx, t_prime, d_value, exceeds_gamma); kind is
// "obs" (t_prime empty) or "act".
void write_report_csv(const DependenceReport& report, const std::string& path);

}  // namespace causalmask

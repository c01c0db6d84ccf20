#pragma once

#include <vector>

namespace causalmask {

struct PairedSamples {
  std::vector<double> x;
  std::vector<double> y;
};

struct DStatistic {
  double value = 0.0;
};

// Hoeffding's D scaled by 30: range [-0.5, 1] for tie-free inputs, positive
// values indicate dependence. O(n log n): sort by x, count joint ranks with a
// prefix-count tree. Midranks for R/S; ties in the Q count credited 1/2 (one
// coordinate tied) and 1/4 (both tied). Requires n >= 5 finite pairs.
DStatistic hoeffding_d(const PairedSamples& samples);

// Same statistic by direct O(n^2) counting. Reference path for tests and
// benchmarks.
DStatistic hoeffding_d_oracle(const PairedSamples& samples);

// Thresholded test used by the masking algorithm: D > gamma.
bool dependent(const PairedSamples& samples, double gamma);

}  // namespace causalmask

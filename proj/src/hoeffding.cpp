#include "causalmask/hoeffding.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace causalmask {

namespace {

void validate(const PairedSamples& samples) {
  if (samples.x.size() != samples.y.size())
    throw std::invalid_argument("paired samples must have equal length");
  if (samples.x.size() < 5) throw std::invalid_argument("Hoeffding's D requires n >= 5");
  for (std::size_t i = 0; i < samples.x.size(); ++i) {
    if (!std::isfinite(samples.x[i]) || !std::isfinite(samples.y[i]))
      throw std::invalid_argument("Hoeffding's D requires finite inputs");
  }
}

// Midranks: rank 1..n with tied values sharing the average of their
// positions.
std::vector<double> midranks(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });

  std::vector<double> rank(n);
  std::size_t pos = 0;
  while (pos < n) {
    std::size_t end = pos;
    while (end + 1 < n && v[order[end + 1]] == v[order[pos]]) ++end;
    const double shared = 0.5 * static_cast<double>(pos + 1 + end + 1);
    for (std::size_t k = pos; k <= end; ++k) rank[order[k]] = shared;
    pos = end + 1;
  }
  return rank;
}

double combine(const std::vector<double>& r, const std::vector<double>& s,
               const std::vector<double>& q) {
  const std::size_t n = r.size();
  // Terms are multiples of 2^-4, so long double accumulation keeps the sums
  // exact far past the n used anywhere in the pipeline.
  long double d1 = 0.0L;
  long double d2 = 0.0L;
  long double d3 = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const long double qi = q[i];
    const long double ri = r[i];
    const long double si = s[i];
    d1 += (qi - 1.0L) * (qi - 2.0L);
    d2 += (ri - 1.0L) * (ri - 2.0L) * (si - 1.0L) * (si - 2.0L);
    d3 += (ri - 2.0L) * (si - 2.0L) * (qi - 1.0L);
  }
  const long double nn = static_cast<long double>(n);
  const long double num =
      (nn - 2.0L) * (nn - 3.0L) * d1 + d2 - 2.0L * (nn - 2.0L) * d3;
  const long double den = nn * (nn - 1.0L) * (nn - 2.0L) * (nn - 3.0L) * (nn - 4.0L);
  return static_cast<double>(30.0L * num / den);
}

// Prefix-count tree over compressed y ranks.
class FenwickTree {
 public:
  explicit FenwickTree(std::size_t size) : tree_(size + 1, 0) {}

  void add(std::size_t idx) {
    for (std::size_t i = idx; i < tree_.size(); i += i & (~i + 1)) ++tree_[i];
  }

  // Count of inserted values with compressed rank <= idx.
  std::size_t prefix(std::size_t idx) const {
    std::size_t total = 0;
    for (std::size_t i = idx; i > 0; i -= i & (~i + 1)) total += tree_[i];
    return total;
  }

 private:
  std::vector<std::size_t> tree_;
};

}  // namespace

DStatistic hoeffding_d(const PairedSamples& samples) {
  validate(samples);
  const std::size_t n = samples.x.size();
  const std::vector<double>& x = samples.x;
  const std::vector<double>& y = samples.y;

  const std::vector<double> r = midranks(x);
  const std::vector<double> s = midranks(y);

  // Compress y to dense ranks 1..m.
  std::vector<double> y_sorted = y;
  std::sort(y_sorted.begin(), y_sorted.end());
  y_sorted.erase(std::unique(y_sorted.begin(), y_sorted.end()), y_sorted.end());
  std::vector<std::size_t> y_rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    y_rank[i] = static_cast<std::size_t>(
                    std::lower_bound(y_sorted.begin(), y_sorted.end(), y[i]) - y_sorted.begin()) +
                1;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return y[a] < y[b];
  });

  // Walk groups of tied x in increasing x order. Points already in the tree
  // have strictly smaller x; within a group ties on x are credited 1/2 for a
  // strictly smaller y and 1/4 for a tied y.
  std::vector<double> q(n, 1.0);
  FenwickTree tree(y_sorted.size());
  std::size_t pos = 0;
  while (pos < n) {
    std::size_t end = pos;
    while (end + 1 < n && x[order[end + 1]] == x[order[pos]]) ++end;

    for (std::size_t k = pos; k <= end; ++k) {
      const std::size_t i = order[k];
      const std::size_t below = tree.prefix(y_rank[i] - 1);
      const std::size_t tied = tree.prefix(y_rank[i]) - below;
      q[i] += static_cast<double>(below) + 0.5 * static_cast<double>(tied);
    }
    // Group members are sorted by y: equal-y runs are contiguous.
    std::size_t run = pos;
    while (run <= end) {
      std::size_t run_end = run;
      while (run_end + 1 <= end && y[order[run_end + 1]] == y[order[run]]) ++run_end;
      const double strictly_below = static_cast<double>(run - pos);
      const double tied_in_run = static_cast<double>(run_end - run);
      for (std::size_t k = run; k <= run_end; ++k) {
        q[order[k]] += 0.5 * strictly_below + 0.25 * tied_in_run;
      }
      run = run_end + 1;
    }
    for (std::size_t k = pos; k <= end; ++k) tree.add(y_rank[order[k]]);
    pos = end + 1;
  }

  DStatistic d{combine(r, s, q)};
  assert(d.value > -0.5 - 1e-9 && d.value < 1.0 + 1e-9);
  return d;
}

DStatistic hoeffding_d_oracle(const PairedSamples& samples) {
  validate(samples);
  const std::size_t n = samples.x.size();
  const std::vector<double>& x = samples.x;
  const std::vector<double>& y = samples.y;

  const std::vector<double> r = midranks(x);
  const std::vector<double> s = midranks(y);

  std::vector<double> q(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const bool x_less = x[j] < x[i];
      const bool y_less = y[j] < y[i];
      const bool x_tied = x[j] == x[i];
      const bool y_tied = y[j] == y[i];
      if (x_less && y_less)
        q[i] += 1.0;
      else if ((x_tied && y_less) || (x_less && y_tied))
        q[i] += 0.5;
      else if (x_tied && y_tied)
        q[i] += 0.25;
    }
  }
  return DStatistic{combine(r, s, q)};
}

bool dependent(const PairedSamples& samples, double gamma) {
  if (gamma <= 0.0) throw std::invalid_argument("gamma must be positive");
  return hoeffding_d(samples).value > gamma;
}

}  // namespace causalmask

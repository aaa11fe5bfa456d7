#pragma once

// Block accumulation with jackknife errors, a deterministic block-parallel
// loop, and the one-sample Kolmogorov-Smirnov statistic.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace carnot {

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

/// Number of worker threads: `requested` if positive, else CARNOT_THREADS,
/// else 1.
int resolve_threads(int requested);

/// Runs fn(block) for every block in [0, n_blocks). Blocks are independent,
/// so the assignment of blocks to threads never changes results. The first
/// exception by block index is rethrown.
void parallel_blocks(std::size_t n_blocks, int threads, const std::function<void(std::size_t)>& fn);

/// Samples 0..n-1 are split into contiguous blocks; each block keeps
/// per-component sums. A block must only be written by one thread.
class BlockAccumulator {
 public:
  BlockAccumulator(std::size_t width, std::size_t n, std::size_t blocks = 100);

  std::size_t width() const { return width_; }
  std::size_t blocks() const { return sums_.size(); }
  std::size_t begin(std::size_t block) const { return block * n_ / sums_.size(); }
  std::size_t end(std::size_t block) const { return (block + 1) * n_ / sums_.size(); }

  void add(std::size_t block, std::span<const double> values);
  std::size_t count() const;

  std::vector<double> means() const;
  Estimate mean(std::size_t component) const;
  /// Delete-one-block jackknife for a smooth function of the component means.
  Estimate jackknife(const std::function<double(std::span<const double>)>& fn) const;

 private:
  std::vector<double> means_without(std::size_t block) const;

  std::size_t width_;
  std::size_t n_;
  std::vector<std::vector<double>> sums_;
  std::vector<std::size_t> counts_;
};

/// sup |F_n - F| for the sample against a continuous cdf. The sample is sorted.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);
/// Asymptotic 1% critical value 1.63 / sqrt(n).
double ks_critical_1pct(std::size_t n);

}  // namespace carnot

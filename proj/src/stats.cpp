#include "carnot/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace carnot {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CARNOT_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

void parallel_blocks(std::size_t n_blocks, int threads, const std::function<void(std::size_t)>& fn) {
  const int workers = static_cast<int>(std::min<std::size_t>(std::max(1, threads), n_blocks));
  if (workers <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr first;
  std::size_t first_block = n_blocks;
  auto work = [&] {
    for (std::size_t b = next++; b < n_blocks; b = next++) {
      try {
        fn(b);
      } catch (...) {
        std::lock_guard lock(mu);
        if (b < first_block) {
          first_block = b;
          first = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 0; i < workers; ++i) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (first) std::rethrow_exception(first);
}

BlockAccumulator::BlockAccumulator(std::size_t width, std::size_t n, std::size_t blocks)
    : width_(width), n_(n) {
  const std::size_t b = std::max<std::size_t>(1, std::min(blocks, n));
  sums_.assign(b, std::vector<double>(width, 0.0));
  counts_.assign(b, 0);
}

void BlockAccumulator::add(std::size_t block, std::span<const double> values) {
  auto& s = sums_[block];
  for (std::size_t k = 0; k < width_; ++k) s[k] += values[k];
  ++counts_[block];
}

std::size_t BlockAccumulator::count() const {
  std::size_t c = 0;
  for (auto v : counts_) c += v;
  return c;
}

std::vector<double> BlockAccumulator::means() const {
  std::vector<double> m(width_, 0.0);
  for (const auto& s : sums_)
    for (std::size_t k = 0; k < width_; ++k) m[k] += s[k];
  const double c = static_cast<double>(count());
  for (auto& v : m) v = c > 0 ? v / c : 0.0;
  return m;
}

std::vector<double> BlockAccumulator::means_without(std::size_t block) const {
  std::vector<double> m(width_, 0.0);
  std::size_t c = 0;
  for (std::size_t b = 0; b < sums_.size(); ++b) {
    if (b == block) continue;
    for (std::size_t k = 0; k < width_; ++k) m[k] += sums_[b][k];
    c += counts_[b];
  }
  for (auto& v : m) v = c > 0 ? v / static_cast<double>(c) : 0.0;
  return m;
}

Estimate BlockAccumulator::mean(std::size_t component) const {
  return jackknife([component](std::span<const double> m) { return m[component]; });
}

Estimate BlockAccumulator::jackknife(const std::function<double(std::span<const double>)>& fn) const {
  Estimate e;
  e.value = fn(means());
  const std::size_t b = sums_.size();
  if (b < 2) return e;
  std::vector<double> theta(b);
  double avg = 0.0;
  for (std::size_t i = 0; i < b; ++i) {
    theta[i] = fn(means_without(i));
    avg += theta[i];
  }
  avg /= static_cast<double>(b);
  double var = 0.0;
  for (double v : theta) var += (v - avg) * (v - avg);
  e.se = std::sqrt(var * static_cast<double>(b - 1) / static_cast<double>(b));
  return e;
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double ks_critical_1pct(std::size_t n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

}  // namespace carnot

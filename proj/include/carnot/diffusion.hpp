#pragma once

// Monte Carlo simulation of the diffusion generated by L = sum V_i^2 started
// at the identity. Each substep of length delta multiplies the current point
// by exp(sqrt(2 delta) sum_i N_i e_i) through the BCH product, so the
// horizontal part is exact and the higher layers carry an O(delta) bias in
// their moments. Sample k draws from its own Philox stream keyed by the seed.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "carnot/group.hpp"
#include "carnot/stats.hpp"

namespace carnot {

enum class Scheme { ExactStep2, StratonovichHeun };

std::string_view to_string(Scheme s);
/// Accepts "exact-step2" and "stratonovich-heun".
Scheme parse_scheme(std::string_view name);

struct MCConfig {
  std::uint64_t seed = 1;
  std::size_t n_samples = 10000;
  int substeps = 200;  // per unit time
  Scheme scheme = Scheme::StratonovichHeun;
  int threads = 0;     // 0: CARNOT_THREADS or 1
  /// Multiply increments on the left (right-invariant diffusion).
  bool right_increments = false;

  void validate(const GroupSpec& spec) const;
  /// Number of substeps actually used on [0, t].
  int steps_for(double t) const;
};

using ScalarFunction = std::function<double(std::span<const double>)>;

class SampleBatch {
 public:
  SampleBatch(double t, MCConfig config, int dim, std::vector<double> points)
      : t_(t), config_(config), dim_(dim), points_(std::move(points)) {}

  double t() const { return t_; }
  const MCConfig& config() const { return config_; }
  int dim() const { return dim_; }
  std::size_t size() const { return points_.size() / dim_; }
  std::span<const double> point(std::size_t k) const {
    return {points_.data() + k * dim_, static_cast<std::size_t>(dim_)};
  }
  const std::vector<double>& data() const { return points_; }

 private:
  double t_;
  MCConfig config_;
  int dim_;
  std::vector<double> points_;
};

SampleBatch sample_endpoint(const GroupSpec& spec, double t, const MCConfig& config);

/// Mean of f(g . xi_k) over the batch with a block-jackknife standard error.
/// The same batch may serve many g (common random numbers).
Estimate estimate_Ptf(const GroupSpec& spec, const SampleBatch& batch, const ScalarFunction& f,
                      std::span<const double> g);
Estimate estimate_Ptf(const GroupSpec& spec, double t, const ScalarFunction& f,
                      std::span<const double> g, const MCConfig& config);

struct BiasReport {
  int steps[3] = {0, 0, 0};   // K, 2K, 4K on [0, t]
  Estimate moment[3];         // E f at each level
  Estimate diff_coarse;       // m_K - m_2K
  Estimate diff_fine;         // m_2K - m_4K
  Estimate ratio;             // diff_coarse / diff_fine; ~2 for first order
  Estimate extrapolated;      // 2 m_4K - m_2K
  std::string observable;
};

/// Runs three coupled levels (K, 2K, 4K steps, the coarse increments being
/// sums of the fine ones) and reports the Richardson estimate. The default
/// observable is the sum of squares of the top-layer coordinates.
BiasReport bias_diagnostic(const GroupSpec& spec, double t, const MCConfig& config,
                           std::optional<ScalarFunction> observable = std::nullopt,
                           std::string observable_name = "");

}  // namespace carnot

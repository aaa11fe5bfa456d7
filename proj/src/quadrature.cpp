#include "carnot/quadrature.hpp"

#include <map>
#include <mutex>
#include <numbers>

#include "carnot/error.hpp"

namespace carnot {

namespace {

GaussLegendreRule compute_rule(int n) {
  GaussLegendreRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
  if (n < 1 || n > 256) fail(ErrorCode::InvalidArgument, "Gauss-Legendre order must be in [1, 256]");
  static std::mutex mutex;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

GaussLegendreRule composite_rule(double a, double b, int panels, int nodes) {
  const auto& base = gauss_legendre(nodes);
  GaussLegendreRule out;
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    for (std::size_t q = 0; q < base.nodes.size(); ++q) {
      out.nodes.push_back(lo + 0.5 * width * (base.nodes[q] + 1.0));
      out.weights.push_back(0.5 * width * base.weights[q]);
    }
  }
  return out;
}

TensorGrid tensor_grid(std::span<const GaussLegendreRule> rules) {
  TensorGrid g;
  g.dim = static_cast<int>(rules.size());
  std::size_t total = 1;
  for (const auto& r : rules) total *= r.nodes.size();
  g.points.reserve(total * g.dim);
  g.weights.reserve(total);
  std::vector<std::size_t> idx(g.dim, 0);
  for (std::size_t count = 0; count < total; ++count) {
    double w = 1.0;
    for (int d = 0; d < g.dim; ++d) {
      g.points.push_back(rules[d].nodes[idx[d]]);
      w *= rules[d].weights[idx[d]];
    }
    g.weights.push_back(w);
    for (int d = g.dim - 1; d >= 0; --d) {
      if (++idx[d] < rules[d].nodes.size()) break;
      idx[d] = 0;
    }
  }
  return g;
}

}  // namespace carnot

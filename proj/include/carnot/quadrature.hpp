#pragma once

// Gauss-Legendre rules, adaptive panel integration of vector-valued
// integrands, and tensor-product grids.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace carnot {

struct GaussLegendreRule {
  std::vector<double> nodes;  // on [-1, 1], ascending
  std::vector<double> weights;
};

/// n-point rule, computed by Newton iteration on P_n; cached per n.
const GaussLegendreRule& gauss_legendre(int n);

struct AdaptiveOptions {
  int nodes = 16;
  int initial_panels = 8;
  double rel_tol = 1e-12;  // relative to the component's L1 norm
  double abs_tol = 0.0;
  int max_depth = 30;
};

struct AdaptiveResult {
  std::vector<double> value;
  std::vector<double> l1;  // integral of |f_k|
  std::vector<double> error;
  int evaluations = 0;
  bool converged = true;
};

/// Integrates f: R -> R^width over [a, b]. f is called as f(x, out) and must
/// fill out[0..width). Panels are bisected until the one-panel and two-half
/// estimates agree to the panel's share of max(abs_tol, rel_tol * L1_k) for
/// every component.
template <class F>
AdaptiveResult integrate_adaptive(F&& f, std::size_t width, double a, double b,
                                  const AdaptiveOptions& opt = {}) {
  const auto& rule = gauss_legendre(opt.nodes);
  AdaptiveResult res;
  res.value.assign(width, 0.0);
  res.l1.assign(width, 0.0);
  res.error.assign(width, 0.0);
  if (!(b > a)) return res;

  std::vector<double> buf(width);
  auto panel = [&](double lo, double hi, std::vector<double>& val, std::vector<double>& l1) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    val.assign(width, 0.0);
    l1.assign(width, 0.0);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      f(mid + half * rule.nodes[q], std::span<double>(buf));
      const double w = half * rule.weights[q];
      for (std::size_t k = 0; k < width; ++k) {
        val[k] += w * buf[k];
        l1[k] += w * std::abs(buf[k]);
      }
    }
    res.evaluations += static_cast<int>(rule.nodes.size());
  };

  struct Cell {
    double lo, hi;
    int depth;
    std::vector<double> val, l1;
  };
  std::vector<Cell> stack;
  const int p0 = std::max(1, opt.initial_panels);
  std::vector<double> l1_total(width, 0.0);
  for (int i = 0; i < p0; ++i) {
    Cell c{a + (b - a) * i / p0, a + (b - a) * (i + 1) / p0, 0, {}, {}};
    panel(c.lo, c.hi, c.val, c.l1);
    for (std::size_t k = 0; k < width; ++k) l1_total[k] += c.l1[k];
    stack.push_back(std::move(c));
  }
  std::vector<double> tol(width);
  for (std::size_t k = 0; k < width; ++k) tol[k] = std::max(opt.abs_tol, opt.rel_tol * l1_total[k]);

  std::vector<double> lv, ll, rv, rl;
  while (!stack.empty()) {
    Cell c = std::move(stack.back());
    stack.pop_back();
    const double mid = 0.5 * (c.lo + c.hi);
    panel(c.lo, mid, lv, ll);
    panel(mid, c.hi, rv, rl);
    const double share = (c.hi - c.lo) / (b - a);
    bool ok = true;
    for (std::size_t k = 0; k < width && ok; ++k)
      ok = std::abs(lv[k] + rv[k] - c.val[k]) <= tol[k] * share;
    if (ok || c.depth >= opt.max_depth) {
      if (!ok) res.converged = false;
      for (std::size_t k = 0; k < width; ++k) {
        res.value[k] += lv[k] + rv[k];
        res.l1[k] += ll[k] + rl[k];
        res.error[k] += std::abs(lv[k] + rv[k] - c.val[k]);
      }
      continue;
    }
    stack.push_back(Cell{mid, c.hi, c.depth + 1, rv, rl});
    stack.push_back(Cell{c.lo, mid, c.depth + 1, lv, ll});
  }
  return res;
}

/// Composite Gauss-Legendre rule on [a, b]: `panels` equal panels of
/// `nodes` points each.
GaussLegendreRule composite_rule(double a, double b, int panels, int nodes);

/// Tensor product of 1-D rules; points are stored row-major (dim per point).
struct TensorGrid {
  int dim = 0;
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  std::span<const double> point(std::size_t i) const {
    return {points.data() + i * dim, static_cast<std::size_t>(dim)};
  }
};

TensorGrid tensor_grid(std::span<const GaussLegendreRule> rules);

/// Adaptive cubature of a scalar integrand over an axis-aligned box of
/// dimension 0..3 by recursive bisection of every axis.
struct CubatureResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

template <class F>
CubatureResult integrate_box_adaptive(F&& f, std::span<const double> lo, std::span<const double> hi,
                                      double rel_tol, int nodes = 8, int max_depth = 10) {
  const int dim = static_cast<int>(lo.size());
  CubatureResult out;
  std::vector<double> x(dim);
  if (dim == 0) {
    out.value = f(std::span<const double>(x));
    return out;
  }
  const auto& rule = gauss_legendre(nodes);
  const int q = static_cast<int>(rule.nodes.size());
  auto cell = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    std::vector<int> idx(dim, 0);
    while (true) {
      double w = 1.0;
      for (int d = 0; d < dim; ++d) {
        const double h = 0.5 * (b[d] - a[d]);
        x[d] = 0.5 * (a[d] + b[d]) + h * rule.nodes[idx[d]];
        w *= h * rule.weights[idx[d]];
      }
      sum += w * f(std::span<const double>(x));
      int d = 0;
      while (d < dim && ++idx[d] == q) idx[d++] = 0;
      if (d == dim) break;
    }
    return sum;
  };
  struct Box {
    std::vector<double> a, b;
    int depth;
    double value;
  };
  std::vector<double> a0(lo.begin(), lo.end()), b0(hi.begin(), hi.end());
  const double whole = cell(a0, b0);
  const double total_volume = [&] {
    double v = 1.0;
    for (int d = 0; d < dim; ++d) v *= b0[d] - a0[d];
    return v;
  }();
  const double tol = rel_tol * std::max(std::abs(whole), 1e-300);
  std::vector<Box> stack{{a0, b0, 0, whole}};
  const int children = 1 << dim;
  while (!stack.empty()) {
    Box bx = std::move(stack.back());
    stack.pop_back();
    std::vector<Box> kids;
    double sum = 0.0;
    for (int c = 0; c < children; ++c) {
      Box k{bx.a, bx.b, bx.depth + 1, 0.0};
      for (int d = 0; d < dim; ++d) {
        const double mid = 0.5 * (bx.a[d] + bx.b[d]);
        if (c & (1 << d)) k.a[d] = mid; else k.b[d] = mid;
      }
      k.value = cell(k.a, k.b);
      sum += k.value;
      kids.push_back(std::move(k));
    }
    double vol = 1.0;
    for (int d = 0; d < dim; ++d) vol *= bx.b[d] - bx.a[d];
    const double err = std::abs(sum - bx.value);
    if (err <= tol * vol / total_volume || bx.depth >= max_depth) {
      if (err > tol * vol / total_volume) out.converged = false;
      out.value += sum;
      out.error += err;
      continue;
    }
    for (auto& k : kids) stack.push_back(std::move(k));
  }
  return out;
}

}  // namespace carnot

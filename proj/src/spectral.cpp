#include "carnot/spectral.hpp"

#include <cmath>
#include <numbers>

#include "carnot/jacobi.hpp"
#include "carnot/quadrature.hpp"

namespace carnot {

std::string_view to_string(SpectralMethod m) { return m == SpectralMethod::MonteCarlo ? "mc" : "quad"; }

SpectralMethod parse_spectral_method(std::string_view name) {
  if (name == "mc" || name == "monte-carlo") return SpectralMethod::MonteCarlo;
  if (name == "quad" || name == "quadrature") return SpectralMethod::Quadrature;
  fail(ErrorCode::InvalidArgument, "unknown method \"" + std::string(name) + "\"");
}

BoundCheck bound_check(const SpectralReport& rep) {
  BoundCheck b;
  b.lower = static_cast<double>(rep.Q) / (2.0 * rep.d);
  b.upper = static_cast<double>(rep.Q) / 2.0;
  const double tol = 3.0 * rep.lambda_error;
  b.lower_ok = rep.lambda >= b.lower - tol;
  b.upper_ok = rep.lambda <= b.upper + tol;
  // Pure linear algebra for a PSD matrix; only rounding is allowed for.
  const double eps = 1e-12 * std::max(1.0, std::abs(rep.trace));
  b.trace_chain_ok = rep.trace / rep.d <= rep.lambda + eps && rep.lambda <= rep.trace + eps;
  b.pass = b.lower_ok && b.upper_ok && b.trace_chain_ok;
  return b;
}

void finish_report(SpectralReport& rep) {
  const TopEigenpair top = top_eigenpair(rep.M, rep.d);
  rep.lambda = top.value;
  rep.top_vector = top.vector;
  rep.eigen_residual = top.residual;
  rep.trace = 0.0;
  for (int i = 0; i < rep.d; ++i) rep.trace += rep.M[i * rep.d + i];
  rep.trace_target = rep.Q / 2.0;
  rep.bounds = bound_check(rep);
}

namespace {

SpectralReport blank_report(const GroupSpec& spec, SpectralMethod method) {
  SpectralReport rep;
  rep.group = spec.name();
  rep.Q = spec.homogeneous_dim();
  rep.d = spec.horizontal_dim();
  rep.method = method;
  return rep;
}

struct Sampled {
  BlockAccumulator acc;
  std::size_t rejected = 0;
  std::size_t total = 0;
};

// Per-sample values: rr (d*d), r (d), left Gamma (1), then V^V^ ln p (d*d) when asked.
Sampled sample_log_gradients(const KernelEvaluator& kernel, double t, const MCConfig& mc, bool second) {
  const GroupSpec& spec = kernel.spec();
  const int d = spec.horizontal_dim();
  const std::size_t width = d * d + d + 1 + (second ? d * d : 0);
  const SampleBatch batch = sample_endpoint(spec, t, mc);
  Sampled out{BlockAccumulator(width, batch.size()), 0, batch.size()};
  std::vector<std::size_t> rejected(out.acc.blocks(), 0);
  parallel_blocks(out.acc.blocks(), resolve_threads(mc.threads), [&](std::size_t b) {
    std::vector<double> v(width);
    for (std::size_t k = out.acc.begin(b); k < out.acc.end(b); ++k) {
      LogDerivatives ld;
      try {
        ld = kernel.log_derivatives(t, batch.point(k), second);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::NumericalUnderflow) {
          ++rejected[b];
          continue;
        }
        fail(e.code(), "sample " + std::to_string(k) + ": " + e.what());
      }
      std::size_t pos = 0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) v[pos++] = ld.right[i] * ld.right[j];
      for (int i = 0; i < d; ++i) v[pos++] = ld.right[i];
      double gamma = 0.0;
      for (double x : ld.left) gamma += x * x;
      v[pos++] = gamma;
      if (second)
        for (double x : ld.right_second) v[pos++] = x;
      out.acc.add(b, v);
    }
  });
  for (auto r : rejected) out.rejected += r;
  return out;
}

void require_rejection(const Sampled& s, double max_fraction) {
  const double frac = static_cast<double>(s.rejected) / static_cast<double>(s.total);
  if (frac >= max_fraction)
    fail(ErrorCode::ExcessiveRejection, std::to_string(s.rejected) + " of " + std::to_string(s.total) +
                                            " samples rejected for kernel underflow");
}

struct GridIntegrals {
  double mass = 0.0;
  std::vector<double> rr;  // d x d
  double gamma_left = 0.0;
};

GridIntegrals integrate_grid(const KernelEvaluator& kernel, double t, const QuadratureGrid& grid, int level) {
  const GroupSpec& spec = kernel.spec();
  const int n = spec.dim();
  const int d = spec.horizontal_dim();
  if (n > 4)
    fail(ErrorCode::DimensionTooLarge, "quadrature of M needs dimension <= 4, group \"" + spec.name() +
                                           "\" has " + std::to_string(n));
  const int scale = 1 << std::max(0, level);
  GridIntegrals out;
  out.rr.assign(d * d, 0.0);
  auto accumulate = [&](GridIntegrals& acc, const LogDerivatives& ld, double w) {
    acc.mass += w * ld.p;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) acc.rr[i * d + j] += w * ld.p * ld.right[i] * ld.right[j];
    double gamma = 0.0;
    for (double x : ld.left) gamma += x * x;
    acc.gamma_left += w * ld.p * gamma;
  };

  if (spec.step() == 1) {
    const double L = grid.radius * std::sqrt(t);
    const GaussLegendreRule axis = composite_rule(-L, L, scale, grid.nodes);
    std::vector<GaussLegendreRule> rules(n, axis);
    const TensorGrid tg = tensor_grid(rules);
    for (std::size_t q = 0; q < tg.size(); ++q) {
      const auto x = tg.point(q);
      accumulate(out, kernel.log_derivatives(kernel.jet(t, x, 1), x, false), tg.weights[q]);
    }
    return out;
  }
  const auto& h = spec.htype();
  if (!h || h->n != 1 || h->m != 1)
    fail(ErrorCode::UnsupportedGroup, "quadrature of M is implemented for abelian groups and H-type R^2 x R");

  // Cylindrical coordinates: p depends on (|x|, z) only, so one jet per (r, z)
  // node serves every angle; the x-gradient rotates with x.
  const GaussLegendreRule rr = composite_rule(0.0, grid.radius * std::sqrt(t), 2 * scale, grid.nodes);
  const GaussLegendreRule zz = composite_rule(-grid.height * t, grid.height * t, 4 * scale, grid.nodes);
  const int n_theta = 8;
  std::vector<GridIntegrals> partial(rr.nodes.size());
  parallel_blocks(rr.nodes.size(), resolve_threads(0), [&](std::size_t ir) {
    GridIntegrals acc;
    acc.rr.assign(d * d, 0.0);
    const double r = rr.nodes[ir];
    for (std::size_t iz = 0; iz < zz.nodes.size(); ++iz) {
      const double base[3] = {r, 0.0, zz.nodes[iz]};
      KernelJet j;
      try {
        j = kernel.jet(t, base, 1);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NumericalUnderflow) throw;
        continue;
      }
      const double gx = j.gradient[0];
      for (int k = 0; k < n_theta; ++k) {
        const double th = 2.0 * std::numbers::pi * k / n_theta;
        const double x[3] = {r * std::cos(th), r * std::sin(th), zz.nodes[iz]};
        KernelJet jr = j;
        jr.gradient[0] = gx * std::cos(th);
        jr.gradient[1] = gx * std::sin(th);
        LogDerivatives ld;
        try {
          ld = kernel.log_derivatives(jr, x, false);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::NumericalUnderflow) throw;
          continue;
        }
        accumulate(acc, ld, rr.weights[ir] * zz.weights[iz] * r * 2.0 * std::numbers::pi / n_theta);
      }
    }
    partial[ir] = std::move(acc);
  });
  for (const auto& p : partial) {
    out.mass += p.mass;
    for (int i = 0; i < d * d; ++i) out.rr[i] += p.rr[i];
    out.gamma_left += p.gamma_left;
  }
  return out;
}

}  // namespace

SpectralReport compute_M_mc(const KernelEvaluator& kernel, const MonteCarloSpectralOptions& opt) {
  const GroupSpec& spec = kernel.spec();
  SpectralReport rep = blank_report(spec, SpectralMethod::MonteCarlo);
  const int d = rep.d;
  const Sampled s = sample_log_gradients(kernel, 1.0, opt.mc, opt.sharpness_probe);
  require_rejection(s, opt.max_rejection);
  rep.samples = s.total;
  rep.rejected = s.rejected;
  rep.rejection_fraction = static_cast<double>(s.rejected) / static_cast<double>(s.total);

  const std::vector<double> means = s.acc.means();
  rep.M.assign(means.begin(), means.begin() + d * d);
  rep.M_error.resize(d * d);
  for (int i = 0; i < d * d; ++i) rep.M_error[i] = s.acc.mean(i).se;
  finish_report(rep);

  auto lambda_of_means = [d](std::span<const double> m) {
    return top_eigenpair(m.subspan(0, d * d), d).value;
  };
  rep.lambda_error = s.acc.jackknife(lambda_of_means).se;
  rep.trace_error = s.acc.jackknife([d](std::span<const double> m) {
                           double tr = 0.0;
                           for (int i = 0; i < d; ++i) tr += m[i * d + i];
                           return tr;
                         }).se;
  if (opt.sharpness_probe) {
    const std::vector<double> a = rep.top_vector;
    const std::size_t off_r = d * d, off_h = d * d + d + 1;
    rep.sharpness_ratio = s.acc.jackknife([&](std::span<const double> m) {
      double num = 0.0, second = 0.0, first = 0.0;
      for (int i = 0; i < d; ++i) {
        first += a[i] * m[off_r + i];
        for (int j = 0; j < d; ++j) {
          num += a[i] * a[j] * m[off_h + i * d + j];
          second += a[i] * a[j] * m[i * d + j];
        }
      }
      return num * num / (second - first * first);
    });
  }
  rep.bounds = bound_check(rep);
  return rep;
}

SpectralReport compute_M_quadrature(const KernelEvaluator& kernel, const QuadratureGrid& grid) {
  SpectralReport rep = blank_report(kernel.spec(), SpectralMethod::Quadrature);
  const int d = rep.d;
  const GridIntegrals fine = integrate_grid(kernel, 1.0, grid, grid.level);
  const GridIntegrals coarse = integrate_grid(kernel, 1.0, grid, grid.level - 1);
  rep.M = fine.rr;
  rep.M_error.resize(d * d);
  for (int i = 0; i < d * d; ++i) rep.M_error[i] = std::abs(fine.rr[i] - coarse.rr[i]);
  rep.mass = fine.mass;
  rep.grid_level = grid.level;
  finish_report(rep);
  SpectralReport other = rep;
  other.M = coarse.rr;
  finish_report(other);
  rep.lambda_error = std::abs(rep.lambda - other.lambda);
  rep.trace_error = std::abs(rep.trace - other.trace);
  rep.bounds = bound_check(rep);
  return rep;
}

TraceCheck trace_identity_check(const KernelEvaluator& kernel, double t, SpectralMethod method,
                                const MCConfig& mc, const QuadratureGrid& grid) {
  if (!(t > 0.0) || !std::isfinite(t)) fail(ErrorCode::InvalidArgument, "time must be positive");
  const GroupSpec& spec = kernel.spec();
  const int d = spec.horizontal_dim();
  TraceCheck tc;
  tc.group = spec.name();
  tc.t = t;
  tc.method = method;
  tc.rhs = spec.homogeneous_dim() / (2.0 * t);
  if (method == SpectralMethod::MonteCarlo) {
    const Sampled s = sample_log_gradients(kernel, t, mc, false);
    require_rejection(s, 1e-4);
    const Estimate e = s.acc.mean(d * d + d);
    tc.lhs = e.value;
    tc.lhs_error = e.se;
    tc.samples = s.total;
    tc.rejected = s.rejected;
  } else {
    const GridIntegrals fine = integrate_grid(kernel, t, grid, grid.level);
    const GridIntegrals coarse = integrate_grid(kernel, t, grid, grid.level - 1);
    tc.lhs = fine.gamma_left;
    tc.lhs_error = std::abs(fine.gamma_left - coarse.gamma_left);
  }
  tc.tolerance = std::max(3.0 * tc.lhs_error, 1e-3 * tc.rhs);
  tc.pass = std::abs(tc.lhs - tc.rhs) < tc.tolerance;
  return tc;
}

}  // namespace carnot

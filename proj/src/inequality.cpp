#include "carnot/inequality.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <cstdio>

#include "carnot/quadrature.hpp"

namespace carnot {

void InequalityCertificate::settle() {
  slack = rhs - lhs;
  pass = lhs <= rhs + tolerance;
}

void BoxSet::validate(const GroupSpec& spec) const {
  if (static_cast<int>(half_widths.size()) != spec.dim())
    fail(ErrorCode::DimensionMismatch, "box has " + std::to_string(half_widths.size()) +
                                           " half-widths, group dimension is " + std::to_string(spec.dim()));
  for (double h : half_widths)
    if (!(h > 0.0) || !std::isfinite(h)) fail(ErrorCode::InvalidArgument, "box half-widths must be positive");
}

double BoxSet::volume() const {
  double v = 1.0;
  for (double h : half_widths) v *= 2.0 * h;
  return v;
}

BoxSet BoxSet::dilate(const GroupSpec& spec, double r) const {
  BoxSet out = *this;
  for (std::size_t a = 0; a < out.half_widths.size(); ++a) out.half_widths[a] *= std::pow(r, spec.weights()[a]);
  return out;
}

std::string BoxSet::describe() const {
  std::string s = "box(";
  char buf[32];
  for (std::size_t a = 0; a < half_widths.size(); ++a) {
    std::snprintf(buf, sizeof buf, "%s%.17g", a ? "," : "", half_widths[a]);
    s += buf;
  }
  return s + ")";
}

namespace {

void require_lambda(const LambdaChoice& l) {
  if (!(l.value > 0.0) || !std::isfinite(l.value)) fail(ErrorCode::InvalidArgument, "Lambda must be positive");
}

// Horizontal gradient of P_t f at g through right-invariant transfer. Per
// sample: f(h), f(h)^2, then the d components of (V^_{Ad_g e_i} f)(h), with
// h = g . xi.
BlockAccumulator transfer_moments(const GroupSpec& spec, const SampleBatch& batch, std::span<const double> g,
                                  const TestFunction& f) {
  spec.require_point(g);
  if (f.dim() != spec.dim()) fail(ErrorCode::DimensionMismatch, "test function dimension differs from group");
  if (batch.dim() != spec.dim()) fail(ErrorCode::DimensionMismatch, "sample batch does not belong to this group");
  const int n = spec.dim();
  const int d = spec.horizontal_dim();
  const std::vector<double> gv(g.begin(), g.end());
  std::vector<VectorField> right_all;
  for (int b = 0; b < n; ++b) right_all.push_back(right_invariant_field(spec, b));
  std::vector<VectorField> transfer;
  for (int i = 0; i < d; ++i) {
    std::vector<double> e(n, 0.0);
    e[i] = 1.0;
    const std::vector<double> v = adjoint(spec, gv, e);
    std::vector<Polynomial> coeff(n, Polynomial(n));
    for (int b = 0; b < n; ++b) {
      if (v[b] == 0.0) continue;
      for (int a = 0; a < n; ++a) coeff[a] += v[b] * right_all[b].coefficient(a);
    }
    transfer.emplace_back(std::move(coeff));
  }
  BlockAccumulator acc(2 + d, batch.size());
  parallel_blocks(acc.blocks(), resolve_threads(batch.config().threads), [&](std::size_t blk) {
    std::vector<double> h(n), grad(n), c(n), vals(2 + d);
    for (std::size_t k = acc.begin(blk); k < acc.end(blk); ++k) {
      product_into(spec, g, batch.point(k), h);
      const double fv = f.value(h);
      f.gradient(h, grad);
      vals[0] = fv;
      vals[1] = fv * fv;
      for (int i = 0; i < d; ++i) {
        transfer[i].evaluate(h, c);
        double s = 0.0;
        for (int a = 0; a < n; ++a) s += c[a] * grad[a];
        vals[2 + i] = s;
      }
      acc.add(blk, vals);
    }
  });
  return acc;
}

double gamma_of_means(std::span<const double> m, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += m[2 + i] * m[2 + i];
  return s;
}

}  // namespace

InequalityCertificate reverse_poincare_exact(const Calculus& calc, double t, std::span<const double> g,
                                             const Polynomial& f, const LambdaChoice& lambda) {
  require_lambda(lambda);
  if (!(t > 0.0)) fail(ErrorCode::InvalidArgument, "time must be positive");
  calc.spec().require_point(g);
  const Polynomial pf = calc.heat_apply(t, f);
  const Polynomial pf2 = calc.heat_apply(t, f * f);
  InequalityCertificate c;
  c.kind = "reverse-poincare";
  c.group = calc.spec().name();
  c.t = t;
  c.input = f.to_string();
  c.point.assign(g.begin(), g.end());
  c.lambda = lambda;
  c.lhs = calc.carre_du_champ(pf, pf).evaluate(g);
  const double pfg = pf.evaluate(g);
  const double variance = pf2.evaluate(g) - pfg * pfg;
  c.rhs = lambda.value / t * variance;
  c.lhs_method = "exact polynomial";
  c.rhs_method = "exact polynomial";
  c.tolerance = 1e-9 * std::max({1.0, std::abs(c.lhs), std::abs(c.rhs)});
  c.details.emplace_back("variance", variance);
  c.settle();
  return c;
}

InequalityCertificate reverse_poincare_mc(const GroupSpec& spec, const SampleBatch& batch,
                                          std::span<const double> g, const TestFunction& f,
                                          const LambdaChoice& lambda) {
  require_lambda(lambda);
  const int d = spec.horizontal_dim();
  const double t = batch.t();
  const BlockAccumulator acc = transfer_moments(spec, batch, g, f);
  auto lhs = [d](std::span<const double> m) { return gamma_of_means(m, d); };
  auto rhs = [&](std::span<const double> m) { return lambda.value / t * (m[1] - m[0] * m[0]); };
  InequalityCertificate c;
  c.kind = "reverse-poincare";
  c.group = spec.name();
  c.t = t;
  c.input = f.describe();
  c.point.assign(g.begin(), g.end());
  c.lambda = lambda;
  const Estimate l = acc.jackknife(lhs), r = acc.jackknife(rhs);
  const Estimate s = acc.jackknife([&](std::span<const double> m) { return rhs(m) - lhs(m); });
  c.lhs = l.value;
  c.rhs = r.value;
  c.lhs_error = l.se;
  c.rhs_error = r.se;
  c.tolerance = 3.0 * s.se;
  c.lhs_method = "monte-carlo right-invariant transfer";
  c.rhs_method = "monte-carlo";
  c.details.emplace_back("samples", static_cast<double>(batch.size()));
  c.settle();
  return c;
}

InequalityCertificate gradient_bound_check(const GroupSpec& spec, const SampleBatch& batch,
                                           std::span<const double> g, const TestFunction& f,
                                           const LambdaChoice& lambda) {
  require_lambda(lambda);
  const double sup = f.sup_norm();
  if (!std::isfinite(sup)) fail(ErrorCode::InvalidArgument, "gradient bound needs a bounded function");
  const int d = spec.horizontal_dim();
  const BlockAccumulator acc = transfer_moments(spec, batch, g, f);
  const Estimate l = acc.jackknife([d](std::span<const double> m) { return gamma_of_means(m, d); });
  InequalityCertificate c;
  c.kind = "gradient-bound";
  c.group = spec.name();
  c.t = batch.t();
  c.input = f.describe();
  c.point.assign(g.begin(), g.end());
  c.lambda = lambda;
  c.lhs = l.value;
  c.lhs_error = l.se;
  c.rhs = lambda.value / batch.t() * sup * sup;
  c.tolerance = 3.0 * l.se;
  c.lhs_method = "monte-carlo right-invariant transfer";
  c.rhs_method = "closed form";
  c.details.emplace_back("sup_norm", sup);
  c.settle();
  return c;
}

InequalityCertificate pseudo_poincare_check(const GroupSpec& spec, double t, const TestFunction& f,
                                            const LambdaChoice& lambda, const PseudoPoincareOptions& opt) {
  require_lambda(lambda);
  if (!(t > 0.0)) fail(ErrorCode::InvalidArgument, "time must be positive");
  const auto support = f.support();
  if (!support) fail(ErrorCode::InvalidArgument, "pseudo-Poincare check needs a compactly supported function");
  if (f.dim() != spec.dim()) fail(ErrorCode::DimensionMismatch, "test function dimension differs from group");
  const int n = spec.dim();

  std::vector<GaussLegendreRule> axes;
  for (double h : *support) {
    const double L = h * (1.0 + opt.padding);
    axes.push_back(composite_rule(-L, L, opt.panels, opt.nodes));
  }
  const TensorGrid grid = tensor_grid(axes);
  const SampleBatch batch = sample_endpoint(spec, t, opt.mc);
  const double N = static_cast<double>(batch.size());

  // Per node: |P_t f - f|, P_t f and the standard error of P_t f, each times the weight.
  BlockAccumulator layout(0, grid.size(), 256);
  std::vector<double> abs_part(layout.blocks(), 0.0), mass_part(layout.blocks(), 0.0), err_part(layout.blocks(), 0.0);
  parallel_blocks(layout.blocks(), resolve_threads(opt.mc.threads), [&](std::size_t b) {
    std::vector<double> h(n);
    for (std::size_t q = layout.begin(b); q < layout.end(b); ++q) {
      const auto x = grid.point(q);
      double s = 0.0, s2 = 0.0;
      for (std::size_t k = 0; k < batch.size(); ++k) {
        product_into(spec, x, batch.point(k), h);
        const double v = f.value(h);
        s += v;
        s2 += v * v;
      }
      const double mean = s / N;
      const double se = std::sqrt(std::max(0.0, s2 / N - mean * mean) / std::max(1.0, N - 1.0));
      const double w = grid.weights[q];
      abs_part[b] += w * std::abs(mean - f.value(x));
      mass_part[b] += w * mean;
      err_part[b] += w * se;
    }
  });
  double box_abs = 0.0, box_mass = 0.0, box_err = 0.0;
  for (std::size_t b = 0; b < layout.blocks(); ++b) {
    box_abs += abs_part[b];
    box_mass += mass_part[b];
    box_err += err_part[b];
  }
  const std::vector<double> lo(support->begin(), support->end());
  std::vector<double> neg(lo.size());
  for (std::size_t a = 0; a < lo.size(); ++a) neg[a] = -lo[a];
  const CubatureResult mass_f = integrate_box_adaptive(
      [&](std::span<const double> x) { return f.value(x); }, neg, lo, opt.rhs_rel_tol, 8, 12);
  // Outside the box f = 0 and P_t f >= 0, so that part of ||P_t f - f||_1 is
  // the mass of P_t f that left the box: int f - int_box P_t f.
  const double outside = std::max(0.0, mass_f.value - box_mass);

  const HorizontalGradient hg(spec);
  const CubatureResult grad = integrate_box_adaptive(
      [&](std::span<const double> x) { return std::sqrt(hg.gamma(f, x)); }, neg, lo, opt.rhs_rel_tol, 8, 12);
  if (!grad.converged || !mass_f.converged)
    fail(ErrorCode::QuadratureNotConverged, "cubature over the support of f did not converge");

  InequalityCertificate c;
  c.kind = "pseudo-poincare";
  c.group = spec.name();
  c.t = t;
  c.input = f.describe();
  c.lambda = lambda;
  c.lhs = box_abs + outside;
  c.lhs_error = 2.0 * box_err + mass_f.error;
  c.rhs = 2.0 * std::sqrt(lambda.value * t) * grad.value;
  c.rhs_error = 2.0 * std::sqrt(lambda.value * t) * grad.error;
  c.tolerance = c.lhs_error + c.rhs_error;
  c.lhs_method = "tensor quadrature of monte-carlo P_t f plus escaped mass";
  c.rhs_method = "adaptive cubature of sqrt(Gamma f)";
  c.details.emplace_back("box_part", box_abs);
  c.details.emplace_back("escaped_mass", outside);
  c.details.emplace_back("integral_f", mass_f.value);
  c.details.emplace_back("integral_sqrt_gamma", grad.value);
  c.details.emplace_back("grid_nodes", static_cast<double>(grid.size()));
  c.details.emplace_back("samples", N);
  c.settle();
  return c;
}

PerimeterResult horizontal_perimeter(const GroupSpec& spec, const BoxSet& box, double rel_tol) {
  box.validate(spec);
  const int n = spec.dim();
  const std::vector<VectorField> fields = left_invariant_fields(spec);
  PerimeterResult out;
  for (int a = 0; a < n; ++a) {
    std::vector<double> lo, hi;
    for (int b = 0; b < n; ++b) {
      if (b == a) continue;
      lo.push_back(-box.half_widths[b]);
      hi.push_back(box.half_widths[b]);
    }
    for (double side : {-1.0, 1.0}) {
      auto integrand = [&](std::span<const double> y) {
        std::vector<double> x(n);
        for (int b = 0, k = 0; b < n; ++b) x[b] = b == a ? side * box.half_widths[a] : y[k++];
        double s = 0.0;
        for (const auto& v : fields) {
          const double c = v.coefficient(a).is_zero() ? 0.0 : v.coefficient(a).evaluate(x);
          s += c * c;
        }
        return std::sqrt(s);
      };
      const CubatureResult r = integrate_box_adaptive(integrand, lo, hi, rel_tol, 8, 14);
      out.value += r.value;
      out.error += r.error;
      out.converged = out.converged && r.converged;
    }
  }
  if (!out.converged) fail(ErrorCode::QuadratureNotConverged, "perimeter cubature did not converge");
  return out;
}

double isoperimetric_constant_printed(int Q, double p1, double lambda) {
  return std::pow(1.0 + Q, (Q + 1.0) / Q) * std::pow(p1, 1.0 / Q) * lambda / Q;
}

double isoperimetric_constant_sqrt(int Q, double p1, double lambda) {
  return std::pow(1.0 + Q, (Q + 1.0) / Q) * std::pow(p1, 1.0 / Q) * std::sqrt(lambda) / Q;
}

InequalityCertificate isoperimetric_check(const KernelEvaluator& kernel, const BoxSet& box,
                                          const LambdaChoice& lambda, double rel_tol) {
  require_lambda(lambda);
  const GroupSpec& spec = kernel.spec();
  box.validate(spec);
  const int Q = spec.homogeneous_dim();
  const double mu = box.volume();
  const PerimeterResult per = horizontal_perimeter(spec, box, rel_tol);
  const double p1 = kernel.kernel_at_origin(1.0);

  // mu <= sqrt(Lambda t) P + p_1(0) t^{-Q/2} mu^2 for every t > 0, so
  // P >= max_t phi(t). phi vanishes at t0 and tends to 0 at infinity.
  auto phi = [&](double s) {
    const double t = std::exp(s);
    return (mu - p1 * mu * mu * std::pow(t, -0.5 * Q)) / std::sqrt(lambda.value * t);
  };
  const double s0 = 2.0 / Q * std::log(p1 * mu);
  const double s1 = s0 + 40.0 / Q;
  const auto [s_opt, neg_phi] =
      boost::math::tools::brent_find_minima([&](double s) { return -phi(s); }, s0, s1, 40);
  if (!(neg_phi < 0.0) || s_opt - s0 < 1e-6 || s1 - s_opt < 1e-6)
    fail(ErrorCode::MinimizationFailed, "no interior maximizer of the perimeter lower bound");
  const double lower = -neg_phi;
  const double exponent = (Q - 1.0) / Q;
  const double c_numeric = std::pow(mu, exponent) / lower;

  InequalityCertificate c;
  c.kind = "isoperimetric";
  c.group = spec.name();
  c.input = box.describe();
  c.lambda = lambda;
  c.lhs = std::pow(mu, exponent);
  c.rhs = c_numeric * per.value;
  c.rhs_error = c_numeric * per.error;
  c.tolerance = c.rhs_error + 1e-12 * c.rhs;
  c.lhs_method = "exact volume";
  c.rhs_method = "numerically minimized constant times face cubature";
  c.details.emplace_back("volume", mu);
  c.details.emplace_back("perimeter", per.value);
  c.details.emplace_back("p1_origin", p1);
  c.details.emplace_back("t_opt", std::exp(s_opt));
  c.details.emplace_back("perimeter_lower_bound", lower);
  c.details.emplace_back("C_numeric", c_numeric);
  c.details.emplace_back("C_printed", isoperimetric_constant_printed(Q, p1, lambda.value));
  c.details.emplace_back("C_sqrt_lambda", isoperimetric_constant_sqrt(Q, p1, lambda.value));
  c.details.emplace_back("ratio", c.lhs / c.rhs);
  c.settle();
  return c;
}

}  // namespace carnot

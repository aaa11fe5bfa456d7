#include "carnot/heat_kernel.hpp"

#include <cmath>
#include <numbers>

#include "carnot/quadrature.hpp"

namespace carnot {

namespace {

constexpr double kPi = std::numbers::pi;
// For u >= 1: 1/sinh(u) <= kSinhBound e^{-u} and coth(u) <= kCothBound.
const double kSinhBound = 2.0 / (1.0 - std::exp(-2.0));
const double kCothBound = 1.0 / std::tanh(1.0);

// a = lambda coth(lambda t), log_b = ln(lambda / sinh(lambda t)), with the
// lambda -> 0 limits a -> 1/t, b -> 1/t.
inline void profile(double lambda, double t, double& a, double& log_b) {
  const double u = lambda * t;
  if (u < 1e-4) {
    const double u2 = u * u;
    a = (1.0 + u2 / 3.0 - u2 * u2 / 45.0) / t;
    log_b = std::log((1.0 - u2 / 6.0 + 7.0 * u2 * u2 / 360.0) / t);
    return;
  }
  const double e = std::exp(-2.0 * u);
  a = lambda * (1.0 + e) / (1.0 - e);
  log_b = std::log(2.0 * lambda) - u - std::log1p(-e);
}

struct AngularRule {
  std::vector<double> directions;  // m per point
  std::vector<double> weights;
};

AngularRule angular_rule(int m, int count) {
  AngularRule rule;
  if (m == 2) {
    for (int k = 0; k < count; ++k) {
      const double th = 2.0 * kPi * k / count;
      rule.directions.push_back(std::cos(th));
      rule.directions.push_back(std::sin(th));
      rule.weights.push_back(2.0 * kPi / count);
    }
  } else {
    const auto& gl = gauss_legendre(count);
    for (int i = 0; i < count; ++i) {
      const double u = gl.nodes[i];
      const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
      for (int k = 0; k < count; ++k) {
        const double ph = 2.0 * kPi * k / count;
        rule.directions.push_back(s * std::cos(ph));
        rule.directions.push_back(s * std::sin(ph));
        rule.directions.push_back(u);
        rule.weights.push_back(gl.weights[i] * 2.0 * kPi / count);
      }
    }
  }
  return rule;
}

double sphere_area(int m) {
  // The m = 1 integral runs over the half line and is doubled afterwards.
  return m == 1 ? 1.0 : (m == 2 ? 2.0 * kPi : 4.0 * kPi);
}

std::size_t moment_width(int m, int order) {
  if (order == 0) return 1;
  if (order == 1) return 2 + m;
  return 3 + 2 * m + m * m;
}

}  // namespace

KernelEvaluator::KernelEvaluator(GroupSpec spec, KernelQuadrature quad)
    : spec_(std::move(spec)), quad_(quad) {
  if (!has_formula(spec_))
    fail(ErrorCode::UnsupportedGroup,
         "no heat kernel formula for group \"" + spec_.name() +
             "\" (only abelian and h-type groups with center dimension <= 3)");
  if (spec_.htype()) {
    half_n_ = spec_.htype()->n;
    center_m_ = spec_.htype()->m;
  }
  for (int i = 0; i < spec_.horizontal_dim(); ++i) {
    left_.push_back(compile(left_invariant_field(spec_, i)));
    right_.push_back(compile(right_invariant_field(spec_, i)));
  }
}

bool KernelEvaluator::has_formula(const GroupSpec& spec) {
  if (spec.step() == 1) return true;
  return spec.htype().has_value() && spec.htype()->m <= 3;
}

KernelEvaluator::CompiledField KernelEvaluator::compile(const VectorField& v) {
  CompiledField f;
  const int n = v.dim();
  f.coeff = v.coefficients();
  f.dcoeff.resize(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) f.dcoeff[a].push_back(v.coefficient(b).derivative(a));
  return f;
}

void KernelEvaluator::eval_field(const CompiledField& f, std::span<const double> g,
                                 std::vector<double>& c, std::vector<double>* dc) {
  const int n = static_cast<int>(f.coeff.size());
  c.resize(n);
  for (int b = 0; b < n; ++b) c[b] = f.coeff[b].is_zero() ? 0.0 : f.coeff[b].evaluate(g);
  if (!dc) return;
  dc->resize(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      (*dc)[a * n + b] = f.dcoeff[a][b].is_zero() ? 0.0 : f.dcoeff[a][b].evaluate(g);
}

void KernelEvaluator::require_args(double t, std::span<const double> g) const {
  if (!(t > 0.0) || !std::isfinite(t)) fail(ErrorCode::InvalidArgument, "kernel time must be positive");
  spec_.require_point(g);
  for (double v : g)
    if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "kernel point must be finite");
}

KernelJet KernelEvaluator::abelian_jet(double t, std::span<const double> g, int order) const {
  const int n = spec_.dim();
  double r2 = 0.0;
  for (double v : g) r2 += v * v;
  KernelJet jet;
  jet.value = std::pow(4.0 * kPi * t, -0.5 * n) * std::exp(-r2 / (4.0 * t));
  if (order >= 1) {
    jet.gradient.resize(n);
    for (int a = 0; a < n; ++a) jet.gradient[a] = -g[a] / (2.0 * t) * jet.value;
  }
  if (order >= 2) {
    jet.hessian.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        jet.hessian[a * n + b] =
            (g[a] * g[b] / (4.0 * t * t) - (a == b ? 1.0 / (2.0 * t) : 0.0)) * jet.value;
  }
  return jet;
}

KernelJet KernelEvaluator::htype_jet(double t, std::span<const double> g, int order) const {
  const int n = half_n_;
  const int m = center_m_;
  const int h = 2 * n;
  const int dim = h + m;
  double r = 0.0;
  for (int i = 0; i < h; ++i) r += g[i] * g[i];
  const std::span<const double> z = g.subspan(h, m);
  double zn = 0.0;
  for (double v : z) zn += v * v;
  zn = std::sqrt(zn);

  const std::size_t width = moment_width(m, order);
  const int i_s0 = 2, i_i2 = 2 + m, i_s1 = 3 + m, i_c2 = 3 + 2 * m;

  // Tail bound on [R, inf): C R^q e^{-beta R} / (beta - q / R), valid for R t >= 1.
  const double beta = n * t + r / 4.0;
  const int q = n + 2 + (m - 1);
  const double bound_c = std::pow(kSinhBound, n) * kCothBound * kCothBound * sphere_area(m);
  auto tail = [&](double R) {
    if (R * t < 1.0 || beta <= q / R) return HUGE_VAL;
    return bound_c * std::exp(q * std::log(R) - beta * R) / (beta - q / R);
  };

  std::vector<double> total(width, 0.0);
  double l1 = 0.0;
  AdaptiveOptions opt;
  opt.nodes = quad_.nodes;
  opt.rel_tol = quad_.rel_tol;
  opt.max_depth = quad_.max_depth;

  double lo = 0.0;
  double hi = std::max({1.0 / t, 1.0, (q + 40.0) / beta});
  for (int segment = 0; segment < 80; ++segment) {
    opt.initial_panels = 4 + static_cast<int>(std::min(4000.0, std::ceil((hi - lo) * zn / kPi)));
    AdaptiveResult res;
    if (m == 1) {
      const double z0 = z[0];
      auto f = [&](double lam, std::span<double> out) {
        double a, log_b;
        profile(lam, t, a, log_b);
        const double e = std::exp(-r * a / 4.0 + n * log_b);
        const double c = std::cos(lam * z0);
        out[0] = c * e;
        if (order == 0) return;
        const double s = std::sin(lam * z0);
        out[1] = c * a * e;
        out[2] = lam * s * e;
        if (order == 1) return;
        out[3] = c * a * a * e;
        out[4] = lam * s * a * e;
        out[5] = lam * lam * c * e;
      };
      res = integrate_adaptive(f, width, lo, hi, opt);
    } else {
      const int count = std::max(quad_.angular_min, static_cast<int>(std::ceil(1.5 * hi * zn)) + 16);
      const AngularRule rule = angular_rule(m, count);
      const std::size_t npts = rule.weights.size();
      auto f = [&](double rho, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        double a, log_b;
        profile(rho, t, a, log_b);
        const double e = std::exp(-r * a / 4.0 + n * log_b) * std::pow(rho, m - 1);
        for (std::size_t p = 0; p < npts; ++p) {
          const double* w = &rule.directions[p * m];
          double phase = 0.0;
          for (int j = 0; j < m; ++j) phase += w[j] * z[j];
          phase *= rho;
          const double we = rule.weights[p] * e;
          const double c = std::cos(phase);
          out[0] += we * c;
          if (order == 0) continue;
          const double s = std::sin(phase);
          out[1] += we * c * a;
          for (int j = 0; j < m; ++j) out[i_s0 + j] += we * rho * w[j] * s;
          if (order == 1) continue;
          out[i_i2] += we * c * a * a;
          for (int j = 0; j < m; ++j) out[i_s1 + j] += we * rho * w[j] * s * a;
          for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) out[i_c2 + j * m + k] += we * rho * rho * w[j] * w[k] * c;
        }
      };
      res = integrate_adaptive(f, width, lo, hi, opt);
    }
    if (!res.converged)
      fail(ErrorCode::QuadratureNotConverged, "lambda quadrature did not converge on [" +
                                                  std::to_string(lo) + ", " + std::to_string(hi) + "]");
    for (std::size_t k = 0; k < width; ++k) total[k] += res.value[k];
    l1 += res.l1[0];
    if (tail(hi) <= quad_.rel_tol * l1) break;
    if (segment == 79)
      fail(ErrorCode::QuadratureNotConverged, "lambda truncation radius did not meet the tail bound");
    lo = hi;
    hi *= 1.5;
  }

  const double K = (m == 1 ? 2.0 : 1.0) * std::pow(2.0 * kPi, -m) * std::pow(4.0 * kPi, -n);
  KernelJet jet;
  jet.value = K * total[0];
  jet.l1 = K * l1;
  if (order >= 1) {
    jet.gradient.assign(dim, 0.0);
    for (int i = 0; i < h; ++i) jet.gradient[i] = -K * g[i] * total[1] / 2.0;
    for (int j = 0; j < m; ++j) jet.gradient[h + j] = -K * total[i_s0 + j];
  }
  if (order >= 2) {
    jet.hessian.assign(static_cast<std::size_t>(dim) * dim, 0.0);
    auto H = [&](int a, int b) -> double& { return jet.hessian[a * dim + b]; };
    for (int i = 0; i < h; ++i)
      for (int k = 0; k < h; ++k)
        H(i, k) = K * ((i == k ? -total[1] / 2.0 : 0.0) + g[i] * g[k] * total[i_i2] / 4.0);
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < h; ++i) H(h + j, i) = H(i, h + j) = K * g[i] * total[i_s1 + j] / 2.0;
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) H(h + j, h + k) = -K * total[i_c2 + j * m + k];
  }
  return jet;
}

KernelJet KernelEvaluator::jet(double t, std::span<const double> g, int order) const {
  require_args(t, g);
  return spec_.step() == 1 ? abelian_jet(t, g, order) : htype_jet(t, g, order);
}

void KernelEvaluator::require_resolved(const KernelJet& j) const {
  if (!(j.value > quad_.underflow_floor))
    fail(ErrorCode::NumericalUnderflow, "kernel value below the underflow floor");
  if (j.value < quad_.cancellation_guard * quad_.rel_tol * j.l1)
    fail(ErrorCode::NumericalUnderflow, "kernel value lost to cancellation in the far tail");
}

double KernelEvaluator::kernel(double t, std::span<const double> g) const {
  const KernelJet j = jet(t, g, 0);
  require_resolved(j);
  return j.value;
}

double KernelEvaluator::kernel_at_origin(double t) const {
  const Point origin(spec_.dim(), 0.0);
  return kernel(t, origin);
}

LogDerivatives KernelEvaluator::log_derivatives(double t, std::span<const double> g,
                                                bool second_order) const {
  return log_derivatives(jet(t, g, second_order ? 2 : 1), g, second_order);
}

LogDerivatives KernelEvaluator::log_derivatives(const KernelJet& j, std::span<const double> g,
                                                bool second_order) const {
  spec_.require_point(g);
  require_resolved(j);
  if (j.gradient.empty() || (second_order && j.hessian.empty()))
    fail(ErrorCode::InvalidArgument, "kernel jet has too low an order");
  const int n = spec_.dim();
  const int d = spec_.horizontal_dim();
  LogDerivatives out;
  out.p = j.value;
  out.right.resize(d);
  out.left.resize(d);
  std::vector<double> c, dc;
  std::vector<std::vector<double>> rc(d), rdc(d);
  for (int i = 0; i < d; ++i) {
    eval_field(right_[i], g, rc[i], second_order ? &rdc[i] : nullptr);
    double s = 0.0;
    for (int a = 0; a < n; ++a) s += rc[i][a] * j.gradient[a];
    out.right[i] = s / j.value;
    eval_field(left_[i], g, c, nullptr);
    s = 0.0;
    for (int a = 0; a < n; ++a) s += c[a] * j.gradient[a];
    out.left[i] = s / j.value;
  }
  if (second_order) {
    out.right_second.resize(static_cast<std::size_t>(d) * d);
    for (int i = 0; i < d; ++i) {
      for (int k = 0; k < d; ++k) {
        double s = 0.0;
        for (int a = 0; a < n; ++a) {
          if (rc[i][a] == 0.0) continue;
          double inner = 0.0;
          for (int b = 0; b < n; ++b)
            inner += rdc[k][a * n + b] * j.gradient[b] + rc[k][b] * j.hessian[a * n + b];
          s += rc[i][a] * inner;
        }
        out.right_second[i * d + k] = s / j.value - out.right[i] * out.right[k];
      }
    }
  }
  return out;
}

std::vector<double> KernelEvaluator::log_gradient_right(double t, std::span<const double> g) const {
  return log_derivatives(t, g, false).right;
}

std::vector<double> KernelEvaluator::log_gradient_left(double t, std::span<const double> g) const {
  return log_derivatives(t, g, false).left;
}

double KernelEvaluator::kernel_pde_residual(double t, std::span<const double> g) const {
  const KernelJet j = jet(t, g, 2);
  require_resolved(j);
  const int n = spec_.dim();
  std::vector<double> c, dc;
  double lp = 0.0;
  for (const auto& field : left_) {
    eval_field(field, g, c, &dc);
    for (int a = 0; a < n; ++a) {
      if (c[a] == 0.0) continue;
      double inner = 0.0;
      for (int b = 0; b < n; ++b) inner += dc[a * n + b] * j.gradient[b] + c[b] * j.hessian[a * n + b];
      lp += c[a] * inner;
    }
  }
  double dp = 0.0;
  for (int a = 0; a < n; ++a) dp += spec_.weights()[a] * g[a] * j.gradient[a];
  const double q = spec_.homogeneous_dim();
  return (t * lp + 0.5 * dp + 0.5 * q * j.value) / (j.value * q / t);
}

}  // namespace carnot

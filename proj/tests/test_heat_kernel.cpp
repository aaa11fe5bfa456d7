#include <doctest.h>

#include <cmath>
#include <numbers>

#include "carnot/heat_kernel.hpp"
#include "carnot/quadrature.hpp"
#include "generators.hpp"

using namespace carnot;
using std::numbers::pi;

namespace {

constexpr double kZeta3 = 1.2020569031595942;

GroupSpec preset(const char* name) { return *presets::by_name(name); }

// Rotates coordinates (a, b) by theta.
Point rotate(Point g, int a, int b, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  const double u = g[a], v = g[b];
  g[a] = c * u - s * v;
  g[b] = s * u + c * v;
  return g;
}

}  // namespace

TEST_CASE("values at the identity match closed forms") {
  const KernelEvaluator h1(presets::heisenberg(1));
  const KernelEvaluator h2(presets::heisenberg(2));
  const KernelEvaluator q1(preset("htype-2-1"));
  for (double t : {0.25, 1.0, 4.0}) {
    CAPTURE(t);
    // int_0^inf u / sinh u du = pi^2 / 4
    CHECK(h1.kernel_at_origin(t) == doctest::Approx(1.0 / (16 * t * t)).epsilon(1e-10));
    CHECK(h1.kernel(t, Point{0, 0, 0}) == doctest::Approx(1.0 / (16 * t * t)).epsilon(1e-10));
    // int_0^inf u^2 / sinh^2 u du = pi^2 / 6
    CHECK(h2.kernel_at_origin(t) == doctest::Approx(1.0 / (96 * pi * t * t * t)).epsilon(1e-10));
    CHECK(q1.kernel_at_origin(t) == doctest::Approx(1.0 / (96 * pi * t * t * t)).epsilon(1e-10));
  }
  // int_0^inf r^k / sinh^2 r dr = k! zeta(k) / 2^(k-1)
  const KernelEvaluator q2(preset("htype-2-2"));
  const KernelEvaluator q3(preset("htype-2-3"));
  CHECK(q2.kernel(1.0, Point(6, 0.0)) == doctest::Approx(3 * kZeta3 / (64 * pi * pi * pi)).epsilon(1e-8));
  CHECK(q3.kernel(1.0, Point(7, 0.0)) == doctest::Approx(1.0 / 960).epsilon(1e-8));
  CHECK(q2.kernel(2.0, Point(6, 0.0)) == doctest::Approx(3 * kZeta3 / (64 * pi * pi * pi) / 16).epsilon(1e-8));
}

TEST_CASE("abelian kernel is the Gaussian of variance 2t") {
  const KernelEvaluator k(presets::abelian(3));
  const Point g{0.3, -1.0, 2.0};
  for (double t : {0.5, 2.0}) {
    const double r2 = 0.09 + 1.0 + 4.0;
    CHECK(k.kernel(t, g) == doctest::Approx(std::pow(4 * pi * t, -1.5) * std::exp(-r2 / (4 * t))));
    const auto grad = k.log_gradient_right(t, g);
    for (int a = 0; a < 3; ++a) CHECK(grad[a] == doctest::Approx(-g[a] / (2 * t)));
  }
}

TEST_CASE("heisenberg z-marginal is a hyperbolic secant") {
  // int p_1(x, z) dx = (1/2) sech(pi z / 2), the law with characteristic
  // function 1 / cosh(lambda).
  const KernelEvaluator k(presets::heisenberg(1));
  const auto rule = composite_rule(0.0, 14.0, 28, 12);
  for (double z : {0.0, 0.5, 1.7, 4.0}) {
    double marginal = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double r = rule.nodes[q];
      marginal += rule.weights[q] * 2 * pi * r * k.kernel(1.0, Point{r, 0.0, z});
    }
    CHECK(marginal == doctest::Approx(0.5 / std::cosh(pi * z / 2)).epsilon(1e-9));
  }
}

TEST_CASE("scaling, inverse symmetry and rotation invariance") {
  testgen::Gen gen(41);
  for (const char* name : {"heisenberg-1", "heisenberg-2", "htype-2-1", "htype-2-2", "htype-2-3"}) {
    CAPTURE(name);
    const GroupSpec spec = preset(name);
    const KernelEvaluator k(spec);
    const int trials = spec.htype()->m == 1 ? 20 : 3;
    const int d = spec.horizontal_dim();
    for (int trial = 0; trial < trials; ++trial) {
      const Point g = gen.point(spec, 1.5);
      const double t = gen.real(0.3, 3.0);
      const double p = k.kernel(t, g);
      REQUIRE(p > 0.0);
      // p_t(g) = t^{-Q/2} p_1(Delta_{1/sqrt t} g)
      const double p1 = k.kernel(1.0, dilate(spec, 1.0 / std::sqrt(t), g));
      CHECK(p == doctest::Approx(std::pow(t, -spec.homogeneous_dim() / 2.0) * p1).epsilon(1e-9));
      CHECK(k.kernel(t, inverse(g)) == doctest::Approx(p).epsilon(1e-10));
      // Depends on |x| and |z| only.
      const int a = gen.integer(0, d - 1);
      const int b = (a + 1 + gen.integer(0, d - 2)) % d;
      const Point rot = rotate(g, a, b, gen.real(0.0, 2 * pi));
      CHECK(k.kernel(t, rot) == doctest::Approx(p).epsilon(1e-10));
      if (spec.htype()->m >= 2) {
        const Point zrot = rotate(g, d, d + 1, gen.real(0.0, 2 * pi));
        CHECK(k.kernel(t, zrot) == doctest::Approx(p).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("jet derivatives agree with finite differences") {
  testgen::Gen gen(2);
  for (const char* name : {"heisenberg-1", "htype-2-1", "htype-2-2"}) {
    CAPTURE(name);
    const GroupSpec spec = preset(name);
    const KernelEvaluator k(spec);
    const int n = spec.dim();
    for (int trial = 0; trial < 3; ++trial) {
      const Point g = gen.point(spec, 1.0);
      const double t = gen.real(0.5, 2.0);
      const KernelJet jet = k.jet(t, g, 2);
      CHECK(jet.value == doctest::Approx(k.kernel(t, g)).epsilon(1e-12));
      const double h = 1e-4;
      for (int a = 0; a < n; ++a) {
        Point up = g, dn = g;
        up[a] += h;
        dn[a] -= h;
        const double fd = (k.kernel(t, up) - k.kernel(t, dn)) / (2 * h);
        CHECK(jet.gradient[a] == doctest::Approx(fd).epsilon(1e-6).scale(jet.value));
        const KernelJet ju = k.jet(t, up, 1), jd = k.jet(t, dn, 1);
        for (int b = 0; b < n; ++b) {
          const double fd2 = (ju.gradient[b] - jd.gradient[b]) / (2 * h);
          CHECK(jet.hessian[a * n + b] == doctest::Approx(fd2).epsilon(1e-5).scale(jet.value));
        }
      }
    }
  }
}

TEST_CASE("log gradients are derivatives along translations") {
  testgen::Gen gen(9);
  const GroupSpec spec = presets::heisenberg(1);
  const KernelEvaluator k(spec);
  for (int trial = 0; trial < 10; ++trial) {
    const Point g = gen.point(spec, 2.0);
    const double t = gen.real(0.25, 4.0);
    const auto right = k.log_gradient_right(t, g);
    const auto left = k.log_gradient_left(t, g);
    for (int i = 0; i < 2; ++i) {
      const double h = 1e-5;
      Point s(3, 0.0);
      s[i] = h;
      const Point back = inverse(s);
      const double fr = (std::log(k.kernel(t, product(spec, s, g))) - std::log(k.kernel(t, product(spec, back, g)))) /
                        (2 * h);
      const double fl = (std::log(k.kernel(t, product(spec, g, s))) - std::log(k.kernel(t, product(spec, g, back)))) /
                        (2 * h);
      CHECK(right[i] == doctest::Approx(fr).epsilon(1e-6).scale(1.0));
      CHECK(left[i] == doctest::Approx(fl).epsilon(1e-6).scale(1.0));
    }
    const LogDerivatives ld = k.log_derivatives(t, g, true);
    for (int i = 0; i < 2; ++i) CHECK(ld.right[i] == doctest::Approx(right[i]).epsilon(1e-10).scale(1.0));
    REQUIRE(ld.right_second.size() == 4);
    // V^1 V^2 - V^2 V^1 = [V^1, V^2] which, acting on ln p, is the z-derivative.
    const double dz = k.jet(t, g, 1).gradient[2] / ld.p;
    CHECK(std::abs(ld.right_second[1] - ld.right_second[2]) == doctest::Approx(std::abs(dz)).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("heat equation residual on a grid") {
  const std::array<double, 5> axis{-1.5, -0.75, 0.0, 0.75, 1.5};
  for (const char* name : {"heisenberg-1", "heisenberg-2", "htype-2-2"}) {
    CAPTURE(name);
    const GroupSpec spec = preset(name);
    const KernelEvaluator k(spec);
    testgen::Gen gen(1);
    if (spec.dim() == 3) {
      for (double t : {0.5, 1.0, 2.0})
        for (double a : axis)
          for (double b : axis)
            for (double c : axis) CHECK(std::abs(k.kernel_pde_residual(t, Point{a, b, c})) < 1e-6);
    } else {
      for (int trial = 0; trial < 6; ++trial)
        CHECK(std::abs(k.kernel_pde_residual(gen.real(0.5, 2.0), gen.point(spec, 1.5))) < 1e-6);
    }
  }
  const KernelEvaluator flat(presets::abelian(3));
  CHECK(std::abs(flat.kernel_pde_residual(0.7, Point{1, -2, 0.5})) < 1e-12);
}

TEST_CASE("errors: unsupported groups, bad arguments, underflow") {
  try {
    KernelEvaluator k(presets::engel());
    FAIL("expected UnsupportedGroup");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedGroup);
  }
  CHECK_FALSE(KernelEvaluator::has_formula(presets::engel()));
  CHECK(KernelEvaluator::has_formula(presets::abelian(4)));

  const KernelEvaluator k(presets::heisenberg(1));
  auto code_of = [&](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  CHECK(code_of([&] { k.kernel(0.0, Point{0, 0, 0}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { k.kernel(-1.0, Point{0, 0, 0}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { k.kernel(1.0, Point{0, 0}); }) == ErrorCode::DimensionMismatch);
  CHECK(code_of([&] { k.kernel(1.0, Point{NAN, 0, 0}); }) == ErrorCode::InvalidArgument);
  // Far along the center the oscillatory integral cancels below resolution.
  CHECK(code_of([&] { k.log_gradient_right(0.25, Point{0, 0, 60}); }) == ErrorCode::NumericalUnderflow);
}

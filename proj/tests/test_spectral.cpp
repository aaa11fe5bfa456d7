#include <doctest.h>

#include <cmath>

#include "carnot/jacobi.hpp"
#include "carnot/spectral.hpp"
#include "generators.hpp"

using namespace carnot;

namespace {

MCConfig mc(std::size_t n, int substeps, std::uint64_t seed) {
  MCConfig c;
  c.n_samples = n;
  c.substeps = substeps;
  c.seed = seed;
  return c;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("jacobi reconstructs random symmetric matrices") {
  testgen::Gen gen(12);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = gen.integer(1, 7);
    std::vector<double> a(n * n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) a[i * n + j] = a[j * n + i] = gen.real(-3, 3);
    const SymmetricEigen e = jacobi_eigen(a, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0, orth = 0.0;
        for (int k = 0; k < n; ++k) {
          s += e.vectors[i * n + k] * e.values[k] * e.vectors[j * n + k];
          orth += e.vectors[k * n + i] * e.vectors[k * n + j];
        }
        CHECK(s == doctest::Approx(a[i * n + j]).scale(1.0).epsilon(1e-12));
        CHECK(orth == doctest::Approx(i == j ? 1.0 : 0.0).scale(1.0).epsilon(1e-12));
      }
    const TopEigenpair top = top_eigenpair(a, n);
    for (double v : e.values) CHECK(v <= top.value + 1e-12);
    CHECK(top.residual < 1e-12);
  }
}

TEST_CASE("top eigenpair conventions") {
  // [[2, 1], [1, 2]]: eigenvalues 3 and 1, top vector (1, 1)/sqrt 2.
  const TopEigenpair t = top_eigenpair(std::vector<double>{2, 1, 1, 2}, 2);
  CHECK(t.value == doctest::Approx(3.0));
  CHECK(t.vector[0] == doctest::Approx(std::sqrt(0.5)));
  CHECK(t.vector[1] == doctest::Approx(std::sqrt(0.5)));
  // Sign: dominant component positive.
  const TopEigenpair s = top_eigenpair(std::vector<double>{1, 0, 0, 5}, 2);
  CHECK(s.vector[1] == doctest::Approx(1.0));
  // Ties resolve to the lowest dominant index.
  const TopEigenpair tie = top_eigenpair(std::vector<double>{1, 0, 0, 0, 1, 0, 0, 0, 0.5}, 3);
  CHECK(tie.value == doctest::Approx(1.0));
  CHECK(tie.vector[0] == doctest::Approx(1.0));
}

TEST_CASE("quadrature gives M = I on the first heisenberg group") {
  const KernelEvaluator k(presets::heisenberg(1));
  const SpectralReport r = compute_M_quadrature(k);
  CHECK(r.Q == 4);
  CHECK(r.d == 2);
  CHECK(r.mass == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(r.lambda - 1.0) < 1e-6);
  CHECK(std::abs(r.M[1]) < 1e-10);
  CHECK(r.trace == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(r.bounds.pass);
  CHECK(r.grid_level == 2);
  CHECK(r.lambda_error < 1e-6);
}

TEST_CASE("abelian spectrum is flat at one half") {
  for (int d : {2, 3}) {
    const KernelEvaluator k(presets::abelian(d));
    const SpectralReport r = compute_M_quadrature(k);
    CHECK(r.lambda == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(r.trace == doctest::Approx(d / 2.0).epsilon(1e-8));
    CHECK(r.bounds.lower == doctest::Approx(0.5));
    CHECK(r.bounds.upper == doctest::Approx(d / 2.0));
    CHECK(r.bounds.pass);
  }
}

TEST_CASE("monte carlo M on heisenberg groups") {
  MonteCarloSpectralOptions opt;
  opt.mc = mc(20000, 200, 3);
  const SpectralReport h1 = compute_M_mc(KernelEvaluator(presets::heisenberg(1)), opt);
  CHECK(std::abs(h1.lambda - 1.0) < 3 * h1.lambda_error);
  CHECK(std::abs(h1.M[1]) < 3 * h1.M_error[1]);
  CHECK(h1.rejected == 0);
  REQUIRE(h1.sharpness_ratio.has_value());
  CHECK(std::abs(h1.sharpness_ratio->value - h1.lambda) < 4 * (h1.sharpness_ratio->se + h1.lambda_error));
  CHECK(h1.bounds.pass);

  // H-type: Lambda = Q / 2d.
  opt.mc = mc(5000, 100, 4);
  opt.sharpness_probe = false;
  const SpectralReport h2 = compute_M_mc(KernelEvaluator(presets::heisenberg(2)), opt);
  CHECK(std::abs(h2.lambda - 0.75) < 3 * h2.lambda_error);
  CHECK(std::abs(h2.trace - 3.0) < 3 * h2.trace_error);
  CHECK_FALSE(h2.sharpness_ratio.has_value());
}

TEST_CASE("bound check logic") {
  SpectralReport r;
  r.Q = 4;
  r.d = 2;
  r.M = {1.0, 0.0, 0.0, 1.0};
  r.M_error = {0.0, 0.0, 0.0, 0.0};
  finish_report(r);
  CHECK(r.bounds.pass);
  CHECK(r.trace_target == 2.0);

  // Lambda above Q/2 fails.
  r.M = {2.5, 0.0, 0.0, 0.1};
  finish_report(r);
  CHECK_FALSE(r.bounds.upper_ok);
  CHECK_FALSE(r.bounds.pass);

  // Below Q/2d fails unless within three reported errors.
  r.M = {0.9, 0.0, 0.0, 0.9};
  finish_report(r);
  CHECK_FALSE(r.bounds.lower_ok);
  r.lambda_error = 0.05;
  finish_report(r);
  CHECK(r.bounds.lower_ok);
  CHECK(r.bounds.trace_chain_ok);
}

TEST_CASE("trace identity by quadrature and monte carlo") {
  const KernelEvaluator h1(presets::heisenberg(1));
  for (double t : {1.0, 4.0}) {
    const TraceCheck q = trace_identity_check(h1, t, SpectralMethod::Quadrature);
    CHECK(q.rhs == doctest::Approx(2.0 / t));
    CHECK(q.pass);
    CHECK(std::abs(q.lhs - q.rhs) < 1e-3 * q.rhs);
  }
  const TraceCheck m = trace_identity_check(h1, 1.0, SpectralMethod::MonteCarlo, mc(10000, 100, 8));
  CHECK(m.pass);
  CHECK(m.samples == 10000);
  const KernelEvaluator flat(presets::abelian(3));
  const TraceCheck f = trace_identity_check(flat, 1.0, SpectralMethod::Quadrature);
  CHECK(f.lhs == doctest::Approx(1.5).epsilon(1e-8));
  CHECK(f.pass);
}

TEST_CASE("quadrature limits") {
  CHECK(code_of([] { compute_M_quadrature(KernelEvaluator(presets::heisenberg(2))); }) ==
        ErrorCode::DimensionTooLarge);
  CHECK(code_of([] { compute_M_quadrature(KernelEvaluator(presets::abelian(5))); }) == ErrorCode::DimensionTooLarge);
  // A four-dimensional abelian group is within reach.
  CHECK(compute_M_quadrature(KernelEvaluator(presets::abelian(4))).lambda == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(parse_spectral_method("quad") == SpectralMethod::Quadrature);
  CHECK(to_string(SpectralMethod::MonteCarlo) == "mc");
  CHECK(code_of([] { parse_spectral_method("exact"); }) == ErrorCode::InvalidArgument);
}

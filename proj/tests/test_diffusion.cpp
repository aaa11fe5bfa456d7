#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

#include "carnot/diffusion.hpp"
#include "carnot/philox.hpp"
#include "carnot/stats.hpp"

using namespace carnot;
using std::numbers::pi;

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

MCConfig config(std::size_t n, int substeps, std::uint64_t seed = 1) {
  MCConfig c;
  c.n_samples = n;
  c.substeps = substeps;
  c.seed = seed;
  return c;
}

Estimate moment(const GroupSpec& spec, const SampleBatch& b, int a) {
  return estimate_Ptf(spec, b, [a](std::span<const double> x) { return x[a] * x[a]; },
                      Point(spec.dim(), 0.0));
}

}  // namespace

TEST_CASE("philox known-answer vectors") {
  using P = Philox4x32;
  CHECK(philox4x32_10(P{0, 0, 0, 0}, {0, 0}) == P{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10(P{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        P{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10(P{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        P{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("normal streams are standard normal and independent across streams") {
  std::vector<double> first, other;
  double cross = 0.0;
  for (std::uint64_t s = 0; s < 20000; ++s) {
    NormalStream a(5, s), b(5, s + 1000000);
    const double x = a.next(), y = b.next();
    first.push_back(x);
    other.push_back(a.next());
    cross += x * y;
  }
  CHECK(ks_statistic(first, normal_cdf) < ks_critical_1pct(first.size()));
  CHECK(ks_statistic(other, normal_cdf) < ks_critical_1pct(other.size()));
  CHECK(std::abs(cross / 20000) < 4.0 / std::sqrt(20000.0));
}

TEST_CASE("sampling is reproducible and thread-count invariant") {
  const auto spec = presets::engel();
  MCConfig c = config(2000, 50, 42);
  c.threads = 1;
  const SampleBatch a = sample_endpoint(spec, 1.0, c);
  c.threads = 3;
  const SampleBatch b = sample_endpoint(spec, 1.0, c);
  CHECK(a.data() == b.data());
  c.seed = 43;
  const SampleBatch other = sample_endpoint(spec, 1.0, c);
  CHECK(a.data() != other.data());
  CHECK(a.size() == 2000);
  CHECK(a.dim() == 4);
}

TEST_CASE("heisenberg moments match the polynomial semigroup") {
  // The discretized area has E z^2 = t^2 (1 - 1/K) with K = 200 t steps; a
  // relative bias of at most 1% sits inside the Monte Carlo error here.
  const auto h = presets::heisenberg(1);
  for (double t : {0.5, 2.0}) {
    CAPTURE(t);
    const SampleBatch b = sample_endpoint(h, t, config(40000, 200));
    const Estimate x1 = moment(h, b, 0), x2 = moment(h, b, 1), z = moment(h, b, 2);
    CHECK(std::abs(x1.value - 2 * t) < 3 * x1.se);
    CHECK(std::abs(x2.value - 2 * t) < 3 * x2.se);
    CHECK(std::abs(z.value - t * t) < 3 * z.se);
    CHECK(z.se < 0.02 * t * t);
  }
}

TEST_CASE("endpoint marginals pass Kolmogorov-Smirnov tests") {
  const auto h = presets::heisenberg(1);
  const SampleBatch b = sample_endpoint(h, 1.0, config(20000, 200, 9));
  std::vector<double> x1, z;
  for (std::size_t k = 0; k < b.size(); ++k) {
    x1.push_back(b.point(k)[0] / std::sqrt(2.0));
    z.push_back(b.point(k)[2]);
  }
  CHECK(ks_statistic(x1, normal_cdf) < ks_critical_1pct(x1.size()));
  // cdf of (1/2) sech(pi z / 2)
  auto sech_cdf = [](double v) { return 2.0 / pi * std::atan(std::exp(pi * v / 2)); };
  CHECK(ks_statistic(z, sech_cdf) < ks_critical_1pct(z.size()));
}

TEST_CASE("step-2 fast path agrees with the generic product") {
  const auto h = presets::heisenberg(2);
  MCConfig c = config(500, 40, 3);
  c.scheme = Scheme::ExactStep2;
  const SampleBatch fast = sample_endpoint(h, 1.0, c);
  c.scheme = Scheme::StratonovichHeun;
  const SampleBatch generic = sample_endpoint(h, 1.0, c);
  double worst = 0.0;
  for (std::size_t i = 0; i < fast.data().size(); ++i)
    worst = std::max(worst, std::abs(fast.data()[i] - generic.data()[i]));
  CHECK(worst < 1e-12);
}

TEST_CASE("right increments give the same law") {
  const auto h = presets::heisenberg(1);
  MCConfig c = config(40000, 200, 77);
  c.right_increments = true;
  const SampleBatch b = sample_endpoint(h, 1.0, c);
  const Estimate z = moment(h, b, 2);
  CHECK(std::abs(z.value - 1.0) < 3 * z.se);
}

TEST_CASE("P_t f estimates at a shifted point") {
  const auto h = presets::heisenberg(1);
  const Point g{1.0, -0.5, 0.25};
  // P_t(x1^2)(g) = x1^2 + 2t
  const Estimate e = estimate_Ptf(h, 1.5, [](std::span<const double> x) { return x[0] * x[0]; }, g,
                                  config(20000, 100, 4));
  CHECK(std::abs(e.value - 4.0) < 3 * e.se);
  // Library failures inside f keep their code and gain the sample index.
  try {
    estimate_Ptf(h, 1.0, [](std::span<const double>) -> double { fail(ErrorCode::NumericalUnderflow, "tiny"); },
                 g, config(10, 10));
    FAIL("expected a throw");
  } catch (const Error& ex) {
    CHECK(ex.code() == ErrorCode::NumericalUnderflow);
    CHECK(std::string(ex.what()).find("sample 0") != std::string::npos);
  }
  CHECK_THROWS_AS(estimate_Ptf(h, 1.0, [](std::span<const double>) { return NAN; }, g, config(10, 10)), Error);
}

TEST_CASE("configuration checks") {
  MCConfig c;
  c.scheme = Scheme::ExactStep2;
  try {
    c.validate(presets::engel());
    FAIL("expected SchemeUnsupported");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SchemeUnsupported);
  }
  CHECK_NOTHROW(c.validate(presets::heisenberg(1)));
  c.substeps = 200;
  CHECK(c.steps_for(1.0) == 200);
  CHECK(c.steps_for(0.25) == 50);
  CHECK(c.steps_for(0.001) == 1);
  CHECK(parse_scheme("exact-step2") == Scheme::ExactStep2);
  CHECK(to_string(Scheme::StratonovichHeun) == "stratonovich-heun");
  CHECK_THROWS_AS(parse_scheme("euler"), Error);
  MCConfig zero = config(0, 10);
  CHECK_THROWS_AS(sample_endpoint(presets::heisenberg(1), 1.0, zero), Error);
  CHECK_THROWS_AS(sample_endpoint(presets::heisenberg(1), -1.0, config(10, 10)), Error);
}

TEST_CASE("richardson diagnostic shows first-order decay") {
  const auto h = presets::heisenberg(1);
  MCConfig c = config(100000, 8, 5);
  const BiasReport r = bias_diagnostic(h, 1.0, c);
  CHECK(r.steps[0] == 8);
  CHECK(r.steps[1] == 16);
  CHECK(r.steps[2] == 32);
  // E z^2 = 1 - 1/K, so the differences are 1/16 and 1/32.
  CHECK(std::abs(r.diff_coarse.value + 1.0 / 16) < 3 * r.diff_coarse.se);
  CHECK(std::abs(r.ratio.value - 2.0) < 3 * r.ratio.se);
  CHECK(std::abs(r.extrapolated.value - 1.0) < 3 * r.extrapolated.se + 1.0 / 64);
}

TEST_CASE("block accumulator and jackknife") {
  BlockAccumulator acc(2, 1000, 100);
  CHECK(acc.blocks() == 100);
  CHECK(acc.begin(3) == 30);
  CHECK(acc.end(3) == 40);
  for (std::size_t b = 0; b < acc.blocks(); ++b)
    for (std::size_t k = acc.begin(b); k < acc.end(b); ++k) {
      const double v[2] = {static_cast<double>(k % 7), 2.0};
      acc.add(b, v);
    }
  CHECK(acc.count() == 1000);
  double expect = 0.0;
  for (int k = 0; k < 1000; ++k) expect += k % 7;
  CHECK(acc.mean(0).value == doctest::Approx(expect / 1000));
  CHECK(acc.mean(1).se == 0.0);
  // A linear function's jackknife equals the plain mean and SE.
  const Estimate lin = acc.jackknife([](std::span<const double> m) { return 3 * m[0]; });
  CHECK(lin.value == doctest::Approx(3 * acc.mean(0).value));
  CHECK(lin.se == doctest::Approx(3 * acc.mean(0).se));
}

TEST_CASE("parallel blocks rethrow the lowest failing block") {
  for (int threads : {1, 4}) {
    try {
      parallel_blocks(50, threads, [](std::size_t b) {
        if (b == 17 || b == 33) throw std::runtime_error("block " + std::to_string(b));
      });
      FAIL("expected a throw");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "block 17");
    }
  }
  CHECK(resolve_threads(3) == 3);
  setenv("CARNOT_THREADS", "2", 1);
  CHECK(resolve_threads(0) == 2);
  unsetenv("CARNOT_THREADS");
  CHECK(resolve_threads(0) == 1);
}

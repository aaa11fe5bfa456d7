#include "carnot/diffusion.hpp"

#include <algorithm>
#include <cmath>

#include "carnot/philox.hpp"

namespace carnot {

std::string_view to_string(Scheme s) {
  return s == Scheme::ExactStep2 ? "exact-step2" : "stratonovich-heun";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "exact-step2") return Scheme::ExactStep2;
  if (name == "stratonovich-heun") return Scheme::StratonovichHeun;
  fail(ErrorCode::InvalidArgument, "unknown scheme \"" + std::string(name) + "\"");
}

void MCConfig::validate(const GroupSpec& spec) const {
  if (n_samples < 1) fail(ErrorCode::InvalidArgument, "n_samples must be positive");
  if (substeps < 1) fail(ErrorCode::InvalidArgument, "substeps must be at least 1");
  if (scheme == Scheme::ExactStep2 && spec.step() > 2)
    fail(ErrorCode::SchemeUnsupported,
         "exact-step2 needs step <= 2, group \"" + spec.name() + "\" has step " +
             std::to_string(spec.step()));
  spec.require_bch();
}

int MCConfig::steps_for(double t) const {
  return std::max(1, static_cast<int>(std::ceil(substeps * t - 1e-9)));
}

namespace {

void require_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) fail(ErrorCode::InvalidArgument, "time must be positive");
}

// Advances g by one horizontal increment dx (length d).
class Stepper {
 public:
  Stepper(const GroupSpec& spec, const MCConfig& cfg)
      : spec_(spec), fast_(cfg.scheme == Scheme::ExactStep2 || spec.step() == 1),
        right_(cfg.right_increments), inc_(spec.dim(), 0.0), tmp_(spec.dim(), 0.0) {
    const int d = spec.horizontal_dim();
    for (const auto& e : spec.nonzero())
      if (e.i < d && e.j < d) area_.push_back(e);
  }

  void step(std::span<double> g, std::span<const double> dx) {
    const int d = spec_.horizontal_dim();
    if (fast_) {
      // Step-2 BCH: the bracket of two horizontal vectors is all that survives.
      const double sign = right_ ? -0.5 : 0.5;
      for (const auto& e : area_) g[e.k] += sign * e.c * g[e.i] * dx[e.j];
      for (int i = 0; i < d; ++i) g[i] += dx[i];
      return;
    }
    std::copy(dx.begin(), dx.end(), inc_.begin());
    if (right_)
      product_into(spec_, inc_, g, tmp_);
    else
      product_into(spec_, g, inc_, tmp_);
    std::copy(tmp_.begin(), tmp_.end(), g.begin());
  }

 private:
  const GroupSpec& spec_;
  bool fast_;
  bool right_;
  std::vector<BracketEntry> area_;
  std::vector<double> inc_, tmp_;
};

}  // namespace

SampleBatch sample_endpoint(const GroupSpec& spec, double t, const MCConfig& config) {
  require_time(t);
  config.validate(spec);
  const int n = spec.dim();
  const int d = spec.horizontal_dim();
  const int steps = config.steps_for(t);
  const double scale = std::sqrt(2.0 * t / steps);
  std::vector<double> points(config.n_samples * n, 0.0);
  BlockAccumulator layout(0, config.n_samples);
  parallel_blocks(layout.blocks(), resolve_threads(config.threads), [&](std::size_t b) {
    Stepper stepper(spec, config);
    std::vector<double> dx(d);
    for (std::size_t k = layout.begin(b); k < layout.end(b); ++k) {
      NormalStream rng(config.seed, k);
      std::span<double> g(points.data() + k * n, n);
      for (int s = 0; s < steps; ++s) {
        for (int i = 0; i < d; ++i) dx[i] = scale * rng.next();
        stepper.step(g, dx);
      }
    }
  });
  return SampleBatch(t, config, n, std::move(points));
}

Estimate estimate_Ptf(const GroupSpec& spec, const SampleBatch& batch, const ScalarFunction& f,
                      std::span<const double> g) {
  spec.require_point(g);
  if (batch.dim() != spec.dim())
    fail(ErrorCode::DimensionMismatch, "sample batch does not belong to this group");
  bool identity = std::all_of(g.begin(), g.end(), [](double v) { return v == 0.0; });
  const int n = spec.dim();
  BlockAccumulator acc(1, batch.size());
  parallel_blocks(acc.blocks(), resolve_threads(batch.config().threads), [&](std::size_t b) {
    std::vector<double> h(n);
    for (std::size_t k = acc.begin(b); k < acc.end(b); ++k) {
      std::span<const double> x = batch.point(k);
      if (!identity) {
        product_into(spec, g, x, h);
        x = h;
      }
      double v;
      try {
        v = f(x);
      } catch (const Error& e) {
        fail(e.code(), "sample " + std::to_string(k) + ": " + e.what());
      }
      if (!std::isfinite(v))
        fail(ErrorCode::InvalidArgument, "sample " + std::to_string(k) + ": non-finite value");
      acc.add(b, std::span<const double>(&v, 1));
    }
  });
  return acc.mean(0);
}

Estimate estimate_Ptf(const GroupSpec& spec, double t, const ScalarFunction& f,
                      std::span<const double> g, const MCConfig& config) {
  return estimate_Ptf(spec, sample_endpoint(spec, t, config), f, g);
}

BiasReport bias_diagnostic(const GroupSpec& spec, double t, const MCConfig& config,
                           std::optional<ScalarFunction> observable, std::string observable_name) {
  require_time(t);
  config.validate(spec);
  const int n = spec.dim();
  const int d = spec.horizontal_dim();
  if (!observable) {
    const int top = spec.dim() - spec.layers().back();
    observable = [top, n](std::span<const double> x) {
      double s = 0.0;
      for (int a = top; a < n; ++a) s += x[a] * x[a];
      return s;
    };
    if (observable_name.empty()) observable_name = "top-layer squared norm";
  }
  BiasReport rep;
  rep.observable = observable_name;
  const int K = config.steps_for(t);
  rep.steps[0] = K;
  rep.steps[1] = 2 * K;
  rep.steps[2] = 4 * K;
  const double scale = std::sqrt(2.0 * t / (4 * K));

  BlockAccumulator acc(3, config.n_samples);
  parallel_blocks(acc.blocks(), resolve_threads(config.threads), [&](std::size_t b) {
    Stepper stepper(spec, config);
    std::vector<std::vector<double>> g(3, std::vector<double>(n));
    std::vector<double> fine(d), mid(d), coarse(d);
    double vals[3];
    for (std::size_t k = acc.begin(b); k < acc.end(b); ++k) {
      NormalStream rng(config.seed, k);
      for (auto& v : g) std::fill(v.begin(), v.end(), 0.0);
      for (int s = 0; s < K; ++s) {
        std::fill(coarse.begin(), coarse.end(), 0.0);
        for (int half = 0; half < 2; ++half) {
          std::fill(mid.begin(), mid.end(), 0.0);
          for (int q = 0; q < 2; ++q) {
            for (int i = 0; i < d; ++i) {
              fine[i] = scale * rng.next();
              mid[i] += fine[i];
            }
            stepper.step(g[2], fine);
          }
          stepper.step(g[1], mid);
          for (int i = 0; i < d; ++i) coarse[i] += mid[i];
        }
        stepper.step(g[0], coarse);
      }
      for (int l = 0; l < 3; ++l) vals[l] = (*observable)(g[l]);
      acc.add(b, vals);
    }
  });
  for (int l = 0; l < 3; ++l) rep.moment[l] = acc.mean(l);
  rep.diff_coarse = acc.jackknife([](std::span<const double> m) { return m[0] - m[1]; });
  rep.diff_fine = acc.jackknife([](std::span<const double> m) { return m[1] - m[2]; });
  rep.ratio = acc.jackknife([](std::span<const double> m) {
    const double den = m[1] - m[2];
    return den != 0.0 ? (m[0] - m[1]) / den : std::nan("");
  });
  rep.extrapolated = acc.jackknife([](std::span<const double> m) { return 2.0 * m[2] - m[1]; });
  return rep;
}

}  // namespace carnot

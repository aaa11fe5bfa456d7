#pragma once

// Seeded generators for property tests: points, polynomials, step-2 groups.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "carnot/group.hpp"
#include "carnot/polynomial.hpp"

namespace testgen {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  carnot::Point point(const carnot::GroupSpec& spec, double radius) {
    carnot::Point p(spec.dim());
    for (double& x : p) x = real(-radius, radius);
    return p;
  }

  /// Dyadic coefficients keep products exact, which makes exact-equality
  /// properties meaningful.
  double dyadic() { return integer(-8, 8) / 4.0; }

  carnot::Polynomial polynomial(const carnot::GroupSpec& spec, int max_degree, int max_terms = 5) {
    const int n = spec.dim();
    carnot::Polynomial p(n);
    const int terms = integer(1, max_terms);
    for (int k = 0; k < terms; ++k) {
      carnot::Exponent e(n, 0);
      int budget = integer(0, max_degree);
      for (int tries = 0; tries < 3 * n && budget > 0; ++tries) {
        const int a = integer(0, n - 1);
        const int w = spec.weights()[a];
        if (w <= budget) {
          ++e[a];
          budget -= w;
        }
      }
      p.add_term(e, dyadic());
    }
    return p;
  }

  /// Random step-2 group: d horizontal, m vertical, random brackets. Any
  /// antisymmetric V1 x V1 -> V2 map satisfies Jacobi at step 2; the image
  /// is forced to span V2 by seeding [e_0, e_{1+l}] = u_l (needs m < d).
  carnot::GroupSpec step2_group(int d, int m) {
    std::vector<carnot::BracketEntry> br;
    for (int l = 0; l < m; ++l) br.push_back({0, 1 + (l % (d - 1)), d + l, 1.0});
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        for (int l = 0; l < m; ++l)
          if (coin()) {
            const bool seeded = i == 0 && j == 1 + (l % (d - 1)) && l < d - 1;
            const double c = dyadic();
            if (!seeded && c != 0.0) br.push_back({i, j, d + l, c});
          }
    return carnot::GroupSpec::graded("random-step2", {d, m}, br);
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testgen

#pragma once

// Seeded random polynomials and points for the identity and inequality
// sweeps. Generation uses raw mt19937_64 output so a seed gives the same
// corpus with any standard library.

#include <cstdint>
#include <random>
#include <vector>

#include "carnot/group.hpp"
#include "carnot/polynomial.hpp"

namespace carnot {

class CorpusRng {
 public:
  explicit CorpusRng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(engine_() >> 11) * 0x1p-53;
  }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

/// Polynomials with homogeneous degree <= max_degree, 1..max_terms terms and
/// coefficients that are multiples of 1/4 in [-2, 2].
std::vector<Polynomial> random_corpus(const GroupSpec& spec, std::size_t count, int max_degree,
                                      std::uint64_t seed, int max_terms = 6);

/// Points with coordinates uniform in [-radius, radius].
std::vector<Point> random_points(const GroupSpec& spec, std::size_t count, double radius, std::uint64_t seed);

}  // namespace carnot

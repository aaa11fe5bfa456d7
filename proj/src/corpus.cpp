#include "carnot/corpus.hpp"

namespace carnot {

std::vector<Polynomial> random_corpus(const GroupSpec& spec, std::size_t count, int max_degree,
                                      std::uint64_t seed, int max_terms) {
  CorpusRng rng(seed);
  const int n = spec.dim();
  const auto& w = spec.weights();
  std::vector<Polynomial> out;
  while (out.size() < count) {
    Polynomial p(n);
    const int terms = rng.integer(1, max_terms);
    for (int k = 0; k < terms; ++k) {
      Exponent e(n, 0);
      int budget = rng.integer(0, max_degree);
      for (int tries = 0; budget > 0 && tries < 64; ++tries) {
        const int a = rng.integer(0, n - 1);
        if (w[a] > budget) continue;
        ++e[a];
        budget -= w[a];
      }
      double c = rng.integer(-8, 8) / 4.0;
      if (c == 0.0) c = 1.0;
      p.add_term(e, c);
    }
    if (!p.is_zero()) out.push_back(std::move(p));
  }
  return out;
}

std::vector<Point> random_points(const GroupSpec& spec, std::size_t count, double radius, std::uint64_t seed) {
  CorpusRng rng(seed);
  std::vector<Point> out(count, Point(spec.dim()));
  for (auto& p : out)
    for (auto& x : p) x = rng.uniform(-radius, radius);
  return out;
}

}  // namespace carnot

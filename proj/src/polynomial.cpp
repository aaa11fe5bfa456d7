#include "carnot/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "carnot/error.hpp"

namespace carnot {

namespace {

void require_same(const Polynomial& a, const Polynomial& b) {
  if (a.nvars() != b.nvars())
    fail(ErrorCode::DimensionMismatch, "polynomials over " + std::to_string(a.nvars()) +
                                           " and " + std::to_string(b.nvars()) + " variables");
}

double ipow(double x, int k) {
  double r = 1.0;
  while (k > 0) {
    if (k & 1) r *= x;
    x *= x;
    k >>= 1;
  }
  return r;
}

}  // namespace

Polynomial Polynomial::constant(int nvars, double c) {
  Polynomial p(nvars);
  p.add_term(Exponent(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int index, double coeff) {
  if (index < 0 || index >= nvars) fail(ErrorCode::DimensionMismatch, "variable index out of range");
  Exponent e(nvars, 0);
  e[index] = 1;
  Polynomial p(nvars);
  p.add_term(e, coeff);
  return p;
}

Polynomial Polynomial::monomial(Exponent exponent, double coeff) {
  Polynomial p(static_cast<int>(exponent.size()));
  p.add_term(exponent, coeff);
  return p;
}

void Polynomial::add_term(const Exponent& e, double c) {
  if (static_cast<int>(e.size()) != nvars_)
    fail(ErrorCode::DimensionMismatch, "exponent length does not match variable count");
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Polynomial::coefficient(const Exponent& e) const {
  const auto it = terms_.find(e);
  return it == terms_.end() ? 0.0 : it->second;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (auto v : e) s += v;
    d = std::max(d, s);
  }
  return d;
}

int Polynomial::homogeneous_degree(std::span<const int> weights) const {
  if (static_cast<int>(weights.size()) != nvars_)
    fail(ErrorCode::DimensionMismatch, "weight vector length does not match variable count");
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int a = 0; a < nvars_; ++a) s += weights[a] * e[a];
    d = std::max(d, s);
  }
  return d;
}

Polynomial Polynomial::derivative(int index) const {
  if (index < 0 || index >= nvars_) fail(ErrorCode::DimensionMismatch, "derivative index out of range");
  Polynomial out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[index] == 0) continue;
    Exponent f = e;
    --f[index];
    out.add_term(f, c * e[index]);
  }
  return out;
}

double Polynomial::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != nvars_)
    fail(ErrorCode::DimensionMismatch, "evaluation point has wrong dimension");
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double term = c;
    for (int a = 0; a < nvars_; ++a)
      if (e[a] != 0) term *= ipow(x[a], e[a]);
    sum += term;
  }
  return sum;
}

Polynomial Polynomial::compose(std::span<const Polynomial> subs) const {
  if (static_cast<int>(subs.size()) != nvars_)
    fail(ErrorCode::DimensionMismatch, "composition needs one substitute per variable");
  const int target = subs.empty() ? 0 : subs.front().nvars();
  for (const auto& s : subs) require_same(s, subs.front());
  // Cache powers of each substitute as they are needed.
  std::vector<std::vector<Polynomial>> powers(nvars_);
  auto power = [&](int a, int k) -> const Polynomial& {
    auto& cache = powers[a];
    if (cache.empty()) cache.push_back(constant(target, 1.0));
    while (static_cast<int>(cache.size()) <= k) cache.push_back(cache.back() * subs[a]);
    return cache[k];
  };
  Polynomial out(target);
  for (const auto& [e, c] : terms_) {
    Polynomial term = constant(target, c);
    for (int a = 0; a < nvars_ && !term.is_zero(); ++a)
      if (e[a] != 0) term = term * power(a, e[a]);
    out += term;
  }
  return out;
}

Polynomial Polynomial::coefficient_of(int index, int power) const {
  if (index < 0 || index >= nvars_) fail(ErrorCode::DimensionMismatch, "variable index out of range");
  Polynomial out(nvars_ - 1);
  for (const auto& [e, c] : terms_) {
    if (e[index] != power) continue;
    Exponent f;
    f.reserve(nvars_ - 1);
    for (int a = 0; a < nvars_; ++a)
      if (a != index) f.push_back(e[a]);
    out.add_term(f, c);
  }
  return out;
}

Polynomial Polynomial::extend(int count) const {
  Polynomial out(nvars_ + count);
  for (const auto& [e, c] : terms_) {
    Exponent f = e;
    f.resize(nvars_ + count, 0);
    out.add_term(f, c);
  }
  return out;
}

double Polynomial::max_abs() const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

std::string Polynomial::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::string out;
  char buf[40];
  bool first = true;
  for (const auto& [e, c] : terms_) {
    std::snprintf(buf, sizeof buf, "%.17g", c);
    if (!first) out += " + ";
    first = false;
    out += buf;
    for (int a = 0; a < nvars_; ++a) {
      if (e[a] == 0) continue;
      out += '*';
      out += names.empty() ? "x" + std::to_string(a + 1) : names[a];
      if (e[a] > 1) out += "^" + std::to_string(e[a]);
    }
  }
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  require_same(*this, rhs);
  for (const auto& [e, c] : rhs.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
  require_same(*this, rhs);
  for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  require_same(a, b);
  Polynomial out(a.nvars());
  if (a.is_zero() || b.is_zero()) return out;
  Exponent e(a.nvars());
  for (const auto& [ea, ca] : a.terms()) {
    for (const auto& [eb, cb] : b.terms()) {
      for (int i = 0; i < a.nvars(); ++i) e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Polynomial pow(const Polynomial& p, int k) {
  Polynomial out = Polynomial::constant(p.nvars(), 1.0);
  for (int i = 0; i < k; ++i) out = out * p;
  return out;
}

double relative_difference(const Polynomial& a, const Polynomial& b) {
  const double scale = std::max({1.0, a.max_abs(), b.max_abs()});
  return (a - b).max_abs() / scale;
}

}  // namespace carnot

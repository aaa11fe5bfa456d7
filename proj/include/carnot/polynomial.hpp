#pragma once

// Sparse multivariate polynomials with double coefficients.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace carnot {

using Exponent = std::vector<std::uint16_t>;

class Polynomial {
 public:
  explicit Polynomial(int nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(int nvars, double c);
  static Polynomial variable(int nvars, int index, double coeff = 1.0);
  static Polynomial monomial(Exponent exponent, double coeff);

  int nvars() const { return nvars_; }
  const std::map<Exponent, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Adds c to the coefficient of x^e, dropping the term if it cancels.
  void add_term(const Exponent& e, double c);
  double coefficient(const Exponent& e) const;

  int degree() const;
  /// Largest sum of weight[a] * e[a] over the terms; -1 for the zero polynomial.
  int homogeneous_degree(std::span<const int> weights) const;

  Polynomial derivative(int index) const;
  double evaluate(std::span<const double> x) const;
  /// Substitutes subs[a] (all over a common variable set) for variable a.
  Polynomial compose(std::span<const Polynomial> subs) const;
  /// Keeps the terms of degree exactly `power` in variable `index` and
  /// removes that variable.
  Polynomial coefficient_of(int index, int power) const;
  /// Appends `count` fresh variables at the end.
  Polynomial extend(int count) const;

  /// Largest absolute coefficient.
  double max_abs() const;

  /// Canonical text: terms in lexicographic exponent order, 17 significant
  /// digits, variables named x1..xn unless names are given.
  std::string to_string(std::span<const std::string> names = {}) const;

  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  Polynomial& operator*=(double s);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) { return a *= -1.0; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

 private:
  int nvars_;
  std::map<Exponent, double> terms_;
};

Polynomial pow(const Polynomial& p, int k);

/// max |a - b| coefficient divided by max(1, largest coefficient of either).
double relative_difference(const Polynomial& a, const Polynomial& b);

}  // namespace carnot

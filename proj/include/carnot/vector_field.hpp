#pragma once

#include <span>
#include <string>
#include <vector>

#include "carnot/group.hpp"
#include "carnot/polynomial.hpp"

namespace carnot {

/// First-order operator sum_a c_a(x) d/dx_a with polynomial coefficients.
class VectorField {
 public:
  explicit VectorField(std::vector<Polynomial> coefficients);
  static VectorField partial(int nvars, int index);

  int dim() const { return static_cast<int>(coefficients_.size()); }
  const Polynomial& coefficient(int a) const { return coefficients_[a]; }
  const std::vector<Polynomial>& coefficients() const { return coefficients_; }

  Polynomial apply(const Polynomial& f) const;
  /// Coefficient values c_a(g).
  void evaluate(std::span<const double> g, std::span<double> out) const;
  std::vector<double> evaluate(std::span<const double> g) const;

  std::string to_string() const;

 private:
  std::vector<Polynomial> coefficients_;
};

/// [X, Y] as a vector field: coefficient a is X(Y_a) - Y(X_a).
VectorField commutator(const VectorField& x, const VectorField& y);

/// Identity polynomials xi_a over n variables.
std::vector<Polynomial> coordinate_polynomials(int n);

/// Left-invariant field generated by basis vector e_index:
/// V f(g) = d/ds f(g . s e_index) at s = 0, derived from the BCH product.
VectorField left_invariant_field(const GroupSpec& spec, int index);
/// V^ f(g) = d/ds f(s e_index . g) at s = 0.
VectorField right_invariant_field(const GroupSpec& spec, int index);
/// The d horizontal fields V_1..V_d.
std::vector<VectorField> left_invariant_fields(const GroupSpec& spec);
std::vector<VectorField> right_invariant_fields(const GroupSpec& spec);
/// D = sum_a weight(a) xi_a d/dxi_a.
VectorField dilation_field(const GroupSpec& spec);

/// f o lambda_g, i.e. h -> f(g . h).
Polynomial compose_left_translation(const GroupSpec& spec, std::span<const double> g,
                                    const Polynomial& f);
/// f o Delta_s.
Polynomial compose_dilation(const GroupSpec& spec, double s, const Polynomial& f);
/// f o Ad(g^{-1}), i.e. h -> f(g^{-1} h g).
Polynomial compose_conjugation(const GroupSpec& spec, std::span<const double> g,
                               const Polynomial& f);

}  // namespace carnot

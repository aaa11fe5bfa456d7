#pragma once

// Exact calculus on polynomials: sub-Laplacians, carre du champ, the dilation
// field and the heat semigroup e^{tL}.
//
// Every horizontal field lowers the homogeneous degree of a polynomial by one,
// so L lowers it by two and the exponential series e^{tL} f terminates after
// floor(deg_h f / 2) + 1 terms. That finite sum is taken as P_t f on
// polynomials; it solves d/dt P_t f = L P_t f with P_0 f = f.

#include <span>
#include <vector>

#include "carnot/group.hpp"
#include "carnot/polynomial.hpp"
#include "carnot/vector_field.hpp"

namespace carnot {

/// P_t f = sum_j t^j terms[j].
class HeatSeries {
 public:
  explicit HeatSeries(std::vector<Polynomial> terms) : terms_(std::move(terms)) {}

  const std::vector<Polynomial>& terms() const { return terms_; }
  Polynomial at(double t) const;
  /// d/dt of the series at t.
  Polynomial time_derivative(double t) const;

 private:
  std::vector<Polynomial> terms_;
};

class Calculus {
 public:
  explicit Calculus(GroupSpec spec);

  const GroupSpec& spec() const { return spec_; }
  const std::vector<VectorField>& left() const { return left_; }
  const std::vector<VectorField>& right() const { return right_; }
  /// Left/right invariant fields for every basis vector, not just layer one.
  const std::vector<VectorField>& left_all() const { return left_all_; }
  const std::vector<VectorField>& right_all() const { return right_all_; }
  const VectorField& dilation() const { return dilation_; }

  Polynomial sublaplacian(const Polynomial& f) const;
  Polynomial sublaplacian_right(const Polynomial& f) const;
  Polynomial carre_du_champ(const Polynomial& f, const Polynomial& g) const;
  Polynomial carre_du_champ_right(const Polynomial& f, const Polynomial& g) const;
  Polynomial apply_dilation(const Polynomial& f) const { return dilation_.apply(f); }

  HeatSeries heat_series(const Polynomial& f) const;
  HeatSeries heat_series_right(const Polynomial& f) const;
  Polynomial heat_apply(double t, const Polynomial& f) const;
  Polynomial heat_apply_right(double t, const Polynomial& f) const;

  /// P_t(Df) - D(P_t f) - 2t P_t(Lf). D generates Delta_s, so the factor 2
  /// comes from d/dc (f o Delta_sqrt(c)) = Df / 2 at c = 1.
  Polynomial verify_commutation(double t, const Polynomial& f) const;
  /// P_t(f o Delta_sqrt(c)) - (P_{ct} f) o Delta_sqrt(c).
  Polynomial verify_scaling(double t, double c, const Polynomial& f) const;
  /// P^_t(f)(g) - P_t(f o Ad(g^{-1}))(g).
  double verify_ad_lemma(double t, std::span<const double> g, const Polynomial& f) const;
  /// Gamma(f) - 1/2 (L f^2 - 2 f L f).
  Polynomial verify_carre_du_champ(const Polynomial& f) const;

 private:
  HeatSeries series(const Polynomial& f, bool right) const;
  void require(const Polynomial& f) const;

  GroupSpec spec_;
  std::vector<VectorField> left_all_;
  std::vector<VectorField> right_all_;
  std::vector<VectorField> left_;
  std::vector<VectorField> right_;
  VectorField dilation_;
};

}  // namespace carnot

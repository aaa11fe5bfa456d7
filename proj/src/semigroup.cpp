#include "carnot/semigroup.hpp"

#include <cmath>

namespace carnot {

Polynomial HeatSeries::at(double t) const {
  Polynomial out(terms_.front().nvars());
  double tj = 1.0;
  for (const auto& term : terms_) {
    out += tj * term;
    tj *= t;
  }
  return out;
}

Polynomial HeatSeries::time_derivative(double t) const {
  Polynomial out(terms_.front().nvars());
  double tj = 1.0;
  for (std::size_t j = 1; j < terms_.size(); ++j) {
    out += (static_cast<double>(j) * tj) * terms_[j];
    tj *= t;
  }
  return out;
}

Calculus::Calculus(GroupSpec spec)
    : spec_(std::move(spec)), dilation_(dilation_field(spec_)) {
  for (int a = 0; a < spec_.dim(); ++a) {
    left_all_.push_back(left_invariant_field(spec_, a));
    right_all_.push_back(right_invariant_field(spec_, a));
  }
  left_.assign(left_all_.begin(), left_all_.begin() + spec_.horizontal_dim());
  right_.assign(right_all_.begin(), right_all_.begin() + spec_.horizontal_dim());
}

void Calculus::require(const Polynomial& f) const {
  if (f.nvars() != spec_.dim())
    fail(ErrorCode::DimensionMismatch, "polynomial over " + std::to_string(f.nvars()) +
                                           " variables on a group of dimension " +
                                           std::to_string(spec_.dim()));
}

Polynomial Calculus::sublaplacian(const Polynomial& f) const {
  require(f);
  Polynomial out(spec_.dim());
  for (const auto& v : left_) out += v.apply(v.apply(f));
  return out;
}

Polynomial Calculus::sublaplacian_right(const Polynomial& f) const {
  require(f);
  Polynomial out(spec_.dim());
  for (const auto& v : right_) out += v.apply(v.apply(f));
  return out;
}

Polynomial Calculus::carre_du_champ(const Polynomial& f, const Polynomial& g) const {
  require(f);
  require(g);
  Polynomial out(spec_.dim());
  for (const auto& v : left_) out += v.apply(f) * v.apply(g);
  return out;
}

Polynomial Calculus::carre_du_champ_right(const Polynomial& f, const Polynomial& g) const {
  require(f);
  require(g);
  Polynomial out(spec_.dim());
  for (const auto& v : right_) out += v.apply(f) * v.apply(g);
  return out;
}

HeatSeries Calculus::series(const Polynomial& f, bool right) const {
  require(f);
  std::vector<Polynomial> terms{f};
  const int bound = std::max(0, f.homogeneous_degree(spec_.weights())) / 2;
  for (int j = 1; j <= bound; ++j) {
    Polynomial next = right ? sublaplacian_right(terms.back()) : sublaplacian(terms.back());
    if (next.is_zero()) break;
    next *= 1.0 / j;
    terms.push_back(std::move(next));
  }
  return HeatSeries(std::move(terms));
}

HeatSeries Calculus::heat_series(const Polynomial& f) const { return series(f, false); }
HeatSeries Calculus::heat_series_right(const Polynomial& f) const { return series(f, true); }

Polynomial Calculus::heat_apply(double t, const Polynomial& f) const {
  if (!(t >= 0.0)) fail(ErrorCode::InvalidArgument, "heat time must be nonnegative");
  return heat_series(f).at(t);
}

Polynomial Calculus::heat_apply_right(double t, const Polynomial& f) const {
  if (!(t >= 0.0)) fail(ErrorCode::InvalidArgument, "heat time must be nonnegative");
  return heat_series_right(f).at(t);
}

Polynomial Calculus::verify_commutation(double t, const Polynomial& f) const {
  const Polynomial lhs = heat_apply(t, apply_dilation(f));
  const Polynomial rhs = apply_dilation(heat_apply(t, f)) + (2.0 * t) * heat_apply(t, sublaplacian(f));
  return lhs - rhs;
}

Polynomial Calculus::verify_scaling(double t, double c, const Polynomial& f) const {
  if (!(c >= 0.0)) fail(ErrorCode::InvalidArgument, "scaling factor must be nonnegative");
  const double s = std::sqrt(c);
  const Polynomial lhs = heat_apply(t, compose_dilation(spec_, s, f));
  const Polynomial rhs = compose_dilation(spec_, s, heat_apply(c * t, f));
  return lhs - rhs;
}

double Calculus::verify_ad_lemma(double t, std::span<const double> g, const Polynomial& f) const {
  const double lhs = heat_apply_right(t, f).evaluate(g);
  const double rhs = heat_apply(t, compose_conjugation(spec_, g, f)).evaluate(g);
  return lhs - rhs;
}

Polynomial Calculus::verify_carre_du_champ(const Polynomial& f) const {
  const Polynomial gamma = carre_du_champ(f, f);
  const Polynomial lf = sublaplacian(f);
  return gamma - 0.5 * (sublaplacian(f * f) - 2.0 * (f * lf));
}

}  // namespace carnot

#include "carnot/vector_field.hpp"

#include <cmath>

namespace carnot {

VectorField::VectorField(std::vector<Polynomial> coefficients)
    : coefficients_(std::move(coefficients)) {
  for (const auto& c : coefficients_)
    if (c.nvars() != dim())
      fail(ErrorCode::DimensionMismatch, "vector field coefficient has wrong variable count");
}

VectorField VectorField::partial(int nvars, int index) {
  std::vector<Polynomial> c(nvars, Polynomial(nvars));
  c[index] = Polynomial::constant(nvars, 1.0);
  return VectorField(std::move(c));
}

Polynomial VectorField::apply(const Polynomial& f) const {
  if (f.nvars() != dim())
    fail(ErrorCode::DimensionMismatch, "field over " + std::to_string(dim()) +
                                           " variables applied to polynomial over " +
                                           std::to_string(f.nvars()));
  Polynomial out(dim());
  for (int a = 0; a < dim(); ++a) {
    if (coefficients_[a].is_zero()) continue;
    out += coefficients_[a] * f.derivative(a);
  }
  return out;
}

void VectorField::evaluate(std::span<const double> g, std::span<double> out) const {
  for (int a = 0; a < dim(); ++a)
    out[a] = coefficients_[a].is_zero() ? 0.0 : coefficients_[a].evaluate(g);
}

std::vector<double> VectorField::evaluate(std::span<const double> g) const {
  std::vector<double> out(dim());
  evaluate(g, out);
  return out;
}

std::string VectorField::to_string() const {
  std::string out;
  for (int a = 0; a < dim(); ++a) {
    if (coefficients_[a].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + coefficients_[a].to_string() + ")*d" + std::to_string(a + 1);
  }
  return out.empty() ? "0" : out;
}

VectorField commutator(const VectorField& x, const VectorField& y) {
  if (x.dim() != y.dim()) fail(ErrorCode::DimensionMismatch, "commutator of fields of different dimension");
  std::vector<Polynomial> c;
  c.reserve(x.dim());
  for (int a = 0; a < x.dim(); ++a) c.push_back(x.apply(y.coefficient(a)) - y.apply(x.coefficient(a)));
  return VectorField(std::move(c));
}

std::vector<Polynomial> coordinate_polynomials(int n) {
  std::vector<Polynomial> out;
  out.reserve(n);
  for (int a = 0; a < n; ++a) out.push_back(Polynomial::variable(n, a));
  return out;
}

namespace {

// Differentiates the BCH product at s = 0 where one factor is s e_index.
// Works over n + 1 variables; the last one is s.
VectorField invariant_field(const GroupSpec& spec, int index, bool left) {
  spec.require_bch();
  const int n = spec.dim();
  if (index < 0 || index >= n) fail(ErrorCode::InvalidArgument, "basis index out of range");
  std::vector<Polynomial> point;
  for (int a = 0; a < n; ++a) point.push_back(Polynomial::variable(n + 1, a));
  std::vector<Polynomial> step(n, Polynomial(n + 1));
  step[index] = Polynomial::variable(n + 1, n);
  const auto z = left ? bch(spec, point, step) : bch(spec, step, point);
  std::vector<Polynomial> coeffs;
  coeffs.reserve(n);
  for (int a = 0; a < n; ++a) coeffs.push_back(z[a].coefficient_of(n, 1));
  return VectorField(std::move(coeffs));
}

std::vector<Polynomial> constants(int nvars, std::span<const double> g) {
  std::vector<Polynomial> out;
  for (double v : g) out.push_back(Polynomial::constant(nvars, v));
  return out;
}

}  // namespace

VectorField left_invariant_field(const GroupSpec& spec, int index) {
  return invariant_field(spec, index, true);
}

VectorField right_invariant_field(const GroupSpec& spec, int index) {
  return invariant_field(spec, index, false);
}

std::vector<VectorField> left_invariant_fields(const GroupSpec& spec) {
  std::vector<VectorField> out;
  for (int i = 0; i < spec.horizontal_dim(); ++i) out.push_back(left_invariant_field(spec, i));
  return out;
}

std::vector<VectorField> right_invariant_fields(const GroupSpec& spec) {
  std::vector<VectorField> out;
  for (int i = 0; i < spec.horizontal_dim(); ++i) out.push_back(right_invariant_field(spec, i));
  return out;
}

VectorField dilation_field(const GroupSpec& spec) {
  const int n = spec.dim();
  std::vector<Polynomial> c;
  for (int a = 0; a < n; ++a) c.push_back(Polynomial::variable(n, a, spec.weights()[a]));
  return VectorField(std::move(c));
}

Polynomial compose_left_translation(const GroupSpec& spec, std::span<const double> g,
                                    const Polynomial& f) {
  spec.require_point(g);
  const int n = spec.dim();
  const auto z = bch(spec, constants(n, g), coordinate_polynomials(n));
  return f.compose(z);
}

Polynomial compose_dilation(const GroupSpec& spec, double s, const Polynomial& f) {
  const int n = spec.dim();
  std::vector<Polynomial> subs;
  for (int a = 0; a < n; ++a)
    subs.push_back(Polynomial::variable(n, a, std::pow(s, spec.weights()[a])));
  return f.compose(subs);
}

Polynomial compose_conjugation(const GroupSpec& spec, std::span<const double> g,
                               const Polynomial& f) {
  spec.require_point(g);
  const int n = spec.dim();
  const auto gp = constants(n, g);
  const auto gi = constants(n, inverse(g));
  const auto z = bch(spec, bch(spec, gi, coordinate_polynomials(n)), gp);
  return f.compose(z);
}

}  // namespace carnot

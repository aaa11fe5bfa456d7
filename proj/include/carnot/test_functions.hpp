#pragma once

// Smooth test functions with Euclidean gradients, used by the inequality
// checks: polynomials, a clamped coordinate, a compactly supported bump and
// dilations of any of these.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "carnot/group.hpp"
#include "carnot/polynomial.hpp"
#include "carnot/vector_field.hpp"

namespace carnot {

class TestFunction {
 public:
  virtual ~TestFunction() = default;
  virtual std::string describe() const = 0;
  virtual int dim() const = 0;
  virtual double value(std::span<const double> x) const = 0;
  /// Euclidean gradient in exponential coordinates.
  virtual void gradient(std::span<const double> x, std::span<double> out) const = 0;
  /// sup |f|, infinite for unbounded functions.
  virtual double sup_norm() const;
  /// Half-widths of a centered box containing the support, if compact.
  virtual std::optional<std::vector<double>> support() const { return std::nullopt; }
};

using TestFunctionPtr = std::shared_ptr<const TestFunction>;

TestFunctionPtr polynomial_function(Polynomial p);
/// c tanh(x_index / c): smooth, bounded by c, equal to x_index near 0.
TestFunctionPtr clamped_coordinate(int dim, int index, double c);
/// exp(1 - 1/(1 - s)) for s = sum (x_a / R_a)^2 < 1, else 0.
TestFunctionPtr bump(std::vector<double> half_widths);
/// f o Delta_r.
TestFunctionPtr dilated(const GroupSpec& spec, TestFunctionPtr f, double r);
/// The constant 1.
TestFunctionPtr constant_one(int dim);

/// (V_1 f, ..., V_d f)(x) for the left-invariant horizontal fields.
class HorizontalGradient {
 public:
  explicit HorizontalGradient(const GroupSpec& spec);
  void operator()(const TestFunction& f, std::span<const double> x, std::span<double> out) const;
  /// Gamma(f)(x) = sum_i (V_i f)^2.
  double gamma(const TestFunction& f, std::span<const double> x) const;
  const std::vector<VectorField>& fields() const { return fields_; }

 private:
  std::vector<VectorField> fields_;
  int n_;
};

}  // namespace carnot

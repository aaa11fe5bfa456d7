#pragma once

// Certificates for the reverse Poincare inequality
//   Gamma(P_t f)(g) <= (Lambda / t) (P_t f^2 - (P_t f)^2)(g),
// the L1 pseudo-Poincare inequality
//   ||P_t f - f||_1 <= 2 sqrt(Lambda t) ||sqrt(Gamma f)||_1,
// the isoperimetric inequality mu(E)^{(Q-1)/Q} <= C P_H(E) on boxes, and the
// gradient bound Gamma(P_t f) <= (Lambda / t) ||f||_inf^2.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "carnot/diffusion.hpp"
#include "carnot/heat_kernel.hpp"
#include "carnot/semigroup.hpp"
#include "carnot/test_functions.hpp"

namespace carnot {

struct LambdaChoice {
  double value = 0.0;
  std::string provenance;  // "computed" or "paper-upper-bound Q/2"

  static LambdaChoice computed(double v) { return {v, "computed"}; }
  static LambdaChoice upper_bound(const GroupSpec& spec) {
    return {spec.homogeneous_dim() / 2.0, "paper-upper-bound Q/2"};
  }
};

struct InequalityCertificate {
  std::string kind;   // reverse-poincare | pseudo-poincare | isoperimetric | gradient-bound
  std::string group;
  std::optional<double> t;
  std::string input;  // f, E or similar
  std::vector<double> point;
  LambdaChoice lambda;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double lhs_error = 0.0;
  double rhs_error = 0.0;
  double tolerance = 0.0;
  std::string lhs_method;
  std::string rhs_method;
  bool pass = false;
  std::vector<std::pair<std::string, double>> details;

  void settle();  // slack and pass from lhs, rhs, tolerance
};

/// Axis-aligned box centered at the identity.
struct BoxSet {
  std::vector<double> half_widths;

  void validate(const GroupSpec& spec) const;
  double volume() const;
  BoxSet dilate(const GroupSpec& spec, double r) const;
  std::string describe() const;
};

InequalityCertificate reverse_poincare_exact(const Calculus& calc, double t, std::span<const double> g,
                                             const Polynomial& f, const LambdaChoice& lambda);

/// V_i P_t f(g) = E[(V^_{Ad_g e_i} f)(g xi_t)], variance from the same batch.
InequalityCertificate reverse_poincare_mc(const GroupSpec& spec, const SampleBatch& batch,
                                          std::span<const double> g, const TestFunction& f,
                                          const LambdaChoice& lambda);

struct PseudoPoincareOptions {
  MCConfig mc;
  double padding = 0.5;   // box = support * (1 + padding)
  int panels = 3;         // per axis
  int nodes = 6;          // Gauss-Legendre nodes per panel
  double rhs_rel_tol = 1e-6;
};

/// f must be compactly supported and nonnegative.
InequalityCertificate pseudo_poincare_check(const GroupSpec& spec, double t, const TestFunction& f,
                                            const LambdaChoice& lambda, const PseudoPoincareOptions& opt);

struct PerimeterResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

/// Sum over faces of the integral of sqrt(sum_i <V_i, nu>^2).
PerimeterResult horizontal_perimeter(const GroupSpec& spec, const BoxSet& box, double rel_tol = 1e-9);

/// (1 + Q)^{(Q+1)/Q} p_1(0)^{1/Q} c / Q with c = Lambda (as printed) or sqrt(Lambda).
double isoperimetric_constant_printed(int Q, double p1_origin, double lambda);
double isoperimetric_constant_sqrt(int Q, double p1_origin, double lambda);

InequalityCertificate isoperimetric_check(const KernelEvaluator& kernel, const BoxSet& box,
                                          const LambdaChoice& lambda, double rel_tol = 1e-9);

InequalityCertificate gradient_bound_check(const GroupSpec& spec, const SampleBatch& batch,
                                           std::span<const double> g, const TestFunction& f,
                                           const LambdaChoice& lambda);

}  // namespace carnot

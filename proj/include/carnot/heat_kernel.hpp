#pragma once

// Heat kernel p_t of L = sum V_i^2, issued from the identity, for groups with
// an explicit formula: abelian groups (Gaussian with variance 2t per
// coordinate) and H-type groups R^{2n} x R^m, where
//
//   p_t(x, z) = (2 pi)^{-m} (4 pi)^{-n} int_{R^m} e^{i<lambda, z>}
//               exp(-|lambda| |x|^2 coth(|lambda| t) / 4)
//               (|lambda| / sinh(|lambda| t))^n d lambda.
//
// The lambda integral is evaluated by adaptive Gauss-Legendre panels on a
// truncated range [0, R] whose tail is bounded analytically; for m >= 2 the
// directions of lambda are handled by a tensor-product angular rule (m <= 3).
// Derivatives in x and z are taken under the integral sign.

#include <span>
#include <vector>

#include "carnot/group.hpp"
#include "carnot/vector_field.hpp"

namespace carnot {

struct KernelQuadrature {
  int nodes = 16;
  double rel_tol = 1e-12;
  int max_depth = 30;
  int angular_min = 24;
  /// Log-derivatives refuse to divide by kernel values below this.
  double underflow_floor = 1e-280;
  /// Values smaller than this multiple of rel_tol times the integrand's L1
  /// norm are cancellation noise and are reported as underflow.
  double cancellation_guard = 100.0;
};

/// Kernel value with Euclidean derivatives in exponential coordinates.
struct KernelJet {
  double value = 0.0;
  std::vector<double> gradient;  // n
  std::vector<double> hessian;   // n x n row-major; empty below order 2
  double l1 = 0.0;               // L1 norm of the value integrand (0 for closed forms)
};

struct LogDerivatives {
  double p = 0.0;
  std::vector<double> right;          // V^_i ln p, i < d
  std::vector<double> left;           // V_i ln p
  std::vector<double> right_second;   // V^_i V^_j ln p, d x d row-major (optional)
};

class KernelEvaluator {
 public:
  explicit KernelEvaluator(GroupSpec spec, KernelQuadrature quad = {});

  static bool has_formula(const GroupSpec& spec);

  const GroupSpec& spec() const { return spec_; }
  const KernelQuadrature& quadrature() const { return quad_; }

  double kernel(double t, std::span<const double> g) const;
  KernelJet jet(double t, std::span<const double> g, int order) const;
  double kernel_at_origin(double t) const;

  /// (V^_i ln p_t)(g) for the horizontal right-invariant fields.
  std::vector<double> log_gradient_right(double t, std::span<const double> g) const;
  std::vector<double> log_gradient_left(double t, std::span<const double> g) const;
  LogDerivatives log_derivatives(double t, std::span<const double> g, bool second_order) const;
  /// Same from a jet already evaluated at g (order >= 1, or 2 for second_order).
  LogDerivatives log_derivatives(const KernelJet& jet, std::span<const double> g,
                                 bool second_order) const;

  /// (tL + D/2 + Q/2) p_t at g divided by p_t(g) Q / t, with D = sum w_a xi_a d_a.
  double kernel_pde_residual(double t, std::span<const double> g) const;

 private:
  struct CompiledField {
    std::vector<Polynomial> coeff;
    std::vector<std::vector<Polynomial>> dcoeff;  // dcoeff[a][b] = d c_b / d xi_a
  };
  static CompiledField compile(const VectorField& v);
  static void eval_field(const CompiledField& f, std::span<const double> g, std::vector<double>& c,
                         std::vector<double>* dc);

  KernelJet abelian_jet(double t, std::span<const double> g, int order) const;
  KernelJet htype_jet(double t, std::span<const double> g, int order) const;
  void require_args(double t, std::span<const double> g) const;
  void require_resolved(const KernelJet& jet) const;

  GroupSpec spec_;
  KernelQuadrature quad_;
  int half_n_ = 0;  // n of R^{2n}
  int center_m_ = 0;
  std::vector<CompiledField> left_;
  std::vector<CompiledField> right_;
};

}  // namespace carnot

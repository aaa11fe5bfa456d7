#pragma once

// Carnot groups in exponential coordinates of the first kind.
//
// A group is described by its graded Lie algebra: layer dimensions and the
// structure constants c^k_{ij} on the graded basis. Products come from the
// Baker-Campbell-Hausdorff series, which terminates for nilpotent algebras;
// the series is written out through weight 4, so step <= 4 is supported.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "carnot/error.hpp"

namespace carnot {

using Point = std::vector<double>;

/// [e_i, e_j] has coefficient c on e_k.
struct BracketEntry {
  int i = 0;
  int j = 0;
  int k = 0;
  double c = 0.0;
};

/// Step-2 data: R^{2n} x R^m with <J_l x, y> = <[x, y], u_l>.
struct HTypeSpec {
  int n = 0;
  int m = 0;
  /// m row-major 2n x 2n matrices.
  std::vector<std::vector<double>> J;

  /// Throws InvalidSpec naming the first violated property.
  void validate() const;
  double entry(int l, int row, int col) const { return J[l][row * 2 * n + col]; }
};

class GroupSpec {
 public:
  static constexpr int kMaxStep = 4;
  static constexpr int kMaxDim = 32;

  /// Validates antisymmetry, grading, the Jacobi identity and nilpotency.
  static GroupSpec graded(std::string name, std::vector<int> layers,
                          const std::vector<BracketEntry>& brackets);
  static GroupSpec from_htype(std::string name, const HTypeSpec& htype);

  const std::string& name() const { return name_; }
  const std::vector<int>& layers() const { return layers_; }
  const std::vector<int>& weights() const { return weights_; }
  int dim() const { return dim_; }
  int horizontal_dim() const { return layers_.front(); }
  int step() const { return static_cast<int>(layers_.size()); }
  int homogeneous_dim() const { return homogeneous_dim_; }
  bool is_abelian() const { return nonzero_.empty(); }
  const std::optional<HTypeSpec>& htype() const { return htype_; }

  double structure(int i, int j, int k) const {
    return table_[(static_cast<std::size_t>(i) * dim_ + j) * dim_ + k];
  }
  /// Nonzero structure constants over all ordered pairs (i, j).
  const std::vector<BracketEntry>& nonzero() const { return nonzero_; }
  std::vector<BracketEntry> brackets_upper() const;

  void require_bch() const;
  void require_point(std::span<const double> g) const;

 private:
  GroupSpec() = default;
  void validate() const;

  std::string name_;
  std::vector<int> layers_;
  std::vector<int> weights_;
  int dim_ = 0;
  int homogeneous_dim_ = 0;
  std::vector<double> table_;
  std::vector<BracketEntry> nonzero_;
  std::optional<HTypeSpec> htype_;
};

// Generic algebra over any coefficient ring T supporting T + T, T * T,
// double * T and T * double. Used with double and with Polynomial.

template <class T>
std::vector<T> bracket(const GroupSpec& spec, const std::vector<T>& a,
                       const std::vector<T>& b) {
  std::vector<T> out(a.size(), a.front() * 0.0);
  for (const auto& e : spec.nonzero()) out[e.k] += e.c * (a[e.i] * b[e.j]);
  return out;
}

template <class T>
void axpy(double alpha, const std::vector<T>& x, std::vector<T>& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

/// Truncated BCH series A + B + 1/2[A,B] + 1/12([A,[A,B]] + [B,[B,A]])
/// - 1/24 [B,[A,[A,B]]], exact for step <= 4.
template <class T>
std::vector<T> bch(const GroupSpec& spec, const std::vector<T>& a,
                   const std::vector<T>& b) {
  spec.require_bch();
  std::vector<T> out = a;
  axpy(1.0, b, out);
  if (spec.step() < 2) return out;
  const auto ab = bracket(spec, a, b);
  axpy(0.5, ab, out);
  if (spec.step() < 3) return out;
  const auto a_ab = bracket(spec, a, ab);
  const auto b_ab = bracket(spec, b, ab);
  axpy(1.0 / 12.0, a_ab, out);
  axpy(-1.0 / 12.0, b_ab, out);
  if (spec.step() < 4) return out;
  axpy(-1.0 / 24.0, bracket(spec, b, a_ab), out);
  return out;
}

/// exp(ad_g) v, exact for step <= 4.
template <class T>
std::vector<T> adjoint(const GroupSpec& spec, const std::vector<T>& g,
                       const std::vector<T>& v) {
  std::vector<T> out = v;
  std::vector<T> term = v;
  double factorial = 1.0;
  for (int order = 1; order < spec.step(); ++order) {
    term = bracket(spec, g, term);
    factorial *= order;
    axpy(1.0 / factorial, term, out);
  }
  return out;
}

Point product(const GroupSpec& spec, std::span<const double> g,
              std::span<const double> h);
/// Allocation-free variant for inner loops; out may not alias g or h.
void product_into(const GroupSpec& spec, std::span<const double> g,
                  std::span<const double> h, std::span<double> out);
Point inverse(std::span<const double> g);
Point dilate(const GroupSpec& spec, double t, std::span<const double> g);
/// g^{-1} h g
Point conjugate(const GroupSpec& spec, std::span<const double> g,
                std::span<const double> h);

namespace presets {

GroupSpec abelian(int d);
GroupSpec heisenberg(int n);
GroupSpec engel();
GroupSpec htype(std::string name, const HTypeSpec& htype);

/// The J-data of the n = 2 H-type groups built from left multiplication by
/// the quaternion units i, j, k (first m of them).
HTypeSpec quaternionic(int m);
/// J = Omega^T for the symplectic matrix Omega = [[0, -I], [I, 0]], so that
/// <Jx, y> = omega(x, y).
HTypeSpec symplectic(int n);

/// abelian-<d>, heisenberg-<n>, engel, htype-2-<m> for m in {1, 2, 3}.
std::optional<GroupSpec> by_name(std::string_view name);
std::vector<std::string> names();

}  // namespace presets

}  // namespace carnot

#include "carnot/group.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

namespace carnot {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::UnsupportedStep: return "UnsupportedStep";
    case ErrorCode::UnsupportedGroup: return "Unsupported";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::NumericalUnderflow: return "NumericalUnderflow";
    case ErrorCode::SchemeUnsupported: return "SchemeUnsupported";
    case ErrorCode::ExcessiveRejection: return "ExcessiveRejection";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::MinimizationFailed: return "MinimizationFailed";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

constexpr double kSpecTol = 1e-12;

std::string describe(int i, int j, int k) {
  std::ostringstream os;
  os << "(i=" << i << ", j=" << j << ", k=" << k << ")";
  return os.str();
}

}  // namespace

void HTypeSpec::validate() const {
  if (n < 1 || m < 1) fail(ErrorCode::InvalidSpec, "h-type: n and m must be positive");
  if (static_cast<int>(J.size()) != m)
    fail(ErrorCode::InvalidSpec, "h-type: expected m matrices in J");
  const int h = 2 * n;
  for (int l = 0; l < m; ++l) {
    if (static_cast<int>(J[l].size()) != h * h)
      fail(ErrorCode::InvalidSpec, "h-type: J[" + std::to_string(l) + "] is not 2n x 2n");
  }
  for (int l = 0; l < m; ++l) {
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < h; ++c)
        if (std::abs(entry(l, r, c) + entry(l, c, r)) > kSpecTol)
          fail(ErrorCode::InvalidSpec, "h-type: J[" + std::to_string(l) + "] is not skew-symmetric");
  }
  // J_l J_p + J_p J_l = -2 delta_lp I
  for (int l = 0; l < m; ++l) {
    for (int p = l; p < m; ++p) {
      for (int r = 0; r < h; ++r) {
        for (int c = 0; c < h; ++c) {
          double s = 0.0;
          for (int q = 0; q < h; ++q)
            s += entry(l, r, q) * entry(p, q, c) + entry(p, r, q) * entry(l, q, c);
          const double target = (l == p && r == c) ? -2.0 : 0.0;
          if (std::abs(s - target) > 1e-10) {
            if (l == p)
              fail(ErrorCode::InvalidSpec,
                   "h-type: J[" + std::to_string(l) + "]^2 is not -Identity");
            fail(ErrorCode::InvalidSpec, "h-type: J[" + std::to_string(l) + "] and J[" +
                                             std::to_string(p) + "] do not anticommute");
          }
        }
      }
    }
  }
}

GroupSpec GroupSpec::graded(std::string name, std::vector<int> layers,
                            const std::vector<BracketEntry>& brackets) {
  if (layers.empty()) fail(ErrorCode::InvalidSpec, "layers must be non-empty");
  for (int l : layers)
    if (l < 1) fail(ErrorCode::InvalidSpec, "layer dimensions must be positive");

  GroupSpec s;
  s.name_ = std::move(name);
  s.layers_ = std::move(layers);
  s.dim_ = std::accumulate(s.layers_.begin(), s.layers_.end(), 0);
  if (s.dim_ > kMaxDim)
    fail(ErrorCode::InvalidSpec, "dimension exceeds " + std::to_string(kMaxDim));
  for (std::size_t layer = 0; layer < s.layers_.size(); ++layer) {
    for (int c = 0; c < s.layers_[layer]; ++c) s.weights_.push_back(static_cast<int>(layer) + 1);
    s.homogeneous_dim_ += static_cast<int>(layer + 1) * s.layers_[layer];
  }
  const int n = s.dim_;
  s.table_.assign(static_cast<std::size_t>(n) * n * n, 0.0);
  for (const auto& b : brackets) {
    if (b.i < 0 || b.j < 0 || b.k < 0 || b.i >= n || b.j >= n || b.k >= n)
      fail(ErrorCode::InvalidSpec, "bracket index out of range " + describe(b.i, b.j, b.k));
    if (b.i == b.j && b.c != 0.0)
      fail(ErrorCode::InvalidSpec, "antisymmetry: [e_i, e_i] must vanish " + describe(b.i, b.j, b.k));
    // Entries are given for one ordering; the antisymmetric partner is implied.
    // Listing both orderings is accepted when they are consistent.
    auto& fwd = s.table_[(static_cast<std::size_t>(b.i) * n + b.j) * n + b.k];
    auto& rev = s.table_[(static_cast<std::size_t>(b.j) * n + b.i) * n + b.k];
    if (fwd != 0.0 && std::abs(fwd - b.c) > kSpecTol)
      fail(ErrorCode::InvalidSpec, "antisymmetry: conflicting entries " + describe(b.i, b.j, b.k));
    fwd = b.c;
    rev = -b.c;
  }
  s.validate();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (const double c = s.structure(i, j, k); c != 0.0) s.nonzero_.push_back({i, j, k, c});
  return s;
}

void GroupSpec::validate() const {
  const int n = dim_;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (std::abs(structure(i, j, k) + structure(j, i, k)) > kSpecTol)
          fail(ErrorCode::InvalidSpec, "antisymmetry violated at " + describe(i, j, k));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (structure(i, j, k) != 0.0 && weights_[k] != weights_[i] + weights_[j])
          fail(ErrorCode::InvalidSpec, "grading violated at " + describe(i, j, k));
  // Jacobi: [e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]] = 0.
  auto nested = [&](int a, int b, int c, int out) {
    double s = 0.0;
    for (int q = 0; q < n; ++q) s += structure(b, c, q) * structure(a, q, out);
    return s;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int out = 0; out < n; ++out) {
          const double s = nested(i, j, k, out) + nested(j, k, i, out) + nested(k, i, j, out);
          if (std::abs(s) > 1e-10)
            fail(ErrorCode::InvalidSpec, "Jacobi identity violated on basis triple " +
                                             describe(i, j, k));
        }
  const int step = static_cast<int>(layers_.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (weights_[i] + weights_[j] > step)
        for (int k = 0; k < n; ++k)
          if (structure(i, j, k) != 0.0)
            fail(ErrorCode::InvalidSpec, "nilpotency violated at " + describe(i, j, k));
}

GroupSpec GroupSpec::from_htype(std::string name, const HTypeSpec& htype) {
  htype.validate();
  const int h = 2 * htype.n;
  std::vector<BracketEntry> brackets;
  for (int a = 0; a < h; ++a)
    for (int b = a + 1; b < h; ++b)
      for (int l = 0; l < htype.m; ++l)
        if (const double c = htype.entry(l, b, a); c != 0.0)
          brackets.push_back({a, b, h + l, c});
  GroupSpec s = graded(std::move(name), {h, htype.m}, brackets);
  s.htype_ = htype;
  return s;
}

std::vector<BracketEntry> GroupSpec::brackets_upper() const {
  std::vector<BracketEntry> out;
  for (const auto& e : nonzero_)
    if (e.i < e.j) out.push_back(e);
  return out;
}

void GroupSpec::require_bch() const {
  if (step() > kMaxStep)
    fail(ErrorCode::UnsupportedStep, "BCH product is available for step <= 4, got step " +
                                         std::to_string(step()));
}

void GroupSpec::require_point(std::span<const double> g) const {
  if (static_cast<int>(g.size()) != dim_)
    fail(ErrorCode::DimensionMismatch, "point has " + std::to_string(g.size()) +
                                           " coordinates, group dimension is " +
                                           std::to_string(dim_));
}

namespace {

using Buffer = std::array<double, GroupSpec::kMaxDim>;

void bracket_into(const GroupSpec& spec, const double* a, const double* b, double* out) {
  std::fill(out, out + spec.dim(), 0.0);
  for (const auto& e : spec.nonzero()) out[e.k] += e.c * a[e.i] * b[e.j];
}

}  // namespace

void product_into(const GroupSpec& spec, std::span<const double> g,
                  std::span<const double> h, std::span<double> out) {
  spec.require_bch();
  const int n = spec.dim();
  for (int a = 0; a < n; ++a) out[a] = g[a] + h[a];
  if (spec.step() < 2) return;
  Buffer ab, a_ab, b_ab, b_a_ab;
  bracket_into(spec, g.data(), h.data(), ab.data());
  for (int a = 0; a < n; ++a) out[a] += 0.5 * ab[a];
  if (spec.step() < 3) return;
  bracket_into(spec, g.data(), ab.data(), a_ab.data());
  bracket_into(spec, h.data(), ab.data(), b_ab.data());
  for (int a = 0; a < n; ++a) out[a] += (a_ab[a] - b_ab[a]) / 12.0;
  if (spec.step() < 4) return;
  bracket_into(spec, h.data(), a_ab.data(), b_a_ab.data());
  for (int a = 0; a < n; ++a) out[a] -= b_a_ab[a] / 24.0;
}

Point product(const GroupSpec& spec, std::span<const double> g, std::span<const double> h) {
  spec.require_point(g);
  spec.require_point(h);
  Point out(spec.dim());
  product_into(spec, g, h, out);
  return out;
}

Point inverse(std::span<const double> g) {
  Point out(g.begin(), g.end());
  for (auto& v : out) v = -v;
  return out;
}

Point dilate(const GroupSpec& spec, double t, std::span<const double> g) {
  spec.require_point(g);
  if (!(t >= 0.0)) fail(ErrorCode::InvalidArgument, "dilation factor must be nonnegative");
  Point out(g.begin(), g.end());
  for (int a = 0; a < spec.dim(); ++a) out[a] *= std::pow(t, spec.weights()[a]);
  return out;
}

Point conjugate(const GroupSpec& spec, std::span<const double> g, std::span<const double> h) {
  const Point gi = inverse(g);
  return product(spec, product(spec, gi, h), g);
}

namespace presets {

GroupSpec abelian(int d) {
  if (d < 1) fail(ErrorCode::InvalidArgument, "abelian dimension must be positive");
  return GroupSpec::graded("abelian-" + std::to_string(d), {d}, {});
}

HTypeSpec symplectic(int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "heisenberg index must be positive");
  const int h = 2 * n;
  HTypeSpec s{n, 1, {std::vector<double>(static_cast<std::size_t>(h) * h, 0.0)}};
  // Omega = [[0, -I], [I, 0]]; J = Omega^T = [[0, I], [-I, 0]].
  for (int i = 0; i < n; ++i) {
    s.J[0][i * h + (n + i)] = 1.0;
    s.J[0][(n + i) * h + i] = -1.0;
  }
  return s;
}

GroupSpec heisenberg(int n) {
  return GroupSpec::from_htype("heisenberg-" + std::to_string(n), symplectic(n));
}

GroupSpec engel() {
  // Basis X, Y, W, Z with [X, Y] = W and [X, W] = Z.
  return GroupSpec::graded("engel", {2, 1, 1}, {{0, 1, 2, 1.0}, {0, 2, 3, 1.0}});
}

GroupSpec htype(std::string name, const HTypeSpec& htype) {
  return GroupSpec::from_htype(std::move(name), htype);
}

HTypeSpec quaternionic(int m) {
  if (m < 1 || m > 3) fail(ErrorCode::InvalidArgument, "quaternionic h-type needs 1 <= m <= 3");
  // Columns are the images of the basis (1, i, j, k) under left multiplication.
  const std::array<std::array<int, 4>, 3> target{{{1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}}};
  const std::array<std::array<double, 4>, 3> sign{{{1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}}};
  HTypeSpec s{2, m, {}};
  for (int l = 0; l < m; ++l) {
    std::vector<double> J(16, 0.0);
    for (int col = 0; col < 4; ++col) J[target[l][col] * 4 + col] = sign[l][col];
    s.J.push_back(std::move(J));
  }
  return s;
}

std::optional<GroupSpec> by_name(std::string_view name) {
  auto suffix_int = [&](std::string_view prefix) -> std::optional<int> {
    if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
    const auto rest = name.substr(prefix.size());
    if (rest.empty() || rest.size() > 3) return std::nullopt;
    int v = 0;
    for (char c : rest) {
      if (c < '0' || c > '9') return std::nullopt;
      v = v * 10 + (c - '0');
    }
    return v;
  };
  if (name == "engel") return engel();
  if (auto d = suffix_int("abelian-"); d && *d >= 1) return abelian(*d);
  if (auto n = suffix_int("heisenberg-"); n && *n >= 1) return heisenberg(*n);
  if (auto m = suffix_int("htype-2-"); m && *m >= 1 && *m <= 3)
    return htype("htype-2-" + std::to_string(*m), quaternionic(*m));
  return std::nullopt;
}

std::vector<std::string> names() {
  return {"abelian-<d>", "heisenberg-<n>", "engel", "htype-2-1", "htype-2-2", "htype-2-3"};
}

}  // namespace presets

}  // namespace carnot

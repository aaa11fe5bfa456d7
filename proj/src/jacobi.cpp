#include "carnot/jacobi.hpp"

#include <cmath>

#include "carnot/error.hpp"

namespace carnot {

SymmetricEigen jacobi_eigen(std::span<const double> a_in, int n, double tol, int max_sweeps) {
  if (n < 1 || a_in.size() != static_cast<std::size_t>(n) * n)
    fail(ErrorCode::DimensionMismatch, "jacobi_eigen needs an n x n matrix");
  std::vector<double> a(a_in.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i * n + j] = 0.5 * (a_in[i * n + j] + a_in[j * n + i]);
  std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) v[i * n + i] = 1.0;

  double total = 0.0;
  for (double x : a) total += x * x;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
    if (off <= tol * tol * total) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  SymmetricEigen out;
  out.n = n;
  out.values.resize(n);
  for (int i = 0; i < n; ++i) out.values[i] = a[i * n + i];
  out.vectors = std::move(v);
  return out;
}

TopEigenpair top_eigenpair(std::span<const double> a, int n) {
  const SymmetricEigen e = jacobi_eigen(a, n);
  double vmax = e.values[0];
  for (double x : e.values) vmax = std::max(vmax, x);
  double scale = 0.0;
  for (double x : a) scale = std::max(scale, std::abs(x));

  auto dominant = [&](int k) {
    int best = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(e.vectors[i * n + k]) > std::abs(e.vectors[best * n + k]) + 1e-12) best = i;
    return best;
  };
  int pick = -1;
  for (int k = 0; k < n; ++k) {
    if (e.values[k] < vmax - 1e-10 * std::max(1.0, scale)) continue;
    if (pick < 0 || dominant(k) < dominant(pick)) pick = k;
  }
  TopEigenpair top;
  top.value = e.values[pick];
  top.vector.resize(n);
  for (int i = 0; i < n; ++i) top.vector[i] = e.vectors[i * n + pick];
  if (top.vector[dominant(pick)] < 0)
    for (auto& x : top.vector) x = -x;
  for (int i = 0; i < n; ++i) {
    double r = -top.value * top.vector[i];
    for (int j = 0; j < n; ++j) r += a[i * n + j] * top.vector[j];
    top.residual += r * r;
  }
  top.residual = std::sqrt(top.residual);
  return top;
}

}  // namespace carnot

#pragma once

// Cyclic Jacobi eigen-decomposition of small symmetric matrices.

#include <span>
#include <vector>

namespace carnot {

struct SymmetricEigen {
  int n = 0;
  std::vector<double> values;   // unsorted, in Jacobi order
  std::vector<double> vectors;  // column k is the eigenvector of values[k], row-major n x n
};

/// A is row-major n x n and is symmetrized as (A + A^T) / 2.
SymmetricEigen jacobi_eigen(std::span<const double> a, int n, double tol = 1e-15, int max_sweeps = 100);

struct TopEigenpair {
  double value = 0.0;
  std::vector<double> vector;  // unit, largest |component| positive
  double residual = 0.0;       // |M a - value a|
};

/// Largest eigenvalue; among eigenvalues within 1e-10 of the maximum, the
/// eigenvector whose dominant coordinate has the lowest index wins.
TopEigenpair top_eigenpair(std::span<const double> a, int n);

}  // namespace carnot

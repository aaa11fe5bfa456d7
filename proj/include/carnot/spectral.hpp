#pragma once

// The Gram matrix M_ij = E_{p_1}[V^_i ln p_1 . V^_j ln p_1], its top
// eigenvalue Lambda, the trace identity E_{p_t}[Gamma(ln p_t)] = Q / 2t and
// the bounds Q/2d <= Lambda <= Q/2.

#include <optional>
#include <string>
#include <vector>

#include "carnot/diffusion.hpp"
#include "carnot/heat_kernel.hpp"

namespace carnot {

enum class SpectralMethod { MonteCarlo, Quadrature };
std::string_view to_string(SpectralMethod m);
SpectralMethod parse_spectral_method(std::string_view name);

struct BoundCheck {
  double lower = 0.0;  // Q / 2d
  double upper = 0.0;  // Q / 2
  bool lower_ok = false;
  bool upper_ok = false;
  bool trace_chain_ok = false;  // trace / d <= Lambda <= trace
  bool pass = false;
};

struct SpectralReport {
  std::string group;
  int Q = 0;
  int d = 0;
  SpectralMethod method = SpectralMethod::MonteCarlo;
  std::vector<double> M;           // d x d row-major
  std::vector<double> M_error;     // jackknife SE (MC) or refinement difference (quadrature)
  double lambda = 0.0;
  double lambda_error = 0.0;
  std::vector<double> top_vector;
  double eigen_residual = 0.0;
  double trace = 0.0;
  double trace_error = 0.0;
  double trace_target = 0.0;       // Q / 2 at t = 1
  BoundCheck bounds;
  // Monte Carlo bookkeeping
  std::size_t samples = 0;
  std::size_t rejected = 0;
  double rejection_fraction = 0.0;
  /// (a^T E[V^V^ ln p] a)^2 / Var(a . V^ ln p) for the top eigenvector a;
  /// equals Lambda in the limit.
  std::optional<Estimate> sharpness_ratio;
  // Quadrature bookkeeping
  double mass = 0.0;               // integral of p_1 over the grid
  int grid_level = 0;
};

struct QuadratureGrid {
  int level = 2;        // panels scale as 2^level
  int nodes = 12;       // Gauss-Legendre nodes per panel
  double radius = 12.0; // horizontal truncation at t = 1
  double height = 16.0; // vertical truncation at t = 1; the z-marginal decays like e^{-pi z / 2}
};

struct MonteCarloSpectralOptions {
  MCConfig mc;
  bool sharpness_probe = true;
  double max_rejection = 1e-4;
};

SpectralReport compute_M_mc(const KernelEvaluator& kernel, const MonteCarloSpectralOptions& opt);
SpectralReport compute_M_quadrature(const KernelEvaluator& kernel, const QuadratureGrid& grid = {});

/// Fills lambda, top_vector, residual, trace and bounds from M and its errors.
void finish_report(SpectralReport& rep);
BoundCheck bound_check(const SpectralReport& rep);

struct TraceCheck {
  std::string group;
  double t = 1.0;
  SpectralMethod method = SpectralMethod::MonteCarlo;
  double lhs = 0.0;
  double lhs_error = 0.0;
  double rhs = 0.0;  // Q / 2t
  double tolerance = 0.0;
  bool pass = false;
  std::size_t samples = 0;
  std::size_t rejected = 0;
};

/// E_{p_t}[Gamma(ln p_t)] with the left-invariant carre du champ.
TraceCheck trace_identity_check(const KernelEvaluator& kernel, double t, SpectralMethod method,
                                const MCConfig& mc = {}, const QuadratureGrid& grid = {});

}  // namespace carnot

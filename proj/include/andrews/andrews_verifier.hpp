#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "andrews/conic_spectral.hpp"
#include "andrews/metric_library.hpp"
#include "andrews/radial_profile.hpp"

namespace andrews {

/// Per-mode weights of the Ric^{-1} Rayleigh quotient reduced to the radial
/// line: numerator weights p = f^{n-1}/rho_rad and q_l = lambda_l
/// f^{n-3}/rho_tan, denominator weight w = f^{n-1}. All are positive on the
/// interior whenever the Ricci curvature is.
struct RayleighProblem {
  const WarpedManifold* manifold = nullptr;
  std::vector<SphereMode> modes;
  std::vector<double> grid;
};

RayleighProblem make_rayleigh_problem(const WarpedManifold& M, int lmax,
                                      int cells);

/// F(phi) = sum_l int [(phi_l')^2/rho_rad + lambda_l phi_l^2/(f^2 rho_tan)]
/// f^{n-1} dr / sum_l int phi_l^2 f^{n-1} dr, the mode reduction of
/// int Ric^{-1}(grad phi, grad phi) dv / int phi^2 dv. The degree-0
/// component must be mean-free (weighted mean below 1e-8 relative).
double rayleigh_quotient(const WarpedManifold& M, const ModeExpansion& phi);

struct ModeEigen {
  int degree = 0;
  double lambda = 0.0;
  std::vector<double> phi;  // eigenfunction samples on the shared grid
  double residual = 0.0;
};

struct EigenResult {
  std::vector<double> grid;
  std::vector<ModeEigen> per_mode;
  double lambda1_global = 0.0;
  int minimizing_degree = 0;
  double bound = 0.0;          // n/(n-1)
  double margin = 0.0;         // lambda1_global - bound
  double tol_estimate = 0.0;   // Richardson estimate from a coarser solve
  bool bound_satisfied = false;
};

/// Smallest eigenvalue of the Ric^{-1} problem over modes 0..lmax: per mode
/// the weighted Sturm-Liouville pencil -(p phi')' + q_l phi = lambda w phi
/// with natural conditions at cap/cone ends and Neumann at boundary ends;
/// the degree-0 minimization is restricted to mean-free functions (the
/// constant eigenvector is deflated). Requires positive Ricci, and a weakly
/// convex boundary where one is present.
EigenResult first_eigenvalue(const WarpedManifold& M, int lmax = 8,
                             int cells = 2000);

enum class BochnerCase { Closed, Conic, Boundary };

/// Radial test function handed to bochner_deficit: first and second
/// derivative evaluators.
struct RadialTestFunction {
  std::function<double(double)> d1;
  std::function<double(double)> d2;
};

struct DeficitReport {
  double traceless_hessian_energy = 0.0;
  double bochner_rhs = 0.0;      // int [(n-1)/n (Lap u)^2 - Ric(grad u, grad u)]
  double boundary_ii_term = 0.0;
  double residual = 0.0;
  double quad_tol = 0.0;
};

/// Integrated Bochner identity for a radial test function: the traceless
/// Hessian energy (n-1)/n int (u'' - (f'/f) u')^2 dv must match the
/// right-hand side up to the boundary convexity term (zero in the closed and
/// conic cases, and zero for radial Neumann data on the boundary case).
DeficitReport bochner_deficit(const WarpedManifold& M,
                              const RadialTestFunction& u, BochnerCase c,
                              int cells = 2000);

/// Boundary convexity integral of the mode expansion u (Neumann at the
/// boundary end): int_{boundary} II(grad u, grad u) dsigma in the
/// inner-normal convention, which is nonnegative for a weakly convex
/// boundary. Identically zero for purely radial u.
double boundary_ii_integral(const WarpedManifold& M, const ModeExpansion& u);

struct RigidityReport {
  bool equality = false;
  double traceless_energy = 0.0;
  double laplacian_energy = 0.0;  // int (Lap u)^2 dv = int phi1^2 dv
  double traceless_ratio = 0.0;
  double gradient_identity_residual = 0.0;  // grad phi + n/(n-1) Ric(grad u)
  std::optional<double> profile_match_sup;  // |grad u| vs f, normalized
  ManifoldClass cls = ManifoldClass::TwoCaps;
  ClassificationReport classification;
};

/// Equality diagnostics: solves Lap u = phi1 for the minimizing
/// eigenfunction, evaluates the traceless Hessian energy of u (equality iff
/// below 1e-6 of the Laplacian energy), checks the first-order identity
/// grad phi + n/(n-1) Ric(grad u) = 0 in the mode reduction, reconstructs
/// |grad u| against the profile for radial minimizers, and classifies the
/// endpoint structure.
RigidityReport rigidity_check(const WarpedManifold& M, const EigenResult& eig);

/// Weighted mean and L2(w) norm of a sampled radial function (trapezoid on
/// the grid against the volume weight f^{n-1}).
double weighted_mean(const WarpedManifold& M, std::span<const double> grid,
                     std::span<const double> values);

}  // namespace andrews

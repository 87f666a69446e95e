#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace andrews {

/// Symmetric tridiagonal stiffness A (diag/off) and lumped diagonal mass M
/// from the P1 discretization of -(p u')' + q u = lambda w u with natural
/// boundary conditions. Coefficients are sampled at the two Gauss points of
/// each cell, so endpoint values of p, q, w are never evaluated (the weights
/// may vanish at singular ends).
struct TridiagonalPencil {
  std::vector<double> diag;  // A diagonal
  std::vector<double> off;   // A superdiagonal
  std::vector<double> mass;  // M diagonal (positive)
};

TridiagonalPencil assemble_pencil(std::span<const double> nodes,
                                  const std::function<double(double)>& p,
                                  const std::function<double(double)>& q,
                                  const std::function<double(double)>& w);

/// Number of pencil eigenvalues below sigma (LDL^T inertia of A - sigma M).
int pencil_negcount(const TridiagonalPencil& P, double sigma);

struct EigenPair {
  double lambda = 0.0;
  std::vector<double> vec;  // M-normalized, deterministic sign
  double residual = 0.0;    // ||A v - lambda M v|| / ||M v||
  int bisections = 0;
  bool converged = false;
};

/// k-th smallest eigenvalue (1-based) by bisection on the inertia count,
/// polished by inverse iteration. Throws on non-convergence.
EigenPair kth_eigenpair(const TridiagonalPencil& P, int k);

/// Solves (A - shift M) x = rhs with a pivoting tridiagonal factorization.
std::vector<double> shifted_tridiagonal_solve(const TridiagonalPencil& P,
                                              double shift,
                                              std::span<const double> rhs);

/// Rayleigh quotient v^T A v / v^T M v.
double pencil_rayleigh(const TridiagonalPencil& P, std::span<const double> v);

/// Right-hand side load vector b_i = integral of g * hat_i (same Gauss rule
/// as the assembly).
std::vector<double> assemble_load(std::span<const double> nodes,
                                  const std::function<double(double)>& g);

/// Solves the singular Neumann-type system A u = b whose kernel is the
/// constants (mode-0 Poisson): checks the compatibility sum, projects
/// roundoff, pins one degree of freedom, and returns the solution with zero
/// M-weighted mean. rel_tol gates the compatibility test against
/// ||b||_M-relative scale; a violation throws NoSolutionError.
struct NoSolutionError : std::runtime_error {
  explicit NoSolutionError(const std::string& what) : std::runtime_error(what) {}
  double imbalance = 0.0;
};

std::vector<double> solve_singular_neumann(const TridiagonalPencil& P,
                                           std::vector<double> b,
                                           double rel_tol);

/// Solves A u = b for a nonsingular symmetric tridiagonal A (mass unused).
std::vector<double> solve_tridiagonal_spd(const TridiagonalPencil& P,
                                          std::span<const double> rhs);

}  // namespace andrews

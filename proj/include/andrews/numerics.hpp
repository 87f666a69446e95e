#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace andrews {

/// Surface area of the unit sphere S^{m} (m-dimensional sphere in R^{m+1}).
double sphere_area(int m);

/// Binomial coefficient as double; n up to ~50 is exact.
double binomial(int n, int k);

/// 4-point Gauss-Legendre integral of g over [a, b].
double gauss4(const std::function<double(double)>& g, double a, double b);

/// 2-point Gauss-Legendre nodes of the cell [a, b].
std::array<double, 2> gauss2_nodes(double a, double b);

/// Composite per-cell Simpson over the given node vector (needs midpoint
/// evaluations, so it works on non-uniform grids).
double simpson_on_grid(const std::function<double(double)>& g,
                       std::span<const double> nodes);

struct Quadrature {
  double value = 0.0;
  double tol = 0.0;  // Richardson-style error estimate
};

/// Simpson on the grid plus a half-cell refinement; tol = |I_h - I_{h/2}|/15
/// with a small absolute floor.
Quadrature simpson_with_tol(const std::function<double(double)>& g,
                            std::span<const double> nodes);

/// Finite-difference weights for the m-th derivative at x0 from the given
/// stencil nodes (Fornberg's recursion).
std::vector<double> fd_weights(double x0, std::span<const double> nodes, int m);

/// Repeated Aitken delta-squared extrapolation of a sequence tending to a
/// (geometrically approached) limit. Returns the best estimate and a
/// convergence indicator (last correction magnitude).
struct AitkenResult {
  double limit = 0.0;
  double uncertainty = 0.0;
  bool converged = false;
};
AitkenResult aitken_limit(std::span<const double> seq);

/// Least-squares line fit y = a + b x; returns {a, b, r_squared}.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Fixed 17-significant-digit formatting used for all persisted numbers.
std::string format_double(double v);

}  // namespace andrews

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "andrews/numerics.hpp"
#include "andrews/radial_profile.hpp"

namespace andrews {

/// Eigenvalues of the Ricci endomorphism: rho_rad on the radial direction,
/// rho_tan on each tangential direction of the S^{n-1} fibre. The link is the
/// unit round sphere, so the mixed-index curvature expressions reduce to
///   rho_rad = -(n-1) f''/f,
///   rho_tan = -f''/f + (n-2)(1-(f')^2)/f^2.
struct CurvaturePair {
  double rho_rad = 0.0;
  double rho_tan = 0.0;
};

/// Schouten endomorphism eigenvalues a_rr (radial) and a_tt (tangential).
struct SchoutenPair {
  double a_rr = 0.0;
  double a_tt = 0.0;
};

CurvaturePair ricci_eigenvalues(const WarpedManifold& M, double r);

/// Common eigenvalue -f'/f of the second fundamental form of the level
/// sphere at radius r (shape-operator sign of the radial foliation; the
/// boundary-convexity convention flips this sign, see boundary_ii_integral).
double second_fundamental_form(const WarpedManifold& M, double r);

SchoutenPair schouten_components(const WarpedManifold& M, double r);

/// k-th elementary symmetric polynomial of the Schouten eigenvalue list
/// (a_rr once, a_tt with multiplicity n-1).
double sigma_k(const WarpedManifold& M, double r, int k);

/// Vol(S^{n-1}) * integral of w(r) f(r)^{n-1} dr by composite Simpson on a
/// graded grid; the Richardson tolerance estimate is reported alongside.
Quadrature integrate_radial(const WarpedManifold& M,
                            const std::function<double(double)>& w,
                            int cells = 2000);

struct RicciReport {
  bool positive = false;
  double min_value = 0.0;
  double argmin = 0.0;
  bool concave = false;  // f'' < 0 at every probe
  double max_d2f = 0.0;
  int samples = 0;
};

RicciReport check_positive_ricci(const WarpedManifold& M, int samples = 1001);

enum class Side { Left, Right };

struct ConeAngleResult {
  double value = 0.0;  // estimate of 1 + beta
  bool converged = false;
  double uncertainty = 0.0;
};

/// Extrapolates f(r)/(r - r_end) to the endpoint on a dyadic sequence.
/// Boundary endpoints are a domain error.
ConeAngleResult cone_angle(const WarpedManifold& M, Side side);

/// Grid of probe radii strictly inside (a, b), graded toward non-boundary
/// ends (exponent chosen from the cone coefficients).
std::vector<double> interior_probes(const WarpedManifold& M, int count);

/// Quadrature/solver grid over [a, b] including the endpoints, graded toward
/// SmoothCap/Cone ends.
std::vector<double> manifold_grid(const WarpedManifold& M, int cells);

}  // namespace andrews

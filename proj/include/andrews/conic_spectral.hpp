#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "andrews/radial_profile.hpp"
#include "andrews/sturm_liouville.hpp"

namespace andrews {

/// One eigenspace of -Laplace on the unit link S^{n-1}.
struct SphereMode {
  int degree = 0;
  double eigenvalue = 0.0;  // l (l + n - 2)
  long multiplicity = 1;
};

std::vector<SphereMode> sphere_spectrum(int n, int lmax);

/// Exponents of the homogeneous radial cone equation
///   u'' + (n-1)/rho u' - lambda / ((1+beta)^2 rho^2) u = 0,
/// i.e. the roots of alpha (alpha - 1) + (n-1) alpha - lambda/(1+beta)^2 = 0.
struct IndicialPair {
  double alpha_plus = 0.0;
  double alpha_minus = 0.0;
};

IndicialPair indicial_roots(int n, double beta, double lambda);

enum class HolderClass { HolderTau, C11 };

/// Predicted regularity of the solution near a cone point: C^{1,tau} for any
/// tau < min(gamma1 - 1, 1) when -1/2 < beta < 0, and C^{1,1} when
/// -1 < beta <= -1/2, with gamma1 the degree-1 indicial exponent.
struct RegularityReport {
  int n = 0;
  double beta = 0.0;
  double gamma_data = 0.0;
  double gamma1 = 0.0;
  HolderClass cls = HolderClass::HolderTau;
  double tau_sup = 0.0;  // supremum of admissible tau (1.0 in the C11 branch)
  std::optional<double> measured;
};

RegularityReport regularity_exponent(int n, double beta, double gamma_data);

enum class GradeEnd { Left, Right, Both };

/// Nodes of a graded grid on (0, L]: density uniform in rho^{1/q} toward the
/// clustered end(s); the cone tip itself is excluded.
std::vector<double> make_graded_grid(double length, int cells, double q,
                                     GradeEnd end = GradeEnd::Left);

enum class RadialBC { DirichletAtL, NeumannAtL, ClosedRegular };

/// Radial mode solve for the model cone operator on (0, L]:
///   u'' + (n-1)/rho u' - lambda/((1+beta)^2 rho^2) u = rhs.
/// The bounded alpha_plus branch is selected at the tip. The solution is
/// computed twice: by the two-integral representation built from the
/// homogeneous powers (quadrature on the graded grid) and by a self-adjoint
/// finite-difference boundary-value solve; the disagreement is reported.
/// ClosedRegular treats the far end as a regular cap (no flux); the degree-0
/// mode then requires a mean-free right-hand side (NoSolutionError).
struct RadialSolveResult {
  std::vector<double> rho;
  std::vector<double> u;        // primary output (integral representation)
  std::vector<double> u_fem;    // finite-difference route
  double agreement = 0.0;       // weighted sup disagreement of the two routes
  IndicialPair roots;
};

RadialSolveResult solve_radial_mode(const SphereMode& mode, double beta, int n,
                                    const std::function<double(double)>& rhs,
                                    std::span<const double> grid, RadialBC bc,
                                    double bc_value = 0.0);

/// Finite expansion over link eigenspaces on a shared radial grid. Each entry
/// is the radial coefficient of one L2-normalized spherical harmonic.
struct ModeExpansion {
  std::vector<double> grid;
  std::vector<int> degrees;
  std::vector<std::vector<double>> radial;

  std::size_t size() const { return degrees.size(); }
};

struct PoissonResult {
  ModeExpansion u;
  double mean_imbalance = 0.0;   // weighted mean of the degree-0 data
  std::vector<double> residual;  // per-mode algebraic residual
};

/// Mode-by-mode solve of Laplace u = phi on the warped manifold. Cap/cone
/// ends carry the natural (bounded-branch) condition, boundary ends are
/// Neumann; the degree-0 component requires mean-free data on closed
/// manifolds and is returned with zero weighted mean.
PoissonResult solve_poisson(const WarpedManifold& M, const ModeExpansion& phi);

struct HolderFit {
  double exponent = 0.0;
  double r_squared = 0.0;
  int levels = 0;
};

/// Least-squares slope of log|u(rho) - u_limit| against log rho on a dyadic
/// sequence rho_top, rho_top/2, ... Throws if fewer than 4 levels resolve
/// above the noise floor. Pure power laws are assumed; a logarithmic
/// correction (possible at exponent resonances) is not detected separately
/// and biases the fitted slope.
HolderFit estimate_holder_exponent(const std::function<double(double)>& u,
                                   double u_limit, double rho_top, int levels);
HolderFit estimate_holder_exponent(std::span<const double> rho,
                                   std::span<const double> u, double u_limit);

/// Arc-length normal form near a cone point: given the background profile
/// f0(r) and a radially symmetric conformal factor w(r) of the conic metric
/// r^{2 beta} e^{2 w} (dr^2 + f0^2 dtheta^2), returns rho(r) and
/// h(rho) = e^w r^beta f0(r) with h(rho)/rho -> 1 + beta.
struct ArcLengthProfile {
  std::vector<double> r;
  std::vector<double> rho;
  std::vector<double> h;
  double tip_slope = 0.0;  // extrapolated h/rho limit
  bool tip_slope_converged = false;
};

ArcLengthProfile conic_to_arclength(double beta,
                                    const std::function<double(double)>& w,
                                    const std::function<double(double)>& f0,
                                    double r_max, int samples = 800);

}  // namespace andrews

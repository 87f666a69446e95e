#include "andrews/warped_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace andrews {

namespace {

constexpr double kClampEps = 1e-6;  // fraction of the interval length
// Window for the smooth-cap limit substitution below. At distance s from a
// cap the raw quotient (1-(f')^2)/f^2 carries a ~1e-16/s^2 rounding error
// while the one-sided limit differs from it by O(s^2); the crossover sits
// near s ~ 1e-4 of the interval.
constexpr double kCapLimitEps = 1e-4;

bool singular_end(EndpointKind k) { return k != EndpointKind::Boundary; }

// Stable curvature building blocks c1 = -f''/f and c2 = (1-(f')^2)/f^2.
// Within the clamp window of a SmoothCap/Cone end the radius is moved one
// clamp width inside (0/0 at the end itself); within the wider cap window
// c2 is replaced by its one-sided limit, which equals c1 there (both tend
// to the cap curvature; the raw quotient cancels catastrophically as
// f' -> 1, whereas cone ends keep 1-(f')^2 bounded away from zero).
struct CurvatureCore {
  double c1 = 0.0;
  double c2 = 0.0;
};

CurvatureCore curvature_core(const WarpedManifold& M, double r) {
  const double a = M.a(), b = M.b();
  if (!(r > a && r < b))
    throw std::domain_error("curvature: r must be strictly interior");
  const double clamp = kClampEps * M.length();
  const double cap_window = kCapLimitEps * M.length();
  if (r - a < clamp && singular_end(M.left.kind)) r = a + clamp;
  if (b - r < clamp && singular_end(M.right.kind)) r = b - clamp;
  const bool near_cap =
      (r - a < cap_window && M.left.kind == EndpointKind::SmoothCap) ||
      (b - r < cap_window && M.right.kind == EndpointKind::SmoothCap);
  const ProfileJet j = M.profile.jet(r);
  CurvatureCore c;
  c.c1 = -j.d2f / j.f;
  c.c2 = near_cap ? c.c1 : (1.0 - j.df * j.df) / (j.f * j.f);
  return c;
}

}  // namespace

CurvaturePair ricci_eigenvalues(const WarpedManifold& M, double r) {
  const auto [c1, c2] = curvature_core(M, r);
  const int n = M.dim;
  return {(n - 1) * c1, c1 + (n - 2) * c2};
}

double second_fundamental_form(const WarpedManifold& M, double r) {
  const double a = M.a(), b = M.b();
  const bool at_right_boundary =
      M.right.kind == EndpointKind::Boundary && r == b;
  const bool at_left_boundary = M.left.kind == EndpointKind::Boundary && r == a;
  if (!(r > a && r < b) && !at_right_boundary && !at_left_boundary)
    throw std::domain_error("second_fundamental_form: r must be interior");
  const ProfileJet j = M.profile.jet(r, at_right_boundary || at_left_boundary);
  return -j.df / j.f;
}

SchoutenPair schouten_components(const WarpedManifold& M, double r) {
  if (M.dim < 3) throw std::domain_error("schouten_components: need n >= 3");
  const auto [c1, c2] = curvature_core(M, r);
  return {c1 - 0.5 * c2, 0.5 * c2};
}

double sigma_k(const WarpedManifold& M, double r, int k) {
  const int n = M.dim;
  if (k < 1 || k > n) throw std::invalid_argument("sigma_k: k out of range");
  // e_k of (a_rr, a_tt x (n-1)) in the factored form
  //   C(n-1,k-1) a_tt^{k-1} [ (n-k)/k a_tt + a_rr ].
  // Writing the bracket in terms of c1 = -f''/f and c2 = (1-(f')^2)/f^2
  // avoids the a_tt/a_rr cancellation near cone tips, where both blow up
  // like 1/f^2 with opposite signs; for k = n/2 the bracket is exactly c1.
  const auto [c1, c2] = curvature_core(M, r);
  const double a_tt = 0.5 * c2;
  const double bracket = c1 + (n - 2.0 * k) / (2.0 * k) * c2;
  return binomial(n - 1, k - 1) * std::pow(a_tt, k - 1) * bracket;
}

Quadrature integrate_radial(const WarpedManifold& M,
                            const std::function<double(double)>& w, int cells) {
  const auto grid = manifold_grid(M, cells);
  const int n = M.dim;
  const double area = sphere_area(n - 1);
  auto integrand = [&](double r) {
    const double len = M.length();
    // endpoint values of f are taken by one-sided evaluation; the volume
    // weight f^{n-1} vanishes there for cap/cone ends
    const bool endpoint = r <= M.a() + 1e-14 * len || r >= M.b() - 1e-14 * len;
    const double f = M.profile.jet(r, endpoint).f;
    return w(r) * std::pow(f, n - 1);
  };
  Quadrature q = simpson_with_tol(integrand, grid);
  q.value *= area;
  q.tol *= area;
  return q;
}

RicciReport check_positive_ricci(const WarpedManifold& M, int samples) {
  RicciReport rep;
  rep.samples = samples;
  rep.min_value = std::numeric_limits<double>::infinity();
  rep.max_d2f = -std::numeric_limits<double>::infinity();
  rep.concave = true;
  for (double r : interior_probes(M, samples)) {
    const CurvaturePair c = ricci_eigenvalues(M, r);
    const double m = std::min(c.rho_rad, c.rho_tan);
    if (m < rep.min_value) {
      rep.min_value = m;
      rep.argmin = r;
    }
    const double d2f = M.profile.jet(r).d2f;
    rep.max_d2f = std::max(rep.max_d2f, d2f);
    if (!(d2f < 0.0)) rep.concave = false;
  }
  rep.positive = rep.min_value > 0.0;
  return rep;
}

ConeAngleResult cone_angle(const WarpedManifold& M, Side side) {
  const Endpoint& e = side == Side::Left ? M.left : M.right;
  if (e.kind == EndpointKind::Boundary)
    throw std::domain_error("cone_angle: boundary endpoint has no cone angle");
  const double r_end = side == Side::Left ? M.a() : M.b();
  const double sgn = side == Side::Left ? 1.0 : -1.0;
  const double len = M.length();

  std::vector<double> seq;
  double d = 0.05 * len;
  for (int j = 0; j < 14; ++j, d *= 0.5) {
    const double f = M.profile.value(r_end + sgn * d);
    seq.push_back(std::abs(f / d));
  }
  const AitkenResult ext = aitken_limit(seq);
  ConeAngleResult res;
  res.value = ext.limit;
  res.uncertainty = ext.uncertainty;
  res.converged = ext.converged;
  if (!res.converged)
    throw std::runtime_error("cone_angle: endpoint extrapolation did not converge");
  return res;
}

namespace {

double grading_exponent(const Endpoint& e) {
  if (e.kind == EndpointKind::Cone)
    return std::max(2.0, std::ceil(1.0 / (1.0 + e.beta)));
  if (e.kind == EndpointKind::SmoothCap) return 2.0;
  return 1.0;
}

}  // namespace

std::vector<double> manifold_grid(const WarpedManifold& M, int cells) {
  if (cells < 4) throw std::invalid_argument("manifold_grid: need >= 4 cells");
  const double a = M.a(), b = M.b(), len = b - a;
  const double qa = grading_exponent(M.left), qb = grading_exponent(M.right);
  std::vector<double> g(cells + 1);
  for (int i = 0; i <= cells; ++i) {
    const double xi = static_cast<double>(i) / cells;  // uniform parameter
    // symmetric two-sided grading: left half controlled by qa, right by qb
    double y;
    if (xi <= 0.5) {
      y = 0.5 * std::pow(2.0 * xi, qa);
    } else {
      y = 1.0 - 0.5 * std::pow(2.0 * (1.0 - xi), qb);
    }
    g[i] = a + len * y;
  }
  g.front() = a;
  g.back() = b;
  return g;
}

std::vector<double> interior_probes(const WarpedManifold& M, int count) {
  if (count < 1) throw std::invalid_argument("interior_probes: need >= 1");
  const auto grid = manifold_grid(M, count + 1);
  std::vector<double> probes;
  probes.reserve(count);
  for (int i = 0; i < count; ++i)
    probes.push_back(0.5 * (grid[i] + grid[i + 1]));
  return probes;
}

}  // namespace andrews

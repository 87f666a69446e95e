#include "andrews/metric_library.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "andrews/numerics.hpp"
#include "andrews/warped_geometry.hpp"

namespace andrews {

namespace {

RadialProfile sin_profile(double a, double b) {
  return RadialProfile::formula("sin", a, b, [](double r) {
    return ProfileJet{std::sin(r), std::cos(r), -std::sin(r)};
  });
}

}  // namespace

WarpedManifold build_round_sphere(int n) {
  if (n < 3) throw std::invalid_argument("build_round_sphere: n must be >= 3");
  return make_manifold(n, sin_profile(0.0, M_PI), {EndpointKind::SmoothCap},
                       {EndpointKind::SmoothCap});
}

WarpedManifold build_hemisphere(int n) { return build_spherical_cap(n, 0.5 * M_PI); }

WarpedManifold build_spherical_cap(int n, double colatitude) {
  if (n < 3) throw std::invalid_argument("build_spherical_cap: n must be >= 3");
  if (!(colatitude > 0.0 && colatitude < M_PI))
    throw std::invalid_argument("build_spherical_cap: colatitude must lie in (0, pi)");
  return make_manifold(n, sin_profile(0.0, colatitude), {EndpointKind::SmoothCap},
                       {EndpointKind::Boundary});
}

namespace {

struct FootballAlgebra {
  int n, k;
  double beta, c2, f_max;

  // 1 - (n c2 + f^n)^{1/k} = (f')^2, evaluated without cancellation via
  // f_max^n - f^n (n c2 = 1 - f_max^n).
  double slope_sq_from_f(double f) const {
    const double diff = pow_diff(f_max, f);
    if (diff <= 0.0) return 0.0;
    return -std::expm1(std::log1p(-diff) / k);
  }

  double slope_sq_from_theta(double theta) const {
    // f = f_max sin(theta); 1 - sin^n stays accurate near theta = pi/2
    const double s = std::sin(theta);
    if (s <= 0.0) return slope_sq_from_f(0.0);
    const double one_minus_sn = -std::expm1(n * std::log(s));
    const double diff = std::pow(f_max, n) * one_minus_sn;
    if (diff <= 0.0) return 0.0;
    return -std::expm1(std::log1p(-diff) / k);
  }

  double second_derivative(double f) const {
    const double A = n * c2 + std::pow(f, n);
    return -(0.5 * n / k) * std::pow(A, 1.0 / k - 1.0) * std::pow(f, n - 1);
  }

 private:
  // a^n - b^n = (a - b) sum a^{n-1-i} b^i, stable as b -> a
  double pow_diff(double a, double b) const {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::pow(a, n - 1 - i) * std::pow(b, i);
    return (a - b) * s;
  }
};

}  // namespace

Football build_football(int n, double beta, int table_nodes) {
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("build_football: n must be even and >= 4");
  if (!(beta > -1.0 && beta <= 0.0))
    throw std::invalid_argument("build_football: beta must lie in (-1, 0]");
  if (table_nodes < 41) table_nodes = 41;
  if (table_nodes % 2 == 0) ++table_nodes;  // keep the turning point on a node

  FootballSpec spec;
  spec.n = n;
  spec.k = n / 2;
  spec.beta = beta;
  spec.c0 = 1.0;
  spec.c2 = std::pow(1.0 - (1.0 + beta) * (1.0 + beta), spec.k) / n;
  spec.f_max = std::pow(1.0 - n * spec.c2, 1.0 / n);

  const FootballAlgebra alg{n, spec.k, beta, spec.c2, spec.f_max};

  // Arc length from the tip: dr = df / sqrt(G(f)); the substitution
  // f = f_max sin(theta) removes the inverse-sqrt turning-point singularity.
  auto dr_dtheta = [&](double theta) {
    const double g = alg.slope_sq_from_theta(theta);
    return spec.f_max * std::cos(theta) / std::sqrt(g);
  };

  const int mcells = std::max(4 * table_nodes, 8000);
  std::vector<double> theta(mcells + 1), rtheta(mcells + 1);
  for (int i = 0; i <= mcells; ++i)
    theta[i] = 0.5 * M_PI * static_cast<double>(i) / mcells;
  rtheta[0] = 0.0;
  for (int i = 1; i <= mcells; ++i)
    rtheta[i] = rtheta[i - 1] + gauss4(dr_dtheta, theta[i - 1], theta[i]);
  const double half = rtheta[mcells];
  spec.total_length = 2.0 * half;

  auto theta_of_r = [&](double r) {
    if (r <= 0.0) return 0.0;
    if (r >= half) return 0.5 * M_PI;
    auto it = std::upper_bound(rtheta.begin(), rtheta.end(), r);
    std::size_t i = static_cast<std::size_t>(it - rtheta.begin());
    i = std::min(std::max<std::size_t>(i, 1), rtheta.size() - 1);
    double t = theta[i - 1] +
               (theta[i] - theta[i - 1]) * (r - rtheta[i - 1]) /
                   (rtheta[i] - rtheta[i - 1]);
    for (int iter = 0; iter < 30; ++iter) {
      const double res = rtheta[i - 1] + gauss4(dr_dtheta, theta[i - 1], t) - r;
      const double step = res / dr_dtheta(t);
      t -= step;
      t = std::clamp(t, theta[i - 1], theta[i]);
      if (std::abs(step) < 1e-15 * (1.0 + t)) break;
    }
    return t;
  };

  // Graded node table over [0, total_length], symmetric about the midpoint.
  const double q = std::max(2.0, std::ceil(1.0 / (1.0 + beta)));
  const int N = table_nodes - 1;
  std::vector<double> rn(table_nodes), fn(table_nodes), dfn(table_nodes);
  for (int i = 0; i <= N; ++i) {
    const double xi = static_cast<double>(i) / N;
    const double y = xi <= 0.5 ? 0.5 * std::pow(2.0 * xi, q)
                               : 1.0 - 0.5 * std::pow(2.0 * (1.0 - xi), q);
    rn[i] = spec.total_length * y;
  }
  rn.front() = 0.0;
  rn.back() = spec.total_length;
  for (int i = 0; i <= N; ++i) {
    const double r_half = rn[i] <= half ? rn[i] : spec.total_length - rn[i];
    const double th = theta_of_r(r_half);
    fn[i] = spec.f_max * std::sin(th);
    const double slope = std::sqrt(std::max(alg.slope_sq_from_theta(th), 0.0));
    dfn[i] = rn[i] < half ? slope : (rn[i] > half ? -slope : 0.0);
  }
  fn.front() = 0.0;
  fn.back() = 0.0;
  fn[N / 2] = spec.f_max;
  dfn[N / 2] = 0.0;

  const double mid = half;
  auto jet_from_f = [alg, mid](double r, double f) {
    ProfileJet j;
    j.f = f;
    const double slope = std::sqrt(std::max(alg.slope_sq_from_f(f), 0.0));
    j.df = r < mid ? slope : (r > mid ? -slope : 0.0);
    j.d2f = alg.second_derivative(f);
    return j;
  };

  std::ostringstream name;
  name << "football(n=" << n << ",beta=" << beta << ")";
  RadialProfile prof = RadialProfile::first_integral(name.str(), rn, fn, dfn,
                                                     jet_from_f);

  const Endpoint end = beta == 0.0 ? Endpoint{EndpointKind::SmoothCap, 0.0}
                                   : Endpoint{EndpointKind::Cone, beta};
  Football out{make_manifold(n, std::move(prof), end, end), spec};
  return out;
}

WarpedManifold build_perturbed(const WarpedManifold& base, double epsilon,
                               int m) {
  if (m < 1) throw std::invalid_argument("build_perturbed: shape index m must be >= 1");
  const auto base_ricci = check_positive_ricci(base);
  if (!base_ricci.positive)
    throw std::invalid_argument("build_perturbed: base manifold must have positive Ricci");

  const double a = base.a(), len = base.length();
  const double w = m * M_PI / len;
  auto inner = std::make_shared<RadialProfile>(base.profile);
  auto jet = [inner, epsilon, w, a](double r) {
    const ProfileJet j = inner->jet(r, true);
    const double s = std::sin(w * (r - a)), c = std::cos(w * (r - a));
    const double p = 1.0 + epsilon * s * s;
    const double dp = epsilon * w * 2.0 * s * c;
    const double d2p = 2.0 * epsilon * w * w * (c * c - s * s);
    return ProfileJet{j.f * p, j.df * p + j.f * dp,
                      j.d2f * p + 2.0 * j.df * dp + j.f * d2p};
  };
  std::ostringstream name;
  name << base.profile.name() << "*bump(eps=" << epsilon << ",m=" << m << ")";
  WarpedManifold out = make_manifold(
      base.dim, RadialProfile::formula(name.str(), base.a(), base.b(), jet),
      base.left, base.right);

  const auto rep = check_positive_ricci(out);
  if (!rep.positive) {
    std::ostringstream msg;
    msg << "build_perturbed: perturbation destroys positive Ricci (min "
        << rep.min_value << " at r = " << rep.argmin << ")";
    throw std::runtime_error(msg.str());
  }
  return out;
}

WarpedManifold build_rescaled(const WarpedManifold& base, double c) {
  return make_manifold(base.dim, RadialProfile::rescaled(base.profile, c),
                       base.left, base.right);
}

const char* manifold_class_name(ManifoldClass c) {
  switch (c) {
    case ManifoldClass::TwoCaps: return "two_smooth_caps";
    case ManifoldClass::OneCone: return "one_cone";
    case ManifoldClass::TwoCones: return "two_cones";
    case ManifoldClass::WithBoundary: return "with_boundary";
  }
  return "unknown";
}

namespace {

EndpointCheck check_endpoint(const WarpedManifold& M, Side side) {
  const Endpoint& e = side == Side::Left ? M.left : M.right;
  EndpointCheck c;
  c.declared_kind = e.kind;
  if (e.kind == EndpointKind::Boundary) {
    const double r = side == Side::Left ? M.a() : M.b();
    const double f = M.profile.jet(r, true).f;
    c.declared_limit = 0.0;
    c.measured_limit = f;
    c.consistent = f > 0.0;  // boundary requires f bounded away from 0
    return c;
  }
  c.declared_limit = e.kind == EndpointKind::SmoothCap ? 1.0 : 1.0 + e.beta;
  const ConeAngleResult angle = cone_angle(M, side);
  c.measured_limit = angle.value;
  c.consistent = std::abs(c.measured_limit - c.declared_limit) < 1e-3;
  return c;
}

}  // namespace

ClassificationReport validate_manifold(const WarpedManifold& M) {
  ClassificationReport rep;
  rep.left = check_endpoint(M, Side::Left);
  rep.right = check_endpoint(M, Side::Right);
  const bool lb = M.left.kind == EndpointKind::Boundary;
  const bool rb = M.right.kind == EndpointKind::Boundary;
  const int cones = (M.left.kind == EndpointKind::Cone ? 1 : 0) +
                    (M.right.kind == EndpointKind::Cone ? 1 : 0);
  if (lb || rb)
    rep.cls = ManifoldClass::WithBoundary;
  else if (cones == 0)
    rep.cls = ManifoldClass::TwoCaps;
  else if (cones == 1)
    rep.cls = ManifoldClass::OneCone;
  else
    rep.cls = ManifoldClass::TwoCones;
  rep.consistent = rep.left.consistent && rep.right.consistent;
  return rep;
}

}  // namespace andrews

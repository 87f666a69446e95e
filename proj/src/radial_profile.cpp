#include "andrews/radial_profile.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

#include "andrews/numerics.hpp"

namespace andrews {

namespace {

void check_interval(double a, double b) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("RadialProfile: invalid interval");
}

// Hermite cubic on [x0, x1] from endpoint values and slopes.
double hermite(double x, double x0, double x1, double f0, double f1, double d0,
               double d1) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t, t3 = t2 * t;
  return f0 * (2 * t3 - 3 * t2 + 1) + h * d0 * (t3 - 2 * t2 + t) +
         f1 * (-2 * t3 + 3 * t2) + h * d1 * (t3 - t2);
}

std::size_t locate_cell(const std::vector<double>& xs, double x) {
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = static_cast<std::size_t>(it - xs.begin());
  if (i == 0) return 0;
  if (i >= xs.size()) return xs.size() - 2;
  return i - 1;
}

}  // namespace

RadialProfile RadialProfile::formula(std::string name, double a, double b,
                                     std::function<ProfileJet(double)> jet) {
  check_interval(a, b);
  RadialProfile p;
  p.kind_ = ProfileKind::Formula;
  p.name_ = std::move(name);
  p.a_ = a;
  p.b_ = b;
  p.jet_ = std::move(jet);
  return p;
}

RadialProfile RadialProfile::sampled(std::vector<double> r,
                                     std::vector<double> f) {
  if (r.size() != f.size() || r.size() < 5)
    throw std::invalid_argument("RadialProfile::sampled: need >= 5 matching nodes");
  for (std::size_t i = 0; i + 1 < r.size(); ++i)
    if (!(r[i + 1] > r[i]))
      throw std::invalid_argument("RadialProfile::sampled: nodes must increase strictly");
  for (double v : f)
    if (!std::isfinite(v))
      throw std::invalid_argument("RadialProfile::sampled: non-finite sample");
  check_interval(r.front(), r.back());

  const std::size_t n = r.size();
  // 4th-order derivatives on the node table: 5-point stencils, one-sided at
  // the ends (Fornberg weights handle the non-uniform spacing).
  std::vector<double> d1(n), d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i < 2 ? 0 : std::min(i - 2, n - 5);
    std::span<const double> sten(&r[lo], 5);
    const auto w1 = fd_weights(r[i], sten, 1);
    const auto w2 = fd_weights(r[i], sten, 2);
    double s1 = 0.0, s2 = 0.0;
    for (int j = 0; j < 5; ++j) {
      s1 += w1[j] * f[lo + j];
      s2 += w2[j] * f[lo + j];
    }
    d1[i] = s1;
    d2[i] = s2;
  }
  return sampled_with_derivatives(std::move(r), std::move(f), std::move(d1),
                                  std::move(d2));
}

RadialProfile RadialProfile::sampled_with_derivatives(std::vector<double> r,
                                                      std::vector<double> f,
                                                      std::vector<double> df,
                                                      std::vector<double> d2f) {
  if (r.size() != f.size() || r.size() != df.size() || r.size() != d2f.size() ||
      r.size() < 5)
    throw std::invalid_argument(
        "RadialProfile::sampled_with_derivatives: need >= 5 matching nodes");
  for (std::size_t i = 0; i + 1 < r.size(); ++i)
    if (!(r[i + 1] > r[i]))
      throw std::invalid_argument(
          "RadialProfile::sampled_with_derivatives: nodes must increase strictly");
  check_interval(r.front(), r.back());

  auto rs = std::make_shared<std::vector<double>>(std::move(r));
  auto fs = std::make_shared<std::vector<double>>(std::move(f));
  auto d1 = std::make_shared<std::vector<double>>(std::move(df));
  auto d2 = std::make_shared<std::vector<double>>(std::move(d2f));

  RadialProfile p;
  p.kind_ = ProfileKind::Sampled;
  p.name_ = "samples";
  p.a_ = rs->front();
  p.b_ = rs->back();
  p.nodes_r_ = *rs;
  p.nodes_f_ = *fs;
  p.jet_ = [rs, fs, d1, d2](double x) {
    const std::size_t i = locate_cell(*rs, x);
    const double x0 = (*rs)[i], x1 = (*rs)[i + 1];
    ProfileJet j;
    j.f = hermite(x, x0, x1, (*fs)[i], (*fs)[i + 1], (*d1)[i], (*d1)[i + 1]);
    j.df = hermite(x, x0, x1, (*d1)[i], (*d1)[i + 1], (*d2)[i], (*d2)[i + 1]);
    const double t = (x - x0) / (x1 - x0);
    j.d2f = (1.0 - t) * (*d2)[i] + t * (*d2)[i + 1];
    return j;
  };
  return p;
}

RadialProfile RadialProfile::first_integral(
    std::string name, std::vector<double> r, std::vector<double> f,
    std::vector<double> df, std::function<ProfileJet(double, double)> jet_from_f) {
  if (r.size() != f.size() || r.size() != df.size() || r.size() < 3)
    throw std::invalid_argument("RadialProfile::first_integral: bad tables");
  check_interval(r.front(), r.back());
  auto rs = std::make_shared<std::vector<double>>(std::move(r));
  auto fs = std::make_shared<std::vector<double>>(std::move(f));
  auto ds = std::make_shared<std::vector<double>>(std::move(df));
  auto jf = std::make_shared<std::function<ProfileJet(double, double)>>(
      std::move(jet_from_f));

  RadialProfile p;
  p.kind_ = ProfileKind::FirstIntegral;
  p.name_ = std::move(name);
  p.a_ = rs->front();
  p.b_ = rs->back();
  p.nodes_r_ = *rs;
  p.nodes_f_ = *fs;
  p.jet_ = [rs, fs, ds, jf](double x) {
    const std::size_t i = locate_cell(*rs, x);
    const double fv = hermite(x, (*rs)[i], (*rs)[i + 1], (*fs)[i], (*fs)[i + 1],
                              (*ds)[i], (*ds)[i + 1]);
    return (*jf)(x, fv);
  };
  return p;
}

RadialProfile RadialProfile::rescaled(const RadialProfile& base, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("RadialProfile::rescaled: c must be > 0");
  auto inner = std::make_shared<RadialProfile>(base);
  RadialProfile p;
  p.kind_ = base.kind_;
  p.name_ = base.name_ + "(rescaled)";
  p.a_ = c * base.a_;
  p.b_ = c * base.b_;
  p.jet_ = [inner, c](double x) {
    ProfileJet j = inner->jet(x / c, true);
    return ProfileJet{c * j.f, j.df, j.d2f / c};
  };
  return p;
}

ProfileJet RadialProfile::jet(double r, bool allow_endpoint) const {
  if (!jet_) throw std::logic_error("RadialProfile: empty profile");
  const double lo = a_, hi = b_;
  if (allow_endpoint ? (r < lo || r > hi) : !(r > lo && r < hi))
    throw std::domain_error("RadialProfile: r outside the profile interval");
  ProfileJet j = jet_(r);
  if (!std::isfinite(j.f) || !std::isfinite(j.df) || !std::isfinite(j.d2f))
    throw std::runtime_error("RadialProfile: non-finite evaluation");
  const bool interior = r > lo && r < hi;
  if (interior && !(j.f > 0.0))
    throw std::runtime_error("RadialProfile: non-positive warping value");
  return j;
}

double RadialProfile::value(double r, bool allow_endpoint) const {
  return jet(r, allow_endpoint).f;
}

WarpedManifold make_manifold(int dim, RadialProfile profile, Endpoint left,
                             Endpoint right) {
  if (dim < 3) throw std::invalid_argument("WarpedManifold: dimension must be >= 3");
  for (const Endpoint& e : {left, right}) {
    if (e.kind == EndpointKind::Cone && !(e.beta > -1.0 && e.beta < 0.0))
      throw std::invalid_argument("WarpedManifold: cone coefficient must lie in (-1, 0)");
  }
  WarpedManifold m;
  m.dim = dim;
  m.profile = std::move(profile);
  m.left = left;
  m.right = right;
  return m;
}

const char* endpoint_kind_name(EndpointKind k) {
  switch (k) {
    case EndpointKind::SmoothCap: return "smooth_cap";
    case EndpointKind::Cone: return "cone";
    case EndpointKind::Boundary: return "boundary";
  }
  return "unknown";
}

}  // namespace andrews

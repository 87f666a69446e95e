#pragma once

// Test-only 2-D axisymmetric oracle for n = 3: tensor Simpson quadrature of
// the Ric^{-1} Rayleigh quotient over (r, theta), written directly against
// the curvature eigenvalues with no spherical-harmonic mode reduction. Kept
// independent of the library's quotient path on purpose.

#include <cmath>
#include <functional>
#include <vector>

#include "andrews/warped_geometry.hpp"

namespace oracle {

struct Axisym {
  std::vector<std::function<double(double)>> radial;   // g_l(r)
  std::vector<std::function<double(double)>> dradial;  // g_l'(r)
  int lmax = 0;

  double value(double r, double x /* = cos theta */) const {
    std::vector<double> P(lmax + 1);
    P[0] = 1.0;
    if (lmax >= 1) P[1] = x;
    for (int l = 2; l <= lmax; ++l)
      P[l] = ((2 * l - 1) * x * P[l - 1] - (l - 1) * P[l - 2]) / l;
    double s = 0.0;
    for (int l = 0; l <= lmax; ++l) s += radial[l](r) * P[l];
    return s;
  }
  double dr(double r, double x) const {
    std::vector<double> P(lmax + 1);
    P[0] = 1.0;
    if (lmax >= 1) P[1] = x;
    for (int l = 2; l <= lmax; ++l)
      P[l] = ((2 * l - 1) * x * P[l - 1] - (l - 1) * P[l - 2]) / l;
    double s = 0.0;
    for (int l = 0; l <= lmax; ++l) s += dradial[l](r) * P[l];
    return s;
  }
  double dtheta(double r, double theta) const {
    const double x = std::cos(theta);
    std::vector<double> P(lmax + 1), D(lmax + 1);
    P[0] = 1.0;
    D[0] = 0.0;
    if (lmax >= 1) {
      P[1] = x;
      D[1] = 1.0;
    }
    for (int l = 2; l <= lmax; ++l) {
      P[l] = ((2 * l - 1) * x * P[l - 1] - (l - 1) * P[l - 2]) / l;
      D[l] = D[l - 2] + (2 * l - 1) * P[l - 1];
    }
    double s = 0.0;
    for (int l = 0; l <= lmax; ++l) s += radial[l](r) * D[l];
    return -std::sin(theta) * s;
  }
};

inline double rayleigh_2d(const andrews::WarpedManifold& M, const Axisym& phi,
                          double shift, int nr, int ntheta) {
  const double a = M.a(), b = M.b(), len = b - a;
  const double eps = 1e-9 * len;
  auto clampr = [&](double r) { return std::min(std::max(r, a + eps), b - eps); };
  auto num_integrand = [&](double r, double theta) {
    const double rc = clampr(r);
    const auto cp = andrews::ricci_eigenvalues(M, rc);
    const double f = M.profile.jet(rc).f;
    const double x = std::cos(theta);
    const double gr = phi.dr(rc, x);
    const double gt = phi.dtheta(rc, theta);
    return (gr * gr / cp.rho_rad + gt * gt / (f * f * cp.rho_tan)) * f * f *
           std::sin(theta);
  };
  auto den_integrand = [&](double r, double theta) {
    const double rc = clampr(r);
    const double f = M.profile.jet(rc).f;
    const double v = phi.value(rc, std::cos(theta)) - shift;
    return v * v * f * f * std::sin(theta);
  };
  auto tensor = [&](const std::function<double(double, double)>& g) {
    double total = 0.0;
    for (int i = 0; i < nr; ++i) {
      const double r0 = a + len * i / nr, r1 = a + len * (i + 1) / nr;
      auto row = [&](double r) {
        double s = 0.0;
        for (int j = 0; j < ntheta; ++j) {
          const double t0 = M_PI * j / ntheta, t1 = M_PI * (j + 1) / ntheta;
          s += (t1 - t0) / 6.0 *
               (g(r, t0) + 4.0 * g(r, 0.5 * (t0 + t1)) + g(r, t1));
        }
        return s;
      };
      total += (r1 - r0) / 6.0 *
               (row(r0) + 4.0 * row(0.5 * (r0 + r1)) + row(r1));
    }
    return total;
  };
  return tensor(num_integrand) / tensor(den_integrand);
}

}  // namespace oracle

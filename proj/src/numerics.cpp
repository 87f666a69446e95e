#include "andrews/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace andrews {

double sphere_area(int m) {
  if (m < 0) throw std::invalid_argument("sphere_area: negative dimension");
  const double nd = static_cast<double>(m + 1);
  return 2.0 * std::pow(M_PI, 0.5 * nd) / std::tgamma(0.5 * nd);
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / i;
  return std::round(r);
}

namespace {
// 4-point Gauss-Legendre on [-1, 1].
constexpr double kG4X[4] = {-0.8611363115940526, -0.3399810435848563,
                            0.3399810435848563, 0.8611363115940526};
constexpr double kG4W[4] = {0.3478548451374538, 0.6521451548625461,
                            0.6521451548625461, 0.3478548451374538};
constexpr double kG2X = 0.5773502691896257;
}  // namespace

double gauss4(const std::function<double(double)>& g, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += kG4W[i] * g(mid + half * kG4X[i]);
  return s * half;
}

std::array<double, 2> gauss2_nodes(double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  return {mid - half * kG2X, mid + half * kG2X};
}

double simpson_on_grid(const std::function<double(double)>& g,
                       std::span<const double> nodes) {
  if (nodes.size() < 2) throw std::invalid_argument("simpson_on_grid: need >= 2 nodes");
  double s = 0.0;
  double gl = g(nodes[0]);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double a = nodes[i], b = nodes[i + 1];
    const double gm = g(0.5 * (a + b));
    const double gr = g(b);
    if (!std::isfinite(gl) || !std::isfinite(gm) || !std::isfinite(gr))
      throw std::runtime_error("simpson_on_grid: non-finite integrand sample");
    s += (b - a) / 6.0 * (gl + 4.0 * gm + gr);
    gl = gr;
  }
  return s;
}

Quadrature simpson_with_tol(const std::function<double(double)>& g,
                            std::span<const double> nodes) {
  const double coarse = simpson_on_grid(g, nodes);
  std::vector<double> fine;
  fine.reserve(2 * nodes.size());
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    fine.push_back(nodes[i]);
    fine.push_back(0.5 * (nodes[i] + nodes[i + 1]));
  }
  fine.push_back(nodes.back());
  const double refined = simpson_on_grid(g, fine);
  Quadrature q;
  q.value = refined;
  // conservative error bound: the raw refinement difference (the Richardson
  // /15 factor assumes clean 4th-order decay, which graded endpoint cells
  // do not always deliver) plus a summation roundoff floor
  q.tol = std::abs(refined - coarse) + 1e-13 * (1.0 + std::abs(refined));
  return q;
}

std::vector<double> fd_weights(double x0, std::span<const double> nodes, int m) {
  const int nn = static_cast<int>(nodes.size());
  if (nn < m + 1) throw std::invalid_argument("fd_weights: stencil too small");
  // Fornberg, Math. Comp. 51 (1988); c[j][k] = weight of node j for k-th derivative.
  std::vector<std::vector<double>> c(nn, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < nn; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(nn);
  for (int j = 0; j < nn; ++j) w[j] = c[j][m];
  return w;
}

AitkenResult aitken_limit(std::span<const double> seq) {
  AitkenResult res;
  std::vector<double> s(seq.begin(), seq.end());
  if (s.empty()) return res;
  res.limit = s.back();
  res.uncertainty = s.size() > 1 ? std::abs(s[s.size() - 1] - s[s.size() - 2])
                                 : std::abs(s.back());
  while (s.size() >= 3) {
    std::vector<double> t;
    t.reserve(s.size() - 2);
    for (std::size_t i = 0; i + 2 < s.size(); ++i) {
      const double d1 = s[i + 1] - s[i];
      const double d2 = s[i + 2] - s[i + 1];
      const double den = d2 - d1;
      if (std::abs(den) < 1e-300 * (1.0 + std::abs(d2))) {
        t.push_back(s[i + 2]);
      } else {
        t.push_back(s[i + 2] - d2 * d2 / den);
      }
    }
    const double prev = res.limit;
    res.limit = t.back();
    res.uncertainty = std::abs(res.limit - prev);
    s.swap(t);
  }
  res.converged = std::isfinite(res.limit) &&
                  res.uncertainty < 1e-5 * (1.0 + std::abs(res.limit));
  return res;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need matching x/y with >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) { sx += x[i]; sy += y[i]; }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LineFit f;
  if (sxx <= 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace andrews

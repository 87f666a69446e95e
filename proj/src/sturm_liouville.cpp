#include "andrews/sturm_liouville.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "andrews/numerics.hpp"

namespace andrews {

TridiagonalPencil assemble_pencil(std::span<const double> nodes,
                                  const std::function<double(double)>& p,
                                  const std::function<double(double)>& q,
                                  const std::function<double(double)>& w) {
  const std::size_t nn = nodes.size();
  if (nn < 3) throw std::invalid_argument("assemble_pencil: need >= 3 nodes");
  TridiagonalPencil P;
  P.diag.assign(nn, 0.0);
  P.off.assign(nn - 1, 0.0);
  P.mass.assign(nn, 0.0);
  for (std::size_t k = 0; k + 1 < nn; ++k) {
    const double a = nodes[k], b = nodes[k + 1], h = b - a;
    if (!(h > 0.0)) throw std::invalid_argument("assemble_pencil: nodes must increase");
    const auto g = gauss2_nodes(a, b);
    const double pbar = 0.5 * (p(g[0]) + p(g[1]));
    const double qbar = 0.5 * (q(g[0]) + q(g[1]));
    const double wbar = 0.5 * (w(g[0]) + w(g[1]));
    if (!std::isfinite(pbar) || !std::isfinite(qbar) || !std::isfinite(wbar))
      throw std::runtime_error("assemble_pencil: non-finite coefficient sample");
    const double s = pbar / h;
    P.diag[k] += s + 0.5 * qbar * h;
    P.diag[k + 1] += s + 0.5 * qbar * h;
    P.off[k] -= s;
    P.mass[k] += 0.5 * wbar * h;
    P.mass[k + 1] += 0.5 * wbar * h;
  }
  for (double m : P.mass)
    if (!(m > 0.0)) throw std::runtime_error("assemble_pencil: mass must be positive");
  return P;
}

int pencil_negcount(const TridiagonalPencil& P, double sigma) {
  const std::size_t n = P.diag.size();
  int count = 0;
  double d = P.diag[0] - sigma * P.mass[0];
  if (d == 0.0) d = -std::numeric_limits<double>::min();
  if (d < 0.0) ++count;
  for (std::size_t i = 1; i < n; ++i) {
    const double e = P.off[i - 1];
    double di = P.diag[i] - sigma * P.mass[i] - e * e / d;
    if (!std::isfinite(di)) di = P.diag[i] - sigma * P.mass[i];
    if (di == 0.0) di = -std::numeric_limits<double>::min();
    if (di < 0.0) ++count;
    d = di;
  }
  return count;
}

std::vector<double> shifted_tridiagonal_solve(const TridiagonalPencil& P,
                                              double shift,
                                              std::span<const double> rhs) {
  const std::size_t n = P.diag.size();
  if (rhs.size() != n) throw std::invalid_argument("tridiagonal solve: size mismatch");
  // Gaussian elimination with partial pivoting on the tridiagonal band
  // (one extra superdiagonal of fill-in).
  std::vector<double> d(n), e(n, 0.0), f(n, 0.0), x(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n; ++i) d[i] = P.diag[i] - shift * P.mass[i];
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = P.off[i];

  std::vector<double> low(n, 0.0);  // subdiagonal (symmetric copy)
  for (std::size_t i = 0; i + 1 < n; ++i) low[i + 1] = P.off[i];

  for (std::size_t i = 0; i + 1 < n; ++i) {
    double piv = d[i], sub = low[i + 1];
    if (std::abs(sub) > std::abs(piv)) {
      std::swap(d[i], low[i + 1]);
      piv = d[i];
      // row swap: (d[i], e[i], f[i]) <-> (low, d[i+1], e[i+1])
      std::swap(e[i], d[i + 1]);
      std::swap(f[i], e[i + 1]);
      std::swap(x[i], x[i + 1]);
      sub = low[i + 1];
    }
    if (piv == 0.0) piv = d[i] = std::numeric_limits<double>::min();
    const double l = sub / piv;
    d[i + 1] -= l * e[i];
    e[i + 1] -= l * f[i];
    x[i + 1] -= l * x[i];
  }
  if (d[n - 1] == 0.0) d[n - 1] = std::numeric_limits<double>::min();
  x[n - 1] /= d[n - 1];
  if (n >= 2) {
    const std::size_t i = n - 2;
    x[i] = (x[i] - e[i] * x[i + 1]) / d[i];
  }
  for (std::size_t ii = n; ii-- > 2;) {
    const std::size_t i = ii - 2;
    x[i] = (x[i] - e[i] * x[i + 1] - f[i] * x[i + 2]) / d[i];
  }
  return x;
}

double pencil_rayleigh(const TridiagonalPencil& P, std::span<const double> v) {
  const std::size_t n = P.diag.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double av = P.diag[i] * v[i];
    if (i > 0) av += P.off[i - 1] * v[i - 1];
    if (i + 1 < n) av += P.off[i] * v[i + 1];
    num += v[i] * av;
    den += v[i] * P.mass[i] * v[i];
  }
  return num / den;
}

namespace {

double pencil_residual(const TridiagonalPencil& P, std::span<const double> v,
                       double lambda) {
  const std::size_t n = P.diag.size();
  double rr = 0.0, mm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double av = P.diag[i] * v[i];
    if (i > 0) av += P.off[i - 1] * v[i - 1];
    if (i + 1 < n) av += P.off[i] * v[i + 1];
    const double mv = P.mass[i] * v[i];
    const double r = av - lambda * mv;
    rr += r * r;
    mm += mv * mv;
  }
  return std::sqrt(rr) / std::max(std::sqrt(mm), 1e-300);
}

void m_normalize(const TridiagonalPencil& P, std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * P.mass[i] * v[i];
  s = std::sqrt(s);
  if (!(s > 0.0)) throw std::runtime_error("eigensolver: zero vector");
  for (double& x : v) x /= s;
  // deterministic sign: positive at the entry of largest magnitude
  std::size_t imax = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
  if (v[imax] < 0.0)
    for (double& x : v) x = -x;
}

}  // namespace

EigenPair kth_eigenpair(const TridiagonalPencil& P, int k) {
  const std::size_t n = P.diag.size();
  if (k < 1 || static_cast<std::size_t>(k) > n)
    throw std::invalid_argument("kth_eigenpair: k out of range");

  // Gershgorin-type bracket for the pencil (M diagonal positive).
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(P.off[i - 1]);
    if (i + 1 < n) radius += std::abs(P.off[i]);
    lo = std::min(lo, (P.diag[i] - radius) / P.mass[i]);
    hi = std::max(hi, (P.diag[i] + radius) / P.mass[i]);
  }
  lo -= 1.0;
  hi += 1.0;

  EigenPair out;
  int iters = 0;
  while (iters < 2000) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (pencil_negcount(P, mid) >= k)
      hi = mid;
    else
      lo = mid;
    ++iters;
    if (hi - lo < 1e-13 * (1.0 + std::abs(hi))) break;
  }
  out.bisections = iters;
  const double lambda_bis = 0.5 * (lo + hi);

  // The deflated mode-0 pencils carry the constants as an exact kernel
  // vector; the badly scaled tip rows can reinject it during the solves, so
  // project it out of every iterate when it is present.
  double anorm = 0.0, rowsum_norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double rowsum = P.diag[i];
    double rowabs = std::abs(P.diag[i]);
    if (i > 0) {
      rowsum += P.off[i - 1];
      rowabs += std::abs(P.off[i - 1]);
    }
    if (i + 1 < n) {
      rowsum += P.off[i];
      rowabs += std::abs(P.off[i]);
    }
    anorm = std::max(anorm, rowabs);
    rowsum_norm = std::max(rowsum_norm, std::abs(rowsum));
  }
  const bool deflate = k >= 2 && rowsum_norm <= 1e-12 * anorm;
  auto project_constants = [&](std::vector<double>& x) {
    if (!deflate) return;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      num += P.mass[i] * x[i];
      den += P.mass[i];
    }
    const double c = num / den;
    for (double& xi : x) xi -= c;
  };

  // Fixed-shift inverse iteration at the bisection value.
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 1e-3 * std::sin(1.0 + 7.0 * i);
  project_constants(v);
  m_normalize(P, v);
  const double offset = 1e-11 * (1.0 + std::abs(lambda_bis)) + (hi - lo);
  const double shift = lambda_bis - offset;
  double lambda = lambda_bis;
  for (int it = 0; it < 12; ++it) {
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = P.mass[i] * v[i];
    v = shifted_tridiagonal_solve(P, shift, rhs);
    project_constants(v);
    m_normalize(P, v);
    const double rq = pencil_rayleigh(P, v);
    out.residual = pencil_residual(P, v, rq);
    lambda = rq;
    if (out.residual < 1e-11) break;
  }
  out.lambda = lambda;
  out.vec = std::move(v);
  out.converged =
      out.residual < 1e-7 &&
      std::abs(lambda - lambda_bis) <
          1e-6 * (1.0 + std::abs(lambda_bis)) + 1e3 * (hi - lo);
  if (!out.converged)
    throw std::runtime_error("kth_eigenpair: inverse iteration did not converge");
  return out;
}

std::vector<double> assemble_load(std::span<const double> nodes,
                                  const std::function<double(double)>& g) {
  const std::size_t nn = nodes.size();
  std::vector<double> b(nn, 0.0);
  for (std::size_t k = 0; k + 1 < nn; ++k) {
    const double a = nodes[k], c = nodes[k + 1], h = c - a;
    const auto gp = gauss2_nodes(a, c);
    for (double x : gp) {
      const double t = (x - a) / h;
      const double gv = g(x);
      if (!std::isfinite(gv))
        throw std::runtime_error("assemble_load: non-finite sample");
      b[k] += 0.5 * h * gv * (1.0 - t);
      b[k + 1] += 0.5 * h * gv * t;
    }
  }
  return b;
}

std::vector<double> solve_singular_neumann(const TridiagonalPencil& P,
                                           std::vector<double> b,
                                           double rel_tol) {
  const std::size_t n = P.diag.size();
  if (b.size() != n) throw std::invalid_argument("solve_singular_neumann: size mismatch");
  double imbalance = 0.0, scale = 0.0, msum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    imbalance += b[i];
    scale += b[i] * b[i] / P.mass[i];
    msum += P.mass[i];
  }
  scale = std::sqrt(scale * msum);  // ~ ||phi||_{L2(w)} * Vol
  if (std::abs(imbalance) > rel_tol * std::max(scale, 1e-300)) {
    NoSolutionError err("solve_singular_neumann: right-hand side is not mean-free");
    err.imbalance = imbalance;
    throw err;
  }
  // project roundoff drift onto the constants and pin the last unknown
  for (std::size_t i = 0; i < n; ++i) b[i] -= imbalance * P.mass[i] / msum;

  TridiagonalPencil R;
  R.diag.assign(P.diag.begin(), P.diag.end() - 1);
  R.off.assign(P.off.begin(), P.off.end() - 1);
  R.mass.assign(P.mass.begin(), P.mass.end() - 1);
  std::vector<double> rb(b.begin(), b.end() - 1);
  std::vector<double> u = shifted_tridiagonal_solve(R, 0.0, rb);
  u.push_back(0.0);

  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += P.mass[i] * u[i];
  mean /= msum;
  for (double& x : u) x -= mean;
  return u;
}

std::vector<double> solve_tridiagonal_spd(const TridiagonalPencil& P,
                                          std::span<const double> rhs) {
  return shifted_tridiagonal_solve(P, 0.0, rhs);
}

}  // namespace andrews

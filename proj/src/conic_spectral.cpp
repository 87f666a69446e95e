#include "andrews/conic_spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "andrews/numerics.hpp"

namespace andrews {

std::vector<SphereMode> sphere_spectrum(int n, int lmax) {
  if (n < 3) throw std::invalid_argument("sphere_spectrum: n must be >= 3");
  if (lmax < 0) throw std::invalid_argument("sphere_spectrum: lmax must be >= 0");
  std::vector<SphereMode> modes;
  modes.reserve(lmax + 1);
  for (int l = 0; l <= lmax; ++l) {
    SphereMode m;
    m.degree = l;
    m.eigenvalue = static_cast<double>(l) * (l + n - 2);
    m.multiplicity =
        l == 0 ? 1
               : static_cast<long>(std::llround(
                     (2.0 * l + n - 2.0) / (n - 2.0) * binomial(l + n - 3, n - 3)));
    modes.push_back(m);
  }
  return modes;
}

IndicialPair indicial_roots(int n, double beta, double lambda) {
  if (!(beta > -1.0 && beta <= 0.0))
    throw std::invalid_argument("indicial_roots: beta must lie in (-1, 0]");
  if (!(lambda >= 0.0))
    throw std::invalid_argument("indicial_roots: lambda must be >= 0");
  const double half = 0.5 * (n - 2);
  const double root = std::sqrt(half * half + lambda / ((1.0 + beta) * (1.0 + beta)));
  return {root - half, -root - half};
}

RegularityReport regularity_exponent(int n, double beta, double gamma_data) {
  if (n < 3) throw std::invalid_argument("regularity_exponent: n must be >= 3");
  if (!(beta > -1.0 && beta < 0.0))
    throw std::invalid_argument("regularity_exponent: beta must lie in (-1, 0)");
  if (!(gamma_data > 0.0))
    throw std::invalid_argument("regularity_exponent: gamma_data must be > 0");
  RegularityReport rep;
  rep.n = n;
  rep.beta = beta;
  rep.gamma_data = gamma_data;
  rep.gamma1 = indicial_roots(n, beta, static_cast<double>(n - 1)).alpha_plus;
  if (beta > -0.5) {
    rep.cls = HolderClass::HolderTau;
    rep.tau_sup = std::min(rep.gamma1 - 1.0, 1.0);
  } else {
    rep.cls = HolderClass::C11;
    rep.tau_sup = 1.0;
  }
  return rep;
}

std::vector<double> make_graded_grid(double length, int cells, double q,
                                     GradeEnd end) {
  if (!(length > 0.0)) throw std::invalid_argument("make_graded_grid: length must be > 0");
  if (cells < 4) throw std::invalid_argument("make_graded_grid: need >= 4 cells");
  if (!(q >= 1.0)) throw std::invalid_argument("make_graded_grid: exponent must be >= 1");
  std::vector<double> g;
  g.reserve(cells);
  for (int i = 1; i <= cells; ++i) {
    const double xi = static_cast<double>(i) / cells;
    double y;
    switch (end) {
      case GradeEnd::Left: y = std::pow(xi, q); break;
      case GradeEnd::Right: y = 1.0 - std::pow(1.0 - xi, q); break;
      case GradeEnd::Both:
      default:
        y = xi <= 0.5 ? 0.5 * std::pow(2.0 * xi, q)
                      : 1.0 - 0.5 * std::pow(2.0 * (1.0 - xi), q);
        break;
    }
    g.push_back(length * y);
  }
  g.back() = length;
  return g;
}

namespace {

// Prefix integrals of t^{e} * rhs(t) over the cells of {0} u grid.
std::vector<double> prefix_from_zero(std::span<const double> grid, double e,
                                     const std::function<double(double)>& rhs) {
  std::vector<double> out(grid.size());
  double acc = 0.0, lo = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    acc += gauss4([&](double t) { return std::pow(t, e) * rhs(t); }, lo, grid[j]);
    out[j] = acc;
    lo = grid[j];
  }
  return out;
}

std::vector<double> suffix_to_L(std::span<const double> grid, double e,
                                const std::function<double(double)>& rhs) {
  std::vector<double> out(grid.size(), 0.0);
  double acc = 0.0;
  for (std::size_t j = grid.size() - 1; j > 0; --j) {
    out[j] = -acc;  // I1(rho_j) = -int_{rho_j}^{L}
    acc += gauss4([&](double t) { return std::pow(t, e) * rhs(t); }, grid[j - 1],
                  grid[j]);
  }
  out[0] = -acc;
  // shift so the last node carries I1(L) = 0
  const double top = 0.0;
  out.back() = top;
  return out;
}

}  // namespace

RadialSolveResult solve_radial_mode(const SphereMode& mode, double beta, int n,
                                    const std::function<double(double)>& rhs,
                                    std::span<const double> grid, RadialBC bc,
                                    double bc_value) {
  if (grid.size() < 8) throw std::invalid_argument("solve_radial_mode: grid too small");
  if (!(grid.front() > 0.0))
    throw std::invalid_argument("solve_radial_mode: grid must exclude the cone tip");
  const double L = grid.back();
  const IndicialPair roots = indicial_roots(n, beta, mode.eigenvalue);
  const double ap = roots.alpha_plus, am = roots.alpha_minus;
  const double Lam = mode.eigenvalue / ((1.0 + beta) * (1.0 + beta));

  RadialSolveResult res;
  res.rho.assign(grid.begin(), grid.end());
  res.roots = roots;

  // --- integral representation route -------------------------------------
  const std::vector<double> I1 = suffix_to_L(grid, 1.0 - ap, rhs);
  const std::vector<double> I2 = prefix_from_zero(grid, 1.0 - am, rhs);
  const double wr = ap - am;

  // Variation of parameters against the homogeneous powers: the particular
  // solution is [rho^{a+} I1 - rho^{a-} I2]/(a+ - a-); anchoring I1 at L and
  // I2 at the tip keeps the bounded branch (no rho^{a-} component at 0).
  std::vector<double> up(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double r = grid[j];
    up[j] = (std::pow(r, ap) * I1[j] - std::pow(r, am) * I2[j]) / wr;
  }
  const double upL = up.back();
  const double dupL = (ap * std::pow(L, ap - 1.0) * I1.back() -
                       am * std::pow(L, am - 1.0) * I2.back()) /
                      wr;

  double c = 0.0;
  const bool mode0 = mode.degree == 0;
  if (bc == RadialBC::DirichletAtL) {
    c = (bc_value - upL) / std::pow(L, ap);
  } else if (mode0) {
    // no-flux far end: solvable iff the weighted mean vanishes
    const double compat =
        prefix_from_zero(grid, static_cast<double>(n - 1),
                         rhs)
            .back();
    double l2 = prefix_from_zero(grid, static_cast<double>(n - 1),
                                 [&](double t) {
                                   const double v = rhs(t);
                                   return v * v;
                                 })
                    .back();
    const double volw = std::pow(L, n) / n;
    const double scale = std::sqrt(std::max(l2, 0.0) * volw);
    if (std::abs(compat) > 1e-10 * std::max(scale, 1e-300)) {
      NoSolutionError err(
          "solve_radial_mode: degree-0 data is not mean-free on a closed end");
      err.imbalance = compat;
      throw err;
    }
    // alpha_plus = 0: fix the additive constant by zero weighted mean
    double num = 0.0;
    for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
      // trapezoid against the weight t^{n-1} on the solved samples
      const double t0 = grid[j], t1 = grid[j + 1];
      const double w0 = std::pow(t0, n - 1), w1 = std::pow(t1, n - 1);
      num += 0.5 * (t1 - t0) * (up[j] * w0 + up[j + 1] * w1);
    }
    c = -num / (std::pow(L, n) / n);
  } else {
    c = -dupL / (ap * std::pow(L, ap - 1.0));
  }
  res.u.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j)
    res.u[j] = c * std::pow(grid[j], ap) + up[j];

  // --- finite-difference boundary-value route ------------------------------
  std::vector<double> nodes;
  nodes.reserve(grid.size() + 1);
  nodes.push_back(0.0);
  nodes.insert(nodes.end(), grid.begin(), grid.end());
  auto pf = [n](double t) { return std::pow(t, n - 1); };
  auto qf = [n, Lam](double t) { return Lam * std::pow(t, n - 3); };
  TridiagonalPencil P = assemble_pencil(nodes, pf, qf, pf);
  std::vector<double> b =
      assemble_load(nodes, [&](double t) { return pf(t) * rhs(t); });
  for (double& v : b) v = -v;

  std::vector<double> ufem;
  if (bc == RadialBC::DirichletAtL) {
    const std::size_t last = P.diag.size() - 1;
    b[last - 1] -= P.off[last - 1] * bc_value;
    P.off[last - 1] = 0.0;
    P.diag[last] = 1.0;
    b[last] = bc_value;
    ufem = solve_tridiagonal_spd(P, b);
  } else if (mode0) {
    // the dichotomy was already enforced by the quadrature compatibility
    // check above; the looser gate here only absorbs the assembly's own
    // O(h^4) imbalance
    ufem = solve_singular_neumann(P, b, 1e-6);
  } else {
    ufem = solve_tridiagonal_spd(P, b);
  }

  res.u_fem.assign(ufem.begin() + 1, ufem.end());

  double umax = 0.0;
  for (double v : res.u) umax = std::max(umax, std::abs(v));
  double dis = 0.0;
  for (std::size_t j = 0; j < res.u.size(); ++j)
    dis = std::max(dis, std::abs(res.u[j] - res.u_fem[j]));
  res.agreement = dis / (1.0 + umax);
  return res;
}

namespace {

std::function<double(double)> linear_interp(std::span<const double> x,
                                            std::span<const double> y) {
  std::vector<double> xs(x.begin(), x.end()), ys(y.begin(), y.end());
  return [xs = std::move(xs), ys = std::move(ys)](double t) {
    auto it = std::upper_bound(xs.begin(), xs.end(), t);
    std::size_t i = static_cast<std::size_t>(it - xs.begin());
    if (i == 0) return ys.front();
    if (i >= xs.size()) return ys.back();
    const double s = (t - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return (1.0 - s) * ys[i - 1] + s * ys[i];
  };
}

}  // namespace

PoissonResult solve_poisson(const WarpedManifold& M, const ModeExpansion& phi) {
  if (phi.grid.size() < 8) throw std::invalid_argument("solve_poisson: grid too small");
  if (phi.degrees.size() != phi.radial.size())
    throw std::invalid_argument("solve_poisson: malformed expansion");
  const double a = M.a(), b = M.b();
  if (std::abs(phi.grid.front() - a) > 1e-12 * M.length() ||
      std::abs(phi.grid.back() - b) > 1e-12 * M.length())
    throw std::invalid_argument("solve_poisson: mode grid does not span the manifold interval");
  const int n = M.dim;

  auto fpow = [&](double r, int e) {
    return std::pow(M.profile.jet(r, true).f, e);
  };

  PoissonResult out;
  out.u.grid = phi.grid;
  out.u.degrees = phi.degrees;
  out.u.radial.resize(phi.size());
  out.residual.assign(phi.size(), 0.0);

  for (std::size_t im = 0; im < phi.size(); ++im) {
    const int l = phi.degrees[im];
    if (phi.radial[im].size() != phi.grid.size())
      throw std::invalid_argument("solve_poisson: mode grid mismatch");
    const double lam = static_cast<double>(l) * (l + n - 2);
    auto p = [&](double r) { return fpow(r, n - 1); };
    auto q = [&](double r) { return lam * fpow(r, n - 3); };
    TridiagonalPencil P = assemble_pencil(phi.grid, p, q, p);
    auto phi_l = linear_interp(phi.grid, phi.radial[im]);
    std::vector<double> load =
        assemble_load(phi.grid, [&](double r) { return p(r) * phi_l(r); });
    for (double& v : load) v = -v;

    std::vector<double> u;
    if (l == 0) {
      double imb = 0.0;
      for (double v : load) imb -= v;
      out.mean_imbalance = imb;
      u = solve_singular_neumann(P, load, 1e-10);
    } else {
      u = solve_tridiagonal_spd(P, load);
    }

    // algebraic residual ||A u - load|| / (1 + ||load||)
    double rr = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      double av = P.diag[i] * u[i];
      if (i > 0) av += P.off[i - 1] * u[i - 1];
      if (i + 1 < u.size()) av += P.off[i] * u[i + 1];
      const double d = av - load[i];
      rr += d * d;
      bb += load[i] * load[i];
    }
    out.residual[im] = std::sqrt(rr) / (1.0 + std::sqrt(bb));
    out.u.radial[im] = std::move(u);
  }
  return out;
}

HolderFit estimate_holder_exponent(const std::function<double(double)>& u,
                                   double u_limit, double rho_top, int levels) {
  if (levels < 4) throw std::invalid_argument("estimate_holder_exponent: need >= 4 levels");
  std::vector<double> rho(levels), val(levels);
  double r = rho_top;
  for (int j = 0; j < levels; ++j, r *= 0.5) {
    rho[j] = r;
    val[j] = u(r);
  }
  return estimate_holder_exponent(rho, val, u_limit);
}

HolderFit estimate_holder_exponent(std::span<const double> rho,
                                   std::span<const double> u, double u_limit) {
  if (rho.size() != u.size())
    throw std::invalid_argument("estimate_holder_exponent: size mismatch");
  double vmax = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    vmax = std::max(vmax, std::abs(u[i] - u_limit));
  const double floor = 1e-13 * vmax + 1e-300;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = std::abs(u[i] - u_limit);
    if (d > floor && rho[i] > 0.0) {
      lx.push_back(std::log(rho[i]));
      ly.push_back(std::log(d));
    }
  }
  if (lx.size() < 4)
    throw std::runtime_error(
        "estimate_holder_exponent: fewer than 4 resolved dyadic levels");
  const LineFit fit = fit_line(lx, ly);
  HolderFit out;
  out.exponent = fit.slope;
  out.r_squared = fit.r_squared;
  out.levels = static_cast<int>(lx.size());
  return out;
}

ArcLengthProfile conic_to_arclength(double beta,
                                    const std::function<double(double)>& w,
                                    const std::function<double(double)>& f0,
                                    double r_max, int samples) {
  if (!(beta > -1.0 && beta <= 0.0))
    throw std::invalid_argument("conic_to_arclength: beta must lie in (-1, 0]");
  if (!(r_max > 0.0) || samples < 16)
    throw std::invalid_argument("conic_to_arclength: bad range");

  // rho(r) = int_0^r t^beta e^w dt; substituting t = tau^{1/(1+beta)} gives
  // d rho = e^{w} d tau / (1+beta), which removes the t^beta singularity.
  const double p1 = 1.0 + beta;
  auto integrand_tau = [&](double tau) {
    const double t = std::pow(tau, 1.0 / p1);
    const double ew = std::exp(w(t));
    if (!std::isfinite(ew) || !(ew > 0.0))
      throw std::runtime_error("conic_to_arclength: conformal factor is not admissible");
    return ew / p1;
  };
  auto rho_of_r = [&](double r) {
    if (r <= 0.0) return 0.0;
    const double tau_max = std::pow(r, p1);
    std::vector<double> tg(65);
    for (int i = 0; i <= 64; ++i) tg[i] = tau_max * i / 64.0;
    return simpson_on_grid(integrand_tau, tg);
  };

  ArcLengthProfile out;
  out.r.resize(samples + 1);
  out.rho.resize(samples + 1);
  out.h.resize(samples + 1);
  for (int i = 0; i <= samples; ++i) {
    const double tau = std::pow(r_max, p1) * i / samples;
    const double r = std::pow(tau, 1.0 / p1);
    out.r[i] = r;
    out.rho[i] = rho_of_r(r);
    out.h[i] = r > 0.0 ? std::exp(w(r)) * std::pow(r, beta) * f0(r) : 0.0;
    if (i > 0 && !(out.rho[i] > out.rho[i - 1]))
      throw std::runtime_error("conic_to_arclength: rho(r) is not strictly increasing");
  }

  std::vector<double> ratios;
  double r = r_max;
  for (int j = 0; j < 12; ++j, r *= 0.25) {
    const double rho = rho_of_r(r);
    if (rho <= 0.0) break;
    ratios.push_back(std::exp(w(r)) * std::pow(r, beta) * f0(r) / rho);
  }
  const AitkenResult ext = aitken_limit(ratios);
  out.tip_slope = ext.limit;
  out.tip_slope_converged = ext.converged;
  return out;
}

}  // namespace andrews

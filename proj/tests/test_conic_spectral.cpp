#include <doctest.h>

#include <cmath>
#include <random>

#include "andrews/conic_spectral.hpp"
#include "andrews/metric_library.hpp"
#include "andrews/numerics.hpp"
#include "andrews/warped_geometry.hpp"

using namespace andrews;

TEST_CASE("link spectrum") {
  const auto modes = sphere_spectrum(4, 3);
  REQUIRE(modes.size() == 4);
  CHECK(modes[0].eigenvalue == 0.0);
  CHECK(modes[0].multiplicity == 1);
  CHECK(modes[1].eigenvalue == 3.0);  // n - 1
  CHECK(modes[1].multiplicity == 4);  // n
  CHECK(modes[2].eigenvalue == 8.0);  // 2n
  CHECK(modes[2].multiplicity == 9);  // (l+1)^2 on S^3

  const auto s2modes = sphere_spectrum(3, 5);
  for (int l = 0; l <= 5; ++l) {
    CHECK(s2modes[l].eigenvalue == doctest::Approx(l * (l + 1.0)));
    CHECK(s2modes[l].multiplicity == 2 * l + 1);
  }
}

TEST_CASE("indicial roots: examples and defining identity") {
  // lambda = 0: roots (0, 2-n)
  for (int n : {3, 4, 6}) {
    const auto p = indicial_roots(n, -0.4, 0.0);
    CHECK(p.alpha_plus == doctest::Approx(0.0));
    CHECK(p.alpha_minus == doctest::Approx(2.0 - n));
  }
  // n = 4, beta = -1/2, lambda = 3: sqrt(13) - 1, root of a^2 + 2a - 12
  const auto p = indicial_roots(4, -0.5, 3.0);
  CHECK(p.alpha_plus == doctest::Approx(std::sqrt(13.0) - 1.0).epsilon(1e-14));
  CHECK(p.alpha_plus * p.alpha_plus + 2.0 * p.alpha_plus - 12.0 ==
        doctest::Approx(0.0).scale(10.0).epsilon(1e-13));
  // smooth case: linear coordinate functions
  CHECK(indicial_roots(4, 0.0, 3.0).alpha_plus == doctest::Approx(1.0));

  // identity for 200 random parameter triples
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> bdist(-0.95, 0.0);
  std::uniform_real_distribution<double> ldist(0.0, 40.0);
  std::uniform_int_distribution<int> ndist(3, 9);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = ndist(rng);
    const double beta = bdist(rng);
    const double lam = ldist(rng);
    const auto r = indicial_roots(n, beta, lam);
    const double c = lam / ((1.0 + beta) * (1.0 + beta));
    for (double a : {r.alpha_plus, r.alpha_minus}) {
      CHECK(a * (a - 1.0) + (n - 1.0) * a - c ==
            doctest::Approx(0.0).scale(std::abs(c) + 1.0).epsilon(1e-12));
    }
    CHECK(r.alpha_plus + r.alpha_minus == doctest::Approx(2.0 - n).epsilon(1e-12));
    CHECK(r.alpha_plus >= 0.0);
    CHECK(r.alpha_minus <= 0.0);
  }
  CHECK_THROWS_AS(indicial_roots(4, -1.5, 1.0), std::invalid_argument);
}

TEST_CASE("regularity exponent prediction") {
  // second branch for beta <= -1/2
  const auto r1 = regularity_exponent(4, -0.6, 1.0);
  CHECK(r1.cls == HolderClass::C11);

  const auto r2 = regularity_exponent(4, -0.25, 1.0);
  CHECK(r2.cls == HolderClass::HolderTau);
  CHECK(r2.gamma1 == doctest::Approx(1.5166115).epsilon(1e-6));
  CHECK(r2.tau_sup == doctest::Approx(0.5166115).epsilon(1e-6));

  const auto r3 = regularity_exponent(4, -0.5, 1.0);
  CHECK(r3.gamma1 == doctest::Approx(std::sqrt(13.0) - 1.0).epsilon(1e-12));
  CHECK(r3.cls == HolderClass::C11);

  CHECK(regularity_exponent(5, -0.3, 0.5).gamma1 > 1.0);
  CHECK_THROWS_AS(regularity_exponent(4, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("graded grid invariants") {
  const auto g = make_graded_grid(2.0, 100, 3.0, GradeEnd::Left);
  REQUIRE(g.size() == 100);
  CHECK(g.front() > 0.0);
  CHECK(g.back() == doctest::Approx(2.0));
  for (std::size_t i = 0; i + 1 < g.size(); ++i) CHECK(g[i] < g[i + 1]);
  // density ~ uniform in rho^{1/q}
  CHECK(std::pow(g[9] / 2.0, 1.0 / 3.0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_THROWS_AS(make_graded_grid(1.0, 100, 0.5), std::invalid_argument);
}

TEST_CASE("solve_radial_mode: homogeneous solution is the alpha_plus power") {
  const int n = 4;
  const double beta = -0.5;
  const SphereMode mode{1, 3.0, 4};
  const auto grid = make_graded_grid(1.0, 400, 2.0, GradeEnd::Left);
  const auto sol = solve_radial_mode(
      mode, beta, n, [](double) { return 0.0; }, grid, RadialBC::DirichletAtL, 1.0);
  const double ap = std::sqrt(13.0) - 1.0;
  CHECK(sol.roots.alpha_plus == doctest::Approx(ap).epsilon(1e-13));
  for (std::size_t i = 0; i < sol.rho.size(); i += 37) {
    CHECK(sol.u[i] == doctest::Approx(std::pow(sol.rho[i], ap)).epsilon(1e-12));
  }
  CHECK(sol.agreement < 1e-3);
}

TEST_CASE("solve_radial_mode: manufactured power-law solution") {
  const int n = 4;
  const double beta = -0.5;
  const double lam = 3.0;
  const double Lam = lam / 0.25;
  const auto roots = indicial_roots(n, beta, lam);
  const double s = roots.alpha_plus + 1.0;
  const double coef = s * (s + n - 2) - Lam;
  const SphereMode mode{1, lam, 4};

  std::vector<double> errs;
  for (int cells : {100, 200, 400}) {
    const auto grid = make_graded_grid(1.0, cells, 2.0, GradeEnd::Left);
    const auto sol = solve_radial_mode(
        mode, beta, n,
        [coef, s](double t) { return coef * std::pow(t, s - 2.0); }, grid,
        RadialBC::DirichletAtL, 1.0);
    double err_green = 0.0, err_fem = 0.0;
    for (std::size_t i = 0; i < sol.rho.size(); ++i) {
      const double exact = std::pow(sol.rho[i], s);
      err_green = std::max(err_green, std::abs(sol.u[i] - exact));
      err_fem = std::max(err_fem, std::abs(sol.u_fem[i] - exact));
    }
    CHECK(err_green < 1e-8);  // quadrature-level accuracy
    errs.push_back(err_fem);
  }
  // finite-difference route converges at 2nd order or better
  const double order1 = std::log2(errs[0] / errs[1]);
  const double order2 = std::log2(errs[1] / errs[2]);
  CHECK(order1 > 1.7);
  CHECK(order2 > 1.7);
}

TEST_CASE("solve_radial_mode: degree-0 solvability dichotomy") {
  const int n = 4;
  const SphereMode zero{0, 0.0, 1};
  const auto grid = make_graded_grid(1.0, 200, 2.0, GradeEnd::Left);

  // constant data violates the mean-free condition
  CHECK_THROWS_AS(solve_radial_mode(zero, -0.5, n, [](double) { return 1.0; },
                                    grid, RadialBC::ClosedRegular),
                  NoSolutionError);

  // the centered variant solves, with both routes in agreement
  const double c = 4.0 / 5.0;  // int t^3 (t - c) dt = 0 on [0, 1]
  const auto sol = solve_radial_mode(
      zero, -0.5, n, [c](double t) { return t - c; }, grid,
      RadialBC::ClosedRegular);
  CHECK(sol.agreement < 1e-4);
  // weighted mean of the solution is fixed to zero
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i + 1 < sol.rho.size(); ++i) {
    const double w0 = std::pow(sol.rho[i], n - 1), w1 = std::pow(sol.rho[i + 1], n - 1);
    const double h = sol.rho[i + 1] - sol.rho[i];
    num += 0.5 * h * (sol.u[i] * w0 + sol.u[i + 1] * w1);
    den += 0.5 * h * (w0 + w1);
  }
  CHECK(std::abs(num / den) < 1e-6);
}

TEST_CASE("solve_radial_mode agreement improves at 2nd order") {
  const int n = 4;
  const SphereMode mode{2, 8.0, 9};
  std::vector<double> agree;
  for (int cells : {100, 200, 400}) {
    const auto grid = make_graded_grid(1.0, cells, 2.0, GradeEnd::Left);
    const auto sol = solve_radial_mode(
        mode, -0.25, n, [](double t) { return std::cos(3.0 * t); }, grid,
        RadialBC::NeumannAtL);
    agree.push_back(sol.agreement);
  }
  CHECK(std::log2(agree[0] / agree[1]) > 1.5);
  CHECK(std::log2(agree[1] / agree[2]) > 1.5);
}

TEST_CASE("solve_poisson on the round sphere: degree-1 eigenfunction") {
  for (int n : {3, 4}) {
    const auto M = build_round_sphere(n);
    ModeExpansion phi;
    phi.grid = manifold_grid(M, 600);
    phi.degrees = {1};
    phi.radial.resize(1);
    for (double r : phi.grid) phi.radial[0].push_back(std::sin(r));
    const auto sol = solve_poisson(M, phi);
    // Lap(sin r Psi) = -n sin r Psi, so u = -phi / n
    double worst = 0.0;
    for (std::size_t i = 0; i < phi.grid.size(); ++i)
      worst = std::max(worst,
                       std::abs(sol.u.radial[0][i] + std::sin(phi.grid[i]) / n));
    CHECK(worst < 2e-5);
  }
}

TEST_CASE("solve_poisson: zero data gives zero solution") {
  const auto M = build_round_sphere(3);
  ModeExpansion phi;
  phi.grid = manifold_grid(M, 100);
  phi.degrees = {0, 1};
  phi.radial = {std::vector<double>(phi.grid.size(), 0.0),
                std::vector<double>(phi.grid.size(), 0.0)};
  const auto sol = solve_poisson(M, phi);
  for (const auto& mode : sol.u.radial)
    for (double v : mode) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("solve_poisson: hemisphere Neumann solve") {
  const auto M = build_hemisphere(4);
  ModeExpansion phi;
  phi.grid = manifold_grid(M, 800);
  phi.degrees = {0};
  phi.radial.resize(1);
  std::vector<double> raw;
  for (double r : phi.grid) raw.push_back(std::cos(r));
  // subtract the weighted mean so the data is admissible
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i + 1 < phi.grid.size(); ++i) {
    const double a = phi.grid[i], b = phi.grid[i + 1], h = b - a;
    for (double x : gauss2_nodes(a, b)) {
      const double w = std::pow(std::sin(x), 3);
      const double t = (x - a) / h;
      num += 0.5 * h * w * ((1 - t) * raw[i] + t * raw[i + 1]);
      den += 0.5 * h * w;
    }
  }
  for (double& v : raw) v -= num / den;
  phi.radial[0] = raw;
  const auto sol = solve_poisson(M, phi);
  CHECK(sol.residual[0] < 1e-9);
  // Neumann condition at the equator via one-sided difference
  const std::size_t m = phi.grid.size();
  const double d1 = (sol.u.radial[0][m - 1] - sol.u.radial[0][m - 2]) /
                    (phi.grid[m - 1] - phi.grid[m - 2]);
  double scale = 0.0;
  for (double v : sol.u.radial[0]) scale = std::max(scale, std::abs(v));
  CHECK(std::abs(d1) < 5e-3 * scale);
}

TEST_CASE("solve_poisson rejects offset degree-0 data on closed manifolds") {
  const auto M = build_round_sphere(4);
  ModeExpansion phi;
  phi.grid = manifold_grid(M, 200);
  phi.degrees = {0};
  phi.radial.resize(1);
  for (double r : phi.grid) phi.radial[0].push_back(std::cos(r) + 0.25);
  CHECK_THROWS_AS(solve_poisson(M, phi), NoSolutionError);
}

TEST_CASE("estimate_holder_exponent") {
  // exact power law
  const auto f1 = estimate_holder_exponent(
      [](double r) { return std::pow(r, 2.60555); }, 0.0, 0.5, 10);
  CHECK(f1.exponent == doctest::Approx(2.60555).epsilon(1e-3));
  CHECK(f1.r_squared > 0.999999);

  // dominant quadratic with a cubic correction
  const auto f2 = estimate_holder_exponent(
      [](double r) { return r * r + 0.001 * r * r * r; }, 0.0, 0.5, 12);
  CHECK(f2.exponent == doctest::Approx(2.0).epsilon(5e-3));

  // homogeneous solve output matches the indicial exponent
  const auto grid = make_graded_grid(1.0, 600, 2.0, GradeEnd::Left);
  const SphereMode mode{1, 3.0, 4};
  const auto sol = solve_radial_mode(
      mode, -0.5, 4, [](double) { return 0.0; }, grid, RadialBC::DirichletAtL, 1.0);
  std::vector<double> rho, val;
  for (std::size_t i = 0; i < sol.rho.size(); i += 40) {
    rho.push_back(sol.rho[i]);
    val.push_back(sol.u[i]);
  }
  const auto f3 = estimate_holder_exponent(rho, val, 0.0);
  CHECK(f3.exponent == doctest::Approx(2.6055513).epsilon(4e-3));

  // fewer than 4 resolved levels
  std::vector<double> r2 = {0.5, 0.25, 0.125};
  std::vector<double> v2 = {1.0, 0.5, 0.25};
  CHECK_THROWS_AS(estimate_holder_exponent(r2, v2, 0.0), std::runtime_error);
}

TEST_CASE("conic_to_arclength") {
  // flat background: rho = r^{1+beta}/(1+beta), h = (1+beta) rho exactly
  {
    const double beta = -0.5;
    const auto arc = conic_to_arclength(
        beta, [](double) { return 0.0; }, [](double r) { return r; }, 1.0, 200);
    for (std::size_t i = 1; i < arc.r.size(); i += 29) {
      const double want_rho = std::pow(arc.r[i], 1.0 + beta) / (1.0 + beta);
      CHECK(arc.rho[i] == doctest::Approx(want_rho).epsilon(1e-10));
      CHECK(arc.h[i] == doctest::Approx((1.0 + beta) * arc.rho[i]).epsilon(1e-10));
    }
    CHECK(arc.tip_slope == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(arc.tip_slope_converged);
  }

  // beta = 0, w = 0: identity reparametrization
  {
    const auto arc = conic_to_arclength(
        0.0, [](double) { return 0.0; }, [](double r) { return r; }, 2.0, 100);
    for (std::size_t i = 0; i < arc.r.size(); i += 13)
      CHECK(arc.rho[i] == doctest::Approx(arc.r[i]).epsilon(1e-12));
  }

  // admissible conformal factor w = 0.1 r^{1-beta}: h/rho -> 1 + beta
  {
    const double beta = -0.5;
    const auto arc = conic_to_arclength(
        beta, [](double r) { return 0.1 * std::pow(r, 1.5); },
        [](double r) { return r; }, 1.0, 400);
    CHECK(arc.tip_slope == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(arc.tip_slope_converged);
  }

  // a conformal factor that is not finite is rejected
  CHECK_THROWS_AS(
      conic_to_arclength(-0.5, [](double r) { return 1.0 / r; },
                         [](double r) { return r; }, 1.0, 100),
      std::runtime_error);
}

TEST_CASE("measured regularity of solutions matches the predicted exponents") {
  // Constant data c = 2n - Lambda makes the particular solution exactly
  // rho^2; with u(1) = 3 the solution is u = rho^2 + 2 rho^{gamma1}. The raw
  // decay therefore measures min(gamma1, 2); removing the Taylor part
  // uncovers the cone exponent gamma1 itself.
  const int n = 4;
  for (double beta : {-0.25, -0.5, -0.75}) {
    const double Lam = 3.0 / ((1.0 + beta) * (1.0 + beta));
    const double gamma1 = indicial_roots(n, beta, 3.0).alpha_plus;
    const double q = std::max(2.0, std::ceil(1.0 / (1.0 + beta)));
    const auto grid = make_graded_grid(1.0, 1400, q, GradeEnd::Left);
    const SphereMode mode{1, 3.0, n};
    const auto sol = solve_radial_mode(
        mode, beta, n, [Lam](double) { return 2.0 * n - Lam; }, grid,
        RadialBC::DirichletAtL, 3.0);

    auto sample_nearest = [&](double top, int levels, bool subtract) {
      std::vector<double> rho, val;
      double target = top;
      for (int j = 0; j < levels; ++j, target *= 0.5) {
        auto it = std::lower_bound(sol.rho.begin(), sol.rho.end(), target);
        if (it == sol.rho.end() || it == sol.rho.begin()) continue;
        const std::size_t i = static_cast<std::size_t>(it - sol.rho.begin());
        const double r = sol.rho[i];
        rho.push_back(r);
        val.push_back(subtract ? sol.u[i] - r * r : sol.u[i]);
      }
      return estimate_holder_exponent(rho, val, 0.0).exponent;
    };

    const double raw = sample_nearest(0.01, 8, false);
    CHECK(std::abs(raw - std::min(gamma1, 2.0)) < 0.05);

    const double peeled = sample_nearest(0.4, 4, true);
    CHECK(std::abs(peeled - gamma1) < 0.05);
  }
}

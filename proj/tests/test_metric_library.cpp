#include <doctest.h>

#include <cmath>

#include "andrews/metric_library.hpp"
#include "andrews/numerics.hpp"
#include "andrews/warped_geometry.hpp"

using namespace andrews;

TEST_CASE("round sphere preset") {
  const auto s3 = build_round_sphere(3);
  for (double r : {0.5, 1.5, 2.5}) {
    const auto c = ricci_eigenvalues(s3, r);
    CHECK(c.rho_rad == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(c.rho_tan == doctest::Approx(2.0).epsilon(1e-12));
  }
  const auto s4 = build_round_sphere(4);
  CHECK(integrate_radial(s4, [](double) { return 1.0; }).value ==
        doctest::Approx(8.0 * M_PI * M_PI / 3.0).epsilon(1e-9));
  CHECK(cone_angle(s4, Side::Left).value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(cone_angle(s4, Side::Right).value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(build_round_sphere(2), std::invalid_argument);
}

TEST_CASE("hemisphere preset") {
  const auto h4 = build_hemisphere(4);
  CHECK(second_fundamental_form(h4, h4.b()) == doctest::Approx(0.0).epsilon(1e-12));
  const auto h3 = build_hemisphere(3);
  CHECK(integrate_radial(h3, [](double) { return 1.0; }).value ==
        doctest::Approx(M_PI * M_PI).epsilon(1e-9));
  CHECK(check_positive_ricci(h3).positive);
  CHECK(check_positive_ricci(build_hemisphere(5)).positive);
}

TEST_CASE("football endpoint algebra") {
  const auto fb = build_football(4, -0.5);
  CHECK(fb.spec.c2 == doctest::Approx(0.140625).epsilon(1e-14));
  CHECK(fb.spec.f_max ==
        doctest::Approx(std::pow(0.4375, 0.25)).epsilon(1e-14));
  CHECK(fb.spec.k == 2);
  CHECK(fb.manifold.left.kind == EndpointKind::Cone);
  CHECK(fb.manifold.left.beta == doctest::Approx(-0.5));

  // profile attains f_max at the midpoint and never exceeds it
  const double mid = 0.5 * (fb.manifold.a() + fb.manifold.b());
  CHECK(fb.manifold.profile.value(mid) ==
        doctest::Approx(fb.spec.f_max).epsilon(1e-12));
  double fmax = 0.0;
  for (double r : interior_probes(fb.manifold, 2001))
    fmax = std::max(fmax, fb.manifold.profile.value(r));
  CHECK(fmax <= fb.spec.f_max * (1.0 + 1e-12));
  CHECK(fmax > fb.spec.f_max - 1e-5);

  CHECK_THROWS_AS(build_football(5, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(build_football(4, -1.5), std::invalid_argument);
  CHECK_THROWS_AS(build_football(4, 0.5), std::invalid_argument);
}

TEST_CASE("football first integral holds with independent derivatives") {
  for (double beta : {-0.25, -0.5, -0.75}) {
    const auto fb = build_football(4, beta);
    const auto& M = fb.manifold;
    const int n = 4, k = 2;
    double worst = 0.0;
    for (double r : interior_probes(M, 400)) {
      // centered finite difference of the evaluated profile, independent of
      // the profile's own derivative channel
      const double delta = 1e-4 * M.length();
      if (r - delta <= M.a() || r + delta >= M.b()) continue;
      const double fp =
          (M.profile.value(r + delta) - M.profile.value(r - delta)) / (2 * delta);
      const double f = M.profile.value(r);
      const double lhs = (1.0 / n) * std::pow(1.0 - fp * fp, k) -
                         (fb.spec.c0 / n) * std::pow(f, n);
      worst = std::max(worst, std::abs(lhs - fb.spec.c2));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("football sigma_{n/2} is constant at the round-sphere level") {
  const auto fb = build_football(4, -0.5);
  double lo = 1e300, hi = -1e300;
  for (double r : interior_probes(fb.manifold, 500)) {
    const double s = sigma_k(fb.manifold, r, 2);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  CHECK(hi - lo < 1e-6 * std::abs(hi));
  CHECK(hi == doctest::Approx(1.5).epsilon(1e-8));
}

TEST_CASE("football degenerate beta = 0 reproduces sin") {
  const auto fb = build_football(4, 0.0);
  CHECK(fb.spec.c2 == doctest::Approx(0.0));
  CHECK(fb.spec.f_max == doctest::Approx(1.0));
  CHECK(fb.spec.total_length == doctest::Approx(M_PI).epsilon(1e-10));
  for (double r : {0.3, 1.0, 2.0, 3.0}) {
    CHECK(fb.manifold.profile.value(r) ==
          doctest::Approx(std::sin(r)).epsilon(1e-9));
  }
  CHECK(fb.manifold.left.kind == EndpointKind::SmoothCap);
}

TEST_CASE("football symmetry about the midpoint") {
  const auto fb = build_football(4, -0.5);
  const double mid = 0.5 * (fb.manifold.a() + fb.manifold.b());
  for (double t : {0.1, 0.4, 0.8, 1.0}) {
    CHECK(fb.manifold.profile.value(mid + t) ==
          doctest::Approx(fb.manifold.profile.value(mid - t)).epsilon(1e-9));
  }
}

TEST_CASE("football converges to sin as beta -> 0-") {
  const auto fb = build_football(4, -0.01);
  double sup = 0.0;
  for (double r : interior_probes(fb.manifold, 300))
    sup = std::max(sup, std::abs(fb.manifold.profile.value(r) - std::sin(r)));
  CHECK(sup < 0.02);
}

TEST_CASE("perturbed manifolds") {
  const auto s4 = build_round_sphere(4);

  // eps = 0 leaves the profile unchanged
  const auto same = build_perturbed(s4, 0.0, 1);
  for (double r : {0.4, 1.2, 2.6})
    CHECK(same.profile.value(r) == doctest::Approx(std::sin(r)).epsilon(1e-15));

  // eps = 0.05 keeps positive Ricci but is not Einstein
  const auto pert = build_perturbed(s4, 0.05, 1);
  CHECK(check_positive_ricci(pert).positive);
  double maxdiff = 0.0;
  for (double r : interior_probes(pert, 200)) {
    const auto c = ricci_eigenvalues(pert, r);
    maxdiff = std::max(maxdiff, std::abs(c.rho_rad - c.rho_tan));
  }
  CHECK(maxdiff > 0.01);

  // huge amplitude destroys positive Ricci and is rejected
  CHECK_THROWS_AS(build_perturbed(s4, 10.0, 1), std::runtime_error);
}

TEST_CASE("perturbation preserves endpoint structure") {
  const auto s4 = build_round_sphere(4);
  for (double eps : {0.02, 0.05, 0.1}) {
    const auto pert = build_perturbed(s4, eps, 1);
    CHECK(cone_angle(pert, Side::Left).value == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(cone_angle(pert, Side::Right).value == doctest::Approx(1.0).epsilon(1e-5));
  }

  // A football tip has rho_rad -> 0, so the bump's positive p'' at the ends
  // makes rho_rad negative near the tips for any eps > 0: the constructor
  // must reject it.
  const auto fb = build_football(4, -0.5);
  CHECK_THROWS_AS(build_perturbed(fb.manifold, 0.02, 1), std::runtime_error);
}

TEST_CASE("validate_manifold classification") {
  CHECK(validate_manifold(build_round_sphere(4)).cls == ManifoldClass::TwoCaps);
  CHECK(validate_manifold(build_round_sphere(4)).consistent);

  const auto fb = validate_manifold(build_football(4, -0.5).manifold);
  CHECK(fb.cls == ManifoldClass::TwoCones);
  CHECK(fb.left.measured_limit == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(fb.right.measured_limit == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(fb.consistent);

  CHECK(validate_manifold(build_hemisphere(3)).cls == ManifoldClass::WithBoundary);

  // a cone at one end, a smooth cap at the other
  auto jet = [](double x) {
    const double s = std::sin(x), c = std::cos(x);
    return ProfileJet{s * (1.0 - 0.15 * s), c - 0.3 * s * c,
                      -s + 0.3 * s * s - 0.3 * c * c};
  };
  // f = sin - 0.15 sin^2: f/r -> 1 at r = 0 (cap) and |f/(r-pi)| -> 1 at pi
  auto m = make_manifold(4, RadialProfile::formula("capcone", 0.0, M_PI, jet),
                         Endpoint{EndpointKind::SmoothCap},
                         Endpoint{EndpointKind::SmoothCap});
  const auto rep = validate_manifold(m);
  CHECK(rep.cls == ManifoldClass::TwoCaps);
  CHECK(rep.left.measured_limit == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("football generalizes to higher even dimensions") {
  const auto fb = build_football(6, -0.4);
  const auto& M = fb.manifold;
  // sigma_{n/2} sits at the round-sphere level C(n-1,k)(1/2)^k + ... = 2.5
  double lo = 1e300, hi = -1e300;
  for (double r : interior_probes(M, 300)) {
    const double s = sigma_k(M, r, 3);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  CHECK(hi == doctest::Approx(2.5).epsilon(1e-10));
  CHECK(hi - lo < 1e-10);
  CHECK(check_positive_ricci(M).positive);
}

#pragma once

#include <string>
#include <vector>

#include "andrews/radial_profile.hpp"

namespace andrews {

/// Constants of the constant-sigma_{n/2} conic football profile with the
/// normalization c0 = 1 (which makes beta = 0 reproduce the unit round
/// sphere). The profile solves the first integral
///   (1/n)(1 - (f')^2)^k - (c0/n) f^n = c2,   k = n/2,
/// with f -> 0 and |f'| -> 1+beta at both tips and f' = 0 at f_max.
struct FootballSpec {
  int n = 4;
  int k = 2;
  double beta = 0.0;
  double c0 = 1.0;
  double c2 = 0.0;
  double f_max = 1.0;
  double total_length = 0.0;
};

struct Football {
  WarpedManifold manifold;
  FootballSpec spec;
};

/// f = sin r on [0, pi], smooth caps at both ends.
WarpedManifold build_round_sphere(int n);

/// f = sin r on [0, pi/2]: smooth cap at 0, totally geodesic boundary.
WarpedManifold build_hemisphere(int n);

/// f = sin r on [0, colatitude]; for colatitude < pi/2 the boundary is
/// strictly convex, at pi/2 it is the hemisphere.
WarpedManifold build_spherical_cap(int n, double colatitude);

/// Conic football: n even, beta in (-1, 0); beta = 0 is accepted as the
/// degenerate round-sphere input for testing.
Football build_football(int n, double beta, int table_nodes = 2001);

/// f_eps = f * (1 + eps sin^2(m pi (r-a)/(b-a))). Endpoint kinds and cone
/// angles are preserved; throws if the result loses positive Ricci.
WarpedManifold build_perturbed(const WarpedManifold& base, double epsilon,
                               int m);

/// Constant rescaling: profile c f(r/c) on [c a, c b], endpoint kinds kept.
WarpedManifold build_rescaled(const WarpedManifold& base, double c);

enum class ManifoldClass { TwoCaps, OneCone, TwoCones, WithBoundary };

const char* manifold_class_name(ManifoldClass c);

struct EndpointCheck {
  EndpointKind declared_kind = EndpointKind::Boundary;
  double declared_limit = 1.0;  // 1 + beta (1 for smooth caps)
  double measured_limit = 0.0;
  bool consistent = false;
};

struct ClassificationReport {
  ManifoldClass cls = ManifoldClass::TwoCaps;
  EndpointCheck left, right;
  bool consistent = false;
};

/// Classifies the endpoint pair (two caps / one cone / two cones / boundary)
/// and verifies each declared cone angle against extrapolation.
ClassificationReport validate_manifold(const WarpedManifold& M);

}  // namespace andrews

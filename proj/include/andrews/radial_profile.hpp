#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace andrews {

/// Value and first two derivatives of the warping function at one radius.
struct ProfileJet {
  double f = 0.0;
  double df = 0.0;
  double d2f = 0.0;
};

enum class ProfileKind { Formula, Sampled, FirstIntegral };

/// The warping function f on an interval [a, b], with derivative access.
/// Presets carry analytic derivatives; sampled profiles differentiate their
/// node table with 4th-order finite differences (one-sided at the ends) and
/// interpolate by cubic Hermite pieces; first-integral profiles (the conic
/// football) interpolate f and recover f', f'' from the conserved quantity.
class RadialProfile {
 public:
  RadialProfile() = default;

  static RadialProfile formula(std::string name, double a, double b,
                               std::function<ProfileJet(double)> jet);
  static RadialProfile sampled(std::vector<double> r, std::vector<double> f);
  /// Sample table with explicit derivative channels (cone-tip curvature
  /// cannot be recovered from plain value samples, so tables written by the
  /// constructors carry these).
  static RadialProfile sampled_with_derivatives(std::vector<double> r,
                                                std::vector<double> f,
                                                std::vector<double> df,
                                                std::vector<double> d2f);
  static RadialProfile first_integral(std::string name, std::vector<double> r,
                                      std::vector<double> f,
                                      std::vector<double> df,
                                      std::function<ProfileJet(double, double)> jet_from_f);

  /// c * base(r / c) on [c a, c b].
  static RadialProfile rescaled(const RadialProfile& base, double c);

  double a() const { return a_; }
  double b() const { return b_; }
  double length() const { return b_ - a_; }
  ProfileKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  /// f, f', f'' at interior r. Throws std::domain_error outside (a, b) unless
  /// allow_endpoint, and std::runtime_error on a non-positive interior value.
  ProfileJet jet(double r, bool allow_endpoint = false) const;
  double value(double r, bool allow_endpoint = false) const;

  /// Node table (empty for pure formula profiles).
  const std::vector<double>& nodes_r() const { return nodes_r_; }
  const std::vector<double>& nodes_f() const { return nodes_f_; }

 private:
  ProfileKind kind_ = ProfileKind::Formula;
  std::string name_;
  double a_ = 0.0, b_ = 1.0;
  std::function<ProfileJet(double)> jet_;
  std::vector<double> nodes_r_, nodes_f_;
};

enum class EndpointKind { SmoothCap, Cone, Boundary };

struct Endpoint {
  EndpointKind kind = EndpointKind::Boundary;
  double beta = 0.0;  // cone coefficient, only meaningful for Cone
};

/// Warped product metric dr^2 + f(r)^2 g_{S^{n-1}} on [a, b] x S^{n-1}.
struct WarpedManifold {
  int dim = 3;
  RadialProfile profile;
  Endpoint left, right;

  double a() const { return profile.a(); }
  double b() const { return profile.b(); }
  double length() const { return profile.length(); }
};

WarpedManifold make_manifold(int dim, RadialProfile profile, Endpoint left,
                             Endpoint right);

const char* endpoint_kind_name(EndpointKind k);

}  // namespace andrews

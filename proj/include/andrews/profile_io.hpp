#pragma once

#include <optional>
#include <string>

#include "andrews/conic_spectral.hpp"
#include "andrews/metric_library.hpp"
#include "andrews/radial_profile.hpp"

namespace andrews {

/// JSON document for a manifold: schema v1, see docs/profile_schema.md.
/// Formula presets serialize by name and parameters; constructed profiles
/// (footballs included) serialize their sample tables and reload as sampled
/// profiles with finite-difference derivatives.
std::string manifold_to_json(const WarpedManifold& M);
WarpedManifold manifold_from_json(const std::string& text);

std::string football_spec_to_json(const FootballSpec& spec);

/// Mode expansions serialize as a flat table `degree,node,r,value` (17-digit
/// floats); every mode shares the grid, which the loader reconstructs from
/// the rows of the first degree.
std::string mode_expansion_to_csv(const ModeExpansion& phi);
ModeExpansion mode_expansion_from_csv(const std::string& text);

/// Structured record of a radial mode solve: degree, link eigenvalue, branch
/// exponents, route disagreement, and (when measured) the decay exponent.
std::string radial_solve_report_to_json(const SphereMode& mode,
                                        const RadialSolveResult& sol,
                                        std::optional<double> measured_exponent);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace andrews

#include "andrews/profile_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "andrews/numerics.hpp"
#include "andrews/warped_geometry.hpp"

namespace andrews {

using nlohmann::json;

namespace {

json endpoint_to_json(const Endpoint& e) {
  json j;
  j["kind"] = endpoint_kind_name(e.kind);
  if (e.kind == EndpointKind::Cone) j["beta"] = e.beta;
  return j;
}

Endpoint endpoint_from_json(const json& j) {
  Endpoint e;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "smooth_cap")
    e.kind = EndpointKind::SmoothCap;
  else if (kind == "cone")
    e.kind = EndpointKind::Cone;
  else if (kind == "boundary")
    e.kind = EndpointKind::Boundary;
  else
    throw std::invalid_argument("manifold_from_json: unknown endpoint kind '" + kind + "'");
  if (e.kind == EndpointKind::Cone) e.beta = j.at("beta").get<double>();
  return e;
}

}  // namespace

std::string manifold_to_json(const WarpedManifold& M) {
  json j;
  j["schema_version"] = 1;
  j["n"] = M.dim;
  j["interval"] = {M.a(), M.b()};
  j["endpoints"] = {endpoint_to_json(M.left), endpoint_to_json(M.right)};

  json prof;
  const std::string& name = M.profile.name();
  if (M.profile.kind() == ProfileKind::Formula && name == "sin") {
    prof["type"] = "formula";
    prof["name"] = "sin";
  } else {
    // generic path: persist a sample table including the derivative
    // channels (second derivatives near cone tips are unrecoverable from
    // value samples alone)
    prof["type"] = "samples";
    std::vector<double> r = M.profile.nodes_r();
    if (r.empty()) r = manifold_grid(M, 2000);
    std::vector<double> f, df, d2f;
    f.reserve(r.size());
    df.reserve(r.size());
    d2f.reserve(r.size());
    for (double x : r) {
      const ProfileJet jet = M.profile.jet(x, true);
      f.push_back(jet.f);
      df.push_back(jet.df);
      d2f.push_back(jet.d2f);
    }
    prof["r"] = r;
    prof["f"] = f;
    prof["df"] = df;
    prof["d2f"] = d2f;
    prof["source"] = name;
  }
  j["profile"] = prof;
  return j.dump(2);
}

WarpedManifold manifold_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (j.at("schema_version").get<int>() != 1)
    throw std::invalid_argument("manifold_from_json: unsupported schema version");
  const int n = j.at("n").get<int>();
  const auto interval = j.at("interval").get<std::vector<double>>();
  if (interval.size() != 2)
    throw std::invalid_argument("manifold_from_json: interval must have two entries");
  const auto& eps = j.at("endpoints");
  if (!eps.is_array() || eps.size() != 2)
    throw std::invalid_argument("manifold_from_json: endpoints must have two entries");
  const Endpoint left = endpoint_from_json(eps[0]);
  const Endpoint right = endpoint_from_json(eps[1]);

  const auto& prof = j.at("profile");
  const std::string type = prof.at("type").get<std::string>();
  RadialProfile rp;
  if (type == "formula") {
    const std::string name = prof.at("name").get<std::string>();
    if (name == "sin") {
      rp = RadialProfile::formula("sin", interval[0], interval[1], [](double r) {
        return ProfileJet{std::sin(r), std::cos(r), -std::sin(r)};
      });
    } else {
      throw std::invalid_argument("manifold_from_json: unknown formula '" + name + "'");
    }
  } else if (type == "samples") {
    if (prof.contains("df") && prof.contains("d2f")) {
      rp = RadialProfile::sampled_with_derivatives(
          prof.at("r").get<std::vector<double>>(),
          prof.at("f").get<std::vector<double>>(),
          prof.at("df").get<std::vector<double>>(),
          prof.at("d2f").get<std::vector<double>>());
    } else {
      rp = RadialProfile::sampled(prof.at("r").get<std::vector<double>>(),
                                  prof.at("f").get<std::vector<double>>());
    }
  } else {
    throw std::invalid_argument("manifold_from_json: unknown profile type '" + type + "'");
  }
  return make_manifold(n, std::move(rp), left, right);
}

std::string football_spec_to_json(const FootballSpec& spec) {
  json j;
  j["schema_version"] = 1;
  j["n"] = spec.n;
  j["k"] = spec.k;
  j["beta"] = spec.beta;
  j["c0"] = spec.c0;
  j["c2"] = spec.c2;
  j["f_max"] = spec.f_max;
  j["total_length"] = spec.total_length;
  return j.dump(2);
}

std::string mode_expansion_to_csv(const ModeExpansion& phi) {
  if (phi.degrees.size() != phi.radial.size())
    throw std::invalid_argument("mode_expansion_to_csv: malformed expansion");
  std::ostringstream out;
  out << "degree,node,r,value\n";
  for (std::size_t im = 0; im < phi.size(); ++im) {
    if (phi.radial[im].size() != phi.grid.size())
      throw std::invalid_argument("mode_expansion_to_csv: grid mismatch");
    for (std::size_t j = 0; j < phi.grid.size(); ++j) {
      out << phi.degrees[im] << ',' << j << ',' << format_double(phi.grid[j])
          << ',' << format_double(phi.radial[im][j]) << '\n';
    }
  }
  return out.str();
}

ModeExpansion mode_expansion_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "degree,node,r,value")
    throw std::invalid_argument("mode_expansion_from_csv: bad header");
  ModeExpansion phi;
  int current = std::numeric_limits<int>::min();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string tok;
    std::getline(row, tok, ',');
    const int degree = std::stoi(tok);
    std::getline(row, tok, ',');
    const std::size_t node = static_cast<std::size_t>(std::stoul(tok));
    std::getline(row, tok, ',');
    const double r = std::stod(tok);
    std::getline(row, tok, ',');
    const double value = std::stod(tok);
    if (degree != current) {
      phi.degrees.push_back(degree);
      phi.radial.emplace_back();
      current = degree;
    }
    if (phi.degrees.size() == 1) {
      if (node != phi.grid.size())
        throw std::invalid_argument("mode_expansion_from_csv: node order");
      phi.grid.push_back(r);
    }
    phi.radial.back().push_back(value);
  }
  for (const auto& mode : phi.radial)
    if (mode.size() != phi.grid.size())
      throw std::invalid_argument("mode_expansion_from_csv: ragged table");
  return phi;
}

std::string radial_solve_report_to_json(const SphereMode& mode,
                                        const RadialSolveResult& sol,
                                        std::optional<double> measured_exponent) {
  json j;
  j["schema_version"] = 1;
  j["degree"] = mode.degree;
  j["link_eigenvalue"] = mode.eigenvalue;
  j["alpha_plus"] = sol.roots.alpha_plus;
  j["alpha_minus"] = sol.roots.alpha_minus;
  j["route_disagreement"] = sol.agreement;
  if (measured_exponent) j["measured_exponent"] = *measured_exponent;
  return j.dump(2);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace andrews

#include "andrews/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "andrews/andrews_verifier.hpp"
#include "andrews/conic_spectral.hpp"
#include "andrews/metric_library.hpp"
#include "andrews/numerics.hpp"
#include "andrews/parallel.hpp"
#include "andrews/profile_io.hpp"
#include "andrews/warped_geometry.hpp"

namespace andrews {

using nlohmann::json;

namespace {

const std::vector<std::string> kKnownTasks = {"curvature", "eigen", "bochner",
                                              "regularity", "rigidity"};
const std::vector<std::string> kKnownPresets = {
    "round_sphere", "hemisphere", "cap", "football", "perturbed_sphere"};

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.tasks.empty())
    throw std::invalid_argument("config: at least one task is required");
  for (const auto& t : cfg.tasks)
    if (std::find(kKnownTasks.begin(), kKnownTasks.end(), t) == kKnownTasks.end())
      throw std::invalid_argument("config: unknown task '" + t + "'");
  if (cfg.profile_file.empty() &&
      std::find(kKnownPresets.begin(), kKnownPresets.end(), cfg.preset) ==
          kKnownPresets.end())
    throw std::invalid_argument("config: unknown preset '" + cfg.preset + "'");
  if (cfg.grids.empty())
    throw std::invalid_argument("config: at least one grid size is required");
  for (std::size_t i = 0; i + 1 < cfg.grids.size(); ++i)
    if (!(cfg.grids[i] < cfg.grids[i + 1]))
      throw std::invalid_argument("config: grid sizes must increase strictly");
  for (int g : cfg.grids)
    if (g < 16) throw std::invalid_argument("config: grid sizes must be >= 16");
  if (cfg.lmax < 0 || cfg.lmax > 64)
    throw std::invalid_argument("config: lmax out of range");
  if (cfg.converge_target != "eigen" && cfg.converge_target != "poisson_mms")
    throw std::invalid_argument("config: unknown converge_target");
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  if (j.contains("schema_version") && j.at("schema_version").get<int>() != 1)
    throw std::invalid_argument("config: unsupported schema version");

  static const std::vector<std::string> known = {
      "schema_version", "preset",   "profile_file", "dim",
      "beta",           "epsilon",  "bump_index",   "colatitude",
      "grids",          "lmax",     "tasks",        "converge_target",
      "out_dir",        "quiet"};
  for (const auto& item : j.items())
    if (std::find(known.begin(), known.end(), item.key()) == known.end())
      throw std::invalid_argument("config: unknown key '" + item.key() + "'");

  ExperimentConfig cfg;
  if (j.contains("preset")) cfg.preset = j.at("preset").get<std::string>();
  if (j.contains("profile_file")) cfg.profile_file = j.at("profile_file").get<std::string>();
  if (j.contains("dim")) cfg.dim = j.at("dim").get<int>();
  if (j.contains("beta")) cfg.beta = j.at("beta").get<double>();
  if (j.contains("epsilon")) cfg.epsilon = j.at("epsilon").get<double>();
  if (j.contains("bump_index")) cfg.bump_index = j.at("bump_index").get<int>();
  if (j.contains("colatitude")) cfg.colatitude = j.at("colatitude").get<double>();
  if (j.contains("grids")) cfg.grids = j.at("grids").get<std::vector<int>>();
  if (j.contains("lmax")) cfg.lmax = j.at("lmax").get<int>();
  if (j.contains("tasks")) cfg.tasks = j.at("tasks").get<std::vector<std::string>>();
  if (j.contains("converge_target"))
    cfg.converge_target = j.at("converge_target").get<std::string>();
  if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
  if (j.contains("quiet")) cfg.quiet = j.at("quiet").get<bool>();
  validate_config(cfg);
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["schema_version"] = 1;
  j["preset"] = cfg.preset;
  if (!cfg.profile_file.empty()) j["profile_file"] = cfg.profile_file;
  j["dim"] = cfg.dim;
  j["beta"] = cfg.beta;
  j["epsilon"] = cfg.epsilon;
  j["bump_index"] = cfg.bump_index;
  j["colatitude"] = cfg.colatitude;
  j["grids"] = cfg.grids;
  j["lmax"] = cfg.lmax;
  j["tasks"] = cfg.tasks;
  j["converge_target"] = cfg.converge_target;
  j["out_dir"] = cfg.out_dir;
  j["quiet"] = cfg.quiet;
  return j.dump(2);
}

WarpedManifold manifold_from_config(const ExperimentConfig& cfg) {
  validate_config(cfg);
  if (!cfg.profile_file.empty())
    return manifold_from_json(read_text_file(cfg.profile_file));
  if (cfg.preset == "round_sphere") return build_round_sphere(cfg.dim);
  if (cfg.preset == "hemisphere") return build_hemisphere(cfg.dim);
  if (cfg.preset == "cap") return build_spherical_cap(cfg.dim, cfg.colatitude);
  if (cfg.preset == "football") return build_football(cfg.dim, cfg.beta).manifold;
  if (cfg.preset == "perturbed_sphere")
    return build_perturbed(build_round_sphere(cfg.dim), cfg.epsilon, cfg.bump_index);
  throw std::invalid_argument("config: unknown preset '" + cfg.preset + "'");
}

namespace {

double manifold_beta(const WarpedManifold& M) {
  if (M.left.kind == EndpointKind::Cone) return M.left.beta;
  if (M.right.kind == EndpointKind::Cone) return M.right.beta;
  return 0.0;
}

TaskResult run_curvature(const WarpedManifold& M, int grid) {
  TaskResult t;
  t.task = "curvature";
  t.grid = grid;
  const RicciReport rep = check_positive_ricci(M, grid);
  t.value = rep.min_value;
  t.bound = 0.0;
  t.margin = rep.min_value;
  t.residual = rep.max_d2f;
  t.pass = rep.positive && rep.concave;
  t.detail = rep.positive ? "positive Ricci" : "Ricci not positive";
  return t;
}

TaskResult run_eigen(const WarpedManifold& M, int grid, int lmax) {
  TaskResult t;
  t.task = "eigen";
  t.grid = grid;
  const EigenResult eig = first_eigenvalue(M, lmax, grid);
  t.value = eig.lambda1_global;
  t.bound = eig.bound;
  t.margin = eig.margin;
  t.residual = eig.tol_estimate;
  t.pass = eig.bound_satisfied;
  std::ostringstream d;
  d << "min mode " << eig.minimizing_degree;
  t.detail = d.str();
  return t;
}

TaskResult run_bochner(const WarpedManifold& M, int grid) {
  TaskResult t;
  t.task = "bochner";
  t.grid = grid;
  const BochnerCase bc = (M.left.kind == EndpointKind::Boundary ||
                          M.right.kind == EndpointKind::Boundary)
                             ? BochnerCase::Boundary
                             : (M.left.kind == EndpointKind::Cone ||
                                        M.right.kind == EndpointKind::Cone
                                    ? BochnerCase::Conic
                                    : BochnerCase::Closed);
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const double a = M.a(), len = M.length();
  double worst = 0.0, tol = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::array<double, 4> c{};
    for (double& x : c) x = coef(rng);
    // cosine series: u' vanishes at both ends, so the data is admissible in
    // every case (Neumann included)
    RadialTestFunction u;
    u.d1 = [c, a, len](double r) {
      double s = 0.0;
      for (int k = 1; k <= 4; ++k)
        s += -c[k - 1] * k * M_PI / len * std::sin(k * M_PI * (r - a) / len);
      return s;
    };
    u.d2 = [c, a, len](double r) {
      double s = 0.0;
      for (int k = 1; k <= 4; ++k) {
        const double w = k * M_PI / len;
        s += -c[k - 1] * w * w * std::cos(w * (r - a));
      }
      return s;
    };
    const DeficitReport rep = bochner_deficit(M, u, bc, grid);
    worst = std::max(worst, rep.residual);
    tol = std::max(tol, rep.quad_tol);
  }
  t.value = worst;
  t.bound = 10.0 * tol;
  t.margin = t.bound - worst;
  t.residual = tol;
  t.pass = worst < 10.0 * tol;
  t.detail = "50 random radial test functions";
  return t;
}

TaskResult run_regularity(const WarpedManifold& M, int grid) {
  TaskResult t;
  t.task = "regularity";
  t.grid = grid;
  const int n = M.dim;
  const double beta = manifold_beta(M);
  const double q = std::max(2.0, std::ceil(1.0 / (1.0 + beta)));
  const auto g = make_graded_grid(1.0, grid, q, GradeEnd::Left);
  const SphereMode mode{1, static_cast<double>(n - 1), n};
  const auto sol = solve_radial_mode(
      mode, beta, n, [](double) { return 0.0; }, g, RadialBC::DirichletAtL, 1.0);
  // measured decay exponent of the homogeneous solution
  std::vector<double> rho, val;
  for (double r = 0.5; r > 4.0 * g.front(); r *= 0.5) {
    auto it = std::lower_bound(sol.rho.begin(), sol.rho.end(), r);
    if (it == sol.rho.end() || it == sol.rho.begin()) continue;
    const std::size_t i = static_cast<std::size_t>(it - sol.rho.begin());
    rho.push_back(sol.rho[i]);
    val.push_back(sol.u[i]);
  }
  const HolderFit fit = estimate_holder_exponent(rho, val, 0.0);
  t.value = fit.exponent;
  t.bound = sol.roots.alpha_plus;
  t.margin = std::abs(fit.exponent - sol.roots.alpha_plus);
  t.residual = 1.0 - fit.r_squared;
  t.pass = t.margin < 0.01;
  t.detail = "degree-1 homogeneous decay vs indicial exponent";
  return t;
}

TaskResult run_rigidity(const WarpedManifold& M, int grid, int lmax) {
  TaskResult t;
  t.task = "rigidity";
  t.grid = grid;
  const EigenResult eig = first_eigenvalue(M, lmax, grid);
  const RigidityReport rep = rigidity_check(M, eig);
  t.value = rep.traceless_ratio;
  t.bound = 1e-6;
  t.margin = eig.margin;
  t.residual = rep.gradient_identity_residual;
  t.pass = rep.classification.consistent;
  t.detail = std::string(rep.equality ? "equality" : "strict") + ", " +
             manifold_class_name(rep.cls);
  return t;
}

std::string build_csv(const ExperimentConfig& cfg,
                      const std::vector<TaskResult>& results, double beta) {
  std::ostringstream csv;
  csv << "task,preset,n,beta,grid,lmax,value,bound,margin,residual,pass\n";
  for (const TaskResult& t : results) {
    csv << t.task << ',' << cfg.preset << ',' << cfg.dim << ','
        << format_double(beta) << ',' << t.grid << ',' << cfg.lmax << ','
        << format_double(t.value) << ',' << format_double(t.bound) << ','
        << format_double(t.margin) << ',' << format_double(t.residual) << ','
        << (t.pass ? 1 : 0) << '\n';
  }
  return csv.str();
}

}  // namespace

RunReport run(const ExperimentConfig& cfg) {
  validate_config(cfg);
  RunReport report;
  report.config = cfg;
  const WarpedManifold M = manifold_from_config(cfg);
  const double beta = manifold_beta(M);

  struct Job {
    std::string task;
    int grid;
  };
  std::vector<Job> jobs;
  for (const std::string& task : cfg.tasks)
    for (int g : cfg.grids) jobs.push_back({task, g});
  report.results.resize(jobs.size());

  std::exception_ptr failure;
  parallel::parallel_for(jobs.size(), [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    TaskResult& slot = report.results[i];
    try {
      if (jobs[i].task == "curvature")
        slot = run_curvature(M, jobs[i].grid);
      else if (jobs[i].task == "eigen")
        slot = run_eigen(M, jobs[i].grid, cfg.lmax);
      else if (jobs[i].task == "bochner")
        slot = run_bochner(M, jobs[i].grid);
      else if (jobs[i].task == "regularity")
        slot = run_regularity(M, jobs[i].grid);
      else if (jobs[i].task == "rigidity")
        slot = run_rigidity(M, jobs[i].grid, cfg.lmax);
    } catch (const std::exception& ex) {
      slot.task = jobs[i].task;
      slot.grid = jobs[i].grid;
      slot.pass = false;
      slot.detail = std::string("error: ") + ex.what();
    } catch (...) {
      failure = std::current_exception();
    }
    slot.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
  });
  if (failure) std::rethrow_exception(failure);

  report.all_passed = !report.results.empty();
  for (const TaskResult& t : report.results) report.all_passed &= t.pass;
  report.csv = build_csv(cfg, report.results, beta);

  json summary;
  summary["schema_version"] = 1;
  summary["config"] = json::parse(config_to_json(cfg));
  summary["all_passed"] = report.all_passed;
  summary["n"] = cfg.dim;
  summary["bound"] = static_cast<double>(cfg.dim) / (cfg.dim - 1);
  json rows = json::array();
  for (const TaskResult& t : report.results) {
    json r;
    r["task"] = t.task;
    r["grid"] = t.grid;
    r["value"] = t.value;
    r["bound"] = t.bound;
    r["margin"] = t.margin;
    r["residual"] = t.residual;
    r["pass"] = t.pass;
    r["detail"] = t.detail;
    r["seconds"] = t.seconds;
    rows.push_back(r);
  }
  summary["results"] = rows;
  report.summary_json = summary.dump(2);

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    write_text_file(cfg.out_dir + "/results.csv", report.csv);
    write_text_file(cfg.out_dir + "/summary.json", report.summary_json);
  }
  return report;
}

ConvergenceStudy convergence_study(const ExperimentConfig& cfg) {
  validate_config(cfg);
  if (cfg.grids.size() < 3)
    throw std::invalid_argument("convergence_study: need >= 3 grid sizes");
  ConvergenceStudy study;
  study.target = cfg.converge_target;

  std::vector<double> values(cfg.grids.size());
  if (cfg.converge_target == "eigen") {
    const WarpedManifold M = manifold_from_config(cfg);
    std::exception_ptr failure;
    parallel::parallel_for(cfg.grids.size(), [&](std::size_t i) {
      try {
        values[i] = first_eigenvalue(M, cfg.lmax, cfg.grids[i]).lambda1_global;
      } catch (...) {
        failure = std::current_exception();
      }
    });
    if (failure) std::rethrow_exception(failure);
    // Richardson reference from the two finest grids (2nd-order scheme)
    const double vf = values.back(), vp = values[values.size() - 2];
    const double hf = 1.0 / cfg.grids.back(), hp = 1.0 / cfg.grids[cfg.grids.size() - 2];
    const double r2 = (hp / hf) * (hp / hf);
    const double ref = vf + (vf - vp) / (r2 - 1.0);
    for (std::size_t i = 0; i < values.size(); ++i)
      study.rows.push_back(
          {cfg.grids[i], values[i], std::abs(values[i] - ref) + 1e-15});
  } else {
    // manufactured solution of the model cone equation: exact power law
    const int n = cfg.dim;
    const double beta = cfg.preset == "football" ? cfg.beta : 0.0;
    const double lam = static_cast<double>(n - 1);
    const IndicialPair roots = indicial_roots(n, beta, lam);
    const double s = roots.alpha_plus + 1.0;
    const double Lam = lam / ((1.0 + beta) * (1.0 + beta));
    const double coef = s * (s + n - 2) - Lam;
    const double q = std::max(2.0, std::ceil(1.0 / (1.0 + beta)));
    for (std::size_t i = 0; i < cfg.grids.size(); ++i) {
      const auto g = make_graded_grid(1.0, cfg.grids[i], q, GradeEnd::Left);
      const SphereMode mode{1, lam, n};
      const auto sol = solve_radial_mode(
          mode, beta, n, [coef, s](double t) { return coef * std::pow(t, s - 2.0); },
          g, RadialBC::DirichletAtL, 1.0);
      double err = 0.0;
      for (std::size_t jn = 0; jn < sol.rho.size(); ++jn)
        err = std::max(err, std::abs(sol.u_fem[jn] - std::pow(sol.rho[jn], s)));
      study.rows.push_back({cfg.grids[i], sol.u_fem.back(), err + 1e-16});
    }
  }

  std::vector<double> orders;
  for (std::size_t i = 0; i + 1 < study.rows.size(); ++i) {
    const double e0 = study.rows[i].error, e1 = study.rows[i + 1].error;
    if (e1 > e0) study.monotone = false;
    const double hr = static_cast<double>(study.rows[i + 1].grid) / study.rows[i].grid;
    if (e0 > 0.0 && e1 > 0.0) orders.push_back(std::log(e0 / e1) / std::log(hr));
  }
  if (!orders.empty()) {
    std::sort(orders.begin(), orders.end());
    study.order = orders[orders.size() / 2];
  }
  study.order_ok = study.order >= 1.5;
  return study;
}

namespace {

std::string svg_plot(const std::vector<double>& x, const std::vector<double>& y,
                     const std::string& title) {
  const double W = 640, H = 480, m = 50;
  double xmin = x[0], xmax = x[0], ymin = y[0], ymax = y[0];
  for (std::size_t i = 0; i < x.size(); ++i) {
    xmin = std::min(xmin, x[i]);
    xmax = std::max(xmax, x[i]);
    ymin = std::min(ymin, y[i]);
    ymax = std::max(ymax, y[i]);
  }
  if (xmax - xmin < 1e-300) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-300) ymax = ymin + 1.0;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
       "viewBox=\"0 0 640 480\">\n";
  s << "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  s << "<text x=\"20\" y=\"24\" font-family=\"monospace\" font-size=\"14\">"
    << title << "</text>\n";
  s << "<rect x=\"" << m << "\" y=\"" << m << "\" width=\"" << (W - 2 * m)
    << "\" height=\"" << (H - 2 * m)
    << "\" fill=\"none\" stroke=\"black\"/>\n<polyline fill=\"none\" "
       "stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  char buf[64];
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double px = m + (W - 2 * m) * (x[i] - xmin) / (xmax - xmin);
    const double py = H - m - (H - 2 * m) * (y[i] - ymin) / (ymax - ymin);
    std::snprintf(buf, sizeof(buf), "%.3f,%.3f ", px, py);
    s << buf;
  }
  s << "\"/>\n</svg>\n";
  return s.str();
}

}  // namespace

void emit_plot_data(const RunReport& report, const std::string& out_dir) {
  if (report.results.empty()) return;
  std::filesystem::create_directories(out_dir);
  const WarpedManifold M = manifold_from_config(report.config);

  // profile f(r)
  {
    const auto grid = manifold_grid(M, 512);
    std::vector<double> fs;
    std::ostringstream csv;
    csv << "r,f\n";
    for (double r : grid) {
      const double f = M.profile.jet(r, true).f;
      fs.push_back(f);
      csv << format_double(r) << ',' << format_double(f) << '\n';
    }
    write_text_file(out_dir + "/profile.csv", csv.str());
    write_text_file(out_dir + "/profile.svg",
                    svg_plot(grid, fs, "warping profile f(r)"));
  }

  // minimizing eigenfunction
  {
    const EigenResult eig =
        first_eigenvalue(M, report.config.lmax, report.config.grids.back());
    const ModeEigen* best = nullptr;
    for (const auto& me : eig.per_mode)
      if (me.degree == eig.minimizing_degree) best = &me;
    if (best != nullptr) {
      std::ostringstream csv;
      csv << "r,phi\n";
      for (std::size_t i = 0; i < eig.grid.size(); ++i)
        csv << format_double(eig.grid[i]) << ',' << format_double(best->phi[i])
            << '\n';
      write_text_file(out_dir + "/eigenfunction.csv", csv.str());
      std::ostringstream title;
      title << "first eigenfunction (mode " << eig.minimizing_degree
            << ", lambda1 = " << eig.lambda1_global << ")";
      write_text_file(out_dir + "/eigenfunction.svg",
                      svg_plot(eig.grid, best->phi, title.str()));
    }
  }

  // log-log regularity fit for the manifold's cone coefficient
  {
    const double beta =
        M.left.kind == EndpointKind::Cone
            ? M.left.beta
            : (M.right.kind == EndpointKind::Cone ? M.right.beta : 0.0);
    const int n = M.dim;
    const double q = std::max(2.0, std::ceil(1.0 / (1.0 + beta)));
    const auto g = make_graded_grid(1.0, 1024, q, GradeEnd::Left);
    const SphereMode mode{1, static_cast<double>(n - 1), n};
    const auto sol = solve_radial_mode(
        mode, beta, n, [](double) { return 0.0; }, g, RadialBC::DirichletAtL, 1.0);
    std::vector<double> lx, ly;
    std::ostringstream csv;
    csv << "log_rho,log_u\n";
    for (std::size_t i = 0; i < sol.rho.size(); i += 16) {
      if (sol.u[i] <= 0.0) continue;
      lx.push_back(std::log(sol.rho[i]));
      ly.push_back(std::log(sol.u[i]));
      csv << format_double(lx.back()) << ',' << format_double(ly.back()) << '\n';
    }
    if (lx.size() >= 4) {
      write_text_file(out_dir + "/regularity_fit.csv", csv.str());
      std::ostringstream title;
      title << "log|u| vs log rho (slope ~ " << sol.roots.alpha_plus << ")";
      write_text_file(out_dir + "/regularity_fit.svg",
                      svg_plot(lx, ly, title.str()));
    }
  }
}

}  // namespace andrews

// Command-line front end: loads a config, runs one analysis or experiment,
// and serializes the results (JSON/CSV/PGM) for external plotting.

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "epicomp/config.hpp"
#include "epicomp/serialize.hpp"

namespace fs = std::filesystem;
using namespace epicomp;

namespace {

struct CliOverrides {
  std::string config_path;
  std::string out_dir = ".";
  std::string resolution;
  int k = -1;
  double nu = 0.0;
  bool nu_set = false;
  std::vector<std::string> sweeps;
  double tol = 0.0;
  bool tol_set = false;
  int threads = 0;
};

void add_common_options(CLI::App* sub, CliOverrides& o) {
  sub->add_option("-c,--config", o.config_path, "config file path")->required();
  sub->add_option("--out", o.out_dir, "output directory");
  sub->add_option("--resolution", o.resolution, "grid resolution NxM");
  sub->add_option("--k", o.k, "infection episodes per step (k_max for converge)");
  sub->add_option("--nu", [&o](const std::vector<std::string>& v) {
        o.nu = std::stod(v[0]);
        o.nu_set = true;
        return true;
      }, "susceptible fraction, bypasses beta/gamma")->expected(1);
  sub->add_option("--sweep", o.sweeps, "axis spec name=lo:hi:step (repeatable)");
  sub->add_option("--tol", [&o](const std::vector<std::string>& v) {
        o.tol = std::stod(v[0]);
        o.tol_set = true;
        return true;
      }, "tolerance override")->expected(1);
  sub->add_option("--threads", o.threads, "worker threads for grids/scans");
}

Config load_with_overrides(const CliOverrides& o) {
  Config cfg = load_config(o.config_path);
  if (o.k >= 0) cfg.run.k = o.k;
  if (o.nu_set) {
    if (!(o.nu > 0.0 && o.nu <= 1.0)) throw ConfigError("--nu must lie in (0,1]");
    cfg.run.nu = o.nu;
  }
  if (o.tol_set) {
    if (!(o.tol > 0.0)) throw ConfigError("--tol must be > 0");
    cfg.run.tol = o.tol;
  }
  if (o.threads > 0) cfg.run.threads = o.threads;
  if (!o.sweeps.empty()) cfg.run.sweep = o.sweeps;
  if (!o.resolution.empty()) {
    const auto x = o.resolution.find('x');
    if (x == std::string::npos)
      throw ConfigError("--resolution must look like NxM, got '" + o.resolution + "'");
    cfg.run.res_x = static_cast<int>(detail::parse_int(o.resolution.substr(0, x), 0));
    cfg.run.res_y = static_cast<int>(detail::parse_int(o.resolution.substr(x + 1), 0));
  }
  if (cfg.run.res_x <= 0 || cfg.run.res_y <= 0)
    throw ConfigError("resolution must be positive");
  return cfg;
}

ReducedParams reduced_from(const Config& cfg) {
  if (cfg.run.nu) return reduce_params_with_nu(cfg.demography, *cfg.run.nu);
  if (!cfg.has_disease)
    throw ConfigError("this command needs a [disease] section or run.nu / --nu");
  return reduce_params(cfg.demography, cfg.disease);
}

const DiseaseParams& disease_required(const Config& cfg) {
  if (!cfg.has_disease) throw ConfigError("this command needs a [disease] section");
  return cfg.disease;
}

FullState full_x0(const Config& cfg) {
  return {cfg.run.x0[0], cfg.run.x0[1], cfg.run.x0[2], cfg.run.x0[3]};
}

fs::path out_file(const CliOverrides& o, const std::string& name) {
  fs::create_directories(o.out_dir);
  return fs::path(o.out_dir) / name;
}

void write_json(const CliOverrides& o, const std::string& name, const json& j) {
  write_text_atomic(out_file(o, name), j.dump(2) + "\n");
}

void cmd_step(const CliOverrides& o) {
  const Config cfg = load_with_overrides(o);
  const FullState x0 = full_x0(cfg);
  FullState mid = x0;
  bool positivity = true;
  if (cfg.run.k > 0) {
    const DiseaseParams& d = disease_required(cfg);
    positivity = d.admissible();
    mid = disease_iterate(d, cfg.run.k, x0);
  }
  const FullState out = demographic_step(cfg.demography, mid);
  const json j{{"x0", to_json(x0)},
               {"k", cfg.run.k},
               {"after_infection_phase", to_json(mid)},
               {"result", to_json(out)},
               {"positivity_guaranteed", positivity}};
  write_json(o, "step.json", j);
  std::cout << j["result"].dump() << "\n";
}

void cmd_simulate(const CliOverrides& o) {
  const Config cfg = load_with_overrides(o);
  const ReducedParams rp = reduced_from(cfg);
  const ReducedState x0 = cfg.run.has_x0_reduced
                              ? ReducedState{cfg.run.x0_reduced[0], cfg.run.x0_reduced[1]}
                              : ReducedState{full_x0(cfg).total1(), full_x0(cfg).total2()};
  const OrbitResult orb = simulate_orbit(rp, x0, cfg.run.max_iter, cfg.run.tol);
  write_text_atomic(out_file(o, "orbit.csv"), orbit_csv(orb));
  json j{{"x0", to_json(x0)},
         {"converged", orb.converged},
         {"iterations", orb.iterations},
         {"monotone_from", orb.monotone_from},
         {"samples", orb.samples.size()}};
  if (orb.converged) j["limit"] = to_json(orb.limit);
  write_json(o, "simulate.json", j);
  if (orb.converged)
    std::cout << "limit " << fmt_real(orb.limit.n1) << " " << fmt_real(orb.limit.n2)
              << " after " << orb.iterations << " iterations\n";
  else
    std::cout << "not converged within " << cfg.run.max_iter << " iterations\n";
}

void cmd_reduce(const CliOverrides& o) {
  const Config cfg = load_with_overrides(o);
  const ReducedParams rp = reduced_from(cfg);
  write_json(o, "reduce.json", to_json(rp));
  std::cout << to_json(rp).dump() << "\n";
}

void cmd_equilibria(const CliOverrides& o) {
  const Config cfg = load_with_overrides(o);
  const ReducedParams rp = reduced_from(cfg);
  const EquilibriaResult res = find_equilibria(rp);
  json j = to_json(res);
  j["isoclines"] = {to_json(isocline(rp, 0)), to_json(isocline(rp, 1))};
  write_json(o, "equilibria.json", j);
  std::cout << res.equilibria.size() << " equilibria ("
            << res.positive().size() << " positive)\n";
}

void cmd_classify(const CliOverrides& o) {
  const Config cfg = load_with_overrides(o);
  const ReducedParams rp = reduced_from(cfg);
  const CaseLabel label = classify_case(rp);
  const EquilibriaResult res = find_equilibria(rp);
  json j{{"label", to_string(label)}, {"nu", rp.nu}};
  j["isoclines"] = {to_json(isocline(rp, 0)), to_json(isocline(rp, 1))};
  j.update(to_json(res));
  write_json(o, "classify.json", j);
  std::cout << to_string(label) << "\n";
}

void cmd_basin(const CliOverrides& o) {
  const Config cfg = load_with_overrides(o);
  const ReducedParams rp = reduced_from(cfg);
  BasinOptions opt;
  opt.match_tol = cfg.run.match_tol;
  opt.tol = cfg.run.tol;
  opt.max_iter = cfg.run.max_iter;
  opt.threads = cfg.run.threads;
  const BasinGrid grid = basin_grid(rp, cfg.run.res_x, cfg.run.res_y, opt);
  write_text_atomic(out_file(o, "basin.pgm"), basin_pgm(grid));
  write_text_atomic(out_file(o, "basin.csv"), basin_csv(grid));
  write_json(o, "basin.json", to_json(grid));
  std::vector<long> counts(grid.equilibria.size(), 0);
  long unresolved = 0;
  for (int lab : grid.labels) lab < 0 ? ++unresolved : ++counts[static_cast<std::size_t>(lab)];
  std::cout << "basin " << grid.nx << "x" << grid.ny << ":";
  for (std::size_t e = 0; e < counts.size(); ++e)
    if (counts[e] > 0) std::cout << " eq" << e << "=" << counts[e];
  std::cout << " unresolved=" << unresolved << "\n";
}

void cmd_bifurcate(const CliOverrides& o) {
  const Config cfg = load_with_overrides(o);
  std::optional<SweepSpec> nu_axis, param_axis;
  for (const std::string& s : cfg.run.sweep) {
    const SweepSpec spec = parse_sweep_spec(s);
    if (spec.name == "nu")
      nu_axis = spec;
    else
      param_axis = spec;
  }
  if (!nu_axis || !param_axis)
    throw ConfigError("bifurcate needs two sweep axes: nu=... and one demographic parameter");
  const BifurcationScan scan = bifurcation_scan(cfg.demography, param_axis->name,
                                                nu_axis->axis, param_axis->axis,
                                                cfg.run.threads);
  write_text_atomic(out_file(o, "bifurcation.csv"), bifurcation_csv(scan));
  json cols = json::array();
  for (std::size_t i_p = 0; i_p < scan.param_axis.size(); ++i_p) {
    json seq = json::array();
    for (CaseLabel lab : deduped_cases_descending_nu(scan, i_p)) seq.push_back(to_string(lab));
    cols.push_back(json{{scan.param_name, scan.param_axis[i_p]}, {"cases_nu_descending", seq}});
  }
  write_json(o, "bifurcation.json",
             json{{"param", scan.param_name},
                  {"nu_axis", scan.nu_axis},
                  {"param_axis", scan.param_axis},
                  {"columns", cols}});
  std::cout << "scanned " << scan.nu_axis.size() << "x" << scan.param_axis.size()
            << " grid over (nu, " << scan.param_name << ")\n";
}

void cmd_converge(const CliOverrides& o) {
  const Config cfg = load_with_overrides(o);
  const DiseaseParams& d = disease_required(cfg);
  const int k_max = o.k >= 1 ? o.k : cfg.run.k_max;
  const std::vector<FullState> grid =
      random_omega_grid(cfg.run.seed, cfg.run.grid_size, cfg.run.grid_span);
  const ConvergenceReport rep = certify_convergence(d, grid, k_max);
  write_text_atomic(out_file(o, "converge.csv"), convergence_csv(rep));
  write_json(o, "converge.json", to_json(rep));
  std::cout << "fitted_ratio " << fmt_real(rep.fitted_ratio) << " bound_c "
            << fmt_real(rep.bound_c) << "\n";
}

void cmd_correspond(const CliOverrides& o) {
  const Config cfg = load_with_overrides(o);
  const DiseaseParams& d = disease_required(cfg);
  const double tol = o.tol_set ? o.tol : 1e-3;
  const CorrespondenceReport rep =
      correspondence_check(cfg.demography, d, cfg.run.k, full_x0(cfg), tol);
  write_json(o, "correspond.json", to_json(rep));
  std::cout << "discrepancy " << fmt_real(rep.discrepancy) << " (tol " << fmt_real(tol)
            << (rep.within_tol ? ", ok" : ", exceeded") << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-species competition with a shared parasite: analysis lab"};
  app.require_subcommand(1);

  CliOverrides o;
  const std::pair<std::string, void (*)(const CliOverrides&)> cmds[] = {
      {"step", cmd_step},           {"simulate", cmd_simulate},
      {"reduce", cmd_reduce},       {"equilibria", cmd_equilibria},
      {"classify", cmd_classify},   {"basin", cmd_basin},
      {"bifurcate", cmd_bifurcate}, {"converge", cmd_converge},
      {"correspond", cmd_correspond}};
  static const std::map<std::string, std::string> descr = {
      {"step", "one step of the composed two-timescale map"},
      {"simulate", "iterate the reduced map to its limit"},
      {"reduce", "aggregated parameters of the reduced map"},
      {"equilibria", "equilibria of the reduced map with stability"},
      {"classify", "asymptotic-behaviour case label"},
      {"basin", "basin-of-attraction raster over the trapping box"},
      {"bifurcate", "case labels over a (nu, parameter) grid"},
      {"converge", "decay of the iterated infection map to its limit"},
      {"correspond", "full-model limit vs reduced-model prediction"}};
  for (const auto& [name, fn] : cmds) {
    CLI::App* sub = app.add_subcommand(name, descr.at(name));
    add_common_options(sub, o);
    sub->callback([&o, fn = fn] { fn(o); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

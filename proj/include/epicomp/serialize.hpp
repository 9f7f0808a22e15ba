#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "epicomp/config.hpp"
#include "epicomp/experiments.hpp"

namespace epicomp {

using json = nlohmann::ordered_json;

inline std::string fmt_real(double v) { return detail::fmt17(v); }

/// Writes via a sibling temp file plus rename, so readers never observe a
/// half-written output.
inline void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

inline json to_json(const FullState& x) {
  return json{{"nS1", x.nS1}, {"nI1", x.nI1}, {"nS2", x.nS2}, {"nI2", x.nI2}};
}

inline json to_json(const ReducedState& x) { return json::array({x.n1, x.n2}); }

inline json to_json(const ReducedParams& rp) {
  return json{{"nu", rp.nu},
              {"rS", rp.rS},
              {"rI", rp.rI},
              {"cS", {rp.cS[0], rp.cS[1]}},
              {"cI", {rp.cI[0], rp.cI[1]}}};
}

inline json to_json(const Equilibrium& e) {
  return json{{"location", to_json(e.location)},
              {"kind", to_string(e.kind)},
              {"eigenvalues",
               {{e.eigenvalues[0].real(), e.eigenvalues[0].imag()},
                {e.eigenvalues[1].real(), e.eigenvalues[1].imag()}}},
              {"stability", to_string(e.stability)},
              {"hyperbolic", e.hyperbolic}};
}

inline json to_json(const IsoclineBranch& b) {
  json j{{"species", b.species + 1},
         {"phi0", b.phi0},
         {"exists", b.exists},
         {"degenerate", b.degenerate},
         {"alpha", {b.alpha1, b.alpha2}},
         {"conic_minor", b.conic_minor},
         {"conic_det", b.conic_det}};
  if (b.exists) j["intercepts"] = {b.R1, b.R2};
  return j;
}

inline json to_json(const EquilibriaResult& res) {
  json eqs = json::array();
  for (const Equilibrium& e : res.equilibria) eqs.push_back(to_json(e));
  std::size_t positives = res.positive().size();
  return json{{"equilibria", eqs},
              {"positive_count", positives},
              {"non_generic", res.non_generic}};
}

inline json to_json(const ConvergenceReport& rep) {
  return json{{"k_values", rep.k_values},
              {"sup_errors", rep.sup_errors},
              {"fitted_ratio", rep.fitted_ratio},
              {"bound_c", rep.bound_c}};
}

inline json to_json(const CorrespondenceReport& rep) {
  return json{{"full_limit", to_json(rep.full_limit)},
              {"full_limit_fast_phase", to_json(rep.full_limit_fast_phase)},
              {"full_converged", rep.full_converged},
              {"reduced_limit", to_json(rep.reduced_limit)},
              {"reduced_converged", rep.reduced_converged},
              {"predicted", to_json(rep.predicted)},
              {"discrepancy", rep.discrepancy},
              {"tol", rep.tol},
              {"within_tol", rep.within_tol}};
}

inline std::string orbit_csv(const OrbitResult& orb) {
  std::string out = "t,n1,n2\n";
  for (std::size_t s = 0; s < orb.samples.size(); ++s) {
    out += std::to_string(orb.sample_t[s]);
    out += ',';
    out += fmt_real(orb.samples[s].n1);
    out += ',';
    out += fmt_real(orb.samples[s].n2);
    out += '\n';
  }
  return out;
}

inline std::string basin_csv(const BasinGrid& g) {
  std::string out = "ix,iy,x1,x2,label\n";
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const ReducedState c = g.cell_center(ix, iy);
      const int lab = g.label_at(ix, iy);
      out += std::to_string(ix) + "," + std::to_string(iy) + "," + fmt_real(c.n1) + "," +
             fmt_real(c.n2) + "," + (lab < 0 ? std::string("unresolved") : std::to_string(lab)) +
             "\n";
    }
  return out;
}

/// Gray level of basin label i among n equilibria; unresolved cells are 0.
inline int basin_gray(int label, std::size_t n_equilibria) {
  if (label < 0) return 0;
  return static_cast<int>(255.0 * (label + 1) / static_cast<double>(n_equilibria) + 0.5);
}

/// Plain-text PGM (P2) raster of the basin labels, row iy=0 at the top.
inline std::string basin_pgm(const BasinGrid& g) {
  std::string out = "P2\n" + std::to_string(g.nx) + " " + std::to_string(g.ny) + "\n255\n";
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      out += std::to_string(basin_gray(g.label_at(ix, iy), g.equilibria.size()));
      out += (ix + 1 == g.nx) ? '\n' : ' ';
    }
  }
  return out;
}

inline json to_json(const BasinGrid& g) {
  json eqs = json::array();
  for (const Equilibrium& e : g.equilibria) eqs.push_back(to_json(e));
  json grays = json::array();
  for (std::size_t e = 0; e < g.equilibria.size(); ++e)
    grays.push_back(basin_gray(static_cast<int>(e), g.equilibria.size()));
  return json{{"bounds", {{"x1_max", g.x1_max}, {"x2_max", g.x2_max}}},
              {"resolution", {g.nx, g.ny}},
              {"equilibria", eqs},
              {"gray_of_label", grays},
              {"unresolved_gray", 0}};
}

inline std::string bifurcation_csv(const BifurcationScan& scan) {
  std::string out = "nu," + scan.param_name + ",label\n";
  for (std::size_t i_nu = 0; i_nu < scan.nu_axis.size(); ++i_nu)
    for (std::size_t i_p = 0; i_p < scan.param_axis.size(); ++i_p) {
      out += fmt_real(scan.nu_axis[i_nu]) + "," + fmt_real(scan.param_axis[i_p]) + "," +
             to_string(scan.label_at(i_nu, i_p)) + "\n";
    }
  return out;
}

inline std::string convergence_csv(const ConvergenceReport& rep) {
  std::string out = "k,sup_error\n";
  for (std::size_t t = 0; t < rep.k_values.size(); ++t)
    out += std::to_string(rep.k_values[t]) + "," + fmt_real(rep.sup_errors[t]) + "\n";
  return out;
}

}  // namespace epicomp

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "epicomp/analysis.hpp"

namespace epicomp {

struct OrbitResult {
  std::vector<long> sample_t;         // iteration index of each stored sample
  std::vector<ReducedState> samples;  // every iterate up to 1000, then every 100th
  ReducedState limit;                 // final iterate (meaningful iff converged)
  bool converged = false;
  long iterations = 0;    // steps taken before the convergence streak began
  long monotone_from = 0; // index from which both components are monotone
};

/// Iterates the reduced map until the step norm stays below tol for 10
/// consecutive iterations (orbits of this map are eventually componentwise
/// monotone, so a sustained small step signals arrival) or max_iter is
/// reached.  keep_all stores every iterate instead of the thinned default.
inline OrbitResult simulate_orbit(const ReducedParams& rp, ReducedState x0,
                                  long max_iter = 1000000, double tol = 1e-12,
                                  bool keep_all = false) {
  if (!(tol > 0.0)) throw std::invalid_argument("simulate_orbit: tol must be > 0");
  if (max_iter < 0) throw std::invalid_argument("simulate_orbit: max_iter must be >= 0");
  constexpr int kStreak = 10;

  OrbitResult res;
  ReducedState x = x0;
  res.sample_t.push_back(0);
  res.samples.push_back(x);

  int streak = 0;
  int dir[2] = {0, 0};
  long last_reversal = 0;
  long t = 0;
  for (t = 1; t <= max_iter; ++t) {
    const ReducedState xn = reduced_step(rp, x);
    const double d[2] = {xn.n1 - x.n1, xn.n2 - x.n2};
    for (int comp = 0; comp < 2; ++comp) {
      if (d[comp] == 0.0) continue;
      const int s = d[comp] > 0.0 ? 1 : -1;
      if (dir[comp] != 0 && s != dir[comp]) last_reversal = t - 1;
      dir[comp] = s;
    }
    const double step = max_abs_diff(xn, x);
    x = xn;
    if (keep_all || t <= 1000 || t % 100 == 0) {
      res.sample_t.push_back(t);
      res.samples.push_back(x);
    }
    if (step < tol) {
      if (++streak == kStreak) break;
    } else {
      streak = 0;
    }
  }

  res.converged = streak >= kStreak;
  res.iterations = res.converged ? t - kStreak : max_iter;
  res.limit = x;
  res.monotone_from = last_reversal;
  if (res.sample_t.back() != std::min(t, max_iter)) {
    res.sample_t.push_back(std::min(t, max_iter));
    res.samples.push_back(x);
  }
  return res;
}

namespace detail {

inline void parallel_for(long n, int threads, const std::function<void(long, long)>& body) {
  if (threads <= 1 || n < 2) {
    body(0, n);
    return;
  }
  const int nt = static_cast<int>(std::min<long>(threads, n));
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int w = 0; w < nt; ++w) {
    const long lo = n * w / nt;
    const long hi = n * (w + 1) / nt;
    pool.emplace_back(body, lo, hi);
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace detail

struct BasinOptions {
  double match_tol = 1e-6;  // max-norm radius for matching a limit to an equilibrium
  double tol = 1e-12;
  long max_iter = 1000000;
  int threads = 1;
};

/// Raster of orbit destinations over the trapping box.
struct BasinGrid {
  double x1_max = 0, x2_max = 0;  // cell centers tile (0,x1_max) x (0,x2_max)
  int nx = 0, ny = 0;
  std::vector<int> labels;  // row-major iy*nx+ix; index into equilibria, -1 unresolved
  std::vector<Equilibrium> equilibria;

  int label_at(int ix, int iy) const { return labels[static_cast<std::size_t>(iy) * nx + ix]; }
  ReducedState cell_center(int ix, int iy) const {
    return {(ix + 0.5) * x1_max / nx, (iy + 0.5) * x2_max / ny};
  }
};

/// Simulates the orbit of every cell center and labels the cell with the
/// equilibrium its orbit reaches.  Cells whose orbit does not converge, or
/// converges to nothing in the equilibrium list, stay unresolved; they are
/// never silently assigned.  Parallel runs produce identical labels.
inline BasinGrid basin_grid(const ReducedParams& rp, int nx, int ny,
                            const BasinOptions& opt = {}) {
  if (nx <= 0 || ny <= 0)
    throw std::invalid_argument("basin_grid: resolution must be positive");
  BasinGrid grid;
  grid.nx = nx;
  grid.ny = ny;
  const ReducedState box = trapping_box(rp);
  grid.x1_max = box.n1;
  grid.x2_max = box.n2;
  grid.equilibria = find_equilibria(rp).equilibria;
  grid.labels.assign(static_cast<std::size_t>(nx) * ny, -1);

  detail::parallel_for(static_cast<long>(nx) * ny, opt.threads, [&](long lo, long hi) {
    for (long cell = lo; cell < hi; ++cell) {
      const int ix = static_cast<int>(cell % nx);
      const int iy = static_cast<int>(cell / nx);
      const OrbitResult orb =
          simulate_orbit(rp, grid.cell_center(ix, iy), opt.max_iter, opt.tol);
      if (!orb.converged) continue;
      for (std::size_t e = 0; e < grid.equilibria.size(); ++e) {
        if (max_abs_diff(orb.limit, grid.equilibria[e].location) <= opt.match_tol) {
          grid.labels[static_cast<std::size_t>(cell)] = static_cast<int>(e);
          break;
        }
      }
    }
  });
  return grid;
}

/// Uniform axis grid lo, lo+step, ..., up to hi (inclusive within rounding).
struct AxisSpec {
  double lo = 0, hi = 0, step = 1;

  std::vector<double> values() const {
    if (!(step > 0.0)) throw std::invalid_argument("axis step must be > 0");
    if (!(hi >= lo)) throw std::invalid_argument("axis needs hi >= lo");
    std::vector<double> v;
    const double slack = step * 1e-9;
    for (double x = lo; x <= hi + slack; x += step) v.push_back(std::min(x, hi));
    return v;
  }
};

struct BifurcationScan {
  std::string param_name;
  std::vector<double> nu_axis;
  std::vector<double> param_axis;
  std::vector<CaseLabel> labels;  // labels[i_nu * param_axis.size() + i_p]

  CaseLabel label_at(std::size_t i_nu, std::size_t i_p) const {
    return labels[i_nu * param_axis.size() + i_p];
  }
};

/// Case label over a (nu, demographic parameter) grid.  nu enters the
/// aggregation directly; the swept parameter is addressed by its config key
/// (bS1, bI2, c_SI_12, ...).
inline BifurcationScan bifurcation_scan(const DemographyParams& p,
                                        const std::string& param_name,
                                        const AxisSpec& nu_axis,
                                        const AxisSpec& param_axis, int threads = 1) {
  {
    DemographyParams probe = p;
    if (!set_demography_param(probe, param_name, 1.0))
      throw std::invalid_argument("bifurcation_scan: unknown parameter '" + param_name + "'");
  }
  BifurcationScan scan;
  scan.param_name = param_name;
  scan.nu_axis = nu_axis.values();
  scan.param_axis = param_axis.values();
  for (double nu : scan.nu_axis)
    if (!(nu > 0.0 && nu <= 1.0))
      throw std::invalid_argument("bifurcation_scan: nu values must lie in (0,1]");

  const std::size_t np = scan.param_axis.size();
  scan.labels.assign(scan.nu_axis.size() * np, CaseLabel::NonGeneric);
  detail::parallel_for(static_cast<long>(scan.labels.size()), threads, [&](long lo, long hi) {
    for (long idx = lo; idx < hi; ++idx) {
      const std::size_t i_nu = static_cast<std::size_t>(idx) / np;
      const std::size_t i_p = static_cast<std::size_t>(idx) % np;
      DemographyParams pp = p;
      set_demography_param(pp, param_name, scan.param_axis[i_p]);
      scan.labels[static_cast<std::size_t>(idx)] =
          classify_case(reduce_params_with_nu(pp, scan.nu_axis[i_nu]));
    }
  });
  return scan;
}

/// Distinct consecutive labels of one parameter column, read with nu
/// descending (the infection-free end first).
inline std::vector<CaseLabel> deduped_cases_descending_nu(const BifurcationScan& scan,
                                                          std::size_t i_p) {
  std::vector<CaseLabel> seq;
  for (std::size_t i_nu = scan.nu_axis.size(); i_nu-- > 0;) {
    const CaseLabel lab = scan.label_at(i_nu, i_p);
    if (seq.empty() || seq.back() != lab) seq.push_back(lab);
  }
  return seq;
}

struct CorrespondenceReport {
  FullState full_limit;             // fixed point of the composed map (post-demography)
  FullState full_limit_fast_phase;  // the same orbit sampled after the infection episodes
  bool full_converged = false;
  ReducedState reduced_limit;
  bool reduced_converged = false;
  FullState predicted;  // endemic proportions of the reduced limit
  double discrepancy = std::numeric_limits<double>::quiet_NaN();
  double tol = 0;
  bool within_tol = false;
};

/// Runs the four-variable model and the reduced model side by side from
/// matching initial conditions and compares their limits.
///
/// The composed map samples states right after the demographic episode,
/// where the infection classes are away from their endemic split; the
/// limit is therefore photographed after the k infection episodes (the
/// phase at which the reduction's equilibrium correspondence is stated)
/// before comparing against the endemic split of the reduced limit.
inline CorrespondenceReport correspondence_check(const DemographyParams& p,
                                                 const DiseaseParams& d, int k,
                                                 const FullState& x0, double tol = 1e-3) {
  if (!x0.in_omega())
    throw std::domain_error("correspondence_check: initial state must carry infection");
  const double nu = compute_nu(d);
  constexpr int kStreak = 10;
  constexpr long kMaxIter = 1000000;
  constexpr double kStepTol = 1e-12;

  CorrespondenceReport rep;
  rep.tol = tol;

  FullState x = x0;
  int streak = 0;
  for (long t = 0; t < kMaxIter && streak < kStreak; ++t) {
    const FullState xn = full_step(p, d, k, x);
    streak = max_abs_diff(xn, x) < kStepTol ? streak + 1 : 0;
    x = xn;
  }
  rep.full_converged = streak >= kStreak;
  rep.full_limit = x;
  rep.full_limit_fast_phase = disease_iterate(d, k, x);

  const OrbitResult red = simulate_orbit(reduce_params_with_nu(p, nu),
                                         {x0.total1(), x0.total2()}, kMaxIter, kStepTol);
  rep.reduced_converged = red.converged;
  rep.reduced_limit = red.limit;

  rep.predicted = {nu * red.limit.n1, (1.0 - nu) * red.limit.n1,
                   nu * red.limit.n2, (1.0 - nu) * red.limit.n2};
  if (rep.full_converged && rep.reduced_converged) {
    const double scale = std::max({rep.predicted.nS1, rep.predicted.nI1,
                                   rep.predicted.nS2, rep.predicted.nI2,
                                   std::numeric_limits<double>::min()});
    rep.discrepancy = max_abs_diff(rep.full_limit_fast_phase, rep.predicted) / scale;
    rep.within_tol = rep.discrepancy <= tol;
  }
  return rep;
}

/// Seeded sample of states with infection present and both species
/// populated, totals bounded by span.
inline std::vector<FullState> random_omega_grid(std::uint64_t seed, int count, double span) {
  if (count <= 0) throw std::invalid_argument("random_omega_grid: count must be > 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, span / 4.0);
  std::vector<FullState> grid;
  grid.reserve(static_cast<std::size_t>(count));
  while (grid.size() < static_cast<std::size_t>(count)) {
    FullState x{u(rng), u(rng), u(rng), u(rng)};
    if (x.in_omega() && x.total1() > 0.0 && x.total2() > 0.0) grid.push_back(x);
  }
  return grid;
}

}  // namespace epicomp

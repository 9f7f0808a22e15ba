#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "epicomp/model.hpp"

namespace epicomp {

/// Parameters of the planar map for the two species totals obtained when
/// the infection process equilibrates between demographic episodes.
///
///   H_i(x) = rS[i]*x_i / (1 + cS[i][0]*x1 + cS[i][1]*x2)
///          + rI[i]*x_i / (1 + cI[i][0]*x1 + cI[i][1]*x2)
///
/// nu is the equilibrium susceptible fraction (inverse of the parasite's
/// basic reproductive number).  nu = 1 is accepted only as a synthetic
/// disease-free baseline in which rI = 0 and the map collapses to the
/// classical two-species rational competition map.
struct ReducedParams {
  double nu = 1.0;
  std::array<double, 2> rS{};                 // bS[i] * nu, > 0
  std::array<double, 2> rI{};                 // bI[i] * (1 - nu), >= 0
  std::array<std::array<double, 2>, 2> cS{};  // cS[i][j] > 0
  std::array<std::array<double, 2>, 2> cI{};  // cI[i][j] > 0

  void validate() const {
    if (!(nu > 0.0 && nu <= 1.0))
      throw std::invalid_argument("nu must lie in (0,1]");
    for (int i = 0; i < 2; ++i) {
      if (!(rS[i] > 0.0)) throw std::invalid_argument("rS must be > 0");
      if (!(rI[i] >= 0.0)) throw std::invalid_argument("rI must be >= 0");
      for (int j = 0; j < 2; ++j)
        if (!(cS[i][j] > 0.0) || !(cI[i][j] > 0.0))
          throw std::invalid_argument("cS, cI must be > 0");
    }
  }
};

/// Equilibrium susceptible fraction gamma/beta of the infection process.
/// Requires a homogeneous disease in the endemic regime.
inline double compute_nu(const DiseaseParams& d) {
  if (!d.homogeneous())
    throw std::invalid_argument("reduction requires homogeneous disease parameters");
  if (!d.endemic_hypothesis())
    throw std::invalid_argument("reduction requires 0 < gamma < beta <= 1");
  return d.gamma[0] / d.beta[0][0];
}

/// Aggregated parameters for a given susceptible fraction nu.  Growth rates
/// are averaged over the two infection classes; each competition
/// coefficient pair is averaged over the competitor's class split.
inline ReducedParams reduce_params_with_nu(const DemographyParams& p, double nu) {
  if (!(nu > 0.0 && nu <= 1.0))
    throw std::invalid_argument("nu must lie in (0,1]");
  ReducedParams rp;
  rp.nu = nu;
  for (int i = 0; i < 2; ++i) {
    rp.rS[i] = p.bS[i] * nu;
    rp.rI[i] = p.bI[i] * (1.0 - nu);
    for (int j = 0; j < 2; ++j) {
      rp.cS[i][j] = nu * p.c[i][j][0][0] + (1.0 - nu) * p.c[i][j][0][1];
      rp.cI[i][j] = nu * p.c[i][j][1][0] + (1.0 - nu) * p.c[i][j][1][1];
    }
  }
  return rp;
}

inline ReducedParams reduce_params(const DemographyParams& p, const DiseaseParams& d) {
  return reduce_params_with_nu(p, compute_nu(d));
}

/// State with both species split in the endemic proportions (nu susceptible,
/// 1-nu infected) for the given totals.  A fixed point of disease_step.
inline FullState endemic_equilibrium(const DiseaseParams& d, double n1, double n2) {
  if (!(n1 >= 0.0 && n2 >= 0.0 && n1 + n2 > 0.0))
    throw std::invalid_argument("endemic_equilibrium: totals must be >= 0 with positive sum");
  const double nu = compute_nu(d);
  return {nu * n1, (1.0 - nu) * n1, nu * n2, (1.0 - nu) * n2};
}

/// Limit of the iterated infection map: projection of a state onto the
/// endemic proportions of its own species totals.  Idempotent.
inline FullState fast_limit_map(const DiseaseParams& d, const FullState& x) {
  const double nu = compute_nu(d);
  return {nu * x.total1(), (1.0 - nu) * x.total1(),
          nu * x.total2(), (1.0 - nu) * x.total2()};
}

struct ConvergenceReport {
  std::vector<int> k_values;
  std::vector<double> sup_errors;  // sup over the grid of |F^k(x) - Fbar(x)|_inf
  double fitted_ratio = 0.0;       // geometric decay estimate from the tail
  double bound_c = 0.0;            // max(1-gamma, |1-gamma-beta|)
};

/// Measures how fast the iterated infection map approaches its projection
/// limit over a finite grid of states, and fits the tail decay ratio.
///
/// The fit uses the last half of the k-range only, skipping transients; the
/// ratio is the exponential of the least-squares slope of log(sup_error).
/// Entries that have already collapsed to zero are excluded from the fit.
inline ConvergenceReport certify_convergence(const DiseaseParams& d,
                                             const std::vector<FullState>& grid,
                                             int k_max) {
  if (grid.empty())
    throw std::invalid_argument("certify_convergence: empty grid");
  if (k_max < 1)
    throw std::invalid_argument("certify_convergence: k_max must be >= 1");
  compute_nu(d);  // rejects heterogeneous or non-endemic parameters up front
  ConvergenceReport rep;
  rep.bound_c = std::max(1.0 - d.gamma[0], std::abs(1.0 - d.gamma[0] - d.beta[0][0]));

  std::vector<FullState> targets;
  targets.reserve(grid.size());
  for (const FullState& x : grid) {
    if (!x.in_omega())
      throw std::invalid_argument("certify_convergence: grid state outside the working set");
    targets.push_back(fast_limit_map(d, x));
  }

  std::vector<FullState> cur = grid;
  double total_scale = 1.0;
  for (const FullState& x : grid) total_scale = std::max(total_scale, x.total());
  rep.k_values.reserve(k_max);
  rep.sup_errors.reserve(k_max);
  for (int k = 1; k <= k_max; ++k) {
    double sup = 0.0;
    for (std::size_t g = 0; g < cur.size(); ++g) {
      cur[g] = disease_step(d, cur[g]).state;
      sup = std::max(sup, max_abs_diff(cur[g], targets[g]));
    }
    rep.k_values.push_back(k);
    rep.sup_errors.push_back(sup);
  }

  // Log-linear least squares on the tail.  Entries at the rounding floor
  // carry no decay information and are excluded; if the last half is all
  // floor, widen to everything past the initial transient.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * total_scale;
  const auto fit = [&rep, floor](std::size_t from) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t t = from; t < rep.sup_errors.size(); ++t) {
      if (rep.sup_errors[t] <= floor) continue;
      const double xk = static_cast<double>(rep.k_values[t]);
      const double yk = std::log(rep.sup_errors[t]);
      sx += xk; sy += yk; sxx += xk * xk; sxy += xk * yk;
      ++m;
    }
    if (m < 2) return -1.0;
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    return denom != 0.0 ? std::exp((static_cast<double>(m) * sxy - sx * sy) / denom) : -1.0;
  };
  double ratio = fit(rep.sup_errors.size() / 2);
  if (ratio < 0.0) ratio = fit(rep.sup_errors.size() / 4);
  rep.fitted_ratio = ratio < 0.0 ? 0.0 : ratio;
  return rep;
}

}  // namespace epicomp

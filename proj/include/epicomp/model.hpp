#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace epicomp {

/// Growth and competition parameters of the two-species demographic map.
///
/// The competition table is indexed c[i][j][A][B] with i the focal species,
/// j the competitor species, A the infection status (0 = susceptible,
/// 1 = infected) of the focal class and B the status of the competitor
/// class: c[i][j][A][B] scales the pressure that class (j,B) exerts on the
/// update of class (i,A).  The CLI config uses the equivalent key c_AB_ij.
struct DemographyParams {
  std::array<double, 2> bS{};  // growth rates of susceptibles, > 0
  std::array<double, 2> bI{};  // growth rates of infecteds, >= 0
  double c[2][2][2][2]{};      // competition coefficients, all > 0

  void validate() const {
    for (int i = 0; i < 2; ++i) {
      if (!(bS[i] > 0.0))
        throw std::invalid_argument("bS[" + std::to_string(i + 1) + "] must be > 0");
      if (!(bI[i] >= 0.0))
        throw std::invalid_argument("bI[" + std::to_string(i + 1) + "] must be >= 0");
      for (int j = 0; j < 2; ++j)
        for (int A = 0; A < 2; ++A)
          for (int B = 0; B < 2; ++B)
            if (!(c[i][j][A][B] > 0.0))
              throw std::invalid_argument("all competition coefficients must be > 0");
    }
  }

  /// True when, for every species pair, the coefficient does not depend on
  /// the infection status of either side (a plain 2x2 competition matrix).
  bool status_independent() const {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int A = 0; A < 2; ++A)
          for (int B = 0; B < 2; ++B)
            if (c[i][j][A][B] != c[i][j][0][0]) return false;
    return true;
  }
};

/// Transmission/recovery parameters of the infection map.
struct DiseaseParams {
  std::array<std::array<double, 2>, 2> beta{};  // transmission, beta[i][j] > 0
  std::array<double, 2> gamma{};                // recovery rates, > 0

  static DiseaseParams uniform(double beta_all, double gamma_all) {
    DiseaseParams d;
    d.beta = {{{beta_all, beta_all}, {beta_all, beta_all}}};
    d.gamma = {gamma_all, gamma_all};
    return d;
  }

  void validate() const {
    for (int i = 0; i < 2; ++i) {
      if (!(gamma[i] > 0.0)) throw std::invalid_argument("gamma must be > 0");
      for (int j = 0; j < 2; ++j)
        if (!(beta[i][j] > 0.0)) throw std::invalid_argument("beta must be > 0");
    }
  }

  /// All rates within (0,1]: the infection map then preserves the
  /// non-negative cone.
  bool admissible() const {
    for (int i = 0; i < 2; ++i) {
      if (!(gamma[i] > 0.0 && gamma[i] <= 1.0)) return false;
      for (int j = 0; j < 2; ++j)
        if (!(beta[i][j] > 0.0 && beta[i][j] <= 1.0)) return false;
    }
    return true;
  }

  /// Same transmission coefficient everywhere and equal recovery rates.
  bool homogeneous() const {
    const double b = beta[0][0];
    return beta[0][1] == b && beta[1][0] == b && beta[1][1] == b &&
           gamma[0] == gamma[1];
  }

  /// Homogeneous with 0 < gamma < beta <= 1: the regime in which the
  /// infection process admits a globally attracting endemic balance and the
  /// two-timescale reduction applies.
  bool endemic_hypothesis() const {
    return homogeneous() && gamma[0] > 0.0 && gamma[0] < beta[0][0] &&
           beta[0][0] <= 1.0;
  }
};

/// Population state (susceptible/infected counts for both species).
struct FullState {
  double nS1 = 0, nI1 = 0, nS2 = 0, nI2 = 0;

  double total1() const { return nS1 + nI1; }
  double total2() const { return nS2 + nI2; }
  double total() const { return nS1 + nI1 + nS2 + nI2; }
  bool nonnegative() const {
    return nS1 >= 0 && nI1 >= 0 && nS2 >= 0 && nI2 >= 0;
  }
  /// At least one infected individual present.
  bool in_omega() const { return nonnegative() && nI1 + nI2 > 0.0; }
};

inline double max_abs_diff(const FullState& a, const FullState& b) {
  return std::max(std::max(std::abs(a.nS1 - b.nS1), std::abs(a.nI1 - b.nI1)),
                  std::max(std::abs(a.nS2 - b.nS2), std::abs(a.nI2 - b.nI2)));
}

/// One demographic step: each of the four classes grows by a rational
/// Beverton-Holt-type factor whose denominator collects the weighted
/// pressure of all four classes.  Maps the non-negative cone into itself
/// and every coordinate hyperplane into itself.
inline FullState demographic_step(const DemographyParams& p, const FullState& x) {
  const double n[2][2] = {{x.nS1, x.nI1}, {x.nS2, x.nI2}};  // [species][status]
  double out[2][2];
  for (int i = 0; i < 2; ++i) {
    for (int A = 0; A < 2; ++A) {
      double den = 1.0;
      for (int j = 0; j < 2; ++j)
        for (int B = 0; B < 2; ++B) den += p.c[i][j][A][B] * n[j][B];
      const double b = (A == 0) ? p.bS[i] : p.bI[i];
      out[i][A] = b * n[i][A] / den;
    }
  }
  return {out[0][0], out[0][1], out[1][0], out[1][1]};
}

struct DiseaseStepResult {
  FullState state;
  /// False when some rate lies outside (0,1]; the formula is still
  /// evaluated but the image may leave the non-negative cone.
  bool positivity_guaranteed = true;
};

/// One infection/recovery step.  New infections arise from susceptibles at
/// a rate proportional to the infected frequency in the whole community;
/// recoveries return infecteds to the susceptible class.  Both species
/// totals are conserved exactly.
inline DiseaseStepResult disease_step(const DiseaseParams& d, const FullState& x) {
  const double T = x.total();
  if (!(T > 0.0))
    throw std::domain_error("disease_step: total population must be > 0");
  const double inc1 = x.nS1 * (d.beta[0][0] * x.nI1 + d.beta[0][1] * x.nI2) / T;
  const double inc2 = x.nS2 * (d.beta[1][0] * x.nI1 + d.beta[1][1] * x.nI2) / T;
  const double rec1 = d.gamma[0] * x.nI1;
  const double rec2 = d.gamma[1] * x.nI2;
  FullState y{x.nS1 - inc1 + rec1, x.nI1 + inc1 - rec1,
              x.nS2 - inc2 + rec2, x.nI2 + inc2 - rec2};
  return {y, d.admissible()};
}

/// One step of the two-timescale model: k infection/recovery episodes
/// followed by a single demographic episode.  k = 0 degenerates to pure
/// demography.
inline FullState full_step(const DemographyParams& p, const DiseaseParams& d,
                           int k, const FullState& x) {
  if (k < 0) throw std::invalid_argument("full_step: k must be >= 0");
  FullState y = x;
  for (int i = 0; i < k; ++i) y = disease_step(d, y).state;
  return demographic_step(p, y);
}

/// k infection/recovery episodes with no demography.
inline FullState disease_iterate(const DiseaseParams& d, int k, const FullState& x) {
  FullState y = x;
  for (int i = 0; i < k; ++i) y = disease_step(d, y).state;
  return y;
}

/// Writes one demographic parameter addressed by its config key: bS1, bS2,
/// bI1, bI2, or c_AB_ij with A,B in {S,I} and i,j in {1,2} (c_SI_12 is the
/// pressure of infected species-2 individuals on susceptible species-1
/// individuals).  Returns false for an unknown key.
inline bool set_demography_param(DemographyParams& p, const std::string& name,
                                 double value) {
  if (name == "bS1") { p.bS[0] = value; return true; }
  if (name == "bS2") { p.bS[1] = value; return true; }
  if (name == "bI1") { p.bI[0] = value; return true; }
  if (name == "bI2") { p.bI[1] = value; return true; }
  if (name.size() == 7 && name.rfind("c_", 0) == 0 && name[4] == '_') {
    const auto status = [](char ch) { return ch == 'S' ? 0 : (ch == 'I' ? 1 : -1); };
    const int A = status(name[2]), B = status(name[3]);
    const int i = name[5] - '1', j = name[6] - '1';
    if (A < 0 || B < 0 || i < 0 || i > 1 || j < 0 || j > 1) return false;
    p.c[i][j][A][B] = value;
    return true;
  }
  return false;
}

}  // namespace epicomp

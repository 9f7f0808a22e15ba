#pragma once

// Shared parameter sets and generators for the test suites.  The frozen
// numeric fixtures (equilibrium locations, case-band midpoints) were
// computed with an independent scripted implementation of the same maps
// and cross-checked against bisection before being pinned here.

#include <random>

#include "epicomp/analysis.hpp"
#include "epicomp/experiments.hpp"

namespace fixtures {

using namespace epicomp;

// Three-attractor showcase community (basin figure parameters).
inline DemographyParams showcase_demography() {
  DemographyParams p;
  p.bS = {13.0, 3.4};
  p.bI = {3.6, 8.0};
  const double pairs[2][2][2] = {  // [i][j] -> {c_S*, c_I*}: status-independent rows
      {{0.9, 0.1}, {1.1, 5.0}},
      {{6.0, 0.3}, {0.2, 0.8}}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int B = 0; B < 2; ++B) {
        p.c[i][j][0][B] = pairs[i][j][0];
        p.c[i][j][1][B] = pairs[i][j][1];
      }
  return p;
}

inline ReducedParams showcase_reduced() {
  return reduce_params_with_nu(showcase_demography(), 0.5);
}

// Frozen geometry of the showcase at nu = 0.5 (independent oracle values).
inline constexpr double kShowcaseR11 = 18.496358644003585;
inline constexpr double kShowcaseR12 = 5.405539369266109;
inline constexpr double kShowcaseR21 = 10.36849785265119;
inline constexpr double kShowcaseR22 = 10.145400677872487;
inline constexpr double kShowcaseE3[2] = {1.1080156042222695, 4.5730722584850865};
inline constexpr double kShowcaseE4[2] = {3.8171488963969455, 2.692337472945725};
inline constexpr double kShowcaseE5[2] = {8.292443686080757, 0.8130372251268093};

// Parasite-modified-competition community (bifurcation figure parameters);
// bS1 is the swept growth rate.
inline DemographyParams sweep_demography(double bS1 = 13.0) {
  DemographyParams p;
  p.bS = {bS1, 4.4};
  p.bI = {2.0, 9.0};
  const double table[2][2][4] = {  // [i][j] -> {c_SS, c_SI, c_IS, c_II}
      {{1.3, 0.5, 0.1, 0.1}, {1.0, 0.05, 8.0, 3.0}},
      {{6.0, 0.3, 0.3, 0.3}, {0.2, 0.2, 0.8, 0.8}}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      p.c[i][j][0][0] = table[i][j][0];
      p.c[i][j][0][1] = table[i][j][1];
      p.c[i][j][1][0] = table[i][j][2];
      p.c[i][j][1][1] = table[i][j][3];
    }
  return p;
}

// Mid-band (nu, bS1) representatives of the six cases crossed by the
// bS1 = 16 column, nu descending.
inline constexpr double kSweepBandNu[6] = {0.825, 0.598, 0.494, 0.373, 0.290, 0.139};
inline constexpr CaseLabel kSweepBandCase[6] = {CaseLabel::B1, CaseLabel::C0,
                                                CaseLabel::C2, CaseLabel::A1,
                                                CaseLabel::D2, CaseLabel::D0};

// Symmetric plain-competition baseline: growth 2, self-pressure 1,
// cross-pressure 1/2; coexists at (2/3, 2/3).
inline ReducedParams symmetric_lg() {
  ReducedParams rp;
  rp.nu = 1.0;
  rp.rS = {2.0, 2.0};
  rp.rI = {0.0, 0.0};
  rp.cS = {{{1.0, 0.5}, {0.5, 1.0}}};
  rp.cI = rp.cS;
  return rp;
}

// Direct reduced-parameter instances exercising the remaining multi-
// equilibrium cases (found by randomized search, classification confirmed
// by the oracle): A3 = attracting/saddle/attracting positives, C2 =
// attracting/saddle, D2 = saddle/attracting.
inline ReducedParams instance_a3() {
  ReducedParams rp;
  rp.nu = 0.5;
  rp.rS = {10.41, 7.70};
  rp.rI = {11.47, 6.0};
  rp.cS = {{{5.67, 0.136}, {0.184, 3.97}}};
  rp.cI = {{{0.57, 1.90}, {0.866, 0.236}}};
  return rp;
}

inline ReducedParams instance_c2() {
  ReducedParams rp;
  rp.nu = 0.5;
  rp.rS = {1.25, 0.59};
  rp.rI = {1.0, 1.14};
  rp.cS = {{{4.34, 0.197}, {4.67, 0.434}}};
  rp.cI = {{{0.264, 0.64}, {0.417, 0.185}}};
  return rp;
}

inline ReducedParams instance_d2() {
  ReducedParams rp;
  rp.nu = 0.5;
  rp.rS = {1.41, 4.52};
  rp.rI = {8.08, 3.82};
  rp.cS = {{{6.64, 2.65}, {4.07, 0.0892}}};
  rp.cI = {{{2.06, 0.467}, {0.828, 1.38}}};
  return rp;
}

// ---- random generators (seeded, uniform over log ranges for rates) ----

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
};

inline ReducedParams random_reduced(Rng& rng) {
  ReducedParams rp;
  rp.nu = rng.uniform(0.05, 1.0);
  for (int i = 0; i < 2; ++i) {
    rp.rS[i] = rng.log_uniform(0.2, 12.0);
    rp.rI[i] = rng.log_uniform(0.2, 12.0);
    for (int j = 0; j < 2; ++j) {
      rp.cS[i][j] = rng.log_uniform(0.05, 8.0);
      rp.cI[i][j] = rng.log_uniform(0.05, 8.0);
    }
  }
  return rp;
}

inline DemographyParams random_demography(Rng& rng) {
  DemographyParams p;
  for (int i = 0; i < 2; ++i) {
    p.bS[i] = rng.log_uniform(0.5, 15.0);
    p.bI[i] = rng.log_uniform(0.2, 10.0);
    for (int j = 0; j < 2; ++j)
      for (int A = 0; A < 2; ++A)
        for (int B = 0; B < 2; ++B) p.c[i][j][A][B] = rng.log_uniform(0.05, 8.0);
  }
  return p;
}

inline FullState random_omega_state(Rng& rng, double scale = 10.0) {
  FullState x;
  do {
    x = {rng.uniform(0.0, scale), rng.uniform(0.0, scale),
         rng.uniform(0.0, scale), rng.uniform(0.0, scale)};
  } while (!x.in_omega());
  return x;
}

}  // namespace fixtures

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "epicomp/reduction.hpp"

namespace epicomp {

/// Totals of the two species under the reduced planar map.
struct ReducedState {
  double n1 = 0, n2 = 0;
};

using Mat2 = std::array<std::array<double, 2>, 2>;

inline double max_abs_diff(const ReducedState& a, const ReducedState& b) {
  return std::max(std::abs(a.n1 - b.n1), std::abs(a.n2 - b.n2));
}

/// Per-capita growth factor of species i (0-based) at state x: the sum of
/// the susceptible-class and infected-class rational growth terms.
/// Strictly positive on the non-negative quadrant; the curve where it
/// equals 1 is the stationarity isocline of species i.
inline double per_capita_growth(const ReducedParams& rp, int i, const ReducedState& x) {
  const double denS = 1.0 + rp.cS[i][0] * x.n1 + rp.cS[i][1] * x.n2;
  const double denI = 1.0 + rp.cI[i][0] * x.n1 + rp.cI[i][1] * x.n2;
  return rp.rS[i] / denS + rp.rI[i] / denI;
}

/// One step of the reduced planar map H(x) = (g1(x)*x1, g2(x)*x2).
inline ReducedState reduced_step(const ReducedParams& rp, const ReducedState& x) {
  return {per_capita_growth(rp, 0, x) * x.n1, per_capita_growth(rp, 1, x) * x.n2};
}

/// Upper-right corner of the open trapping box: one application of the map
/// sends the whole non-negative quadrant into [0, b1) x [0, b2).
inline ReducedState trapping_box(const ReducedParams& rp) {
  return {rp.rS[0] / rp.cS[0][0] + (rp.rI[0] > 0.0 ? rp.rI[0] / rp.cI[0][0] : 0.0),
          rp.rS[1] / rp.cS[1][1] + (rp.rI[1] > 0.0 ? rp.rI[1] / rp.cI[1][1] : 0.0)};
}

namespace detail {

/// Non-negative root of A y^2 + B y + C = 0 with A > 0 and C <= 0 (so there
/// is exactly one, counting 0 at C = 0).  Uses the cancellation-free form of
/// the quadratic formula on both sign branches of B.
inline double nonnegative_quadratic_root(double A, double B, double C) {
  const double disc = B * B - 4.0 * A * C;
  const double sq = std::sqrt(std::max(disc, 0.0));
  double root;
  if (B >= 0.0) {
    const double q = B + sq;
    root = q > 0.0 ? -2.0 * C / q : 0.0;
  } else {
    root = (-B + sq) / (2.0 * A);
  }
  return std::max(root, 0.0);
}

}  // namespace detail

/// Geometry of one species' stationarity isocline.
///
/// The curve is a conic; it meets the open positive quadrant iff the growth
/// factor at the origin exceeds 1, in which case exactly one branch does,
/// written as a strictly decreasing convex height function over [0, R1]
/// with axis intercepts R1 and R2.
struct IsoclineBranch {
  int species = 0;       // 0-based
  double phi0 = 0;       // growth factor at the origin, rS + rI
  bool exists = false;   // phi0 > 1
  double R1 = 0, R2 = 0; // axis intercepts (meaningful iff exists)
  double alpha1 = 0, alpha2 = 0;  // linear coefficients of the intercept quadratics
  bool degenerate = false;        // conic splits into two parallel lines
  double conic_minor = 0;  // 2x2 discriminant, always <= 0
  double conic_det = 0;    // 3x3 discriminant, always >= 0
};

inline IsoclineBranch isocline(const ReducedParams& rp, int i) {
  IsoclineBranch br;
  br.species = i;
  br.phi0 = rp.rS[i] + rp.rI[i];
  br.exists = br.phi0 > 1.0;

  const double cross = rp.cS[i][0] * rp.cI[i][1] - rp.cS[i][1] * rp.cI[i][0];
  const double cscale = std::max(std::abs(rp.cS[i][0] * rp.cI[i][1]),
                                 std::abs(rp.cS[i][1] * rp.cI[i][0]));
  br.degenerate = std::abs(cross) <= 1e-12 * cscale;
  br.conic_minor = -0.25 * cross * cross;
  br.conic_det = 0.25 * rp.rS[i] * rp.rI[i] * cross * cross;

  // On axis j the curve satisfies cS*cI*x^2 - alpha*x - (phi0 - 1) = 0 with
  // alpha = cI*(rS - 1) + cS*(rI - 1); the positive root is the intercept.
  double alpha[2];
  for (int j = 0; j < 2; ++j)
    alpha[j] = rp.cI[i][j] * (rp.rS[i] - 1.0) + rp.cS[i][j] * (rp.rI[i] - 1.0);
  br.alpha1 = alpha[0];
  br.alpha2 = alpha[1];
  if (br.exists) {
    br.R1 = detail::nonnegative_quadratic_root(rp.cS[i][0] * rp.cI[i][0],
                                               -alpha[0], 1.0 - br.phi0);
    br.R2 = detail::nonnegative_quadratic_root(rp.cS[i][1] * rp.cI[i][1],
                                               -alpha[1], 1.0 - br.phi0);
  }
  return br;
}

/// Height of the isocline branch of species i over abscissa x1: the unique
/// x2 >= 0 with growth factor 1.  Defined for x1 in [0, R1].
inline double isocline_height(const ReducedParams& rp, int i, double x1) {
  const IsoclineBranch br = isocline(rp, i);
  if (!br.exists)
    throw std::domain_error("isocline_height: branch does not reach the positive quadrant");
  if (!(x1 >= 0.0 && x1 <= br.R1))
    throw std::domain_error("isocline_height: abscissa outside [0, R1]");

  if (br.degenerate) {
    // Two parallel lines; only the line through the intercepts crosses the
    // quadrant.  Solve the (constant-coefficient) quadratic for the level
    // of cS1*x1 + cS2*x2 on that line, then the height is linear.
    const double k = rp.cI[i][0] / rp.cS[i][0];
    const double L = detail::nonnegative_quadratic_root(
        k, 1.0 + k - rp.rS[i] * k - rp.rI[i], 1.0 - br.phi0);
    return std::max((L - rp.cS[i][0] * x1) / rp.cS[i][1], 0.0);
  }

  const double a1 = 1.0 + rp.cS[i][0] * x1;
  const double a2 = 1.0 + rp.cI[i][0] * x1;
  const double A = rp.cS[i][1] * rp.cI[i][1];
  const double B = rp.cI[i][1] * (a1 - rp.rS[i]) + rp.cS[i][1] * (a2 - rp.rI[i]);
  const double C = a1 * a2 - rp.rS[i] * a2 - rp.rI[i] * a1;
  return detail::nonnegative_quadratic_root(A, B, std::min(C, 0.0));
}

/// Jacobian of the reduced map from the closed-form partials of the growth
/// factors.
inline Mat2 jacobian(const ReducedParams& rp, const ReducedState& x) {
  Mat2 J{};
  const double xi[2] = {x.n1, x.n2};
  for (int i = 0; i < 2; ++i) {
    const double denS = 1.0 + rp.cS[i][0] * x.n1 + rp.cS[i][1] * x.n2;
    const double denI = 1.0 + rp.cI[i][0] * x.n1 + rp.cI[i][1] * x.n2;
    const double g = rp.rS[i] / denS + rp.rI[i] / denI;
    for (int j = 0; j < 2; ++j) {
      const double dg = -rp.rS[i] * rp.cS[i][j] / (denS * denS)
                        - rp.rI[i] * rp.cI[i][j] / (denI * denI);
      J[i][j] = (i == j ? g : 0.0) + xi[i] * dg;
    }
  }
  return J;
}

inline std::array<std::complex<double>, 2> eigenvalues_2x2(const Mat2& J) {
  const double tr = J[0][0] + J[1][1];
  const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
  const double disc = tr * tr - 4.0 * det;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    return {std::complex<double>((tr + s) / 2.0, 0.0),
            std::complex<double>((tr - s) / 2.0, 0.0)};
  }
  const double s = std::sqrt(-disc) / 2.0;
  return {std::complex<double>(tr / 2.0, s), std::complex<double>(tr / 2.0, -s)};
}

enum class EquilibriumKind { Trivial, Semitrivial1, Semitrivial2, Positive };
enum class Stability { Attracting, Saddle, Repelling, UnstableOther };

/// Margin on | |eigenvalue| - 1 | below which an equilibrium is reported
/// non-hyperbolic (and the configuration non-generic).
inline constexpr double kHyperbolicityMargin = 1e-9;

struct Equilibrium {
  ReducedState location;
  EquilibriumKind kind = EquilibriumKind::Trivial;
  std::array<std::complex<double>, 2> eigenvalues{};
  Stability stability = Stability::UnstableOther;
  bool hyperbolic = false;
};

inline Equilibrium make_equilibrium(const ReducedParams& rp, const ReducedState& loc,
                                    EquilibriumKind kind) {
  Equilibrium e;
  e.location = loc;
  e.kind = kind;
  e.eigenvalues = eigenvalues_2x2(jacobian(rp, loc));
  const double m0 = std::abs(e.eigenvalues[0]);
  const double m1 = std::abs(e.eigenvalues[1]);
  e.hyperbolic = std::abs(m0 - 1.0) > kHyperbolicityMargin &&
                 std::abs(m1 - 1.0) > kHyperbolicityMargin;
  if (!e.hyperbolic)
    e.stability = Stability::UnstableOther;
  else if (m0 < 1.0 && m1 < 1.0)
    e.stability = Stability::Attracting;
  else if (m0 > 1.0 && m1 > 1.0)
    e.stability = Stability::Repelling;
  else
    e.stability = Stability::Saddle;
  return e;
}

struct EquilibriaResult {
  std::vector<Equilibrium> equilibria;  // trivial, semitrivials, then positives
  bool non_generic = false;             // tangency suspected or > 3 positive roots

  std::vector<Equilibrium> positive() const {
    std::vector<Equilibrium> out;
    for (const Equilibrium& e : equilibria)
      if (e.kind == EquilibriumKind::Positive) out.push_back(e);
    return out;
  }
};

/// Number of subintervals in the root bracketing scan for intersections of
/// the two isocline branches.  The difference of two convex decreasing
/// height functions has at most 4 sign changes; the scan is far denser.
inline constexpr int kIsoclineScanIntervals = 10000;

/// All equilibria of the reduced map: the origin, one per-axis equilibrium
/// for each species whose growth factor at the origin exceeds 1, and every
/// intersection of the two isocline branches, found by a bracketing scan
/// plus bisection and returned with x1 ascending (equivalently x2
/// descending, the competitive ordering).
inline EquilibriaResult find_equilibria(const ReducedParams& rp) {
  EquilibriaResult res;
  res.equilibria.push_back(make_equilibrium(rp, {0.0, 0.0}, EquilibriumKind::Trivial));

  const IsoclineBranch b1 = isocline(rp, 0);
  const IsoclineBranch b2 = isocline(rp, 1);
  if (b1.exists)
    res.equilibria.push_back(make_equilibrium(rp, {b1.R1, 0.0}, EquilibriumKind::Semitrivial1));
  if (b2.exists)
    res.equilibria.push_back(make_equilibrium(rp, {0.0, b2.R2}, EquilibriumKind::Semitrivial2));
  if (!b1.exists || !b2.exists) return res;

  const double hi = std::min(b1.R1, b2.R1);
  const auto g = [&](double t) {
    return isocline_height(rp, 0, t) - isocline_height(rp, 1, t);
  };

  const int n = kIsoclineScanIntervals;
  const double lo = hi * 1e-12;  // stay off the axes
  std::vector<double> ts(n + 1), gs(n + 1);
  for (int s = 0; s <= n; ++s) {
    ts[s] = lo + (hi * (1.0 - 1e-12) - lo) * static_cast<double>(s) / n;
    gs[s] = g(ts[s]);
  }

  std::vector<double> roots;
  for (int s = 0; s < n; ++s) {
    if (gs[s] == 0.0) {
      roots.push_back(ts[s]);
      continue;
    }
    if (gs[s] * gs[s + 1] < 0.0) {
      double a = ts[s], b = ts[s + 1], fa = gs[s];
      for (int iter = 0; iter < 200 && b - a > 1e-15 * std::max(1.0, hi); ++iter) {
        const double m = 0.5 * (a + b);
        const double fm = g(m);
        if (fm == 0.0) { a = b = m; break; }
        if (fa * fm < 0.0) b = m; else { a = m; fa = fm; }
      }
      roots.push_back(0.5 * (a + b));
    }
  }

  // Tangency screen: an interior local minimum of |g| that nearly touches
  // zero without a sign change marks a (near-)double intersection.
  const double gscale = std::max({1.0, b1.R2, b2.R2});
  for (int s = 1; s < n; ++s) {
    const double m = std::abs(gs[s]);
    if (m <= std::abs(gs[s - 1]) && m <= std::abs(gs[s + 1]) &&
        gs[s - 1] * gs[s] > 0.0 && gs[s] * gs[s + 1] > 0.0 &&
        m < 1e-9 * gscale)
      res.non_generic = true;
  }
  if (roots.size() > 3) res.non_generic = true;

  for (double r : roots)
    res.equilibria.push_back(
        make_equilibrium(rp, {r, isocline_height(rp, 0, r)}, EquilibriumKind::Positive));
  return res;
}

enum class CaseLabel {
  Ext00, Ext1, Ext2, A1, A3, B1, B3, C0, C2, D0, D2, NonGeneric
};

inline const char* to_string(CaseLabel c) {
  switch (c) {
    case CaseLabel::Ext00: return "Ext00";
    case CaseLabel::Ext1: return "Ext1";
    case CaseLabel::Ext2: return "Ext2";
    case CaseLabel::A1: return "A1";
    case CaseLabel::A3: return "A3";
    case CaseLabel::B1: return "B1";
    case CaseLabel::B3: return "B3";
    case CaseLabel::C0: return "C0";
    case CaseLabel::C2: return "C2";
    case CaseLabel::D0: return "D0";
    case CaseLabel::D2: return "D2";
    case CaseLabel::NonGeneric: return "NonGeneric";
  }
  return "NonGeneric";
}

inline const char* to_string(Stability s) {
  switch (s) {
    case Stability::Attracting: return "attracting";
    case Stability::Saddle: return "saddle";
    case Stability::Repelling: return "repelling";
    case Stability::UnstableOther: return "unstable-other";
  }
  return "unstable-other";
}

inline const char* to_string(EquilibriumKind k) {
  switch (k) {
    case EquilibriumKind::Trivial: return "trivial";
    case EquilibriumKind::Semitrivial1: return "semitrivial-1";
    case EquilibriumKind::Semitrivial2: return "semitrivial-2";
    case EquilibriumKind::Positive: return "positive";
  }
  return "positive";
}

/// Relative tolerance for treating two axis intercepts as tied (case
/// boundaries are non-generic).
inline constexpr double kInterceptTieTol = 1e-9;

/// Asymptotic-behaviour case of the reduced map.
///
/// Extinction labels apply when some species cannot grow at the origin;
/// otherwise the letter encodes the relative order of the axis intercepts
/// of the two isoclines and the subindex counts positive equilibria.  The
/// letter admits only one parity of the count (A, B odd; C, D even);
/// mismatches, intercept ties, suspected tangencies and non-hyperbolic
/// equilibria all yield NonGeneric.
inline CaseLabel classify_case(const ReducedParams& rp) {
  const double p1 = rp.rS[0] + rp.rI[0];
  const double p2 = rp.rS[1] + rp.rI[1];
  if (p1 <= 1.0 && p2 <= 1.0) return CaseLabel::Ext00;
  if (p1 > 1.0 && p2 <= 1.0) return CaseLabel::Ext1;
  if (p2 > 1.0 && p1 <= 1.0) return CaseLabel::Ext2;

  const IsoclineBranch b1 = isocline(rp, 0);
  const IsoclineBranch b2 = isocline(rp, 1);
  const auto tied = [](double a, double b) {
    return std::abs(a - b) <= kInterceptTieTol * std::max(std::abs(a), std::abs(b));
  };
  if (tied(b1.R1, b2.R1) || tied(b1.R2, b2.R2)) return CaseLabel::NonGeneric;

  const EquilibriaResult eq = find_equilibria(rp);
  if (eq.non_generic) return CaseLabel::NonGeneric;
  std::size_t s = 0;
  for (const Equilibrium& e : eq.equilibria) {
    if (!e.hyperbolic && e.kind != EquilibriumKind::Trivial) return CaseLabel::NonGeneric;
    if (e.kind == EquilibriumKind::Positive) ++s;
  }

  const bool r1_less = b1.R1 < b2.R1;   // species 1 intercept vs species 2, on axis 1
  const bool r2_greater = b1.R2 > b2.R2;
  if (r1_less && r2_greater)
    return s == 1 ? CaseLabel::A1 : (s == 3 ? CaseLabel::A3 : CaseLabel::NonGeneric);
  if (!r1_less && !r2_greater)
    return s == 1 ? CaseLabel::B1 : (s == 3 ? CaseLabel::B3 : CaseLabel::NonGeneric);
  if (!r1_less && r2_greater)
    return s == 0 ? CaseLabel::C0 : (s == 2 ? CaseLabel::C2 : CaseLabel::NonGeneric);
  return s == 0 ? CaseLabel::D0 : (s == 2 ? CaseLabel::D2 : CaseLabel::NonGeneric);
}

/// Outcome coefficients for the status-independent competition setting
/// (the infection alters growth rates only, not competitive abilities).
///
/// D1/D2 describe the infection-free community, D1bar/D2bar the community
/// with the endemic infection; the latter split exactly into the
/// nu-weighted combination of the all-susceptible and all-infected parts.
struct OutcomeCoefficients {
  double D1 = 0, D2 = 0;          // infection-free (susceptible growth rates)
  double D1bar = 0, D2bar = 0;    // endemic community (averaged growth rates)
  double D1barI = 0, D2barI = 0;  // all-infected component
  double D1barS = 0, D2barS = 0;  // all-susceptible component
  /// Growth of infecteds below replacement: a sufficiently infectious
  /// parasite then drives the species extinct.
  std::array<bool, 2> extinct_for_large_R0{false, false};
};

inline OutcomeCoefficients outcome_coefficients(const DemographyParams& p,
                                                const DiseaseParams& d) {
  if (!p.status_independent())
    throw std::invalid_argument(
        "outcome_coefficients: competition coefficients depend on infection "
        "status; outcome coefficients are undefined");
  const double nu = compute_nu(d);
  const double c11 = p.c[0][0][0][0], c12 = p.c[0][1][0][0];
  const double c21 = p.c[1][0][0][0], c22 = p.c[1][1][0][0];
  const double bbar1 = nu * p.bS[0] + (1.0 - nu) * p.bI[0];
  const double bbar2 = nu * p.bS[1] + (1.0 - nu) * p.bI[1];

  OutcomeCoefficients oc;
  oc.D1 = (p.bS[0] - 1.0) / c11 - (p.bS[1] - 1.0) / c21;
  oc.D2 = (p.bS[1] - 1.0) / c22 - (p.bS[0] - 1.0) / c12;
  oc.D1bar = (bbar1 - 1.0) / c11 - (bbar2 - 1.0) / c21;
  oc.D2bar = (bbar2 - 1.0) / c22 - (bbar1 - 1.0) / c12;
  oc.D1barI = (p.bI[0] - 1.0) / c11 - (p.bI[1] - 1.0) / c21;
  oc.D2barI = (p.bI[1] - 1.0) / c22 - (p.bI[0] - 1.0) / c12;
  oc.D1barS = (p.bS[0] - 1.0) / c11 - (p.bS[1] - 1.0) / c21;
  oc.D2barS = (p.bS[1] - 1.0) / c22 - (p.bS[0] - 1.0) / c12;
  oc.extinct_for_large_R0 = {p.bI[0] < 1.0, p.bI[1] < 1.0};
  return oc;
}

/// Competition outcome predicted by the signs of the two outcome
/// coefficients for a plain rational competition map with both growth rates
/// above 1: exclusion of one species, coexistence, or initial-condition
/// dependent exclusion.
inline CaseLabel case_from_outcome_signs(double D1, double D2) {
  if (D1 > 0.0 && D2 < 0.0) return CaseLabel::C0;  // species 1 wins
  if (D1 < 0.0 && D2 > 0.0) return CaseLabel::D0;  // species 2 wins
  if (D1 < 0.0 && D2 < 0.0) return CaseLabel::A1;  // coexistence
  if (D1 > 0.0 && D2 > 0.0) return CaseLabel::B1;  // founder control
  return CaseLabel::NonGeneric;
}

}  // namespace epicomp

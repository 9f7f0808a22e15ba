// Acceptance suite: exercises every headline reproduction and property
// criterion at its stated tolerance and prints one pass/fail line per
// criterion.  Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "epicomp/config.hpp"
#include "epicomp/serialize.hpp"
#include "fixtures.hpp"

namespace fs = std::filesystem;
using namespace epicomp;

namespace {

int g_checks_failed = 0;

void expect(bool ok, const std::string& what) {
  if (!ok) {
    ++g_checks_failed;
    std::cout << "    check failed: " << what << "\n";
  }
}

std::string case_seq_str(const std::vector<CaseLabel>& seq) {
  std::string s;
  for (CaseLabel c : seq) {
    if (!s.empty()) s += ",";
    s += to_string(c);
  }
  return s;
}

// ---------------------------------------------------------------- 1 ----
bool criterion_1_showcase_reproduction() {
  const auto t0 = std::chrono::steady_clock::now();

  // the CLI surface: classify on the shipped config prints B3
  const fs::path dir = fs::temp_directory_path() / "epicomp_acceptance_c1";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cmd = std::string(EPICOMP_CLI_BIN) + " classify -c " +
                          EPICOMP_CONFIG_DIR + "/fig2.toml --out " + dir.string() +
                          " > " + (dir / "stdout.txt").string();
  expect(std::system(cmd.c_str()) == 0, "classify exits 0");
  {
    std::ifstream in(dir / "stdout.txt");
    std::string line;
    std::getline(in, line);
    expect(line == "B3", "classify prints B3, got '" + line + "'");
  }

  const ReducedParams rp = fixtures::showcase_reduced();
  const EquilibriaResult res = find_equilibria(rp);
  const auto pos = res.positive();
  expect(pos.size() == 3, "exactly 3 positive equilibria");
  if (pos.size() == 3) {
    expect(pos[0].stability == Stability::Saddle, "first positive is a saddle");
    expect(pos[1].stability == Stability::Attracting, "middle positive attracts");
    expect(pos[2].stability == Stability::Saddle, "last positive is a saddle");
  }
  for (const Equilibrium& e : res.equilibria)
    if (e.kind == EquilibriumKind::Semitrivial1 || e.kind == EquilibriumKind::Semitrivial2)
      expect(e.stability == Stability::Attracting, "axis equilibria attract");

  const BasinGrid grid = basin_grid(rp, 200, 200);
  std::vector<long> counts(grid.equilibria.size(), 0);
  for (int lab : grid.labels)
    if (lab >= 0) ++counts[static_cast<std::size_t>(lab)];
  int populated_attractors = 0;
  for (std::size_t e = 0; e < grid.equilibria.size(); ++e)
    if (grid.equilibria[e].stability == Stability::Attracting && counts[e] > 0)
      ++populated_attractors;
  expect(populated_attractors == 3, "three attractors own nonempty basins");

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "    basin 200x200 + classify in " << seconds << " s\n";
  expect(seconds <= 60.0, "runtime within 60 s");
  return g_checks_failed == 0;
}

// ---------------------------------------------------------------- 2 ----
bool criterion_2_case_diagram() {
  const DemographyParams p = fixtures::sweep_demography();

  const AxisSpec fine_nu{0.0005, 0.9995, 0.0005};
  const auto column_cases = [&](double bS1) {
    const BifurcationScan scan =
        bifurcation_scan(p, "bS1", fine_nu, {bS1, bS1, 1.0}, 4);
    return deduped_cases_descending_nu(scan, 0);
  };

  const std::vector<CaseLabel> want16{CaseLabel::B1, CaseLabel::C0, CaseLabel::C2,
                                      CaseLabel::A1, CaseLabel::D2, CaseLabel::D0};
  const std::vector<CaseLabel> got16 = column_cases(16.0);
  expect(got16 == want16, "bS1=16 column = B1,C0,C2,A1,D2,D0 (got " +
                              case_seq_str(got16) + ")");

  const std::vector<CaseLabel> want157{CaseLabel::B1, CaseLabel::B3, CaseLabel::C2,
                                       CaseLabel::A1, CaseLabel::D2, CaseLabel::D0};
  const std::vector<CaseLabel> got157 = column_cases(15.7);
  expect(got157 == want157, "bS1=15.7 column = B1,B3,C2,A1,D2,D0 (got " +
                                case_seq_str(got157) + ")");

  // transition-nu positions are artifact facts; assert only their order
  const BifurcationScan scan16 = bifurcation_scan(p, "bS1", fine_nu, {16.0, 16.0, 1.0}, 4);
  std::vector<double> transitions;
  for (std::size_t i = scan16.nu_axis.size(); i-- > 1;)
    if (scan16.label_at(i, 0) != scan16.label_at(i - 1, 0))
      transitions.push_back(scan16.nu_axis[i]);
  bool ordered = true;
  for (std::size_t t = 1; t < transitions.size(); ++t)
    ordered = ordered && transitions[t] < transitions[t - 1];
  expect(ordered, "transition nus strictly ordered");

  const AxisSpec bs_axis{2.0, 20.0, 0.5};
  const BifurcationScan row = bifurcation_scan(p, "bS1", {0.99, 0.99, 1.0}, bs_axis, 4);
  for (std::size_t i_p = 0; i_p < row.param_axis.size(); ++i_p) {
    const double b = row.param_axis[i_p];
    if (b <= 17.5)
      expect(row.label_at(0, i_p) == CaseLabel::B1,
             "nu=0.99, bS1=" + std::to_string(b) + " is B1");
    else if (b >= 18.5)
      expect(row.label_at(0, i_p) == CaseLabel::C0,
             "nu=0.99, bS1=" + std::to_string(b) + " is C0");
  }
  return g_checks_failed == 0;
}

// ---------------------------------------------------------------- 3 ----
bool criterion_3_plain_competition_limit() {
  fixtures::Rng rng(31);

  // nu = 1 reproduces the plain two-species competition map
  for (int trial = 0; trial < 100; ++trial) {
    DemographyParams p = fixtures::random_demography(rng);
    const ReducedParams rp = reduce_params_with_nu(p, 1.0);
    const double x1 = rng.uniform(0.0, 20.0), x2 = rng.uniform(0.0, 20.0);
    const ReducedState y = reduced_step(rp, {x1, x2});
    const double lg1 = p.bS[0] * x1 / (1.0 + p.c[0][0][0][0] * x1 + p.c[0][1][0][0] * x2);
    const double lg2 = p.bS[1] * x2 / (1.0 + p.c[1][0][0][0] * x1 + p.c[1][1][0][0] * x2);
    expect(std::abs(y.n1 - lg1) <= 1e-14 * std::max(1.0, std::abs(lg1)) &&
               std::abs(y.n2 - lg2) <= 1e-14 * std::max(1.0, std::abs(lg2)),
           "nu=1 step equals the plain competition update");
  }

  // classification agrees with the sign table of the outcome coefficients
  int tested = 0;
  while (tested < 200) {
    const double b1 = rng.uniform(1.01, 8.0), b2 = rng.uniform(1.01, 8.0);
    const double c11 = rng.log_uniform(0.05, 5.0), c12 = rng.log_uniform(0.05, 5.0);
    const double c21 = rng.log_uniform(0.05, 5.0), c22 = rng.log_uniform(0.05, 5.0);
    const double D1 = (b1 - 1.0) / c11 - (b2 - 1.0) / c21;
    const double D2 = (b2 - 1.0) / c22 - (b1 - 1.0) / c12;
    if (std::abs(D1) < 1e-6 || std::abs(D2) < 1e-6) continue;  // stay generic
    ++tested;
    ReducedParams rp;
    rp.nu = 1.0;
    rp.rS = {b1, b2};
    rp.rI = {0.0, 0.0};
    rp.cS = {{{c11, c12}, {c21, c22}}};
    rp.cI = rp.cS;
    const CaseLabel got = classify_case(rp);
    const CaseLabel want = case_from_outcome_signs(D1, D2);
    expect(got == want, std::string("sign table scenario ") + to_string(want) +
                            " vs classified " + to_string(got));
  }
  return g_checks_failed == 0;
}

// ---------------------------------------------------------------- 4 ----
bool criterion_4_fast_dynamics_certification() {
  const DiseaseParams d = DiseaseParams::uniform(0.8, 0.4);
  const std::vector<FullState> grid = random_omega_grid(41, 100, 10.0);

  const ConvergenceReport rep = certify_convergence(d, grid, 60);
  std::cout << "    fitted ratio " << rep.fitted_ratio << " (bound " << rep.bound_c << ")\n";
  expect(rep.bound_c == 0.6, "decay bound constant is 0.6");
  expect(rep.fitted_ratio <= 0.62, "fitted decay ratio <= 0.62");

  // species totals conserved along every step of every grid orbit
  for (const FullState& x0 : grid) {
    FullState x = x0;
    for (int k = 0; k < 60; ++k) {
      x = disease_step(d, x).state;
      if (std::abs(x.total1() - x0.total1()) > 1e-12 * std::max(1.0, x0.total1()) ||
          std::abs(x.total2() - x0.total2()) > 1e-12 * std::max(1.0, x0.total2())) {
        expect(false, "conservation of species totals at 1e-12");
        return false;
      }
    }
  }
  return g_checks_failed == 0;
}

// ---------------------------------------------------------------- 5 ----
bool criterion_5_limit_correspondence() {
  const DemographyParams p = fixtures::showcase_demography();
  const DiseaseParams d = DiseaseParams::uniform(0.8, 0.4);
  fixtures::Rng rng(51);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const FullState x0{rng.uniform(0.05, 8.0), rng.uniform(0.05, 8.0),
                       rng.uniform(0.05, 8.0), rng.uniform(0.05, 8.0)};
    const CorrespondenceReport rep = correspondence_check(p, d, 100, x0, 1e-3);
    expect(rep.full_converged && rep.reduced_converged, "both simulations converge");
    expect(rep.within_tol, "limit within 1e-3 relative of the endemic split");
    if (rep.discrepancy > worst) worst = rep.discrepancy;
  }
  std::cout << "    worst relative discrepancy " << worst << "\n";
  return g_checks_failed == 0;
}

// ---------------------------------------------------------------- 6 ----
bool criterion_6_property_suites() {
  fixtures::Rng rng(61);

  // trapping box containment
  for (int trial = 0; trial < 10000; ++trial) {
    const ReducedParams rp = fixtures::random_reduced(rng);
    const ReducedState box = trapping_box(rp);
    const ReducedState y =
        reduced_step(rp, {rng.uniform(0.0, 100.0), rng.uniform(0.0, 100.0)});
    if (!(y.n1 >= 0 && y.n2 >= 0 && y.n1 < box.n1 && y.n2 < box.n2)) {
      expect(false, "trapping box containment");
      break;
    }
  }

  // strong competitiveness on interior ordered pairs
  for (int trial = 0; trial < 10000; ++trial) {
    const ReducedParams rp = fixtures::random_reduced(rng);
    const double x1 = rng.uniform(1e-6, 20.0), x2 = rng.uniform(1e-6, 20.0);
    double dx = rng.uniform(0.0, 5.0), dy = rng.uniform(0.0, x2 * 0.999);
    if (dx == 0.0 && dy == 0.0) dx = 1e-3;
    const ReducedState a{x1, x2}, b{x1 + dx, x2 - dy};
    const ReducedState ha = reduced_step(rp, a), hb = reduced_step(rp, b);
    if (!(ha.n1 < hb.n1 && ha.n2 > hb.n2)) {
      expect(false, "strong competitiveness");
      break;
    }
  }

  // derivative sign structure on the trapping box
  {
    const ReducedParams rp = fixtures::showcase_reduced();
    const ReducedState box = trapping_box(rp);
    for (int trial = 0; trial < 10000; ++trial) {
      const ReducedState x{rng.uniform(0.0, box.n1), rng.uniform(0.0, box.n2)};
      const Mat2 J = jacobian(rp, x);
      if (!(J[0][0] > 0 && J[1][1] > 0 && J[0][1] <= 0 && J[1][0] <= 0 &&
            J[0][0] * J[1][1] - J[0][1] * J[1][0] > 0)) {
        expect(false, "jacobian sign pattern and determinant");
        break;
      }
    }
  }

  // isocline height decreasing and convex
  int tested = 0;
  while (tested < 200) {
    const ReducedParams rp = fixtures::random_reduced(rng);
    const IsoclineBranch b = isocline(rp, 0);
    if (!b.exists) continue;
    ++tested;
    const int n = 40;
    std::vector<double> h(n + 1);
    for (int s = 0; s <= n; ++s)
      h[s] = isocline_height(rp, 0, s == n ? b.R1 : b.R1 * s / n);
    for (int s = 0; s < n; ++s)
      if (h[s + 1] > h[s] + 1e-12) expect(false, "height decreasing");
    for (int s = 0; s + 2 <= n; ++s)
      if (h[s + 2] - 2 * h[s + 1] + h[s] < -1e-7 * std::max(1.0, h[0]))
        expect(false, "height convex");
  }

  // intercept formula against the 1-D bisection oracle
  tested = 0;
  while (tested < 1000) {
    const ReducedParams rp = fixtures::random_reduced(rng);
    for (int i = 0; i < 2; ++i) {
      const IsoclineBranch b = isocline(rp, i);
      if (!b.exists) continue;
      ++tested;
      for (int axis = 0; axis < 2; ++axis) {
        const double ref = [&] {
          const auto f = [&](double t) {
            const ReducedState x = axis == 0 ? ReducedState{t, 0.0} : ReducedState{0.0, t};
            return per_capita_growth(rp, i, x) - 1.0;
          };
          double hi = 1.0;
          while (f(hi) > 0.0) hi *= 2.0;
          double lo = 0.0;
          for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            (f(mid) > 0.0 ? lo : hi) = mid;
          }
          return 0.5 * (lo + hi);
        }();
        const double val = axis == 0 ? b.R1 : b.R2;
        if (std::abs(val - ref) > 1e-10 * std::max(1.0, ref)) {
          expect(false, "intercept formula matches bisection to 1e-10");
          axis = 2;
          tested = 1000;
        }
      }
    }
  }

  // orbit limits land on computed equilibria
  {
    const ReducedParams rp = fixtures::showcase_reduced();
    const EquilibriaResult res = find_equilibria(rp);
    for (int trial = 0; trial < 500; ++trial) {
      const OrbitResult orb =
          simulate_orbit(rp, {rng.uniform(1e-3, 25.0), rng.uniform(1e-3, 13.0)});
      bool matched = false;
      for (const Equilibrium& e : res.equilibria)
        matched = matched || max_abs_diff(e.location, orb.limit) <= 1e-6;
      if (!orb.converged || !matched) {
        expect(false, "orbit limit matches a computed equilibrium at 1e-6");
        break;
      }
    }
  }

  // saddles attract none of 1000 random interior orbits, per sampled case
  const struct {
    ReducedParams rp;
    const char* name;
  } multi[] = {{fixtures::instance_a3(), "A3"},
               {fixtures::showcase_reduced(), "B3"},
               {fixtures::instance_c2(), "C2"},
               {fixtures::instance_d2(), "D2"}};
  for (const auto& tc : multi) {
    const EquilibriaResult res = find_equilibria(tc.rp);
    const ReducedState box = trapping_box(tc.rp);
    int hits = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const OrbitResult orb = simulate_orbit(
          tc.rp, {rng.uniform(1e-6, box.n1), rng.uniform(1e-6, box.n2)});
      for (const Equilibrium& e : res.equilibria)
        if (e.stability == Stability::Saddle &&
            max_abs_diff(e.location, orb.limit) <= 1e-6)
          ++hits;
    }
    expect(hits == 0, std::string("zero saddle captures in case ") + tc.name);
  }
  return g_checks_failed == 0;
}

// ---------------------------------------------------------------- 7 ----
bool criterion_7_outcome_coefficients() {
  fixtures::Rng rng(71);

  for (int trial = 0; trial < 500; ++trial) {
    DemographyParams p = fixtures::random_demography(rng);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int A = 0; A < 2; ++A)
          for (int B = 0; B < 2; ++B) p.c[i][j][A][B] = p.c[i][j][0][0];
    const double beta = rng.uniform(0.1, 1.0);
    const DiseaseParams d = DiseaseParams::uniform(beta, beta * rng.uniform(0.05, 0.95));
    const double nu = compute_nu(d);
    const OutcomeCoefficients oc = outcome_coefficients(p, d);
    const double lhs1 = oc.D1bar, rhs1 = (1 - nu) * oc.D1barI + nu * oc.D1barS;
    const double lhs2 = oc.D2bar, rhs2 = (1 - nu) * oc.D2barI + nu * oc.D2barS;
    if (std::abs(lhs1 - rhs1) > 1e-12 * std::max(1.0, std::abs(lhs1)) ||
        std::abs(lhs2 - rhs2) > 1e-12 * std::max(1.0, std::abs(lhs2))) {
      expect(false, "decomposition identity at 1e-12");
      break;
    }
  }

  // constructed instance: infected growth below replacement dies out at
  // high infectiousness even though susceptible growth is healthy
  DemographyParams p;
  p.bS = {5.0, 4.0};
  p.bI = {0.9, 3.0};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int A = 0; A < 2; ++A)
        for (int B = 0; B < 2; ++B) p.c[i][j][A][B] = i == j ? 1.0 : 0.5;
  const OutcomeCoefficients oc =
      outcome_coefficients(p, DiseaseParams::uniform(0.8, 0.4));
  expect(oc.extinct_for_large_R0[0] && !oc.extinct_for_large_R0[1],
         "extinction predicate flags species 1 only");

  const ReducedParams rp = reduce_params_with_nu(p, 0.01);
  expect(classify_case(rp) == CaseLabel::Ext2, "nu=0.01 classifies as Ext2");
  const OrbitResult orb = simulate_orbit(rp, {2.0, 2.0});
  expect(orb.converged, "extinction orbit converges");
  expect(orb.limit.n1 <= 1e-8, "species 1 vanishes");
  expect(std::abs(orb.limit.n2 - isocline(rp, 1).R2) <= 1e-6,
         "species 2 settles at its axis equilibrium");
  return g_checks_failed == 0;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    bool (*fn)();
  };
  const Criterion criteria[] = {
      {"criterion 1: three-attractor showcase (classify B3, stability pattern, basins)",
       criterion_1_showcase_reproduction},
      {"criterion 2: case diagram columns and infection-free row", criterion_2_case_diagram},
      {"criterion 3: nu=1 planar competition limit and sign table",
       criterion_3_plain_competition_limit},
      {"criterion 4: fast-dynamics certification (ratio <= 0.62, conservation 1e-12)",
       criterion_4_fast_dynamics_certification},
      {"criterion 5: full-vs-reduced limit correspondence at 1e-3",
       criterion_5_limit_correspondence},
      {"criterion 6: property suites (trapping, ordering, jacobian, isoclines, orbits)",
       criterion_6_property_suites},
      {"criterion 7: outcome coefficients and parasite-driven extinction",
       criterion_7_outcome_coefficients},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    g_checks_failed = 0;
    bool ok = false;
    try {
      ok = c.fn();
    } catch (const std::exception& e) {
      std::cout << "    exception: " << e.what() << "\n";
      ok = false;
    }
    std::cout << (ok ? "PASS " : "FAIL ") << c.name << "\n";
    if (!ok) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criterion(s) failed")
            << "\n";
  return failed == 0 ? 0 : 1;
}

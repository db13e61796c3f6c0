#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "cidp/errors.hpp"
#include "cidp/random.hpp"
#include "cidp/sltm.hpp"
#include "oracles/sltm_oracle_values.hpp"
#include "test_support.hpp"

using namespace cidp;

namespace {

SltmProblem problem_for(const oracle::SltmCase &c) {
  return build_problem(ArrayGeometry{c.m, c.spacing, c.theta0}, c.exclusion, c.step, c.rho, false);
}

// Scaling s down scales every |F| down, so the optimum sits on sum(s) = rho M.
// On that slice the objective is convex and partial minimization keeps it
// convex, so nested golden-section search over the free coordinates finds
// the minimum without any solver.
double golden_min(double lo, double hi, const std::function<double(double)> &f) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 90 && b - a > 1e-13; ++it) {
    if (f1 <= f2) {
      b = x2, x2 = x1, f2 = f1;
      x1 = b - g * (b - a), f1 = f(x1);
    } else {
      a = x1, x1 = x2, f1 = f2;
      x2 = a + g * (b - a), f2 = f(x2);
    }
  }
  return std::min({f1, f2, f(lo), f(hi)});
}

double slice_minimum(const SltmProblem &p) {
  const int m = p.m();
  std::vector<double> s(m, 0.0);
  std::function<double(int, double)> level = [&](int k, double remaining) -> double {
    const int after = m - k - 1;
    if (after == 0) {
      s[k] = remaining;
      return max_masked_magnitude(p, s);
    }
    const double lo = std::max(0.0, remaining - after);
    const double hi = std::min(1.0, remaining);
    return golden_min(lo, hi, [&](double x) {
      s[k] = x;
      return level(k + 1, remaining - x);
    });
  };
  return level(0, p.rho * m);
}

} // namespace

TEST_CASE("mask construction") {
  const auto p = build_problem(ArrayGeometry{4, 0.5, 0.0}, 10.0, 5.0, 0.9, false);
  CHECK(p.mask_angles_deg.size() == 37 - 5);
  for (double excluded : {-10.0, -5.0, 0.0, 5.0, 10.0})
    CHECK(std::find(p.mask_angles_deg.begin(), p.mask_angles_deg.end(), excluded) ==
          p.mask_angles_deg.end());
  CHECK(p.mask_angles_deg.front() == -90.0);
  CHECK(p.mask_angles_deg.back() == 90.0);

  CHECK(build_problem(ArrayGeometry{4, 0.5, 0.0}, 5.0, 1.0, 0.9, false).mask_angles_deg.size() ==
        170);

  const auto ref = build_problem(testing_support::reference_scenario().sltm);
  for (const auto &b : ref.responses)
    CHECK(b.size() == 16);
  for (const auto &b : ref.main_response)
    CHECK(std::abs(b - 1.0) < 1e-12);

  CHECK_THROWS_AS(build_problem(ArrayGeometry{4, 0.5, 0.0}, 95.0, 5.0, 0.9, false), ConfigError);
}

TEST_CASE("solver matches the conic-solver reference optima") {
  for (const auto &c : oracle::kSltmCases) {
    const auto p = problem_for(c);
    const auto d = solve_socp(p, 1e-7);
    INFO("M = " << c.m << ", theta0 = " << c.theta0);
    CHECK(std::abs(d.eta_star - c.eta) / c.eta <= 1e-4);
  }
}

TEST_CASE("solver matches a nested line-search optimum for M = 3 and 4") {
  for (const auto &c : oracle::kSltmCases) {
    if (c.m > 4)
      continue;
    const auto p = problem_for(c);
    const double reference = slice_minimum(p);
    const auto d = solve_socp(p, 1e-7);
    INFO("M = " << c.m << ", theta0 = " << c.theta0);
    CHECK(std::abs(d.eta_star - reference) / reference <= 1e-4);
    CHECK(std::abs(reference - c.eta) / c.eta <= 1e-4);
  }
}

TEST_CASE("solutions are feasible and certified") {
  for (const auto &c : oracle::kSltmCases) {
    const auto p = problem_for(c);
    const auto d = solve_socp(p, 1e-6);
    REQUIRE(static_cast<int>(d.s_relaxed.size()) == c.m);
    for (double x : d.s_relaxed) {
      CHECK(x >= -1e-6);
      CHECK(x <= 1.0 + 1e-6);
    }
    const double sum = std::accumulate(d.s_relaxed.begin(), d.s_relaxed.end(), 0.0);
    CHECK(sum >= c.rho * c.m - 1e-6);
    CHECK(d.eta_star == doctest::Approx(max_masked_magnitude(p, d.s_relaxed)).epsilon(1e-12));
    CHECK(d.kkt_residual <= 1e-6);
    CHECK(d.dual_bound <= d.eta_star + 1e-12);
    CHECK(d.main_lobe_gain == doctest::Approx(sum));
  }
}

TEST_CASE("two elements have a unique optimum") {
  // Symmetric pairs reach the bound only with equal weights, so s = (rho, rho).
  const auto p = build_problem(ArrayGeometry{2, 0.5, 0.0}, 15.0, 5.0, 0.9, false);
  const auto d = solve_socp(p, 1e-7);
  CHECK(d.s_relaxed[0] == doctest::Approx(0.9).epsilon(1e-4));
  CHECK(d.s_relaxed[1] == doctest::Approx(0.9).epsilon(1e-4));
  CHECK(d.eta_star == doctest::Approx(slice_minimum(p)).epsilon(1e-6));
}

TEST_CASE("relaxation lower-bounds every admissible binary selection") {
  for (const auto &c : oracle::kSltmCases) {
    const auto p = problem_for(c);
    const auto d = solve_socp(p, 1e-7);
    double best = 1e300;
    for (int mask = 0; mask < (1 << c.m); ++mask) {
      Selection s(c.m);
      for (int e = 0; e < c.m; ++e)
        s[e] = (mask >> e) & 1;
      if (std::accumulate(s.begin(), s.end(), 0.0) < c.rho * c.m)
        continue;
      best = std::min(best, max_masked_magnitude(p, s));
    }
    CHECK(d.eta_star <= best + 1e-9);
  }
}

TEST_CASE("objective is convex along random segments") {
  const auto p = build_problem(ArrayGeometry{8, 0.5, 10.0}, 10.0, 2.0, 0.8, false);
  auto rng = make_rng(31, "convexity");
  for (int trial = 0; trial < 1000; ++trial) {
    Selection x(8), y(8), z(8);
    for (int e = 0; e < 8; ++e) {
      x[e] = rng.uniform();
      y[e] = rng.uniform();
    }
    const double lam = rng.uniform();
    for (int e = 0; e < 8; ++e)
      z[e] = lam * x[e] + (1 - lam) * y[e];
    CHECK(max_masked_magnitude(p, z) <=
          lam * max_masked_magnitude(p, x) + (1 - lam) * max_masked_magnitude(p, y) + 1e-12);
  }
}

TEST_CASE("literal main-lobe equality admits only the full array") {
  const auto p = build_problem(ArrayGeometry{6, 0.5, 0.0}, 10.0, 5.0, 0.9, true);
  const auto d = solve_socp(p);
  for (double x : d.s_relaxed)
    CHECK(x == doctest::Approx(1.0));
  CHECK(d.main_lobe_gain == doctest::Approx(6.0));
}

TEST_CASE("rounding keeps the time average") {
  const Selection s{1.0, 0.5, 1.0, 0.5};
  const auto sched = round_schedule(s, 4);
  REQUIRE(sched.size() == 4);
  int on1 = 0, on3 = 0;
  for (const auto &entry : sched) {
    CHECK(entry[0] == 1.0);
    CHECK(entry[2] == 1.0);
    on1 += entry[1] == 1.0;
    on3 += entry[3] == 1.0;
  }
  CHECK(on1 == 2);
  CHECK(on3 == 2);

  const Selection binary{1, 0, 1, 1, 0};
  for (const auto &entry : round_schedule(binary, 7))
    CHECK(entry == binary);

  auto rng = make_rng(3, "rounding");
  for (int trial = 0; trial < 200; ++trial) {
    Selection r(9);
    for (auto &x : r)
      x = rng.uniform();
    const int k = 1 + static_cast<int>(rng() % 20);
    const auto avg = schedule_average(round_schedule(r, k));
    for (int e = 0; e < 9; ++e)
      CHECK(std::abs(avg[e] - r[e]) <= 0.5 / k + 1e-12);
  }
  CHECK_THROWS_AS(round_schedule(s, 0), DomainError);
}

TEST_CASE("physical-layer equivocation") {
  const ArrayGeometry geom{4, 0.5, 0.0};
  const Schedule constant(8, Selection{1, 0, 1, 1});
  CHECK(estimate_ephy(constant, geom, 30.0, 8) == 0.0);

  // At 30 degrees single elements sit at phases 0, 90, 180 and 270 degrees,
  // which land in four different phase bins.
  const Schedule cycle{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  CHECK(estimate_ephy(cycle, geom, 30.0, 8) == doctest::Approx(2.0));
  CHECK_THROWS_AS(estimate_ephy({}, geom, 30.0, 8), DomainError);
}

TEST_CASE("reference scenario design") {
  const auto cfg = testing_support::reference_scenario();
  const auto d = design_sltm(cfg.sltm, cfg.adversary.theta_eve_deg);
  CHECK(d.eta_star <= cfg.sltm.m_elements);
  CHECK(d.eta_star < max_masked_magnitude(build_problem(cfg.sltm), Selection(16, 1.0)));
  CHECK(d.kkt_residual <= cfg.sltm.tol);
  CHECK(d.schedule.size() == static_cast<std::size_t>(cfg.sltm.subslots));
  // Regression baselines pinned from the first run.
  CHECK(d.eta_star == doctest::Approx(1.937706).epsilon(1e-5));
  CHECK(d.e_phy_bits == doctest::Approx(1.9746).epsilon(1e-3));

  const auto avg = schedule_average(d.schedule);
  const auto p = build_problem(cfg.sltm);
  CHECK(max_masked_magnitude(p, avg) <= 1.10 * d.eta_star);

  const auto again = design_sltm(cfg.sltm, cfg.adversary.theta_eve_deg);
  CHECK(again.s_relaxed == d.s_relaxed);
  CHECK(again.schedule == d.schedule);
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "cidp/adversary.hpp"
#include "cidp/errors.hpp"
#include "cidp/random.hpp"
#include "cidp/sltm.hpp"

using namespace cidp;

TEST_CASE("trilemma bound examples") {
  CHECK(delta_floor({1.0, 0.0, 0.0, 0.1, 0.0}) == 1.0);
  CHECK(delta_floor({1.0, 0.25, 0.25, 0.1, 0.0}) == 0.0);
  CHECK(delta_floor({1.0, 0.0, 0.0, 1.0, 1.0}) == 0.0);
  CHECK(delta_floor({1.0, 0.1, 0.1, 0.1, 2.0}) == doctest::Approx(0.4));
  CHECK_THROWS_AS(delta_floor({1.0, 1.5, 0.0, 0.1, 0.0}), DomainError);
  CHECK_THROWS_AS(delta_floor({-1.0, 0.0, 0.0, 0.1, 0.0}), DomainError);
}

TEST_CASE("trilemma bound is non-increasing in each protective input") {
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      for (int k = 0; k < 10; ++k) {
        const TrilemmaInputs base{1.0, 0.1 * i, 0.05 * j, 0.1, 0.5 * k};
        const double d = delta_floor(base);
        auto more = base;
        more.beta = std::min(1.0, base.beta + 0.05);
        CHECK(delta_floor(more) <= d);
        more = base;
        more.lambda += 0.05;
        CHECK(delta_floor(more) <= d);
        more = base;
        more.e_phy += 0.25;
        CHECK(delta_floor(more) <= d);
      }
}

TEST_CASE("radiometer sums the window energy") {
  const std::vector<std::complex<double>> y{{1, 0}, {0, 2}, {3, 4}};
  CHECK(radiometer_statistic(y, 2) == doctest::Approx(5.0));
  CHECK(radiometer_detect(y, 3, 29.0));
  CHECK_FALSE(radiometer_detect(y, 3, 30.0));
  CHECK_THROWS_AS(radiometer_statistic(y, 4), DomainError);
  CHECK_THROWS_AS(radiometer_statistic(y, 0), DomainError);
}

TEST_CASE("threshold agrees with the chi-square quantile") {
  // Sum of 100 |CN(0,1)|^2 is chi-square with 200 degrees of freedom, halved.
  const boost::math::chi_squared chi2(200);
  const double exact = boost::math::quantile(chi2, 0.95) / 2.0;
  auto rng = make_rng(2025, "calibration");
  const double t = calibrate_threshold(0.05, 100, 20000, rng);
  CHECK(t == doctest::Approx(exact).epsilon(0.01));

  auto small = make_rng(1, "calibration");
  CHECK_THROWS_AS(calibrate_threshold(0.05, 100, 399, small), DomainError);
  CHECK_THROWS_AS(calibrate_threshold(0.0, 100, 1000, small), DomainError);
}

TEST_CASE("calibrated threshold gives the requested false-alarm rate") {
  auto cal = make_rng(5, "calibration");
  const double pfa = 0.05;
  const double t = calibrate_threshold(pfa, 50, 10000, cal);
  auto noise = make_rng(5, "noise-check");
  const int trials = 10000;
  int alarms = 0;
  std::vector<std::complex<double>> y(50);
  for (int i = 0; i < trials; ++i) {
    for (auto &s : y)
      s = noise.complex_normal();
    alarms += radiometer_detect(y, 50, t);
  }
  const double rate = static_cast<double>(alarms) / trials;
  // Both the threshold and the check are Monte Carlo estimates.
  CHECK(std::abs(rate - pfa) <= 2.0 * std::sqrt(2.0 * pfa * (1 - pfa) / trials));
}

TEST_CASE("detection curve limits and ordering") {
  SltmConfig sc;
  sc.m_elements = 8;
  sc.spacing_wavelengths = 0.5;
  sc.mask_exclusion_deg = 10;
  sc.grid_step_deg = 2;
  sc.subslots = 8;
  const auto problem = build_problem(sc);
  const auto design = design_sltm(sc, 45.0);

  AdversaryConfig adv;
  adv.snr_grid_db = {-60, -10, 0, 10, 40};
  adv.pfa = 0.05;
  adv.window_samples = 50;
  adv.mc_trials = 4000;
  auto cal = make_rng(8, "calibration");
  const double t = calibrate_threshold(adv.pfa, adv.window_samples, 20000, cal);

  for (auto placement : {EvePlacement::WorstCase, EvePlacement::Fixed, EvePlacement::Uniform}) {
    adv.eve_placement = placement;
    const auto base = detection_sweep(adv, DetectionMode::StaticBaseline, problem, design.schedule,
                                      t, make_rng(8, "detection"));
    const auto cidp = detection_sweep(adv, DetectionMode::CidpSltm, problem, design.schedule, t,
                                      make_rng(8, "detection"));
    for (const auto *c : {&base, &cidp}) {
      REQUIRE(c->points.size() == 5);
      const double tol = 3 * std::sqrt(0.05 * 0.95 / adv.mc_trials) + 0.01;
      CHECK(std::abs(c->points[0].p_d - adv.pfa) <= tol);
      // A uniformly drawn angle can land on an exact null of the static
      // pattern, so only the other placements must saturate.
      if (placement != EvePlacement::Uniform)
        CHECK(c->points[4].p_d == doctest::Approx(1.0));
      for (std::size_t i = 1; i < c->points.size(); ++i)
        CHECK(c->points[i].p_d >= c->points[i - 1].p_d - 2 * c->points[i].stderr_);
    }
    if (placement == EvePlacement::WorstCase)
      for (std::size_t i = 0; i < base.points.size(); ++i)
        CHECK(cidp.points[i].p_d <= base.points[i].p_d + 2 * base.points[i].stderr_);
  }
}

TEST_CASE("curve interpolation") {
  DetectionCurve c;
  c.points = {{0.0, 0.1, 0.0}, {10.0, 0.5, 0.0}};
  CHECK(c.p_d_at(-5) == doctest::Approx(0.1));
  CHECK(c.p_d_at(5) == doctest::Approx(0.3));
  CHECK(c.p_d_at(50) == doctest::Approx(0.5));
  CHECK_THROWS_AS(DetectionCurve{}.p_d_at(0), DomainError);
}

TEST_CASE("posterior summaries at the extremes") {
  const auto uniform = posterior_from_weights(0, {0, 1, 2, 3, 4, 5, 6, 7}, std::vector<double>(8, 3.0));
  CHECK(uniform.effective_set_size == doctest::Approx(8.0));
  CHECK(uniform.entropy_bits == doctest::Approx(3.0));

  const auto point = posterior_from_weights(0, {0, 1, 2}, {0.0, 1.0, 0.0});
  CHECK(point.effective_set_size == 1.0);
  CHECK(point.entropy_bits == 0.0);
}

namespace {

AnonymityQuery base_query(int n_nodes, int n_slots) {
  AnonymityQuery q;
  q.receiver = n_nodes - 1;
  for (int i = 0; i < n_nodes - 1; ++i)
    q.candidates.push_back(i);
  q.expected_hop.assign(n_nodes, -1);
  q.slots.assign(n_slots, std::vector<NodeObservation>(n_nodes));
  q.emission_rate.assign(n_nodes, 1.0);
  q.p_detect.assign(n_nodes, 0.5);
  q.direction_accuracy = 0.5;
  q.label_count = n_nodes - 1;
  return q;
}

} // namespace

TEST_CASE("nothing detected leaves the posterior uniform") {
  auto q = base_query(6, 20);
  const auto post = infer_anonymity(q);
  CHECK(post.effective_set_size == doctest::Approx(5.0));
}

TEST_CASE("a lone always-detected emitter is identified") {
  auto q = base_query(6, 20);
  q.emission_rate.assign(6, 0.0);
  q.emission_rate[2] = 1.0;
  q.p_detect.assign(6, 1.0);
  for (auto &slot : q.slots)
    slot[2].labels = {5};
  const auto post = infer_anonymity(q);
  CHECK(post.effective_set_size == doctest::Approx(1.0));
  CHECK(post.weights[2] == doctest::Approx(1.0));
}

TEST_CASE("direction labels sharpen the posterior") {
  auto q = base_query(6, 30);
  q.expected_hop = {3, 3, 4, 4, 5, -1};
  for (std::size_t s = 0; s < q.slots.size(); ++s) {
    q.slots[s][1].labels = {3};
    q.slots[s][2].labels = {s % 2 == 0 ? 1 : 0};
  }
  const auto with_labels = infer_anonymity(q);
  CHECK(with_labels.weights[1] > with_labels.weights[2]);
  q.direction_accuracy = 0.0;
  const auto blind = infer_anonymity(q);
  CHECK(blind.effective_set_size >= with_labels.effective_set_size);
}

TEST_CASE("relabelling nodes permutes the posterior") {
  auto q = base_query(5, 25);
  auto rng = make_rng(17, "anonymity-symmetry");
  for (auto &slot : q.slots)
    for (int n = 0; n < 5; ++n)
      if (rng.uniform() < 0.3)
        slot[n].labels = {static_cast<int>(rng() % 5)};
  q.emission_rate = {1.0, 0.5, 2.0, 1.5, 1.0};
  q.p_detect = {0.6, 0.7, 0.8, 0.9, 0.5};
  const auto post = infer_anonymity(q);

  // Swap nodes 0 and 2 everywhere.
  auto swapped = q;
  auto swap_id = [](int x) { return x == 0 ? 2 : x == 2 ? 0 : x; };
  for (auto &slot : swapped.slots) {
    std::swap(slot[0], slot[2]);
    for (auto &s : slot)
      for (auto &l : s.labels)
        l = swap_id(l);
  }
  std::swap(swapped.emission_rate[0], swapped.emission_rate[2]);
  std::swap(swapped.p_detect[0], swapped.p_detect[2]);
  const auto post2 = infer_anonymity(swapped);
  CHECK(post2.weights[2] == doctest::Approx(post.weights[0]));
  CHECK(post2.weights[0] == doctest::Approx(post.weights[2]));
  CHECK(post2.weights[1] == doctest::Approx(post.weights[1]));
  CHECK(post2.entropy_bits == doctest::Approx(post.entropy_bits));
}

TEST_CASE("empty candidate set is rejected") {
  AnonymityQuery q;
  CHECK_THROWS_AS(infer_anonymity(q), DomainError);
}

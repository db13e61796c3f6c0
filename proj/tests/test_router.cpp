#include <doctest.h>

#include <vector>

#include "cidp/errors.hpp"
#include "cidp/random.hpp"
#include "cidp/router.hpp"
#include "router_oracle.hpp"

using namespace cidp;

namespace {

std::int64_t data_sent(const RoutingDecision &d) {
  std::int64_t n = 0;
  for (const auto &t : d.transmissions)
    n += t.count;
  return n;
}

std::int64_t dummies_sent(const RoutingDecision &d) {
  std::int64_t n = 0;
  for (const auto &x : d.dummies)
    n += x.count;
  return n;
}

} // namespace

TEST_CASE("link weight is the differential backlog") {
  QueueState q(2, 1);
  q.at(0, 0) = 5;
  q.at(1, 0) = 2;
  CHECK(link_weight(q, {0, 1}, 0) == 3);
  q.at(1, 0) = 5;
  CHECK(link_weight(q, {0, 1}, 0) == 0);
  q.at(0, 0) = 0;
  q.at(1, 0) = 4;
  CHECK(link_weight(q, {0, 1}, 0) == -4);
}

TEST_CASE("single positive weight forwards one packet") {
  QueueState q(2, 1);
  q.at(0, 0) = 5;
  q.at(1, 0) = 2;
  const std::vector<ActiveLink> links{{{0, 1}, 1}};
  const auto d = decide_slot(q, links, {1.0, 1.0, 0.0});
  REQUIRE(d.transmissions.size() == 1);
  CHECK(d.transmissions[0].link == Link{0, 1});
  CHECK(d.transmissions[0].flow == 0);
  CHECK(d.transmissions[0].count == 1);
  CHECK(dummies_sent(d) == 0);
}

TEST_CASE("non-positive weights leave the link to cover traffic") {
  QueueState q(2, 2);
  q.at(0, 0) = 1;
  q.at(1, 0) = 3;
  q.at(1, 1) = 2;
  const std::vector<ActiveLink> links{{{0, 1}, 3}};
  const auto d = decide_slot(q, links, {2.0, 1.0, 0.0});
  CHECK(data_sent(d) == 0);
  CHECK(dummies_sent(d) == 3);
  CHECK(d.entropy_injected == doctest::Approx(3.0));

  const auto quiet = decide_slot(q, links, {0.0, 1.0, 0.0});
  CHECK(data_sent(quiet) == 0);
  CHECK(dummies_sent(quiet) == 0);
}

TEST_CASE("three nodes, two flows: decision matches exhaustive enumeration") {
  QueueState q(3, 2);
  q.at(0, 0) = 4;
  q.at(1, 0) = 1;
  q.at(0, 1) = 2;
  q.at(1, 1) = 3;
  std::vector<ActiveLink> links;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j)
        links.push_back({{i, j}, 1});
  for (double v : {0.0, 1.0, 2.5}) {
    const RouterParams p{v, 1.0, 0.0};
    const auto d = decide_slot(q, links, p);
    CHECK(decision_objective(q, d, p) == testing_support::brute_force_objective(q, links, p));
  }
}

TEST_CASE("decide_slot is optimal on random small instances") {
  auto rng = make_rng(5, "router-oracle");
  for (int i = 0; i < 300; ++i) {
    const auto inst = testing_support::random_router_instance(rng);
    const auto d = decide_slot(inst.q, inst.active, inst.params);
    CHECK(decision_objective(inst.q, d, inst.params) ==
          testing_support::brute_force_objective(inst.q, inst.active, inst.params));
  }
}

TEST_CASE("decisions respect capacity and backlog") {
  auto rng = make_rng(6, "router-feasible");
  for (int i = 0; i < 200; ++i) {
    const auto inst = testing_support::random_router_instance(rng);
    const auto d = decide_slot(inst.q, inst.active, inst.params);
    std::vector<std::int64_t> used(inst.active.size(), 0);
    auto index_of = [&](Link l) {
      for (std::size_t k = 0; k < inst.active.size(); ++k)
        if (inst.active[k].link == l)
          return k;
      FAIL("decision uses an inactive link");
      return std::size_t{0};
    };
    for (const auto &t : d.transmissions)
      used[index_of(t.link)] += t.count;
    for (const auto &x : d.dummies)
      used[index_of(x.link)] += x.count;
    for (std::size_t k = 0; k < used.size(); ++k)
      CHECK(used[k] <= inst.active[k].capacity);
    std::vector<int> dst(inst.q.n_flows, 0);
    CHECK_NOTHROW(apply_decision(inst.q, d, {}, dst));
  }
}

TEST_CASE("apply_decision moves, delivers and admits packets") {
  QueueState q(3, 1);
  q.at(0, 0) = 2;
  const std::vector<int> dst{2};

  const auto same = apply_decision(q, {}, {}, dst);
  CHECK(same.next.backlog == q.backlog);
  CHECK(same.next.slot == q.slot + 1);

  RoutingDecision hop;
  hop.transmissions.push_back({{0, 1}, 0, 1});
  const auto moved = apply_decision(q, hop, {}, dst);
  CHECK(moved.next.at(0, 0) == 1);
  CHECK(moved.next.at(1, 0) == 1);
  CHECK(moved.delivered[0] == 0);

  RoutingDecision last;
  last.transmissions.push_back({{1, 2}, 0, 1});
  last.dummies.push_back({{0, 2}, 1});
  const std::vector<std::int64_t> arrivals{3, 0, 0};
  const auto done = apply_decision(moved.next, last, arrivals, dst);
  CHECK(done.next.at(1, 0) == 0);
  CHECK(done.next.at(2, 0) == 0);
  CHECK(done.next.at(0, 0) == 4);
  CHECK(done.delivered[0] == 1);
  CHECK(done.dummies == 1);

  RoutingDecision greedy;
  greedy.transmissions.push_back({{0, 1}, 0, 3});
  CHECK_THROWS_AS(apply_decision(q, greedy, {}, dst), InternalError);
}

TEST_CASE("random backpressure run conserves packets per flow") {
  auto rng = make_rng(8, "conservation");
  const int nodes = 5, flows = 2;
  const std::vector<int> dst{4, 0};
  QueueState q(nodes, flows);
  std::vector<std::int64_t> arrived(flows, 0), delivered(flows, 0);
  for (int t = 0; t < 100; ++t) {
    std::vector<ActiveLink> links;
    for (int i = 0; i < nodes; ++i)
      for (int j = 0; j < nodes; ++j)
        if (i != j && rng.uniform() < 0.4)
          links.push_back({{i, j}, 1 + static_cast<int>(rng() % 2)});
    const auto d = decide_slot(q, links, {1.0, 1.0, 0.0});
    std::vector<std::int64_t> arrivals(nodes * flows, 0);
    for (int f = 0; f < flows; ++f) {
      const int src = f == 0 ? 0 : 3;
      const auto n = static_cast<std::int64_t>(rng() % 3);
      arrivals[src * flows + f] = n;
      arrived[f] += n;
    }
    const auto r = apply_decision(q, d, arrivals, dst);
    for (int f = 0; f < flows; ++f)
      delivered[f] += r.delivered[f];
    q = r.next;
  }
  for (int f = 0; f < flows; ++f)
    CHECK(arrived[f] == delivered[f] + q.flow_total(f));
}

TEST_CASE("stability report on drain, flat and growing series") {
  std::vector<std::int64_t> drain(200);
  for (int i = 0; i < 200; ++i)
    drain[i] = std::max(0, 50 - i);
  const auto r = stability_report(drain);
  CHECK(r.max_total_backlog == 50);
  CHECK(r.trend_slope <= 0.0);

  const std::vector<std::int64_t> flat(400, 7);
  CHECK(stability_report(flat).trend_slope == doctest::Approx(0.0));
  CHECK(stability_report(flat).time_avg_backlog == doctest::Approx(7.0));

  std::vector<std::int64_t> ramp(400);
  for (int i = 0; i < 400; ++i)
    ramp[i] = 3 * i;
  CHECK(stability_report(ramp).trend_slope == doctest::Approx(3.0));

  CHECK_THROWS_AS(stability_report(std::vector<std::int64_t>(99, 0)), DomainError);
}

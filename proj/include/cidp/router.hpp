#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cidp {

/// Per-(node, flow) data backlog Q_i^f(t). Dummies never enter it.
struct QueueState {
  int n_nodes = 0;
  int n_flows = 0;
  std::int64_t slot = 0;
  std::vector<std::int64_t> backlog; ///< row-major [node][flow]

  QueueState() = default;
  QueueState(int nodes, int flows) : n_nodes(nodes), n_flows(flows), backlog(nodes * flows, 0) {}

  std::int64_t &at(int node, int flow) { return backlog[node * n_flows + flow]; }
  std::int64_t at(int node, int flow) const { return backlog[node * n_flows + flow]; }
  std::int64_t total() const;
  std::int64_t flow_total(int flow) const;
  bool operator==(const QueueState &) const = default;
};

struct Link {
  int from = 0;
  int to = 0;
  bool operator==(const Link &) const = default;
};

struct ActiveLink {
  Link link;
  int capacity = 1; ///< packets per slot
};

struct Transmission {
  Link link;
  int flow = 0;
  std::int64_t count = 0;
};

struct DummyTransmission {
  Link link;
  std::int64_t count = 0;
};

struct RoutingDecision {
  std::vector<Transmission> transmissions;
  std::vector<DummyTransmission> dummies;
  double entropy_injected = 0.0; ///< H(t) in bits
};

struct RouterParams {
  double V = 0.0;
  double h_dummy_bits = 1.0;
  double e_phy_rate = 0.0; ///< physical-layer bits added to H(t) each slot
};

/// Backpressure weight W = Q_i^f - Q_j^f.
std::int64_t link_weight(const QueueState &q, Link link, int flow);

/// Drift-plus-penalty value of a decision: -sum W x - V H. Lower is better.
double decision_objective(const QueueState &q, const RoutingDecision &d, const RouterParams &p);

/// Minimizes -sum W x - V H over integer allocations that respect per-link
/// capacity and per-(node, flow) backlog. Residual capacity on every active
/// link carries dummies when V > 0 (h_dummy_bits each).
///
/// The problem separates by transmitting node; each node solves a small
/// transportation problem (flows supply backlog, links consume capacity,
/// profit W - V h_dummy per packet over a dummy) by successive longest
/// augmenting paths. With ample backlog this is the per-link max-weight rule.
/// Ties prefer lower flow ids and lower link indices.
RoutingDecision decide_slot(const QueueState &q, std::span<const ActiveLink> active,
                            const RouterParams &params);

struct ApplyResult {
  QueueState next;
  std::vector<std::int64_t> delivered; ///< per flow, packets reaching dst
  std::int64_t dummies = 0;
};

/// Q(t+1) = Q(t) - departures + receptions + arrivals. Packets reaching their
/// flow's destination leave the network. `arrivals` is indexed like backlog.
/// Throws InternalError when a decision sends more than the backlog holds.
ApplyResult apply_decision(const QueueState &q, const RoutingDecision &d,
                           std::span<const std::int64_t> arrivals, std::span<const int> flow_dst);

struct StabilityReport {
  std::int64_t max_total_backlog = 0;
  double time_avg_backlog = 0.0; ///< over the final half
  double trend_slope = 0.0;      ///< least-squares packets/slot, final half
};

/// Requires at least 100 samples of total backlog (one per slot).
StabilityReport stability_report(std::span<const std::int64_t> total_backlog);

} // namespace cidp

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string_view>
#include <vector>

#include "cidp/adversary.hpp"
#include "cidp/config.hpp"
#include "cidp/metrics.hpp"
#include "cidp/router.hpp"
#include "cidp/sltm.hpp"
#include "cidp/trace.hpp"

namespace cidp {

enum class Mode { Cidp, Baseline };

std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view name);

/// Directed adjacency, adjacency[i][j] = link i -> j usable.
using Adjacency = std::vector<std::vector<bool>>;

/// Hop counts from every node to dst; -1 where dst is unreachable.
std::vector<int> hop_distances_to(const Adjacency &adj, int dst);

/// Hop-count-minimal next hop from node toward dst, ties to the lowest id.
/// Returns -1 when dst is unreachable (the packet waits). node == dst is a
/// DomainError.
int shortest_path_route(const Adjacency &adj, int node, int dst);

/// Node sequence src..dst following shortest_path_route; empty if unreachable.
std::vector<int> shortest_path(const Adjacency &adj, int src, int dst);

/// Everything the adversary side needs that does not change between
/// replications: the SLTM design, the radiometer threshold and the two
/// detection curves. Computing it once and sharing it across runs is
/// equivalent to recomputing it, since it only draws from replication-0
/// streams.
struct AdversaryModel {
  SltmProblem problem;
  SltmDesign design;
  double threshold = 0.0;
  DetectionCurve baseline;
  DetectionCurve cidp;

  const DetectionCurve &curve(Mode mode) const { return mode == Mode::Cidp ? cidp : baseline; }
};

AdversaryModel prepare_adversary(const ScenarioConfig &cfg);

struct NetworkState {
  Adjacency graph; ///< mean-SINR connectivity
  QueueState queues; ///< cidp bulk backlog
  std::vector<std::int64_t> fifo_backlog; ///< baseline packets queued per node
  std::int64_t realtime_in_flight = 0;
  std::int64_t clock_slot = 0;
};

/// Per-flow packet accounting: generated = delivered + dropped + in_network.
struct FlowAccount {
  std::int64_t generated = 0;
  std::int64_t delivered = 0;
  std::int64_t dropped = 0;
  std::int64_t in_network = 0;
  bool operator==(const FlowAccount &) const = default;
};

struct RunOptions {
  TraceSink sink;          ///< receives every event in slot order
  bool keep_trace = false; ///< also collect the events in SimulationRun::trace
  std::shared_ptr<const AdversaryModel> adversary; ///< computed on demand when null
  /// Called after every slot with the per-flow accounts (costs a queue scan).
  std::function<void(std::int64_t, const std::vector<FlowAccount> &)> slot_observer;
};

struct SimulationRun {
  ScenarioConfig cfg;
  Mode mode = Mode::Cidp;
  int replication = 0;
  std::vector<TraceEvent> trace;
  MetricsLedger ledger;
  NetworkState final_state;
  std::vector<std::int64_t> backlog_series; ///< total queued data per slot
  std::vector<FlowAccount> accounts;
  double e_phy_bits = 0.0;
};

/// One replication. Real-time flows follow their shortest path on the
/// mean-SINR graph. In cidp mode they ride an isochronous per-hop
/// reservation of length t_align, the jitter filter absorbs the raw hop
/// delays, and bulk flows go through drift-plus-penalty backpressure. In
/// baseline mode every packet sits in a per-node FIFO, follows shortest
/// paths on the slot's active links, and idle nodes emit one dummy.
///
/// Throws BarrierViolation or InfeasibleDisturbance (after tracing a
/// barrier_violation event) if the jitter filter fails in cidp mode, and
/// ConfigError when a real-time flow has no path on the mean graph.
SimulationRun run(const ScenarioConfig &cfg, Mode mode, int replication,
                  const RunOptions &options = {});

} // namespace cidp

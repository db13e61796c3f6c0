#include "cidp/router.hpp"

#include <algorithm>
#include <limits>

#include "cidp/errors.hpp"

namespace cidp {

std::int64_t QueueState::total() const {
  std::int64_t sum = 0;
  for (auto b : backlog)
    sum += b;
  return sum;
}

std::int64_t QueueState::flow_total(int flow) const {
  std::int64_t sum = 0;
  for (int i = 0; i < n_nodes; ++i)
    sum += at(i, flow);
  return sum;
}

std::int64_t link_weight(const QueueState &q, Link link, int flow) {
  return q.at(link.from, flow) - q.at(link.to, flow);
}

double decision_objective(const QueueState &q, const RoutingDecision &d, const RouterParams &p) {
  double drift = 0.0;
  for (const auto &t : d.transmissions)
    drift -= static_cast<double>(link_weight(q, t.link, t.flow)) * static_cast<double>(t.count);
  std::int64_t dummies = 0;
  for (const auto &x : d.dummies)
    dummies += x.count;
  const double h = static_cast<double>(dummies) * p.h_dummy_bits + p.e_phy_rate;
  return drift - p.V * h;
}

namespace {

// Min-cost flow on the tiny bipartite graph source -> flows -> links -> sink.
class NodeAllocator {
public:
  explicit NodeAllocator(int vertices) : head_(vertices, -1) {}

  int add_edge(int u, int v, std::int64_t cap, double cost) {
    edges_.push_back({v, head_[u], cap, cost});
    head_[u] = static_cast<int>(edges_.size()) - 1;
    edges_.push_back({u, head_[v], 0, -cost});
    head_[v] = static_cast<int>(edges_.size()) - 1;
    return static_cast<int>(edges_.size()) - 2;
  }

  std::int64_t flow_on(int edge) const { return edges_[edge ^ 1].cap; }

  // Augments along cheapest paths while they do not cost anything
  // (profit >= 0).
  void run(int source, int sink) {
    const int n = static_cast<int>(head_.size());
    constexpr double kInf = std::numeric_limits<double>::infinity();
    constexpr double kEps = 1e-9;
    for (;;) {
      std::vector<double> dist(n, kInf);
      std::vector<int> via(n, -1);
      dist[source] = 0.0;
      for (int round = 0; round < n; ++round) {
        bool changed = false;
        for (int u = 0; u < n; ++u) {
          if (dist[u] == kInf)
            continue;
          for (int e = head_[u]; e != -1; e = edges_[e].next) {
            const auto &edge = edges_[e];
            if (edge.cap > 0 && dist[u] + edge.cost < dist[edge.to] - kEps) {
              dist[edge.to] = dist[u] + edge.cost;
              via[edge.to] = e;
              changed = true;
            }
          }
        }
        if (!changed)
          break;
      }
      if (dist[sink] == kInf || dist[sink] > kEps)
        return;
      std::int64_t push = std::numeric_limits<std::int64_t>::max();
      for (int v = sink; v != source; v = edges_[via[v] ^ 1].to)
        push = std::min(push, edges_[via[v]].cap);
      for (int v = sink; v != source; v = edges_[via[v] ^ 1].to) {
        edges_[via[v]].cap -= push;
        edges_[via[v] ^ 1].cap += push;
      }
    }
  }

private:
  struct Edge {
    int to;
    int next;
    std::int64_t cap;
    double cost;
  };
  std::vector<int> head_;
  std::vector<Edge> edges_;
};

} // namespace

RoutingDecision decide_slot(const QueueState &q, std::span<const ActiveLink> active,
                            const RouterParams &params) {
  for (const auto &a : active)
    if (a.capacity < 0)
      throw DomainError("decide_slot: negative link capacity");

  RoutingDecision decision;
  const double dummy_value = params.V * params.h_dummy_bits;

  // Group active links by transmitter, keeping input order inside a group.
  std::vector<std::vector<int>> by_node(q.n_nodes);
  for (std::size_t k = 0; k < active.size(); ++k)
    by_node[active[k].link.from].push_back(static_cast<int>(k));

  std::int64_t dummy_count = 0;
  for (int node = 0; node < q.n_nodes; ++node) {
    const auto &links = by_node[node];
    if (links.empty())
      continue;
    const int n_flows = q.n_flows;
    const int n_links = static_cast<int>(links.size());
    const int source = 0;
    const int sink = 1 + n_flows + n_links;
    NodeAllocator alloc(sink + 1);

    struct Candidate {
      int edge;
      int link_index;
      int flow;
    };
    std::vector<Candidate> candidates;
    for (int f = 0; f < n_flows; ++f) {
      const std::int64_t backlog = q.at(node, f);
      if (backlog <= 0)
        continue;
      alloc.add_edge(source, 1 + f, backlog, 0.0);
      for (int k = 0; k < n_links; ++k) {
        const auto &al = active[links[k]];
        const std::int64_t w = link_weight(q, al.link, f);
        const double profit = static_cast<double>(w) - dummy_value;
        if (w <= 0 || profit < 0.0 || al.capacity == 0)
          continue;
        const std::int64_t cap = std::min<std::int64_t>(backlog, al.capacity);
        candidates.push_back({alloc.add_edge(1 + f, 1 + n_flows + k, cap, -profit), k, f});
      }
    }
    for (int k = 0; k < n_links; ++k)
      alloc.add_edge(1 + n_flows + k, sink, active[links[k]].capacity, 0.0);
    if (!candidates.empty())
      alloc.run(source, sink);

    std::vector<std::int64_t> used(n_links, 0);
    for (const auto &c : candidates) {
      const std::int64_t x = alloc.flow_on(c.edge);
      if (x <= 0)
        continue;
      used[c.link_index] += x;
      decision.transmissions.push_back({active[links[c.link_index]].link, c.flow, x});
    }
    if (params.V > 0.0) {
      for (int k = 0; k < n_links; ++k) {
        const std::int64_t residual = active[links[k]].capacity - used[k];
        if (residual > 0) {
          decision.dummies.push_back({active[links[k]].link, residual});
          dummy_count += residual;
        }
      }
    }
  }

  std::stable_sort(decision.transmissions.begin(), decision.transmissions.end(),
                   [](const Transmission &a, const Transmission &b) {
                     if (a.link.from != b.link.from)
                       return a.link.from < b.link.from;
                     if (a.link.to != b.link.to)
                       return a.link.to < b.link.to;
                     return a.flow < b.flow;
                   });
  decision.entropy_injected =
      static_cast<double>(dummy_count) * params.h_dummy_bits + params.e_phy_rate;
  return decision;
}

ApplyResult apply_decision(const QueueState &q, const RoutingDecision &d,
                           std::span<const std::int64_t> arrivals, std::span<const int> flow_dst) {
  if (static_cast<int>(flow_dst.size()) != q.n_flows)
    throw DomainError("apply_decision: flow_dst must have one entry per flow");
  if (!arrivals.empty() && arrivals.size() != q.backlog.size())
    throw DomainError("apply_decision: arrivals must be indexed like the backlog");

  ApplyResult out;
  out.next = q;
  out.next.slot = q.slot + 1;
  out.delivered.assign(q.n_flows, 0);

  std::vector<std::int64_t> departures(q.backlog.size(), 0);
  for (const auto &t : d.transmissions) {
    if (t.count < 0)
      throw InternalError("apply_decision: negative transmission count");
    departures[t.link.from * q.n_flows + t.flow] += t.count;
  }
  for (std::size_t i = 0; i < departures.size(); ++i)
    if (departures[i] > q.backlog[i])
      throw InternalError("apply_decision: departures exceed backlog");

  for (const auto &t : d.transmissions) {
    out.next.at(t.link.from, t.flow) -= t.count;
    if (t.link.to == flow_dst[t.flow])
      out.delivered[t.flow] += t.count;
    else
      out.next.at(t.link.to, t.flow) += t.count;
  }
  for (const auto &x : d.dummies)
    out.dummies += x.count;
  for (std::size_t i = 0; i < arrivals.size(); ++i)
    out.next.backlog[i] += arrivals[i];
  return out;
}

StabilityReport stability_report(std::span<const std::int64_t> total_backlog) {
  if (total_backlog.size() < 100)
    throw DomainError("stability_report: need at least 100 slots");
  StabilityReport r;
  r.max_total_backlog = *std::max_element(total_backlog.begin(), total_backlog.end());

  const std::size_t start = total_backlog.size() / 2;
  const auto tail = total_backlog.subspan(start);
  const double n = static_cast<double>(tail.size());
  double mean_x = (n - 1.0) / 2.0;
  double mean_y = 0.0;
  for (auto y : tail)
    mean_y += static_cast<double>(y);
  mean_y /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    const double dx = static_cast<double>(i) - mean_x;
    sxy += dx * (static_cast<double>(tail[i]) - mean_y);
    sxx += dx * dx;
  }
  r.time_avg_backlog = mean_y;
  r.trend_slope = sxy / sxx;
  return r;
}

} // namespace cidp

#include "cidp/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>

#include <fmt/format.h>

#include "cidp/channel.hpp"
#include "cidp/errors.hpp"
#include "cidp/racbf.hpp"
#include "cidp/random.hpp"

namespace cidp {

std::string_view to_string(Mode mode) { return mode == Mode::Cidp ? "cidp" : "baseline"; }

Mode mode_from_string(std::string_view name) {
  if (name == "cidp")
    return Mode::Cidp;
  if (name == "baseline")
    return Mode::Baseline;
  throw ConfigError(fmt::format("unknown mode '{}' (expected cidp or baseline)", name));
}

std::vector<int> hop_distances_to(const Adjacency &adj, int dst) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> dist(n, -1);
  std::queue<int> frontier;
  dist[dst] = 0;
  frontier.push(dst);
  while (!frontier.empty()) {
    const int j = frontier.front();
    frontier.pop();
    for (int i = 0; i < n; ++i) {
      if (dist[i] < 0 && adj[i][j]) {
        dist[i] = dist[j] + 1;
        frontier.push(i);
      }
    }
  }
  return dist;
}

namespace {

int next_hop_from(const Adjacency &adj, const std::vector<int> &dist, int node) {
  if (dist[node] <= 0)
    return -1;
  for (int j = 0; j < static_cast<int>(adj.size()); ++j)
    if (adj[node][j] && dist[j] == dist[node] - 1)
      return j;
  return -1;
}

} // namespace

int shortest_path_route(const Adjacency &adj, int node, int dst) {
  if (node == dst)
    throw DomainError("shortest_path_route: packet is already at its destination");
  return next_hop_from(adj, hop_distances_to(adj, dst), node);
}

std::vector<int> shortest_path(const Adjacency &adj, int src, int dst) {
  const auto dist = hop_distances_to(adj, dst);
  if (dist[src] < 0)
    return {};
  std::vector<int> path{src};
  while (path.back() != dst)
    path.push_back(next_hop_from(adj, dist, path.back()));
  return path;
}

AdversaryModel prepare_adversary(const ScenarioConfig &cfg) {
  AdversaryModel m;
  m.problem = build_problem(cfg.sltm);
  m.design = design_sltm(cfg.sltm, cfg.adversary.theta_eve_deg);
  const auto &adv = cfg.adversary;
  auto calibration = make_rng(cfg.sim.seed, "calibration");
  m.threshold = calibrate_threshold(adv.pfa, adv.window_samples, adv.mc_trials, calibration);
  const auto detection = make_rng(cfg.sim.seed, "detection");
  m.baseline = detection_sweep(adv, DetectionMode::StaticBaseline, m.problem, m.design.schedule,
                               m.threshold, detection);
  m.cidp = detection_sweep(adv, DetectionMode::CidpSltm, m.problem, m.design.schedule,
                           m.threshold, detection);
  return m;
}

namespace {

struct RealtimePlan {
  std::vector<int> path;
  int hops = 0;
  double t_align_ms = 0.0;
  double v_max_ms = 0.0;
  std::int64_t next_packet = 0;
};

/// A real-time packet riding the cidp reservation.
struct ReservedPacket {
  int flow = 0;
  std::int64_t seq = 0;
  int hop = 0;
  double time_ms = 0.0; ///< start of the next hop, or arrival once hop == hops
  JitterState jitter;
};

/// A packet in a baseline FIFO.
struct QueuedPacket {
  int flow = 0;
  std::int64_t seq = -1; ///< real-time sequence number; -1 for bulk
  int hops = 0;
  std::int64_t ready_slot = 0;
  double time_ms = 0.0;
};

struct Emission {
  int node = 0;
  int to = 0;
  std::int64_t count = 0;
};

struct Delivery {
  std::int64_t seq = 0;
  double time_ms = 0.0;
};

std::int64_t poisson_draw(const RandomStream &arrivals, std::int64_t slot, int flow, int n_flows,
                          double mean) {
  if (mean <= 0.0)
    return 0;
  RandomStream local(splitmix64_mix(arrivals.key() ^
                                    static_cast<std::uint64_t>(slot * n_flows + flow)));
  // Knuth's product method; means here are a few packets per slot at most.
  const double limit = std::exp(-mean);
  std::int64_t k = 0;
  double prod = local.uniform();
  while (prod > limit) {
    ++k;
    prod *= local.uniform();
  }
  return k;
}

std::uint64_t disturbance_index(int flow, std::int64_t seq, int hop) {
  return (static_cast<std::uint64_t>(flow) << 48) + (static_cast<std::uint64_t>(seq) << 10) +
         static_cast<std::uint64_t>(hop);
}

class Simulator {
public:
  Simulator(const ScenarioConfig &cfg, Mode mode, int replication, const RunOptions &options)
      : cfg_(cfg), mode_(mode), options_(options), n_(cfg.network.n_nodes),
        f_(static_cast<int>(cfg.flows.size())),
        channel_(cfg.network, cfg.sim.seed, static_cast<std::uint64_t>(replication)),
        arrivals_(make_rng(cfg.sim.seed, "arrivals", replication)),
        disturbance_(make_rng(cfg.sim.seed, "disturbance", replication)),
        observation_(make_rng(cfg.sim.seed, "observation", replication)),
        dummy_(make_rng(cfg.sim.seed, "dummy", replication)) {
    out_.cfg = cfg;
    out_.mode = mode;
    out_.replication = replication;
    out_.ledger.jitter_samples_ms.resize(f_);
    out_.accounts.resize(f_);
    deliveries_.resize(f_);

    mean_graph_.assign(n_, std::vector<bool>(n_, false));
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        mean_graph_[i][j] = i != j && channel_.mean_link_up(i, j);

    plans_.resize(f_);
    for (int f = 0; f < f_; ++f) {
      const auto &flow = cfg.flows[f];
      if (!flow.realtime)
        continue;
      auto &plan = plans_[f];
      plan.path = shortest_path(mean_graph_, flow.src, flow.dst);
      if (plan.path.empty())
        throw ConfigError(fmt::format("flow {}: no path from {} to {} on the mean-SINR graph", f,
                                      flow.src, flow.dst));
      plan.hops = static_cast<int>(plan.path.size()) - 1;
      plan.t_align_ms = cfg.control.t_align_ms > 0
                            ? cfg.control.t_align_ms
                            : default_t_align(cfg.control.dmax_ms, plan.hops);
      plan.v_max_ms = cfg.control.v_max_ms > 0
                          ? cfg.control.v_max_ms
                          : default_v_max(cfg.control.dmax_ms, plan.t_align_ms,
                                          cfg.control.alpha, plan.hops);
    }

    flow_dst_.resize(f_);
    for (int f = 0; f < f_; ++f)
      flow_dst_[f] = cfg.flows[f].dst;
    queues_ = QueueState(n_, f_);
    fifo_.resize(n_);
    slot_obs_.resize(n_);
    detected_.assign(n_, 0);
    epoch_slots_.resize(f_);

    expected_hop_.assign(n_, std::vector<int>(n_, -1));
    for (int dst = 0; dst < n_; ++dst) {
      const auto dist = hop_distances_to(mean_graph_, dst);
      for (int c = 0; c < n_; ++c)
        if (c != dst)
          expected_hop_[dst][c] = next_hop_from(mean_graph_, dist, c);
    }
  }

  SimulationRun execute() {
    const std::int64_t n_slots = cfg_.sim.n_slots;
    if (n_slots > 0)
      setup_adversary();
    for (std::int64_t s = 0; s < n_slots; ++s) {
      step(s);
      if (options_.slot_observer) {
        refresh_in_network();
        options_.slot_observer(s, out_.accounts);
      }
    }
    finish();
    return std::move(out_);
  }

private:
  // --- tracing ---------------------------------------------------------------

  bool tracing() const { return options_.sink || options_.keep_trace; }

  void emit(TraceEvent event) {
    if (options_.sink)
      options_.sink(event);
    if (options_.keep_trace)
      out_.trace.push_back(std::move(event));
  }

  // --- adversary setup -------------------------------------------------------

  void setup_adversary() {
    adversary_ = options_.adversary;
    if (!adversary_)
      adversary_ = std::make_shared<const AdversaryModel>(prepare_adversary(cfg_));
    out_.e_phy_bits = adversary_->design.e_phy_bits;
    router_.V = cfg_.control.V;
    router_.h_dummy_bits = cfg_.control.h_dummy_bits;
    router_.e_phy_rate = mode_ == Mode::Cidp ? adversary_->design.e_phy_bits : 0.0;

    const auto &curve = adversary_->curve(mode_);
    const double centre = cfg_.network.area_m / 2.0;
    p_detect_.resize(n_);
    for (int i = 0; i < n_; ++i) {
      const auto &p = channel_.positions()[i];
      const double d = std::max(kReferenceDistanceM, std::hypot(p.x - centre, p.y - centre));
      const double snr = cfg_.network.tx_power_dbm + link_gain(d, 1.0, cfg_.network.pathloss_exponent) -
                         cfg_.network.noise_dbm + cfg_.adversary.eve_snr_offset_db;
      p_detect_[i] = curve.p_d_at(snr);
    }
    label_accuracy_ = cfg_.adversary.direction_accuracy;
    if (mode_ == Mode::Cidp)
      label_accuracy_ *= std::exp2(-adversary_->design.e_phy_bits);
  }

  // --- per slot --------------------------------------------------------------

  void step(std::int64_t s) {
    emissions_.clear();
    source_emitted_.assign(f_, false);
    const auto adj = channel_.active_links(s);

    generate_realtime(s);
    if (mode_ == Mode::Cidp) {
      advance_reserved(s);
      route_backpressure(s, adj);
    } else {
      draw_bulk_into_fifo(s);
      route_baseline(s, adj);
    }
    observe(s);
    out_.backlog_series.push_back(current_backlog());
  }

  void generate_realtime(std::int64_t s) {
    const double slot_ms = cfg_.sim.slot_ms;
    const double end_ms = static_cast<double>(s + 1) * slot_ms;
    for (int f = 0; f < f_; ++f) {
      const auto &flow = cfg_.flows[f];
      if (!flow.realtime)
        continue;
      auto &plan = plans_[f];
      for (;;) {
        const double t = flow.phase_ms + static_cast<double>(plan.next_packet) * flow.period_ms;
        if (t >= end_ms)
          break;
        const std::int64_t seq = plan.next_packet++;
        ++out_.accounts[f].generated;
        ++out_.ledger.nominal_pkts;
        if (tracing())
          emit({s, EventKind::Arrival, f, flow.src, {{"packet", double(seq)}, {"time_ms", t}}});
        if (mode_ == Mode::Cidp) {
          reserved_.push_back({f, seq, 0, t, JitterState::initial(f, cfg_.control.dmax_ms)});
        } else {
          fifo_[flow.src].push_back({f, seq, 0, s, t});
        }
      }
    }
  }

  void advance_reserved(std::int64_t s) {
    const double end_ms = static_cast<double>(s + 1) * cfg_.sim.slot_ms;
    const auto &ctl = cfg_.control;
    std::vector<ReservedPacket> still;
    still.reserve(reserved_.size());
    for (auto pkt : reserved_) {
      const auto &plan = plans_[pkt.flow];
      bool delivered = false;
      while (pkt.time_ms < end_ms) {
        if (pkt.hop == plan.hops) {
          deliver_realtime(s, pkt.flow, pkt.seq, pkt.time_ms, plan.path.back());
          delivered = true;
          break;
        }
        const int node = plan.path[pkt.hop];
        const int to = plan.path[pkt.hop + 1];
        const double v =
            plan.v_max_ms * disturbance_.uniform_at(disturbance_index(pkt.flow, pkt.seq, pkt.hop));
        HoldDecision hold;
        try {
          hold = racbf_delay(pkt.jitter, v, plan.t_align_ms, ctl.alpha, ctl.dmax_ms);
        } catch (const std::exception &e) {
          emit({s, EventKind::BarrierViolation, pkt.flow, node,
                {{"packet", double(pkt.seq)}, {"d_ms", pkt.jitter.d_ms}, {"h_ms", pkt.jitter.h_ms},
                 {"v_ms", v}}});
          throw;
        }
        if (tracing()) {
          emit({s, EventKind::Hold, pkt.flow, node,
                {{"packet", double(pkt.seq)},
                 {"hop", double(pkt.hop)},
                 {"v_ms", v},
                 {"delta_ms", hold.delta_ms},
                 {"d_ms", hold.next.d_ms},
                 {"h_ms", pkt.jitter.h_ms},
                 {"h_next_ms", hold.next.h_ms}}});
          emit({s, EventKind::Forward, pkt.flow, node,
                {{"to", double(to)}, {"packet", double(pkt.seq)}, {"count", 1.0}}});
        }
        emissions_.push_back({node, to, 1});
        if (pkt.hop == 0)
          source_emitted_[pkt.flow] = true;
        pkt.time_ms += std::max(v, plan.t_align_ms);
        pkt.jitter = hold.next;
        ++pkt.hop;
      }
      if (!delivered)
        still.push_back(pkt);
    }
    reserved_ = std::move(still);
  }

  void deliver_realtime(std::int64_t s, int flow, std::int64_t seq, double time_ms, int node) {
    deliveries_[flow].push_back({seq, time_ms});
    ++out_.accounts[flow].delivered;
    ++out_.ledger.delivered_data_pkts;
    ++out_.ledger.realtime_delivered;
    if (tracing())
      emit({s, EventKind::Deliver, flow, node, {{"packet", double(seq)}, {"time_ms", time_ms}}});
  }

  std::vector<std::int64_t> draw_bulk(std::int64_t s) {
    std::vector<std::int64_t> counts(f_, 0);
    for (int f = 0; f < f_; ++f) {
      const auto &flow = cfg_.flows[f];
      if (flow.realtime)
        continue;
      counts[f] =
          poisson_draw(arrivals_, s, f, f_, flow.rate_pkts_per_s * cfg_.sim.slot_ms / 1000.0);
      if (counts[f] == 0)
        continue;
      out_.accounts[f].generated += counts[f];
      out_.ledger.nominal_pkts += counts[f];
      if (tracing())
        emit({s, EventKind::Arrival, f, flow.src, {{"count", double(counts[f])}}});
    }
    return counts;
  }

  void route_backpressure(std::int64_t s, const Adjacency &adj) {
    const auto counts = draw_bulk(s);
    std::vector<std::int64_t> arrivals(static_cast<std::size_t>(n_) * f_, 0);
    for (int f = 0; f < f_; ++f)
      arrivals[cfg_.flows[f].src * f_ + f] = counts[f];

    std::vector<ActiveLink> active;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (adj[i][j])
          active.push_back({{i, j}, cfg_.network.link_capacity_pkts});
    queues_.slot = s;
    const auto decision = decide_slot(queues_, active, router_);
    auto result = apply_decision(queues_, decision, arrivals, flow_dst_);

    for (const auto &t : decision.transmissions) {
      emissions_.push_back({t.link.from, t.link.to, t.count});
      if (tracing())
        emit({s, EventKind::Forward, t.flow, t.link.from,
              {{"to", double(t.link.to)}, {"count", double(t.count)}}});
    }
    std::vector<std::int64_t> dummies_by_node(n_, 0);
    for (const auto &d : decision.dummies) {
      emissions_.push_back({d.link.from, d.link.to, d.count});
      dummies_by_node[d.link.from] += d.count;
    }
    for (int i = 0; i < n_; ++i) {
      if (dummies_by_node[i] == 0)
        continue;
      out_.ledger.delivered_dummy_pkts += dummies_by_node[i];
      if (tracing())
        emit({s, EventKind::Dummy, -1, i, {{"count", double(dummies_by_node[i])}}});
    }
    for (int f = 0; f < f_; ++f) {
      const auto got = result.delivered[f];
      if (got == 0)
        continue;
      out_.accounts[f].delivered += got;
      out_.ledger.delivered_data_pkts += got;
      if (tracing())
        emit({s, EventKind::Deliver, f, cfg_.flows[f].dst, {{"count", double(got)}}});
    }
    queues_ = std::move(result.next);
  }

  void draw_bulk_into_fifo(std::int64_t s) {
    const auto counts = draw_bulk(s);
    for (int f = 0; f < f_; ++f)
      for (std::int64_t k = 0; k < counts[f]; ++k)
        fifo_[cfg_.flows[f].src].push_back({f, -1, 0, s, 0.0});
  }

  void route_baseline(std::int64_t s, const Adjacency &adj) {
    const double slot_ms = cfg_.sim.slot_ms;
    std::vector<std::vector<int>> dist(n_);
    for (int f = 0; f < f_; ++f) {
      const int dst = cfg_.flows[f].dst;
      if (dist[dst].empty())
        dist[dst] = hop_distances_to(adj, dst);
    }
    std::vector<std::vector<int>> cap(n_, std::vector<int>(n_, 0));
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (adj[i][j])
          cap[i][j] = cfg_.network.link_capacity_pkts;

    const int hop_limit = 4 * n_;
    std::vector<std::pair<int, QueuedPacket>> moved;
    for (int node = 0; node < n_; ++node) {
      bool sent = false;
      std::deque<QueuedPacket> kept;
      for (auto &pkt : fifo_[node]) {
        if (pkt.ready_slot > s) {
          kept.push_back(pkt);
          continue;
        }
        const int dst = cfg_.flows[pkt.flow].dst;
        const int to = next_hop_from(adj, dist[dst], node);
        if (to < 0 || cap[node][to] == 0) {
          kept.push_back(pkt);
          continue;
        }
        --cap[node][to];
        sent = true;
        emissions_.push_back({node, to, 1});
        if (pkt.hops == 0 && pkt.seq >= 0)
          source_emitted_[pkt.flow] = true;
        if (tracing()) {
          TraceEvent ev{s, EventKind::Forward, pkt.flow, node, {{"to", double(to)}, {"count", 1.0}}};
          if (pkt.seq >= 0)
            ev.payload["packet"] = double(pkt.seq);
          emit(std::move(ev));
        }
        QueuedPacket next = pkt;
        if (pkt.seq >= 0) {
          const auto &plan = plans_[pkt.flow];
          const double v =
              plan.v_max_ms * disturbance_.uniform_at(disturbance_index(pkt.flow, pkt.seq, pkt.hops));
          next.time_ms = std::max(pkt.time_ms, static_cast<double>(s) * slot_ms) + v;
        }
        ++next.hops;
        if (to == dst) {
          if (pkt.seq >= 0) {
            deliver_realtime(s, pkt.flow, pkt.seq, next.time_ms, to);
          } else {
            ++out_.accounts[pkt.flow].delivered;
            ++out_.ledger.delivered_data_pkts;
            if (tracing())
              emit({s, EventKind::Deliver, pkt.flow, to, {{"count", 1.0}}});
          }
        } else if (next.hops >= hop_limit) {
          ++out_.accounts[pkt.flow].dropped;
          ++out_.ledger.dropped_pkts;
          if (tracing())
            emit({s, EventKind::Drop, pkt.flow, to, {{"hops", double(next.hops)}}});
        } else {
          next.ready_slot = s + 1;
          if (pkt.seq >= 0)
            next.ready_slot = std::max<std::int64_t>(
                s + 1, static_cast<std::int64_t>(std::ceil(next.time_ms / slot_ms)));
          moved.emplace_back(to, next);
        }
      }
      fifo_[node] = std::move(kept);
      if (!sent)
        emit_baseline_dummy(s, node, adj);
    }
    for (auto &[to, pkt] : moved)
      fifo_[to].push_back(pkt);
  }

  void emit_baseline_dummy(std::int64_t s, int node, const Adjacency &adj) {
    std::vector<int> targets;
    for (int j = 0; j < n_; ++j)
      if (adj[node][j])
        targets.push_back(j);
    if (targets.empty())
      return;
    const double u = dummy_.uniform_at(static_cast<std::uint64_t>(s) * n_ + node);
    const int to = targets[std::min(targets.size() - 1,
                                    static_cast<std::size_t>(u * static_cast<double>(targets.size())))];
    emissions_.push_back({node, to, 1});
    ++out_.ledger.delivered_dummy_pkts;
    if (tracing())
      emit({s, EventKind::Dummy, -1, node, {{"count", 1.0}, {"to", double(to)}}});
  }

  // --- adversary observation -------------------------------------------------

  void observe(std::int64_t s) {
    for (auto &obs : slot_obs_)
      obs.labels.clear();
    for (const auto &e : emissions_) {
      for (std::int64_t k = 0; k < e.count; ++k) {
        if (observation_.uniform() >= p_detect_[e.node])
          continue;
        ++detected_[e.node];
        int label = e.to;
        if (observation_.uniform() >= label_accuracy_) {
          const auto pick = std::min<int>(
              n_ - 2, static_cast<int>(observation_.uniform() * static_cast<double>(n_ - 1)));
          label = pick < e.node ? pick : pick + 1;
        }
        slot_obs_[e.node].labels.push_back(label);
      }
    }
    for (int f = 0; f < f_; ++f)
      if (source_emitted_[f])
        epoch_slots_[f].push_back(slot_obs_);

    const std::int64_t epoch_len = cfg_.sim.epoch_slots;
    if ((s + 1) % epoch_len == 0 || s + 1 == cfg_.sim.n_slots)
      close_epoch(s / epoch_len, s + 1 - (s / epoch_len) * epoch_len);
  }

  void close_epoch(std::int64_t epoch, std::int64_t slots_in_epoch) {
    std::vector<double> rate(n_, 0.0);
    for (int i = 0; i < n_; ++i)
      if (p_detect_[i] > 0.0)
        rate[i] = static_cast<double>(detected_[i]) /
                  (p_detect_[i] * static_cast<double>(slots_in_epoch));

    std::vector<bool> has_traffic(n_, false);
    for (const auto &flow : cfg_.flows)
      has_traffic[flow.src] = true;

    for (int f = 0; f < f_; ++f) {
      if (epoch_slots_[f].empty())
        continue;
      const int receiver = cfg_.flows[f].dst;
      AnonymityQuery q;
      q.receiver = receiver;
      for (int c = 0; c < n_; ++c)
        if (c != receiver && (!cfg_.adversary.candidates_with_traffic_only || has_traffic[c]))
          q.candidates.push_back(c);
      q.expected_hop = expected_hop_[receiver];
      q.slots = std::move(epoch_slots_[f]);
      q.emission_rate = rate;
      q.p_detect = p_detect_;
      q.direction_accuracy = label_accuracy_;
      q.label_count = n_ - 1;
      out_.ledger.anonymity_posteriors.push_back({f, epoch, infer_anonymity(q)});
      epoch_slots_[f].clear();
    }
    std::fill(detected_.begin(), detected_.end(), 0);
  }

  // --- bookkeeping -----------------------------------------------------------

  std::int64_t current_backlog() const {
    if (mode_ == Mode::Cidp)
      return queues_.total();
    std::int64_t total = 0;
    for (const auto &q : fifo_)
      total += static_cast<std::int64_t>(q.size());
    return total;
  }

  void refresh_in_network() {
    for (auto &a : out_.accounts)
      a.in_network = 0;
    for (const auto &pkt : reserved_)
      ++out_.accounts[pkt.flow].in_network;
    for (const auto &q : fifo_)
      for (const auto &pkt : q)
        ++out_.accounts[pkt.flow].in_network;
    for (int f = 0; f < f_; ++f)
      out_.accounts[f].in_network += queues_.flow_total(f);
  }

  void finish() {
    refresh_in_network();
    for (int f = 0; f < f_; ++f) {
      if (!cfg_.flows[f].realtime)
        continue;
      auto &d = deliveries_[f];
      std::sort(d.begin(), d.end(), [](const Delivery &a, const Delivery &b) { return a.seq < b.seq; });
      auto &samples = out_.ledger.jitter_samples_ms[f];
      for (std::size_t i = 1; i < d.size(); ++i) {
        const double gap = d[i].time_ms - d[i - 1].time_ms;
        const double nominal = static_cast<double>(d[i].seq - d[i - 1].seq) * cfg_.flows[f].period_ms;
        samples.push_back(std::abs(gap - nominal));
      }
    }
    auto &st = out_.final_state;
    st.graph = mean_graph_;
    st.queues = queues_;
    st.fifo_backlog.resize(n_);
    for (int i = 0; i < n_; ++i)
      st.fifo_backlog[i] = static_cast<std::int64_t>(fifo_[i].size());
    st.realtime_in_flight = static_cast<std::int64_t>(reserved_.size());
    for (const auto &q : fifo_)
      for (const auto &pkt : q)
        if (pkt.seq >= 0)
          ++st.realtime_in_flight;
    st.clock_slot = cfg_.sim.n_slots;
  }

  const ScenarioConfig &cfg_;
  Mode mode_;
  const RunOptions &options_;
  int n_;
  int f_;
  Channel channel_;
  RandomStream arrivals_;
  RandomStream disturbance_;
  RandomStream observation_;
  RandomStream dummy_;

  std::shared_ptr<const AdversaryModel> adversary_;
  RouterParams router_;
  std::vector<double> p_detect_;
  double label_accuracy_ = 0.0;

  Adjacency mean_graph_;
  std::vector<std::vector<int>> expected_hop_; ///< [receiver][candidate]
  std::vector<RealtimePlan> plans_;
  std::vector<int> flow_dst_;
  QueueState queues_;
  std::vector<ReservedPacket> reserved_;
  std::vector<std::deque<QueuedPacket>> fifo_;
  std::vector<std::vector<Delivery>> deliveries_;

  std::vector<Emission> emissions_;
  std::vector<bool> source_emitted_;
  std::vector<NodeObservation> slot_obs_;
  std::vector<std::int64_t> detected_;
  std::vector<std::vector<std::vector<NodeObservation>>> epoch_slots_;

  SimulationRun out_;
};

} // namespace

SimulationRun run(const ScenarioConfig &cfg, Mode mode, int replication, const RunOptions &options) {
  validate(cfg);
  Simulator sim(cfg, mode, replication, options);
  return sim.execute();
}

} // namespace cidp

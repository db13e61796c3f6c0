#include "cidp/channel.hpp"

#include <cmath>

#include "cidp/errors.hpp"

namespace cidp {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double link_gain(double distance_m, std::complex<double> fading, double pathloss_exponent) {
  if (!(distance_m > 0.0))
    throw DomainError("link_gain: distance must be positive");
  return kReferenceGainDb - 10.0 * pathloss_exponent * std::log10(distance_m / kReferenceDistanceM) +
         20.0 * std::log10(std::abs(fading));
}

std::complex<double> rician_sample(double k_linear, std::complex<double> diffuse) {
  const double los = std::sqrt(k_linear / (k_linear + 1.0));
  const double scatter = std::sqrt(1.0 / (k_linear + 1.0));
  return los + scatter * diffuse;
}

std::complex<double> draw_rician(RandomStream &rng, double k_db) {
  return rician_sample(db_to_linear(k_db), rng.complex_normal());
}

std::vector<Position> place_nodes(int n_nodes, double area_m, RandomStream &placement) {
  std::vector<Position> out;
  out.reserve(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    const double x = placement.uniform() * area_m;
    const double y = placement.uniform() * area_m;
    out.push_back({x, y});
  }
  return out;
}

Channel::Channel(const NetworkConfig &net, std::uint64_t seed, std::uint64_t replication)
    : net_(net), fading_(make_rng(seed, "fading", replication)),
      k_linear_(db_to_linear(net.rician_k_db)) {
  if (!net.positions.empty()) {
    positions_ = net.positions;
  } else {
    // Topology is shared by every replication of a scenario.
    auto placement = make_rng(seed, "placement");
    positions_ = place_nodes(net.n_nodes, net.area_m, placement);
  }
}

double Channel::distance(int a, int b) const {
  return std::hypot(positions_[a].x - positions_[b].x, positions_[a].y - positions_[b].y);
}

std::complex<double> Channel::fading(int tx, int rx, std::int64_t slot) const {
  const auto n = static_cast<std::uint64_t>(net_.n_nodes);
  const std::uint64_t link = static_cast<std::uint64_t>(tx) * n + static_cast<std::uint64_t>(rx);
  const std::uint64_t index = (static_cast<std::uint64_t>(slot) * n * n + link) * 2;
  return rician_sample(k_linear_, fading_.complex_normal_at(index));
}

LinkRealization Channel::link_state(int tx, int rx, std::int64_t slot) const {
  if (tx == rx)
    throw DomainError("link_state: tx and rx must differ");
  LinkRealization r;
  r.from = tx;
  r.to = rx;
  r.gain_db = link_gain(distance(tx, rx), fading(tx, rx, slot), net_.pathloss_exponent);
  r.sinr_db = net_.tx_power_dbm + r.gain_db - net_.noise_dbm;
  r.active = r.sinr_db >= net_.gamma0_db;
  return r;
}

double Channel::mean_sinr_db(int tx, int rx) const {
  return net_.tx_power_dbm + link_gain(distance(tx, rx), 1.0, net_.pathloss_exponent) -
         net_.noise_dbm;
}

std::vector<std::vector<bool>> Channel::active_links(std::int64_t slot) const {
  std::vector<std::vector<bool>> adj(net_.n_nodes, std::vector<bool>(net_.n_nodes, false));
  for (int i = 0; i < net_.n_nodes; ++i)
    for (int j = 0; j < net_.n_nodes; ++j)
      if (i != j)
        adj[i][j] = link_state(i, j, slot).active;
  return adj;
}

} // namespace cidp

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "cidp/config.hpp"
#include "cidp/random.hpp"

namespace cidp {

/// Gain at the 1 m reference distance (free-space loss at roughly 2.4 GHz).
inline constexpr double kReferenceGainDb = -40.0;
inline constexpr double kReferenceDistanceM = 1.0;

struct LinkRealization {
  int from = 0;
  int to = 0;
  double gain_db = 0.0;
  double sinr_db = 0.0;
  bool active = false;
};

double db_to_linear(double db);
double linear_to_db(double linear);

/// Log-distance path loss plus the Rician envelope |h|:
///   G0 - 10 n log10(d / d0) + 20 log10 |h|
/// Throws DomainError for distance <= 0.
double link_gain(double distance_m, std::complex<double> fading, double pathloss_exponent);

/// Rician fading sample with unit mean power, LOS component on the real axis.
/// `diffuse` is a CN(0,1) draw.
std::complex<double> rician_sample(double k_linear, std::complex<double> diffuse);
std::complex<double> draw_rician(RandomStream &rng, double k_db);

/// Link physics for one replication. Fading is redrawn i.i.d. per slot and
/// directed link, addressed by counter so link_state is a pure function of
/// (config, seed, replication, slot).
class Channel {
public:
  Channel(const NetworkConfig &net, std::uint64_t seed, std::uint64_t replication);

  int n_nodes() const { return net_.n_nodes; }
  const std::vector<Position> &positions() const { return positions_; }
  double distance(int a, int b) const;

  std::complex<double> fading(int tx, int rx, std::int64_t slot) const;
  LinkRealization link_state(int tx, int rx, std::int64_t slot) const;

  /// SINR with |h| = 1; used for the static connectivity graph.
  double mean_sinr_db(int tx, int rx) const;
  bool mean_link_up(int tx, int rx) const { return mean_sinr_db(tx, rx) >= net_.gamma0_db; }

  /// adjacency[i][j] of links up this slot.
  std::vector<std::vector<bool>> active_links(std::int64_t slot) const;

private:
  NetworkConfig net_;
  std::vector<Position> positions_;
  RandomStream fading_;
  double k_linear_;
};

/// Nodes placed uniformly in [0, area]^2 from the "placement" stream.
std::vector<Position> place_nodes(int n_nodes, double area_m, RandomStream &placement);

} // namespace cidp

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace cidp {

struct Position {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Position &) const = default;
};

struct NetworkConfig {
  int n_nodes = 0;
  double area_m = 0.0;
  double gamma0_db = 0.0;
  double pathloss_exponent = 0.0;
  double rician_k_db = 0.0;
  double tx_power_dbm = 0.0;
  double noise_dbm = 0.0;
  // optional
  int link_capacity_pkts = 1;
  std::vector<Position> positions; ///< empty: uniform random placement
  bool operator==(const NetworkConfig &) const = default;
};

struct FlowSpec {
  int src = 0;
  int dst = 0;
  double rate_pkts_per_s = 0.0;
  double period_ms = 0.0;
  bool realtime = false;
  int priority = 0;
  double phase_ms = 0.0;
  bool operator==(const FlowSpec &) const = default;
};

struct ControlConfig {
  double V = 0.0;
  double alpha = 0.0;
  double t_align_ms = 0.0; ///< 0: split dmax_ms evenly over hops + 1
  double dmax_ms = 0.0;
  double h_dummy_bits = 1.0;
  double v_max_ms = 0.0; ///< 0: largest support the filter can absorb
  bool operator==(const ControlConfig &) const = default;
};

struct SltmConfig {
  int m_elements = 0;
  double spacing_wavelengths = 0.0;
  double theta0_deg = 0.0;
  double mask_exclusion_deg = 0.0;
  double grid_step_deg = 0.0;
  int subslots = 0;
  double rho = 0.9;
  bool literal_equality = false;
  int quantization_levels = 8;
  double tol = 1e-6;
  bool operator==(const SltmConfig &) const = default;
};

enum class EvePlacement { WorstCase, Fixed, Uniform };

struct AdversaryConfig {
  std::vector<double> snr_grid_db;
  double pfa = 0.0;
  int window_samples = 0;
  int mc_trials = 0;
  double theta_eve_deg = 45.0;
  /// Where the detection radiometer sits: the strongest sidelobe direction of
  /// the pattern under test, theta_eve_deg, or a mask angle drawn per trial.
  EvePlacement eve_placement = EvePlacement::WorstCase;
  double tau = 1.0;
  double gamma = 0.1;
  double direction_accuracy = 0.5;
  double eve_snr_offset_db = 0.0;
  bool candidates_with_traffic_only = false;
  bool operator==(const AdversaryConfig &) const = default;
};

struct SimConfig {
  std::int64_t n_slots = 0;
  double slot_ms = 0.0;
  std::uint64_t seed = 0;
  int replications = 1;
  int epoch_slots = 100;
  bool operator==(const SimConfig &) const = default;
};

struct ScenarioConfig {
  NetworkConfig network;
  std::vector<FlowSpec> flows;
  ControlConfig control;
  SltmConfig sltm;
  AdversaryConfig adversary;
  SimConfig sim;
  bool operator==(const ScenarioConfig &) const = default;
};

/// Parses and validates a scenario document. Throws ConfigError naming the
/// offending key path or the violated invariant.
ScenarioConfig parse_config(const std::string &text);
ScenarioConfig parse_config(const nlohmann::json &doc);
ScenarioConfig load_config(const std::string &path);

/// Checks every invariant; throws ConfigError on the first violation.
void validate(const ScenarioConfig &cfg);

nlohmann::json to_json(const ScenarioConfig &cfg);
std::string serialize(const ScenarioConfig &cfg);

/// FNV-1a 64 of the canonical serialization, as 16 hex digits.
std::string config_hash(const ScenarioConfig &cfg);

} // namespace cidp

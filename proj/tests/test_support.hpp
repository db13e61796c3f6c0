#pragma once

#include <string>

#include <json.hpp>

#include "cidp/config.hpp"

namespace testing_support {

inline std::string scenario_path(const std::string &name) {
  return std::string(CIDP_SCENARIO_DIR) + "/" + name;
}

/// Smallest valid document: two nodes 50 m apart, one flow.
inline nlohmann::json minimal_document() {
  return nlohmann::json::parse(R"({
    "network": {"n_nodes": 2, "area_m": 100, "gamma0_db": 10, "pathloss_exponent": 3,
                "rician_k_db": 6, "tx_power_dbm": 20, "noise_dbm": -95,
                "positions": [[0, 0], [50, 0]]},
    "flows": [{"src": 0, "dst": 1, "rate_pkts_per_s": 10}],
    "control": {"V": 1, "alpha": 0.5, "dmax_ms": 30},
    "sltm": {"m_elements": 4, "spacing_wavelengths": 0.5, "theta0_deg": 0,
             "mask_exclusion_deg": 15, "grid_step_deg": 5, "subslots": 8},
    "adversary": {"snr_grid_db": [0], "pfa": 0.05, "window_samples": 10, "mc_trials": 1000},
    "sim": {"n_slots": 10, "slot_ms": 5, "seed": 1}
  })");
}

inline cidp::ScenarioConfig reference_scenario() {
  return cidp::load_config(scenario_path("paper_scenario.json"));
}

} // namespace testing_support

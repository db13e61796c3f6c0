#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cidp/metrics.hpp"
#include "cidp/simulation.hpp"

namespace cidp {

struct ModeSummary {
  Mode mode = Mode::Cidp;
  MetricsLedger ledger; ///< all replications concatenated
  std::optional<double> compliance;
  std::optional<double> jitter_p99_ms;
  double saet = 0.0;
  double median_anonymity = 0.0;
  // one entry per replication, used for paired deltas
  std::vector<double> rep_compliance;
  std::vector<double> rep_p99_ms;
  std::vector<double> rep_saet;
  std::vector<double> rep_median_anonymity;
};

struct MetricRow {
  std::string metric;
  double cidp = 0.0;
  double baseline = 0.0;
  double delta = 0.0;                ///< cidp - baseline
  std::optional<double> delta_stderr; ///< absent with a single replication
};

struct OrderingCheck {
  std::string name;
  bool holds = false;
};

struct ComparisonReport {
  std::string config_hash;
  int replications = 0;
  double e_phy_bits = 0.0;
  double eta_star = 0.0;
  ModeSummary cidp;
  ModeSummary baseline;
  DetectionCurve detection_cidp;
  DetectionCurve detection_baseline;
  std::vector<MetricRow> rows;
  std::vector<OrderingCheck> orderings;

  bool orderings_hold() const;
};

/// Runs both modes for `replications` replications (0 .. reps-1) with
/// paired randomness and aggregates the table metrics.
ComparisonReport compare(const ScenarioConfig &cfg, int replications,
                         std::shared_ptr<const AdversaryModel> adversary = nullptr);

/// Sample mean and standard error of the mean; stderr is empty for n < 2.
std::pair<double, std::optional<double>> mean_stderr(const std::vector<double> &values);

nlohmann::ordered_json to_json(const ComparisonReport &report);
std::string comparison_csv(const ComparisonReport &report);
std::string jitter_cdf_csv(const ComparisonReport &report);
std::string anon_cdf_csv(const ComparisonReport &report);
std::string detection_csv(const std::string &config_hash, const std::vector<DetectionCurve> &curves);

/// |F(theta)| over [-90, 90] in grid steps: one column per sub-slot, the
/// time-averaged weights and the relaxed weights.
std::string pattern_csv(const std::string &config_hash, const SltmConfig &cfg,
                        const SltmDesign &design);
nlohmann::ordered_json design_json(const std::string &config_hash, const SltmDesign &design);

nlohmann::ordered_json ledger_json(const SimulationRun &run);

/// Writes text to dir/name, creating dir when needed.
void write_file(const std::filesystem::path &dir, const std::string &name, const std::string &text);

/// comparison.json, comparison.csv, jitter_cdf.csv and anon_cdf.csv.
void write_comparison(const ComparisonReport &report, const std::filesystem::path &dir);

} // namespace cidp

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cidp/adversary.hpp"

namespace cidp {

struct EpochPosterior {
  int flow = 0;
  std::int64_t epoch = 0;
  AnonymityPosterior posterior;
};

/// Everything one replication contributes to the metrics. Ledgers of several
/// replications merge by concatenation (see merge).
struct MetricsLedger {
  std::vector<std::vector<double>> jitter_samples_ms; ///< per flow
  std::int64_t delivered_data_pkts = 0;
  std::int64_t delivered_dummy_pkts = 0;
  std::int64_t nominal_pkts = 0;
  std::int64_t realtime_delivered = 0;
  std::int64_t dropped_pkts = 0;
  std::vector<EpochPosterior> anonymity_posteriors;
  std::vector<DetectionCurve> detection_curves;

  /// Appends `other`; flows are matched by index.
  void merge(const MetricsLedger &other);
  std::size_t jitter_sample_count() const;
};

struct CdfPoint {
  double value = 0.0;
  double fraction = 0.0;
};

/// Empirical CDF over all jitter samples: one point per distinct value,
/// fraction = share of samples <= value. Empty when there are no samples.
std::vector<CdfPoint> jitter_cdf(const MetricsLedger &ledger);

/// Share of jitter samples <= dmax; nullopt when there were no real-time
/// deliveries.
std::optional<double> compliance(const MetricsLedger &ledger, double dmax_ms);

/// Nearest-rank percentile (q in (0, 1]) of the pooled jitter samples.
std::optional<double> jitter_percentile(const MetricsLedger &ledger, double q);

/// Delivered data over nominal data; dummies never count. Throws DomainError
/// when nothing was offered.
double saet(const MetricsLedger &ledger);

struct AnonymityCdf {
  std::vector<CdfPoint> points;
  double median = 0.0;
};

/// CDF of effective set sizes. Throws DomainError without posteriors.
AnonymityCdf anonymity_cdf(const MetricsLedger &ledger);

double median(std::vector<double> values);
double nearest_rank(std::vector<double> values, double q);

nlohmann::ordered_json to_json(const MetricsLedger &ledger);
nlohmann::ordered_json to_json(const DetectionCurve &curve);

} // namespace cidp

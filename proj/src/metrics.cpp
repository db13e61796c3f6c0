#include "cidp/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "cidp/errors.hpp"

namespace cidp {

void MetricsLedger::merge(const MetricsLedger &other) {
  if (jitter_samples_ms.size() < other.jitter_samples_ms.size())
    jitter_samples_ms.resize(other.jitter_samples_ms.size());
  for (std::size_t f = 0; f < other.jitter_samples_ms.size(); ++f)
    jitter_samples_ms[f].insert(jitter_samples_ms[f].end(), other.jitter_samples_ms[f].begin(),
                                other.jitter_samples_ms[f].end());
  delivered_data_pkts += other.delivered_data_pkts;
  delivered_dummy_pkts += other.delivered_dummy_pkts;
  nominal_pkts += other.nominal_pkts;
  realtime_delivered += other.realtime_delivered;
  dropped_pkts += other.dropped_pkts;
  anonymity_posteriors.insert(anonymity_posteriors.end(), other.anonymity_posteriors.begin(),
                              other.anonymity_posteriors.end());
  detection_curves.insert(detection_curves.end(), other.detection_curves.begin(),
                          other.detection_curves.end());
}

std::size_t MetricsLedger::jitter_sample_count() const {
  std::size_t n = 0;
  for (const auto &f : jitter_samples_ms)
    n += f.size();
  return n;
}

namespace {

std::vector<double> pooled(const MetricsLedger &ledger) {
  std::vector<double> all;
  all.reserve(ledger.jitter_sample_count());
  for (const auto &f : ledger.jitter_samples_ms)
    all.insert(all.end(), f.begin(), f.end());
  return all;
}

std::vector<CdfPoint> empirical_cdf(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::vector<CdfPoint> cdf;
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i + 1 < values.size() && values[i + 1] == values[i])
      continue;
    cdf.push_back({values[i], static_cast<double>(i + 1) / n});
  }
  return cdf;
}

} // namespace

std::vector<CdfPoint> jitter_cdf(const MetricsLedger &ledger) {
  return empirical_cdf(pooled(ledger));
}

std::optional<double> compliance(const MetricsLedger &ledger, double dmax_ms) {
  const auto all = pooled(ledger);
  if (all.empty())
    return std::nullopt;
  const auto ok = std::count_if(all.begin(), all.end(), [&](double j) { return j <= dmax_ms; });
  return static_cast<double>(ok) / static_cast<double>(all.size());
}

double nearest_rank(std::vector<double> values, double q) {
  if (values.empty())
    throw DomainError("nearest_rank: no values");
  if (!(q > 0.0 && q <= 1.0))
    throw DomainError("nearest_rank: q must lie in (0, 1]");
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
  return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

std::optional<double> jitter_percentile(const MetricsLedger &ledger, double q) {
  auto all = pooled(ledger);
  if (all.empty())
    return std::nullopt;
  return nearest_rank(std::move(all), q);
}

double saet(const MetricsLedger &ledger) {
  if (ledger.nominal_pkts <= 0)
    throw DomainError("saet: no nominal traffic");
  return static_cast<double>(ledger.delivered_data_pkts) /
         static_cast<double>(ledger.nominal_pkts);
}

double median(std::vector<double> values) {
  if (values.empty())
    throw DomainError("median: no values");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

AnonymityCdf anonymity_cdf(const MetricsLedger &ledger) {
  if (ledger.anonymity_posteriors.empty())
    throw DomainError("anonymity_cdf: no posteriors");
  std::vector<double> sizes;
  sizes.reserve(ledger.anonymity_posteriors.size());
  for (const auto &e : ledger.anonymity_posteriors)
    sizes.push_back(e.posterior.effective_set_size);
  AnonymityCdf out;
  out.median = median(sizes);
  out.points = empirical_cdf(std::move(sizes));
  return out;
}

nlohmann::ordered_json to_json(const DetectionCurve &curve) {
  nlohmann::ordered_json j;
  j["mode"] = std::string(to_string(curve.mode));
  j["trials"] = curve.trials;
  j["threshold"] = curve.threshold;
  auto pts = nlohmann::ordered_json::array();
  for (const auto &p : curve.points)
    pts.push_back({{"snr_db", p.snr_db}, {"p_d", p.p_d}, {"stderr", p.stderr_}});
  j["points"] = std::move(pts);
  return j;
}

nlohmann::ordered_json to_json(const MetricsLedger &ledger) {
  nlohmann::ordered_json j;
  j["delivered_data_pkts"] = ledger.delivered_data_pkts;
  j["delivered_dummy_pkts"] = ledger.delivered_dummy_pkts;
  j["nominal_pkts"] = ledger.nominal_pkts;
  j["realtime_delivered"] = ledger.realtime_delivered;
  j["dropped_pkts"] = ledger.dropped_pkts;
  j["jitter_samples_ms"] = ledger.jitter_samples_ms;
  auto posts = nlohmann::ordered_json::array();
  for (const auto &e : ledger.anonymity_posteriors) {
    posts.push_back({{"flow", e.flow},
                     {"epoch", e.epoch},
                     {"receiver", e.posterior.receiver},
                     {"entropy_bits", e.posterior.entropy_bits},
                     {"effective_set_size", e.posterior.effective_set_size},
                     {"candidates", e.posterior.candidates},
                     {"weights", e.posterior.weights}});
  }
  j["anonymity_posteriors"] = std::move(posts);
  auto curves = nlohmann::ordered_json::array();
  for (const auto &c : ledger.detection_curves)
    curves.push_back(to_json(c));
  j["detection_curves"] = std::move(curves);
  return j;
}

} // namespace cidp

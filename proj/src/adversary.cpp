#include "cidp/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "cidp/channel.hpp"
#include "cidp/errors.hpp"

namespace cidp {

double delta_floor(const TrilemmaInputs &in) {
  if (in.tau < 0 || in.beta < 0 || in.beta > 1 || in.lambda < 0 || in.gamma < 0 || in.e_phy < 0)
    throw DomainError("delta_floor: inputs outside their ranges");
  const double delta = 1.0 - 2.0 * in.tau * (in.beta + in.lambda) - in.gamma * in.e_phy;
  return std::clamp(delta, 0.0, 1.0);
}

double radiometer_statistic(std::span<const std::complex<double>> samples, int window) {
  if (window < 1)
    throw DomainError("radiometer: window must be at least one sample");
  if (static_cast<std::size_t>(window) > samples.size())
    throw DomainError("radiometer: fewer samples than the window");
  double energy = 0.0;
  for (int k = 0; k < window; ++k)
    energy += std::norm(samples[k]);
  return energy;
}

double calibrate_threshold(double pfa, int window, int trials, RandomStream &rng) {
  if (!(pfa > 0.0 && pfa < 1.0))
    throw DomainError("calibrate_threshold: pfa must lie in (0, 1)");
  if (window < 1)
    throw DomainError("calibrate_threshold: window must be at least one sample");
  if (static_cast<double>(trials) * pfa < 20.0)
    throw DomainError(fmt::format(
        "calibrate_threshold: {} trials give fewer than 20 expected exceedances at pfa = {}",
        trials, pfa));
  std::vector<double> stats(trials);
  for (int t = 0; t < trials; ++t) {
    double energy = 0.0;
    for (int k = 0; k < window; ++k)
      energy += std::norm(rng.complex_normal());
    stats[t] = energy;
  }
  std::sort(stats.begin(), stats.end());
  // Exceedance rate of the k-th order statistic is (trials - 1 - k) / trials.
  const auto keep = static_cast<std::size_t>(std::ceil((1.0 - pfa) * trials));
  return stats[std::clamp<std::size_t>(keep, 1, stats.size()) - 1];
}

std::string_view to_string(DetectionMode mode) {
  return mode == DetectionMode::CidpSltm ? "cidp_sltm" : "static_baseline";
}

double DetectionCurve::p_d_at(double snr_db) const {
  if (points.empty())
    throw DomainError("DetectionCurve: no points");
  if (snr_db <= points.front().snr_db)
    return points.front().p_d;
  if (snr_db >= points.back().snr_db)
    return points.back().p_d;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (snr_db <= points[i].snr_db) {
      const auto &a = points[i - 1];
      const auto &b = points[i];
      const double w = (snr_db - a.snr_db) / (b.snr_db - a.snr_db);
      return a.p_d + w * (b.p_d - a.p_d);
    }
  }
  return points.back().p_d;
}

DetectionCurve detection_sweep(const AdversaryConfig &adv, DetectionMode mode,
                               const SltmProblem &problem, const Schedule &schedule,
                               double threshold, RandomStream rng) {
  const auto &geom = problem.geometry;
  const int m = geom.m_elements;

  // Power gain |F_k(theta)|^2 / M per candidate angle and sub-slot.
  const Selection ones(m, 1.0);
  auto gains_at = [&](double theta) {
    std::vector<double> g;
    if (mode == DetectionMode::StaticBaseline || schedule.empty()) {
      g.push_back(std::norm(pattern(geom, ones, theta)) / m);
    } else {
      for (const auto &entry : schedule)
        g.push_back(std::norm(pattern(geom, entry, theta)) / m);
    }
    return g;
  };
  std::vector<std::vector<double>> power;
  if (adv.eve_placement == EvePlacement::Fixed) {
    power.push_back(gains_at(adv.theta_eve_deg));
  } else {
    for (double theta : problem.mask_angles_deg)
      power.push_back(gains_at(theta));
    if (adv.eve_placement == EvePlacement::WorstCase) {
      // The radiometer sits where the pattern leaks the most mean power.
      auto mean = [](const std::vector<double> &g) {
        double sum = 0.0;
        for (double x : g)
          sum += x;
        return sum / static_cast<double>(g.size());
      };
      std::size_t best = 0;
      for (std::size_t l = 1; l < power.size(); ++l)
        if (mean(power[l]) > mean(power[best]))
          best = l;
      power = {power[best]};
    }
  }
  const std::size_t n_angles = power.size();

  DetectionCurve curve;
  curve.mode = mode;
  curve.trials = adv.mc_trials;
  curve.threshold = threshold;
  for (double snr_db : adv.snr_grid_db) {
    const double snr = db_to_linear(snr_db);
    int hits = 0;
    for (int t = 0; t < adv.mc_trials; ++t) {
      // Drawn in every placement so both modes consume the same stream.
      const auto l = std::min<std::size_t>(n_angles - 1,
                                           static_cast<std::size_t>(rng.uniform() * n_angles));
      const auto &gains = power[l];
      double energy = 0.0;
      for (int k = 0; k < adv.window_samples; ++k) {
        const double amp = std::sqrt(snr * gains[k % gains.size()]);
        const auto y = amp * rng.complex_normal() + rng.complex_normal();
        energy += std::norm(y);
      }
      if (energy > threshold)
        ++hits;
    }
    const double p = static_cast<double>(hits) / adv.mc_trials;
    curve.points.push_back({snr_db, p, std::sqrt(p * (1.0 - p) / adv.mc_trials)});
  }
  return curve;
}

AnonymityPosterior posterior_from_weights(int receiver, std::vector<int> candidates,
                                          std::vector<double> weights) {
  AnonymityPosterior post;
  post.receiver = receiver;
  double sum = 0.0;
  for (double w : weights)
    sum += w;
  if (!(sum > 0.0) || !std::isfinite(sum))
    weights.assign(weights.size(), 1.0), sum = static_cast<double>(weights.size());
  double h = 0.0;
  for (auto &w : weights) {
    w /= sum;
    if (w > 0.0)
      h -= w * std::log2(w);
  }
  post.candidates = std::move(candidates);
  post.weights = std::move(weights);
  post.entropy_bits = std::max(0.0, h);
  const double n = static_cast<double>(post.weights.size());
  post.effective_set_size = std::clamp(std::exp2(post.entropy_bits), 1.0, std::max(1.0, n));
  return post;
}

namespace {

enum class Seen { None, Match, Other };

Seen classify(const NodeObservation &obs, int expected_hop) {
  if (obs.labels.empty())
    return Seen::None;
  if (expected_hop >= 0 &&
      std::find(obs.labels.begin(), obs.labels.end(), expected_hop) != obs.labels.end())
    return Seen::Match;
  return Seen::Other;
}

double safe_log(double p) {
  return p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
}

struct Terms {
  double sender = 0.0;     // log P(obs | candidate is the sender)
  double background = 0.0; // log P(obs | candidate is not the sender)
};

// Background emissions per slot are Poisson with the estimated rate n, so
// detections are Poisson(a n) and label matches Poisson(a n / k). The sender
// additionally makes one data emission whose label matches with probability
// q + (1 - q) / k.
Terms slot_terms(Seen seen, double n, double a, double q, int k, bool hop_known) {
  const double bg = std::max(0.0, n - 1.0);
  const double none_bg = std::exp(-a * n);
  const double none_h = (1.0 - a) * std::exp(-a * bg);
  if (seen == Seen::None)
    return {safe_log(none_h), safe_log(none_bg)};
  if (!hop_known)
    return {safe_log(1.0 - none_h), safe_log(1.0 - none_bg)};
  const double miss_bg = std::exp(-a * n / k);
  const double miss_h = (1.0 - a * (q + (1.0 - q) / k)) * std::exp(-a * bg / k);
  if (seen == Seen::Match)
    return {safe_log(1.0 - miss_h), safe_log(1.0 - miss_bg)};
  return {safe_log(std::max(0.0, miss_h - none_h)), safe_log(std::max(0.0, miss_bg - none_bg))};
}

} // namespace

AnonymityPosterior infer_anonymity(const AnonymityQuery &query) {
  const std::size_t n_cand = query.candidates.size();
  if (n_cand == 0)
    throw DomainError("infer_anonymity: no candidates");
  const int k = std::max(1, query.label_count);
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  std::vector<double> sender(n_cand, 0.0), background(n_cand, 0.0);
  for (std::size_t i = 0; i < n_cand; ++i) {
    const int c = query.candidates[i];
    const int hop = query.expected_hop.empty() ? -1 : query.expected_hop[c];
    const double n = query.emission_rate[c];
    const double a = query.p_detect[c];
    for (const auto &slot : query.slots) {
      const auto terms =
          slot_terms(classify(slot[c], hop), n, a, query.direction_accuracy, k, hop >= 0);
      sender[i] += terms.sender;
      background[i] += terms.background;
    }
  }

  double finite_bg = 0.0;
  int impossible_bg = 0;
  for (double b : background) {
    if (b == kNegInf)
      ++impossible_bg;
    else
      finite_bg += b;
  }
  std::vector<double> log_l(n_cand, kNegInf);
  double top = kNegInf;
  for (std::size_t i = 0; i < n_cand; ++i) {
    const bool own_impossible = background[i] == kNegInf;
    if (impossible_bg - (own_impossible ? 1 : 0) > 0 || sender[i] == kNegInf)
      continue;
    log_l[i] = sender[i] + finite_bg - (own_impossible ? 0.0 : background[i]);
    top = std::max(top, log_l[i]);
  }
  std::vector<double> weights(n_cand, 0.0);
  if (top != kNegInf)
    for (std::size_t i = 0; i < n_cand; ++i)
      weights[i] = log_l[i] == kNegInf ? 0.0 : std::exp(log_l[i] - top);
  return posterior_from_weights(query.receiver, query.candidates, std::move(weights));
}

} // namespace cidp

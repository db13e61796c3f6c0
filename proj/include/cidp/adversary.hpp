#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include "cidp/array.hpp"
#include "cidp/config.hpp"
#include "cidp/random.hpp"
#include "cidp/sltm.hpp"

namespace cidp {

// --- trilemma bound ---------------------------------------------------------

struct TrilemmaInputs {
  double tau = 1.0;
  double beta = 0.0;   ///< dummy fraction in [0, 1]
  double lambda = 0.0; ///< latency overhead >= 0
  double gamma = 0.1;
  double e_phy = 0.0; ///< bits
};

/// Smallest adversary success delta consistent with
/// 2 tau (beta + lambda) + gamma E_phy >= 1 - delta, clamped to [0, 1].
/// Throws DomainError for inputs outside their ranges.
double delta_floor(const TrilemmaInputs &in);

// --- radiometer -------------------------------------------------------------

/// Energy statistic over the first `window` samples.
double radiometer_statistic(std::span<const std::complex<double>> samples, int window);

inline bool radiometer_detect(std::span<const std::complex<double>> samples, int window,
                              double threshold) {
  return radiometer_statistic(samples, window) > threshold;
}

/// Empirical (1 - pfa) quantile of the statistic under CN(0, 1) noise.
/// Throws DomainError when trials * pfa < 20.
double calibrate_threshold(double pfa, int window, int trials, RandomStream &rng);

enum class DetectionMode { CidpSltm, StaticBaseline };
std::string_view to_string(DetectionMode mode);

struct DetectionPoint {
  double snr_db = 0.0;
  double p_d = 0.0;
  double stderr_ = 0.0;
};

struct DetectionCurve {
  DetectionMode mode = DetectionMode::StaticBaseline;
  std::vector<DetectionPoint> points;
  int trials = 0;
  double threshold = 0.0;

  /// P_d at an arbitrary SNR by linear interpolation, clamped to the grid ends.
  double p_d_at(double snr_db) const;
};

/// Monte Carlo P_d of the radiometer against one transmitter.
///
/// snr_db is the per-sample SNR the eavesdropper would see from a single
/// isotropic element. The eavesdropper angle follows adv.eve_placement:
/// the mask angle with the largest mean leakage of the pattern under test
/// (worst case), the fixed theta_eve_deg, or a mask angle drawn per trial.
/// Each trial observes
///   y_k = sqrt(snr) F_k(theta) / sqrt(M) x_k + n_k,   x_k, n_k ~ CN(0, 1)
/// where F_k is the static all-ones pattern (baseline) or the pattern of
/// sub-slot k mod K of the SLTM schedule (CIDP). Both modes consume the
/// same draws, so the two curves are paired.
DetectionCurve detection_sweep(const AdversaryConfig &adv, DetectionMode mode,
                               const SltmProblem &problem, const Schedule &schedule,
                               double threshold, RandomStream rng);

// --- sender anonymity -------------------------------------------------------

/// What the adversary saw of one node in one slot: the target labels of
/// its detected emissions. A label is the true next hop with probability
/// direction_accuracy, otherwise uniform over the other nodes.
struct NodeObservation {
  std::vector<int> labels;
};

struct AnonymityQuery {
  int receiver = 0;
  std::vector<int> candidates;
  /// First hop a candidate would use toward the receiver, by node id; -1 if
  /// the adversary cannot predict it.
  std::vector<int> expected_hop;
  /// Observations in the slots where the flow's source emitted, [slot][node].
  std::vector<std::vector<NodeObservation>> slots;
  std::vector<double> emission_rate; ///< estimated emissions per slot, by node
  std::vector<double> p_detect;      ///< per-emission detection probability, by node
  double direction_accuracy = 0.0;
  int label_count = 1; ///< number of possible targets (n_nodes - 1)
};

struct AnonymityPosterior {
  int receiver = 0;
  std::vector<int> candidates;
  std::vector<double> weights; ///< aligned with candidates, sums to 1
  double entropy_bits = 0.0;
  double effective_set_size = 1.0; ///< 2^H
};

/// Bayesian posterior over which candidate originated the flow.
///
/// For candidate c and each observed slot, the observation collapses to
/// none / match (a detected label equals c's expected hop) / other. Under
/// "c is the sender" c made one data emission toward its expected hop plus
/// Poisson background emissions at rate max(0, n_c - 1); otherwise only
/// Poisson background emissions at c's estimated rate n_c. The likelihood of c is the product over slots of its own
/// term under the sender hypothesis and every other candidate's term under
/// the background hypothesis. A uniform prior is used.
AnonymityPosterior infer_anonymity(const AnonymityQuery &query);

/// Posterior summary from explicit weights (normalized on the way in).
AnonymityPosterior posterior_from_weights(int receiver, std::vector<int> candidates,
                                          std::vector<double> weights);

} // namespace cidp

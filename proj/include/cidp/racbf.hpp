#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

namespace cidp {

/// Accumulated jitter d and barrier h = D_max - d of one real-time packet.
struct JitterState {
  int flow = 0;
  double d_ms = 0.0;
  double h_ms = 0.0;

  static JitterState initial(int flow, double dmax_ms) { return {flow, 0.0, dmax_ms}; }
};

struct HoldDecision {
  double delta_ms = 0.0;  ///< hold delay inserted at this hop
  double excess_ms = 0.0; ///< late excess e added to d
  JitterState next;
};

/// Raised when a packet reaches a hop with h <= 0 (the filter's error branch).
class BarrierViolation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when the late excess exceeds what the barrier can absorb.
class InfeasibleDisturbance : public std::runtime_error {
public:
  InfeasibleDisturbance(const std::string &what, double excess_ms, double bound_ms)
      : std::runtime_error(what), excess_ms(excess_ms), bound_ms(bound_ms) {}
  double excess_ms;
  double bound_ms;
};

/// Per-hop hold allocation. The packet is re-aligned to the nominal per-hop
/// schedule: delta = max(0, t_align - v), and only the late excess
/// e = max(0, v - t_align) accumulates into d. Given e <= alpha h this is the
/// least hold that keeps h(t+1) >= (1 - alpha) h(t).
HoldDecision racbf_delay(const JitterState &state, double v_ms, double t_align_ms, double alpha,
                         double dmax_ms);

struct InvarianceReport {
  bool ok = true;
  std::optional<std::size_t> first_violation; ///< index of the offending step's target
  std::string reason;
};

/// Checks d <= D_max at every state and h(t+1) >= (1 - alpha) h(t) between
/// consecutive states. Comparisons allow 1e-9 ms of rounding.
InvarianceReport verify_invariance(std::span<const JitterState> trajectory, double dmax_ms,
                                   double alpha);

/// Uniform per-hop budget: D_max / (hops + 1).
double default_t_align(double dmax_ms, int hops);

/// Largest raw hop delay for which every hop of an `hops`-hop path stays
/// feasible starting from d = 0: t_align + alpha (1 - alpha)^(hops - 1) D_max.
double default_v_max(double dmax_ms, double t_align_ms, double alpha, int hops);

} // namespace cidp

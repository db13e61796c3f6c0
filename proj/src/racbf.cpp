#include "cidp/racbf.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "cidp/errors.hpp"

namespace cidp {

namespace {
constexpr double kSlackMs = 1e-9;
}

HoldDecision racbf_delay(const JitterState &state, double v_ms, double t_align_ms, double alpha,
                         double dmax_ms) {
  if (state.h_ms <= 0.0)
    throw BarrierViolation(fmt::format(
        "flow {}: jitter barrier already violated on entry (d = {} ms, h = {} ms)", state.flow,
        state.d_ms, state.h_ms));
  if (v_ms < 0.0)
    throw DomainError("racbf_delay: raw hop delay must be non-negative");

  HoldDecision out;
  out.delta_ms = std::max(0.0, t_align_ms - v_ms);
  out.excess_ms = std::max(0.0, v_ms - t_align_ms);
  const double bound = alpha * state.h_ms;
  if (out.excess_ms > bound + kSlackMs)
    throw InfeasibleDisturbance(
        fmt::format("flow {}: late excess {} ms exceeds the absorbable bound alpha*h = {} ms",
                    state.flow, out.excess_ms, bound),
        out.excess_ms, bound);
  out.next.flow = state.flow;
  out.next.d_ms = state.d_ms + out.excess_ms;
  out.next.h_ms = dmax_ms - out.next.d_ms;
  return out;
}

InvarianceReport verify_invariance(std::span<const JitterState> trajectory, double dmax_ms,
                                   double alpha) {
  InvarianceReport r;
  for (std::size_t t = 0; t < trajectory.size(); ++t) {
    if (trajectory[t].d_ms > dmax_ms + kSlackMs) {
      r.ok = false;
      r.first_violation = t;
      r.reason = fmt::format("d = {} ms exceeds D_max = {} ms", trajectory[t].d_ms, dmax_ms);
      return r;
    }
    if (t == 0)
      continue;
    const double floor = (1.0 - alpha) * trajectory[t - 1].h_ms;
    if (trajectory[t].h_ms < floor - kSlackMs) {
      r.ok = false;
      r.first_violation = t;
      r.reason = fmt::format("h = {} ms below (1 - alpha) h_prev = {} ms", trajectory[t].h_ms,
                             floor);
      return r;
    }
  }
  return r;
}

double default_t_align(double dmax_ms, int hops) { return dmax_ms / (hops + 1); }

double default_v_max(double dmax_ms, double t_align_ms, double alpha, int hops) {
  return t_align_ms + alpha * std::pow(1.0 - alpha, std::max(0, hops - 1)) * dmax_ms;
}

} // namespace cidp

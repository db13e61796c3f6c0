#pragma once

#include <vector>

#include "cidp/array.hpp"
#include "cidp/config.hpp"

namespace cidp {

using Selection = std::vector<double>; ///< element weights; 0/1 in a schedule
using Schedule = std::vector<Selection>;

/// Sidelobe-minimization problem on a discretized mask:
///   min eta  s.t. |b_l^T s| <= eta for every mask angle, main-lobe constraint,
///   0 <= s <= 1
/// with b_l the steered responses. The main-lobe constraint is
/// sum(s) >= rho * M (relaxed mode) or sum(s) = M (literal mode).
struct SltmProblem {
  ArrayGeometry geometry;
  std::vector<double> mask_angles_deg;
  std::vector<ComplexVector> responses; ///< steered b(theta_l), one per mask angle
  ComplexVector main_response;          ///< steered b(theta0): all ones
  double rho = 0.9;
  bool literal_equality = false;

  int m() const { return geometry.m_elements; }
};

struct SltmDesign {
  Selection s_relaxed;
  double eta_star = 0.0;      ///< achieved max masked |F| of s_relaxed
  double main_lobe_gain = 0.0; ///< |F(theta0)| of s_relaxed
  Schedule schedule;
  double e_phy_bits = 0.0;
  double kkt_residual = 0.0; ///< certified duality gap (absolute)
  double dual_bound = 0.0;   ///< lower bound on the optimum from the dual point
  int newton_steps = 0;
};

/// Mask = {-90, -90 + step, ..., 90} minus |theta - theta0| <= exclusion.
/// Throws ConfigError when nothing is left.
SltmProblem build_problem(const SltmConfig &cfg);
SltmProblem build_problem(const ArrayGeometry &geom, double mask_exclusion_deg,
                          double grid_step_deg, double rho, bool literal_equality);

/// Max over the mask of |b_l^T s|.
double max_masked_magnitude(const SltmProblem &p, std::span<const double> s);

/// Solves the relaxed problem with a log-barrier interior-point method and
/// certifies optimality with an explicit dual-feasible point: on return
/// eta_star - dual_bound = kkt_residual <= tol. Iterates stay strictly inside
/// the box and the main-lobe half-space, so primal residuals are zero.
/// Throws InternalError if the certificate cannot be reached.
SltmDesign solve_socp(const SltmProblem &p, double tol = 1e-6);

/// `subslots` binary selections whose time-average matches s within
/// 1/(2 subslots) per element. Element m is on in round(s_m K) sub-slots,
/// spread by a per-element golden-ratio phase so elements switch at
/// different sub-slots.
Schedule round_schedule(std::span<const double> s_relaxed, int subslots);

/// Complex time-average of the schedule's weights.
Selection schedule_average(const Schedule &schedule);

/// Shannon entropy (bits) of the quantized F(theta_eve) over the sub-slots.
/// Magnitude |F| / M and phase are each split into `levels` uniform bins.
double estimate_ephy(const Schedule &schedule, const ArrayGeometry &geom, double theta_eve_deg,
                     int levels);

/// Full pipeline used by the CLI and the simulator.
SltmDesign design_sltm(const SltmConfig &cfg, double theta_eve_deg);

} // namespace cidp

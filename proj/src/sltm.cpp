#include "cidp/sltm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "cidp/errors.hpp"

namespace cidp {

SltmProblem build_problem(const ArrayGeometry &geom, double mask_exclusion_deg,
                          double grid_step_deg, double rho, bool literal_equality) {
  if (!(grid_step_deg > 0.0))
    throw ConfigError("sltm.grid_step_deg must be positive");
  SltmProblem p;
  p.geometry = geom;
  p.rho = rho;
  p.literal_equality = literal_equality;
  const int steps = static_cast<int>(std::floor(180.0 / grid_step_deg + 1e-9));
  for (int k = 0; k <= steps; ++k) {
    const double theta = -90.0 + k * grid_step_deg;
    if (std::abs(theta - geom.theta0_deg) <= mask_exclusion_deg + 1e-9)
      continue;
    p.mask_angles_deg.push_back(theta);
    p.responses.push_back(steered_response(geom, theta));
  }
  if (p.mask_angles_deg.empty())
    throw ConfigError("sltm: mask is empty after removing the main-lobe exclusion zone");
  p.main_response = steered_response(geom, geom.theta0_deg);
  return p;
}

SltmProblem build_problem(const SltmConfig &cfg) {
  return build_problem({cfg.m_elements, cfg.spacing_wavelengths, cfg.theta0_deg},
                       cfg.mask_exclusion_deg, cfg.grid_step_deg, cfg.rho, cfg.literal_equality);
}

double max_masked_magnitude(const SltmProblem &p, std::span<const double> s) {
  double worst = 0.0;
  for (const auto &b : p.responses) {
    std::complex<double> f = 0.0;
    for (std::size_t m = 0; m < b.size(); ++m)
      f += b[m] * s[m];
    worst = std::max(worst, std::abs(f));
  }
  return worst;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Log barrier for
//   eta^2 - |b_l^T s|^2 > 0,  0 < s < 1,  sum(s) - rho M > 0
// on x = (s, eta).
class SocpBarrier {
public:
  explicit SocpBarrier(const SltmProblem &p)
      : m_(p.m()), l_(static_cast<int>(p.responses.size())), re_(l_, m_), im_(l_, m_),
        floor_(p.rho * p.m()) {
    for (int l = 0; l < l_; ++l)
      for (int m = 0; m < m_; ++m) {
        re_(l, m) = p.responses[l][m].real();
        im_(l, m) = p.responses[l][m].imag();
      }
  }

  // Barrier parameter: 2 per cone, 1 per linear inequality.
  double degree() const { return 2.0 * l_ + 2.0 * m_ + 1.0; }

  bool feasible(const VectorXd &s, double eta) const {
    if (eta <= 0.0)
      return false;
    for (int m = 0; m < m_; ++m)
      if (s[m] <= 0.0 || s[m] >= 1.0)
        return false;
    if (s.sum() - floor_ <= 0.0)
      return false;
    const VectorXd ur = re_ * s;
    const VectorXd ui = im_ * s;
    return ((ur.array().square() + ui.array().square()) < eta * eta).all();
  }

  double value(double t, const VectorXd &s, double eta) const {
    const VectorXd ur = re_ * s;
    const VectorXd ui = im_ * s;
    const auto g = eta * eta - ur.array().square() - ui.array().square();
    double v = t * eta - g.log().sum();
    v -= s.array().log().sum();
    v -= (1.0 - s.array()).log().sum();
    v -= std::log(s.sum() - floor_);
    return v;
  }

  void gradient_hessian(double t, const VectorXd &s, double eta, VectorXd &grad,
                        MatrixXd &hess) const {
    const int n = m_ + 1;
    grad.setZero(n);
    hess.setZero(n, n);
    const VectorXd ur = re_ * s;
    const VectorXd ui = im_ * s;
    const VectorXd g = (eta * eta - ur.array().square() - ui.array().square()).matrix();
    const VectorXd w = (2.0 / g.array()).matrix();
    const VectorXd w2 = (4.0 / g.array().square()).matrix();

    // v_l = B_l^T u_l stacked as rows.
    const MatrixXd v = ur.asDiagonal() * re_ + ui.asDiagonal() * im_;

    grad.head(m_) = re_.transpose() * w.cwiseProduct(ur) + im_.transpose() * w.cwiseProduct(ui);
    grad[m_] = t - eta * w.sum();

    auto hss = hess.topLeftCorner(m_, m_);
    hss.noalias() += re_.transpose() * w.asDiagonal() * re_;
    hss.noalias() += im_.transpose() * w.asDiagonal() * im_;
    hss.noalias() += v.transpose() * w2.asDiagonal() * v;
    const VectorXd cross = -eta * (v.transpose() * w2);
    hess.block(0, m_, m_, 1) = cross;
    hess.block(m_, 0, 1, m_) = cross.transpose();
    hess(m_, m_) = (-w.array() + eta * eta * w2.array()).sum();

    const double slack = s.sum() - floor_;
    for (int m = 0; m < m_; ++m) {
      const double lo = s[m];
      const double hi = 1.0 - s[m];
      grad[m] += -1.0 / lo + 1.0 / hi - 1.0 / slack;
      hess(m, m) += 1.0 / (lo * lo) + 1.0 / (hi * hi);
    }
    hess.topLeftCorner(m_, m_).array() += 1.0 / (slack * slack);
  }


  // Builds a dual-feasible point from the barrier multipliers at (s, eta),
  // repairs stationarity exactly, and returns its dual objective, which
  // lower-bounds the optimum.
  double dual_bound(double t, const VectorXd &s, double eta) const {
    const VectorXd ur = re_ * s;
    const VectorXd ui = im_ * s;
    const VectorXd g = (eta * eta - ur.array().square() - ui.array().square()).matrix();
    // z_l = (2 / (t g_l)) (eta, -u_l); rescale so sum z_l0 = 1.
    VectorXd z0 = (2.0 * eta / (t * g.array())).matrix();
    const double scale = z0.sum();
    const VectorXd z1re = (-2.0 * ur.array() / (t * g.array())).matrix() / scale;
    const VectorXd z1im = (-2.0 * ui.array() / (t * g.array())).matrix() / scale;
    const VectorXd base = re_.transpose() * z1re + im_.transpose() * z1im;
    // D(kappa) = kappa rho M - sum_m max(0, base_m + kappa): concave, so the
    // maximum over kappa >= 0 sits at 0 or at a breakpoint.
    auto objective = [&](double kappa) {
      double d = kappa * floor_;
      for (int m = 0; m < m_; ++m)
        d -= std::max(0.0, base[m] + kappa);
      return d;
    };
    double best = objective(0.0);
    for (int m = 0; m < m_; ++m)
      if (-base[m] > 0.0)
        best = std::max(best, objective(-base[m]));
    return best;
  }

  double achieved(const VectorXd &s) const {
    const VectorXd ur = re_ * s;
    const VectorXd ui = im_ * s;
    return std::sqrt((ur.array().square() + ui.array().square()).maxCoeff());
  }

  int m() const { return m_; }

private:
  int m_;
  int l_;
  MatrixXd re_;
  MatrixXd im_;
  double floor_;
};

} // namespace

SltmDesign solve_socp(const SltmProblem &p, double tol) {
  if (!(tol > 0.0))
    throw DomainError("solve_socp: tolerance must be positive");
  const int m = p.m();
  SltmDesign design;

  if (p.literal_equality || p.rho * m >= m - 1e-12) {
    // sum(s) = M inside the unit box admits s = 1 only.
    design.s_relaxed.assign(m, 1.0);
    design.eta_star = max_masked_magnitude(p, design.s_relaxed);
    design.dual_bound = design.eta_star;
    design.kkt_residual = 0.0;
    design.main_lobe_gain = m;
    return design;
  }

  const SocpBarrier barrier(p);
  VectorXd s = VectorXd::Constant(m, 0.5 * (1.0 + p.rho));
  double eta = 1.1 * barrier.achieved(s) + 0.1;
  if (!barrier.feasible(s, eta))
    throw InternalError("solve_socp: starting point is not strictly feasible");

  constexpr double kGrowth = 30.0;
  constexpr int kMaxOuter = 60;
  constexpr int kMaxNewton = 80;
  double t = barrier.degree() / std::max(eta, 1.0);
  VectorXd grad;
  MatrixXd hess;
  double gap = std::numeric_limits<double>::infinity();
  double bound = -std::numeric_limits<double>::infinity();

  bool stalled = false;
  for (int outer = 0; outer < kMaxOuter && !stalled; ++outer) {
    for (int it = 0; it < kMaxNewton; ++it) {
      barrier.gradient_hessian(t, s, eta, grad, hess);
      const VectorXd step = hess.ldlt().solve(-grad);
      const double decrement = -grad.dot(step);
      ++design.newton_steps;
      if (!step.allFinite() || !std::isfinite(decrement)) {
        // The Hessian is numerically singular; keep the last iterate.
        stalled = true;
        break;
      }
      if (decrement / 2.0 <= 1e-10)
        break;
      const double f0 = barrier.value(t, s, eta);
      double alpha = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 60 && !accepted; ++ls) {
        const VectorXd s_try = s + alpha * step.head(m);
        const double eta_try = eta + alpha * step[m];
        accepted = barrier.feasible(s_try, eta_try) &&
                   barrier.value(t, s_try, eta_try) <= f0 - 0.25 * alpha * decrement;
        if (!accepted)
          alpha *= 0.5;
      }
      if (!accepted)
        break;
      s += alpha * step.head(m);
      eta += alpha * step[m];
    }
    const double candidate = barrier.dual_bound(t, s, eta);
    if (std::isfinite(candidate))
      bound = std::max(bound, candidate);
    gap = barrier.achieved(s) - bound;
    if (gap <= tol)
      break;
    t *= kGrowth;
  }
  if (!(gap <= tol))
    throw InternalError(fmt::format("solve_socp: duality gap {} above tolerance {}", gap, tol));

  design.s_relaxed.assign(s.data(), s.data() + m);
  design.eta_star = max_masked_magnitude(p, design.s_relaxed);
  design.dual_bound = bound;
  design.kkt_residual = std::max(0.0, design.eta_star - bound);
  double gain = 0.0;
  for (double x : design.s_relaxed)
    gain += x;
  design.main_lobe_gain = gain;
  return design;
}

Schedule round_schedule(std::span<const double> s_relaxed, int subslots) {
  if (subslots < 1)
    throw DomainError("round_schedule: need at least one sub-slot");
  const int m = static_cast<int>(s_relaxed.size());
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  Schedule schedule(subslots, Selection(m, 0.0));
  for (int e = 0; e < m; ++e) {
    const double clamped = std::clamp(s_relaxed[e], 0.0, 1.0);
    const int count = static_cast<int>(std::floor(clamped * subslots + 0.5));
    if (count == 0)
      continue;
    const double phase = std::fmod(e * golden, 1.0);
    for (int k = 0; k < subslots; ++k) {
      const double a = std::floor(static_cast<double>(k) * count / subslots + phase);
      const double b = std::floor(static_cast<double>(k + 1) * count / subslots + phase);
      if (b > a)
        schedule[k][e] = 1.0;
    }
  }
  return schedule;
}

Selection schedule_average(const Schedule &schedule) {
  if (schedule.empty())
    return {};
  Selection avg(schedule.front().size(), 0.0);
  for (const auto &entry : schedule)
    for (std::size_t m = 0; m < entry.size(); ++m)
      avg[m] += entry[m];
  for (auto &x : avg)
    x /= static_cast<double>(schedule.size());
  return avg;
}

double estimate_ephy(const Schedule &schedule, const ArrayGeometry &geom, double theta_eve_deg,
                     int levels) {
  if (schedule.empty())
    throw DomainError("estimate_ephy: empty schedule");
  if (levels < 1)
    throw DomainError("estimate_ephy: need at least one quantization level");
  std::map<std::pair<int, int>, int> histogram;
  const double full = static_cast<double>(geom.m_elements);
  for (const auto &entry : schedule) {
    const auto f = pattern(geom, entry, theta_eve_deg);
    const int mag = std::min(levels - 1, static_cast<int>(std::floor(std::abs(f) / full * levels)));
    const double unit = (std::arg(f) + std::numbers::pi) / (2.0 * std::numbers::pi);
    const int phase = std::min(levels - 1, static_cast<int>(std::floor(unit * levels)));
    ++histogram[{mag, phase}];
  }
  double h = 0.0;
  const double n = static_cast<double>(schedule.size());
  for (const auto &[bin, count] : histogram) {
    const double p = count / n;
    h -= p * std::log2(p);
  }
  return h + 0.0; // normalizes -0
}

SltmDesign design_sltm(const SltmConfig &cfg, double theta_eve_deg) {
  const auto problem = build_problem(cfg);
  auto design = solve_socp(problem, cfg.tol);
  design.schedule = round_schedule(design.s_relaxed, cfg.subslots);
  design.e_phy_bits = estimate_ephy(design.schedule, problem.geometry, theta_eve_deg,
                                    cfg.quantization_levels);
  return design;
}

} // namespace cidp

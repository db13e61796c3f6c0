#include "cidp/report.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "cidp/array.hpp"
#include "cidp/errors.hpp"

namespace cidp {

bool ComparisonReport::orderings_hold() const {
  for (const auto &o : orderings)
    if (!o.holds)
      return false;
  return true;
}

std::pair<double, std::optional<double>> mean_stderr(const std::vector<double> &values) {
  if (values.empty())
    throw DomainError("mean_stderr: no values");
  double sum = 0.0;
  for (double v : values)
    sum += v;
  const double n = static_cast<double>(values.size());
  const double mean = sum / n;
  if (values.size() < 2)
    return {mean, std::nullopt};
  double ss = 0.0;
  for (double v : values)
    ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

namespace {

void summarize_rep(ModeSummary &sum, const MetricsLedger &rep, double dmax_ms) {
  sum.rep_compliance.push_back(compliance(rep, dmax_ms).value_or(NAN));
  sum.rep_p99_ms.push_back(jitter_percentile(rep, 0.99).value_or(NAN));
  sum.rep_saet.push_back(rep.nominal_pkts > 0 ? saet(rep) : NAN);
  sum.rep_median_anonymity.push_back(
      rep.anonymity_posteriors.empty() ? NAN : anonymity_cdf(rep).median);
  sum.ledger.merge(rep);
}

void finalize(ModeSummary &sum, double dmax_ms) {
  sum.compliance = compliance(sum.ledger, dmax_ms);
  sum.jitter_p99_ms = jitter_percentile(sum.ledger, 0.99);
  sum.saet = sum.ledger.nominal_pkts > 0 ? saet(sum.ledger) : NAN;
  sum.median_anonymity =
      sum.ledger.anonymity_posteriors.empty() ? NAN : anonymity_cdf(sum.ledger).median;
}

MetricRow paired_row(std::string name, double cidp, double base, const std::vector<double> &a,
                     const std::vector<double> &b) {
  std::vector<double> deltas;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
    deltas.push_back(a[i] - b[i]);
  MetricRow row{std::move(name), cidp, base, cidp - base, std::nullopt};
  if (deltas.size() >= 2)
    row.delta_stderr = mean_stderr(deltas).second;
  return row;
}

std::string num(double v) { return std::isnan(v) ? std::string("nan") : fmt::format("{}", v); }

nlohmann::ordered_json opt_json(const std::optional<double> &v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json num_json(double v) {
  return std::isnan(v) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(v);
}

} // namespace

ComparisonReport compare(const ScenarioConfig &cfg, int replications,
                         std::shared_ptr<const AdversaryModel> adversary) {
  if (replications < 1)
    throw DomainError("compare: at least one replication is required");
  validate(cfg);
  if (!adversary)
    adversary = std::make_shared<const AdversaryModel>(prepare_adversary(cfg));

  ComparisonReport r;
  r.config_hash = config_hash(cfg);
  r.replications = replications;
  r.e_phy_bits = adversary->design.e_phy_bits;
  r.eta_star = adversary->design.eta_star;
  r.cidp.mode = Mode::Cidp;
  r.baseline.mode = Mode::Baseline;
  r.detection_cidp = adversary->cidp;
  r.detection_baseline = adversary->baseline;

  RunOptions opts;
  opts.adversary = adversary;
  const double dmax = cfg.control.dmax_ms;
  for (int rep = 0; rep < replications; ++rep) {
    summarize_rep(r.cidp, run(cfg, Mode::Cidp, rep, opts).ledger, dmax);
    summarize_rep(r.baseline, run(cfg, Mode::Baseline, rep, opts).ledger, dmax);
  }
  finalize(r.cidp, dmax);
  finalize(r.baseline, dmax);

  auto pct = [](std::vector<double> v) {
    for (auto &x : v)
      x *= 100.0;
    return v;
  };
  r.rows.push_back(paired_row("jitter_compliance_pct", r.cidp.compliance.value_or(NAN) * 100.0,
                              r.baseline.compliance.value_or(NAN) * 100.0,
                              pct(r.cidp.rep_compliance), pct(r.baseline.rep_compliance)));
  r.rows.push_back(paired_row("jitter_p99_ms", r.cidp.jitter_p99_ms.value_or(NAN),
                              r.baseline.jitter_p99_ms.value_or(NAN), r.cidp.rep_p99_ms,
                              r.baseline.rep_p99_ms));
  r.rows.push_back(paired_row("median_anonymity_set", r.cidp.median_anonymity,
                              r.baseline.median_anonymity, r.cidp.rep_median_anonymity,
                              r.baseline.rep_median_anonymity));
  r.rows.push_back(
      paired_row("saet", r.cidp.saet, r.baseline.saet, r.cidp.rep_saet, r.baseline.rep_saet));
  for (std::size_t i = 0; i < r.detection_cidp.points.size(); ++i) {
    const auto &c = r.detection_cidp.points[i];
    const auto &b = r.detection_baseline.points[i];
    r.rows.push_back({fmt::format("p_d_at_{}_db", c.snr_db), c.p_d, b.p_d, c.p_d - b.p_d,
                      std::hypot(c.stderr_, b.stderr_)});
  }

  const auto cc = r.cidp.compliance;
  const auto bc = r.baseline.compliance;
  r.orderings.push_back({"cidp_compliance_is_total", cc.has_value() && *cc == 1.0});
  r.orderings.push_back({"cidp_compliance_at_least_baseline", cc && bc && *cc >= *bc});
  r.orderings.push_back(
      {"cidp_median_anonymity_above_baseline", r.cidp.median_anonymity > r.baseline.median_anonymity});
  return r;
}

nlohmann::ordered_json to_json(const ComparisonReport &r) {
  nlohmann::ordered_json j;
  j["config_hash"] = r.config_hash;
  j["replications"] = r.replications;
  j["e_phy_bits"] = r.e_phy_bits;
  j["eta_star"] = r.eta_star;
  auto rows = nlohmann::ordered_json::array();
  for (const auto &row : r.rows)
    rows.push_back({{"metric", row.metric},
                    {"cidp", num_json(row.cidp)},
                    {"baseline", num_json(row.baseline)},
                    {"delta", num_json(row.delta)},
                    {"delta_stderr", opt_json(row.delta_stderr)}});
  j["metrics"] = std::move(rows);
  auto mode = [](const ModeSummary &m) {
    nlohmann::ordered_json o;
    o["mode"] = std::string(to_string(m.mode));
    o["compliance"] = opt_json(m.compliance);
    o["jitter_p99_ms"] = opt_json(m.jitter_p99_ms);
    o["saet"] = num_json(m.saet);
    o["median_anonymity"] = num_json(m.median_anonymity);
    o["realtime_delivered"] = m.ledger.realtime_delivered;
    o["delivered_data_pkts"] = m.ledger.delivered_data_pkts;
    o["delivered_dummy_pkts"] = m.ledger.delivered_dummy_pkts;
    o["nominal_pkts"] = m.ledger.nominal_pkts;
    o["dropped_pkts"] = m.ledger.dropped_pkts;
    o["posteriors"] = m.ledger.anonymity_posteriors.size();
    return o;
  };
  j["modes"] = {mode(r.cidp), mode(r.baseline)};
  j["detection"] = {to_json(r.detection_cidp), to_json(r.detection_baseline)};
  auto ord = nlohmann::ordered_json::array();
  for (const auto &o : r.orderings)
    ord.push_back({{"check", o.name}, {"holds", o.holds}});
  j["orderings"] = std::move(ord);
  return j;
}

std::string comparison_csv(const ComparisonReport &r) {
  std::string out = fmt::format("# config_hash,{}\nmetric,cidp,baseline,delta,delta_stderr\n",
                                r.config_hash);
  for (const auto &row : r.rows)
    out += fmt::format("{},{},{},{},{}\n", row.metric, num(row.cidp), num(row.baseline),
                       num(row.delta), row.delta_stderr ? num(*row.delta_stderr) : "");
  return out;
}

std::string jitter_cdf_csv(const ComparisonReport &r) {
  std::string out = fmt::format("# config_hash,{}\nmode,jitter_ms,cdf\n", r.config_hash);
  for (const auto *m : {&r.cidp, &r.baseline})
    for (const auto &p : jitter_cdf(m->ledger))
      out += fmt::format("{},{},{}\n", to_string(m->mode), p.value, p.fraction);
  return out;
}

std::string anon_cdf_csv(const ComparisonReport &r) {
  std::string out = fmt::format("# config_hash,{}\nmode,set_size,cdf\n", r.config_hash);
  for (const auto *m : {&r.cidp, &r.baseline}) {
    if (m->ledger.anonymity_posteriors.empty())
      continue;
    for (const auto &p : anonymity_cdf(m->ledger).points)
      out += fmt::format("{},{},{}\n", to_string(m->mode), p.value, p.fraction);
  }
  return out;
}

std::string detection_csv(const std::string &config_hash,
                          const std::vector<DetectionCurve> &curves) {
  std::string out = fmt::format("# config_hash,{}\nmode,snr_db,p_d,stderr\n", config_hash);
  for (const auto &c : curves)
    for (const auto &p : c.points)
      out += fmt::format("{},{},{},{}\n", to_string(c.mode), p.snr_db, p.p_d, p.stderr_);
  return out;
}

std::string pattern_csv(const std::string &config_hash, const SltmConfig &cfg,
                        const SltmDesign &design) {
  const ArrayGeometry geom{cfg.m_elements, cfg.spacing_wavelengths, cfg.theta0_deg};
  std::string out = fmt::format("# config_hash,{}\ntheta_deg", config_hash);
  for (std::size_t k = 0; k < design.schedule.size(); ++k)
    out += fmt::format(",subslot_{}", k);
  out += ",time_averaged,relaxed\n";
  const auto average = schedule_average(design.schedule);
  const int steps = static_cast<int>(std::floor(180.0 / cfg.grid_step_deg + 1e-9));
  for (int i = 0; i <= steps; ++i) {
    const double theta = -90.0 + i * cfg.grid_step_deg;
    out += fmt::format("{}", theta);
    for (const auto &entry : design.schedule)
      out += fmt::format(",{}", std::abs(pattern(geom, entry, theta)));
    out += fmt::format(",{},{}\n", std::abs(pattern(geom, average, theta)),
                       std::abs(pattern(geom, design.s_relaxed, theta)));
  }
  return out;
}

nlohmann::ordered_json design_json(const std::string &config_hash, const SltmDesign &d) {
  nlohmann::ordered_json j;
  j["config_hash"] = config_hash;
  j["s_relaxed"] = d.s_relaxed;
  j["eta_star"] = d.eta_star;
  j["main_lobe_gain"] = d.main_lobe_gain;
  j["schedule"] = d.schedule;
  j["e_phy_bits"] = d.e_phy_bits;
  j["kkt_residual"] = d.kkt_residual;
  j["dual_bound"] = d.dual_bound;
  j["newton_steps"] = d.newton_steps;
  return j;
}

nlohmann::ordered_json ledger_json(const SimulationRun &run) {
  nlohmann::ordered_json j;
  j["config_hash"] = config_hash(run.cfg);
  j["mode"] = std::string(to_string(run.mode));
  j["replication"] = run.replication;
  j["e_phy_bits"] = run.e_phy_bits;
  j["ledger"] = to_json(run.ledger);
  return j;
}

void write_file(const std::filesystem::path &dir, const std::string &name, const std::string &text) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out)
    throw std::runtime_error(fmt::format("cannot write {}", (dir / name).string()));
  out << text;
}

void write_comparison(const ComparisonReport &r, const std::filesystem::path &dir) {
  write_file(dir, "comparison.json", to_json(r).dump(2) + "\n");
  write_file(dir, "comparison.csv", comparison_csv(r));
  write_file(dir, "jitter_cdf.csv", jitter_cdf_csv(r));
  write_file(dir, "anon_cdf.csv", anon_cdf_csv(r));
}

} // namespace cidp

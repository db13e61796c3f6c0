// Command-line front end: run, sltm-design, detect, bound, compare.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cidp/adversary.hpp"
#include "cidp/config.hpp"
#include "cidp/report.hpp"
#include "cidp/simulation.hpp"
#include "cidp/sltm.hpp"
#include "cidp/trace.hpp"

namespace fs = std::filesystem;

namespace {

int cmd_run(const std::string &config_path, const std::string &mode_name, const fs::path &out,
            int replication) {
  const auto cfg = cidp::load_config(config_path);
  const auto mode = cidp::mode_from_string(mode_name);
  fs::create_directories(out);
  std::ofstream trace_file(out / "trace.jsonl", std::ios::binary);
  if (!trace_file)
    throw std::runtime_error(fmt::format("cannot write {}", (out / "trace.jsonl").string()));
  const std::string hash = cidp::config_hash(cfg);
  trace_file << fmt::format("{{\"config_hash\":\"{}\"}}\n", hash);
  cidp::JsonlTraceWriter writer(trace_file);
  cidp::RunOptions opts;
  opts.sink = [&writer](const cidp::TraceEvent &e) { writer(e); };
  const auto result = cidp::run(cfg, mode, replication, opts);
  cidp::write_file(out, "ledger.json", cidp::ledger_json(result).dump(2) + "\n");
  fmt::print("{} run: {} trace events, {} real-time deliveries\n", cidp::to_string(mode),
             writer.lines(), result.ledger.realtime_delivered);
  return 0;
}

int cmd_design(const std::string &config_path, const fs::path &out) {
  const auto cfg = cidp::load_config(config_path);
  const auto design = cidp::design_sltm(cfg.sltm, cfg.adversary.theta_eve_deg);
  const auto hash = cidp::config_hash(cfg);
  cidp::write_file(out, "pattern.csv", cidp::pattern_csv(hash, cfg.sltm, design));
  cidp::write_file(out, "design.json", cidp::design_json(hash, design).dump(2) + "\n");
  fmt::print("eta_star = {:.6f}, main lobe = {:.6f}, E_phy = {:.4f} bits, gap = {:.2e}\n",
             design.eta_star, design.main_lobe_gain, design.e_phy_bits, design.kkt_residual);
  return 0;
}

int cmd_detect(const std::string &config_path, const fs::path &out) {
  const auto cfg = cidp::load_config(config_path);
  const auto model = cidp::prepare_adversary(cfg);
  cidp::write_file(out, "detection.csv",
                   cidp::detection_csv(cidp::config_hash(cfg), {model.cidp, model.baseline}));
  for (std::size_t i = 0; i < model.cidp.points.size(); ++i)
    fmt::print("snr {:>6.1f} dB   p_d cidp {:.4f}   baseline {:.4f}\n",
               model.cidp.points[i].snr_db, model.cidp.points[i].p_d,
               model.baseline.points[i].p_d);
  return 0;
}

int cmd_compare(const std::string &config_path, int reps, const fs::path &out) {
  const auto cfg = cidp::load_config(config_path);
  if (reps <= 0)
    reps = cfg.sim.replications;
  const auto report = cidp::compare(cfg, reps);
  cidp::write_comparison(report, out);
  std::cout << cidp::comparison_csv(report);
  for (const auto &o : report.orderings)
    fmt::print("{:<40} {}\n", o.name, o.holds ? "holds" : "FAILS");
  return report.orderings_hold() ? 0 : 3;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"cidp: cross-layer anonymity simulator and design toolkit"};
  app.require_subcommand(1);

  std::string config, mode = "cidp", out = ".";
  int replication = 0;
  auto *run = app.add_subcommand("run", "simulate one replication, write trace.jsonl and ledger.json");
  run->add_option("--config", config, "scenario JSON")->required();
  run->add_option("--mode", mode, "cidp or baseline")->check(CLI::IsMember({"cidp", "baseline"}));
  run->add_option("--out", out, "output directory");
  run->add_option("--replication", replication, "replication index")->check(CLI::NonNegativeNumber);

  auto *design = app.add_subcommand("sltm-design", "solve the SLTM program, write pattern.csv and design.json");
  design->add_option("--config", config, "scenario JSON")->required();
  design->add_option("--out", out, "output directory");

  auto *detect = app.add_subcommand("detect", "radiometer detection sweep, write detection.csv");
  detect->add_option("--config", config, "scenario JSON")->required();
  detect->add_option("--out", out, "output directory");

  cidp::TrilemmaInputs bound_in;
  auto *bound = app.add_subcommand("bound", "print the smallest adversary success the bound allows");
  bound->add_option("--tau", bound_in.tau)->required();
  bound->add_option("--beta", bound_in.beta)->required();
  bound->add_option("--lambda", bound_in.lambda)->required();
  bound->add_option("--gamma", bound_in.gamma)->required();
  bound->add_option("--ephy", bound_in.e_phy)->required();

  int reps = 0;
  auto *cmp = app.add_subcommand("compare", "both modes over replications, write comparison files");
  cmp->add_option("--config", config, "scenario JSON")->required();
  cmp->add_option("--reps", reps, "replications (default: sim.replications)");
  cmp->add_option("--out", out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run)
      return cmd_run(config, mode, out, replication);
    if (*design)
      return cmd_design(config, out);
    if (*detect)
      return cmd_detect(config, out);
    if (*bound) {
      fmt::print("{:.12g}\n", cidp::delta_floor(bound_in));
      return 0;
    }
    if (*cmp)
      return cmd_compare(config, reps, out);
  } catch (const std::exception &e) {
    std::fprintf(stderr, "cidp: %s\n", e.what());
    return 1;
  }
  return 0;
}

#include "cidp/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "cidp/errors.hpp"

namespace cidp {

using nlohmann::json;

namespace {

// Walks one JSON object, remembering the key path for diagnostics and
// rejecting keys the schema does not know.
class Section {
public:
  Section(const json &node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object())
      throw ConfigError(fmt::format("{}: expected an object", display()));
  }

  const json &raw(const std::string &key) {
    seen_.insert(key);
    auto it = node_.find(key);
    if (it == node_.end())
      throw ConfigError(fmt::format("{}: missing required key", child(key)));
    return *it;
  }

  bool has(const std::string &key) const { return node_.contains(key); }

  double number(const std::string &key) { return as_number(raw(key), key); }
  double number(const std::string &key, double fallback) {
    return has(key) ? number(key) : (seen_.insert(key), fallback);
  }

  std::int64_t integer(const std::string &key) { return as_integer(raw(key), key); }
  std::int64_t integer(const std::string &key, std::int64_t fallback) {
    return has(key) ? integer(key) : (seen_.insert(key), fallback);
  }

  std::uint64_t unsigned_integer(const std::string &key) {
    const json &v = raw(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      throw ConfigError(fmt::format("{}: expected a non-negative integer", child(key)));
    return v.get<std::uint64_t>();
  }

  std::string string(const std::string &key, const std::string &fallback) {
    if (!has(key)) {
      seen_.insert(key);
      return fallback;
    }
    const json &v = raw(key);
    if (!v.is_string())
      throw ConfigError(fmt::format("{}: expected a string", child(key)));
    return v.get<std::string>();
  }

  bool boolean(const std::string &key, bool fallback) {
    if (!has(key)) {
      seen_.insert(key);
      return fallback;
    }
    const json &v = raw(key);
    if (!v.is_boolean())
      throw ConfigError(fmt::format("{}: expected a boolean", child(key)));
    return v.get<bool>();
  }

  std::string child(const std::string &key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (const auto &[key, value] : node_.items())
      if (!seen_.count(key))
        throw ConfigError(fmt::format("{}: unknown key", child(key)));
  }

private:
  std::string display() const { return path_.empty() ? "<root>" : path_; }

  double as_number(const json &v, const std::string &key) const {
    if (!v.is_number())
      throw ConfigError(fmt::format("{}: expected a number", child(key)));
    return v.get<double>();
  }

  std::int64_t as_integer(const json &v, const std::string &key) const {
    if (!v.is_number_integer())
      throw ConfigError(fmt::format("{}: expected an integer", child(key)));
    return v.get<std::int64_t>();
  }

  const json &node_;
  std::string path_;
  std::set<std::string> seen_;
};

std::string to_string(EvePlacement p) {
  switch (p) {
  case EvePlacement::Fixed:
    return "fixed";
  case EvePlacement::Uniform:
    return "uniform";
  default:
    return "worst_case";
  }
}

void require(bool ok, const char *what) {
  if (!ok)
    throw ConfigError(fmt::format("invariant violated: {}", what));
}

NetworkConfig read_network(const json &node) {
  Section s(node, "network");
  NetworkConfig n;
  n.n_nodes = static_cast<int>(s.integer("n_nodes"));
  n.area_m = s.number("area_m");
  n.gamma0_db = s.number("gamma0_db");
  n.pathloss_exponent = s.number("pathloss_exponent");
  n.rician_k_db = s.number("rician_k_db");
  n.tx_power_dbm = s.number("tx_power_dbm");
  n.noise_dbm = s.number("noise_dbm");
  n.link_capacity_pkts = static_cast<int>(s.integer("link_capacity_pkts", 1));
  if (s.has("positions")) {
    const json &arr = s.raw("positions");
    if (!arr.is_array())
      throw ConfigError("network.positions: expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const json &p = arr[i];
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
        throw ConfigError(fmt::format("network.positions[{}]: expected [x, y]", i));
      n.positions.push_back({p[0].get<double>(), p[1].get<double>()});
    }
  }
  s.finish();
  return n;
}

FlowSpec read_flow(const json &node, std::size_t index) {
  Section s(node, fmt::format("flows[{}]", index));
  FlowSpec f;
  f.src = static_cast<int>(s.integer("src"));
  f.dst = static_cast<int>(s.integer("dst"));
  f.rate_pkts_per_s = s.number("rate_pkts_per_s");
  f.period_ms = s.number("period_ms", 0.0);
  f.realtime = s.boolean("realtime", false);
  f.priority = static_cast<int>(s.integer("priority", 0));
  f.phase_ms = s.number("phase_ms", 0.0);
  s.finish();
  return f;
}

ControlConfig read_control(const json &node) {
  Section s(node, "control");
  ControlConfig c;
  c.V = s.number("V");
  c.alpha = s.number("alpha");
  c.t_align_ms = s.number("t_align_ms", 0.0);
  c.dmax_ms = s.number("dmax_ms");
  c.h_dummy_bits = s.number("h_dummy_bits", 1.0);
  c.v_max_ms = s.number("v_max_ms", 0.0);
  s.finish();
  return c;
}

SltmConfig read_sltm(const json &node) {
  Section s(node, "sltm");
  SltmConfig c;
  c.m_elements = static_cast<int>(s.integer("m_elements"));
  c.spacing_wavelengths = s.number("spacing_wavelengths");
  c.theta0_deg = s.number("theta0_deg");
  c.mask_exclusion_deg = s.number("mask_exclusion_deg");
  c.grid_step_deg = s.number("grid_step_deg");
  c.subslots = static_cast<int>(s.integer("subslots"));
  c.rho = s.number("rho", 0.9);
  c.literal_equality = s.boolean("literal_equality", false);
  c.quantization_levels = static_cast<int>(s.integer("quantization_levels", 8));
  c.tol = s.number("tol", 1e-6);
  s.finish();
  return c;
}

AdversaryConfig read_adversary(const json &node) {
  Section s(node, "adversary");
  AdversaryConfig a;
  const json &grid = s.raw("snr_grid_db");
  if (!grid.is_array())
    throw ConfigError("adversary.snr_grid_db: expected an array");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid[i].is_number())
      throw ConfigError(fmt::format("adversary.snr_grid_db[{}]: expected a number", i));
    a.snr_grid_db.push_back(grid[i].get<double>());
  }
  a.pfa = s.number("pfa");
  a.window_samples = static_cast<int>(s.integer("window_samples"));
  a.mc_trials = static_cast<int>(s.integer("mc_trials"));
  a.theta_eve_deg = s.number("theta_eve_deg", 45.0);
  const std::string placement = s.string("eve_placement", "worst_case");
  if (placement == "worst_case")
    a.eve_placement = EvePlacement::WorstCase;
  else if (placement == "fixed")
    a.eve_placement = EvePlacement::Fixed;
  else if (placement == "uniform")
    a.eve_placement = EvePlacement::Uniform;
  else
    throw ConfigError(fmt::format(
        "adversary.eve_placement: '{}' is not one of worst_case, fixed, uniform", placement));
  a.tau = s.number("tau", 1.0);
  a.gamma = s.number("gamma", 0.1);
  a.direction_accuracy = s.number("direction_accuracy", 0.5);
  a.eve_snr_offset_db = s.number("eve_snr_offset_db", 0.0);
  a.candidates_with_traffic_only = s.boolean("candidates_with_traffic_only", false);
  s.finish();
  return a;
}

SimConfig read_sim(const json &node) {
  Section s(node, "sim");
  SimConfig c;
  c.n_slots = s.integer("n_slots");
  c.slot_ms = s.number("slot_ms");
  c.seed = s.unsigned_integer("seed");
  c.replications = static_cast<int>(s.integer("replications", 1));
  c.epoch_slots = static_cast<int>(s.integer("epoch_slots", 100));
  s.finish();
  return c;
}

} // namespace

void validate(const ScenarioConfig &cfg) {
  const auto &n = cfg.network;
  require(n.n_nodes >= 2, "network.n_nodes >= 2");
  require(n.area_m > 0, "network.area_m > 0");
  require(n.pathloss_exponent > 0, "network.pathloss_exponent > 0");
  require(n.link_capacity_pkts >= 1, "network.link_capacity_pkts >= 1");
  require(n.positions.empty() || static_cast<int>(n.positions.size()) == n.n_nodes,
          "network.positions has n_nodes entries");
  for (std::size_t i = 0; i < n.positions.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      require(!(n.positions[i] == n.positions[j]), "network.positions are distinct");

  require(!cfg.flows.empty(), "flows is non-empty");
  for (const auto &f : cfg.flows) {
    require(f.src != f.dst, "flow src != dst");
    require(f.src >= 0 && f.src < n.n_nodes, "flow src < n_nodes");
    require(f.dst >= 0 && f.dst < n.n_nodes, "flow dst < n_nodes");
    require(f.rate_pkts_per_s > 0, "flow rate_pkts_per_s > 0");
    require(!f.realtime || f.period_ms > 0, "flow period_ms > 0 when realtime");
    require(f.phase_ms >= 0, "flow phase_ms >= 0");
  }

  const auto &c = cfg.control;
  require(c.V >= 0, "control.V >= 0");
  require(c.alpha > 0 && c.alpha < 1, "control.alpha ∈ (0,1)");
  require(c.dmax_ms > 0, "control.dmax_ms > 0");
  require(c.t_align_ms >= 0, "control.t_align_ms >= 0");
  require(c.h_dummy_bits >= 0, "control.h_dummy_bits >= 0");
  require(c.v_max_ms >= 0, "control.v_max_ms >= 0");

  const auto &s = cfg.sltm;
  require(s.m_elements >= 2, "sltm.m_elements >= 2");
  require(s.spacing_wavelengths > 0, "sltm.spacing_wavelengths > 0");
  require(s.subslots >= 1, "sltm.subslots >= 1");
  require(s.grid_step_deg > 0, "sltm.grid_step_deg > 0");
  require(s.mask_exclusion_deg > 0, "sltm.mask_exclusion_deg > 0");
  require(s.rho > 0 && s.rho <= 1, "sltm.rho ∈ (0,1]");
  require(s.quantization_levels >= 1, "sltm.quantization_levels >= 1");
  require(s.tol > 0, "sltm.tol > 0");

  const auto &a = cfg.adversary;
  require(a.pfa > 0 && a.pfa < 1, "adversary.pfa ∈ (0,1)");
  require(a.window_samples >= 1, "adversary.window_samples >= 1");
  require(a.mc_trials >= 1, "adversary.mc_trials >= 1");
  require(a.tau >= 0, "adversary.tau >= 0");
  require(a.gamma >= 0, "adversary.gamma >= 0");
  require(a.direction_accuracy >= 0 && a.direction_accuracy <= 1,
          "adversary.direction_accuracy ∈ [0,1]");

  const auto &m = cfg.sim;
  require(m.n_slots >= 0, "sim.n_slots >= 0");
  require(m.slot_ms > 0, "sim.slot_ms > 0");
  require(m.replications >= 1, "sim.replications >= 1");
  require(m.epoch_slots >= 1, "sim.epoch_slots >= 1");
}

ScenarioConfig parse_config(const json &doc) {
  Section root(doc, "");
  ScenarioConfig cfg;
  cfg.network = read_network(root.raw("network"));
  const json &flows = root.raw("flows");
  if (!flows.is_array())
    throw ConfigError("flows: expected an array");
  for (std::size_t i = 0; i < flows.size(); ++i)
    cfg.flows.push_back(read_flow(flows[i], i));
  cfg.control = read_control(root.raw("control"));
  cfg.sltm = read_sltm(root.raw("sltm"));
  cfg.adversary = read_adversary(root.raw("adversary"));
  cfg.sim = read_sim(root.raw("sim"));
  root.finish();
  validate(cfg);
  return cfg;
}

ScenarioConfig parse_config(const std::string &text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ConfigError(fmt::format("<root>: malformed JSON ({})", e.what()));
  }
  return parse_config(doc);
}

ScenarioConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError(fmt::format("cannot open config file '{}'", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

json to_json(const ScenarioConfig &cfg) {
  json net = {
      {"n_nodes", cfg.network.n_nodes},
      {"area_m", cfg.network.area_m},
      {"gamma0_db", cfg.network.gamma0_db},
      {"pathloss_exponent", cfg.network.pathloss_exponent},
      {"rician_k_db", cfg.network.rician_k_db},
      {"tx_power_dbm", cfg.network.tx_power_dbm},
      {"noise_dbm", cfg.network.noise_dbm},
      {"link_capacity_pkts", cfg.network.link_capacity_pkts},
  };
  if (!cfg.network.positions.empty()) {
    json pos = json::array();
    for (const auto &p : cfg.network.positions)
      pos.push_back({p.x, p.y});
    net["positions"] = pos;
  }
  json flows = json::array();
  for (const auto &f : cfg.flows)
    flows.push_back({{"src", f.src},
                     {"dst", f.dst},
                     {"rate_pkts_per_s", f.rate_pkts_per_s},
                     {"period_ms", f.period_ms},
                     {"realtime", f.realtime},
                     {"priority", f.priority},
                     {"phase_ms", f.phase_ms}});
  const auto &c = cfg.control;
  const auto &s = cfg.sltm;
  const auto &a = cfg.adversary;
  const auto &m = cfg.sim;
  return json{
      {"network", net},
      {"flows", flows},
      {"control",
       {{"V", c.V},
        {"alpha", c.alpha},
        {"t_align_ms", c.t_align_ms},
        {"dmax_ms", c.dmax_ms},
        {"h_dummy_bits", c.h_dummy_bits},
        {"v_max_ms", c.v_max_ms}}},
      {"sltm",
       {{"m_elements", s.m_elements},
        {"spacing_wavelengths", s.spacing_wavelengths},
        {"theta0_deg", s.theta0_deg},
        {"mask_exclusion_deg", s.mask_exclusion_deg},
        {"grid_step_deg", s.grid_step_deg},
        {"subslots", s.subslots},
        {"rho", s.rho},
        {"literal_equality", s.literal_equality},
        {"quantization_levels", s.quantization_levels},
        {"tol", s.tol}}},
      {"adversary",
       {{"snr_grid_db", a.snr_grid_db},
        {"pfa", a.pfa},
        {"window_samples", a.window_samples},
        {"mc_trials", a.mc_trials},
        {"theta_eve_deg", a.theta_eve_deg},
        {"eve_placement", to_string(a.eve_placement)},
        {"tau", a.tau},
        {"gamma", a.gamma},
        {"direction_accuracy", a.direction_accuracy},
        {"eve_snr_offset_db", a.eve_snr_offset_db},
        {"candidates_with_traffic_only", a.candidates_with_traffic_only}}},
      {"sim",
       {{"n_slots", m.n_slots},
        {"slot_ms", m.slot_ms},
        {"seed", m.seed},
        {"replications", m.replications},
        {"epoch_slots", m.epoch_slots}}},
  };
}

std::string serialize(const ScenarioConfig &cfg) { return to_json(cfg).dump(2); }

std::string config_hash(const ScenarioConfig &cfg) {
  const std::string canonical = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

} // namespace cidp

#include "minen/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "minen/error.hpp"

namespace minen {

std::string_view to_string(ProtocolKind p) {
  switch (p) {
    case ProtocolKind::minen: return "minen";
    case ProtocolKind::leach: return "leach";
    case ProtocolKind::fcm: return "fcm";
  }
  return "minen";
}

std::optional<ProtocolKind> parse_protocol(std::string_view s) {
  if (s == "minen") return ProtocolKind::minen;
  if (s == "leach") return ProtocolKind::leach;
  if (s == "fcm") return ProtocolKind::fcm;
  return std::nullopt;
}

std::string_view to_string(ClusteringMethod m) {
  return m == ClusteringMethod::kmeans ? "kmeans" : "gmm";
}

std::optional<ClusteringMethod> parse_clustering(std::string_view s) {
  if (s == "kmeans") return ClusteringMethod::kmeans;
  if (s == "gmm") return ClusteringMethod::gmm;
  return std::nullopt;
}

void SimulationConfig::validate() const {
  network.validate();
  energy.validate();
  scheduler.validate();
  leach.validate();
  fcm.validate();
  if (!(aggregated_len_bits > 0.0)) {
    throw ConfigError("aggregated_len_bits must be positive");
  }
  if (round_cap == 0) {
    throw ConfigError("round_cap must be at least 1");
  }
  if (clustering.kmeans.max_iterations < 1 || clustering.gmm.max_iterations < 1) {
    throw ConfigError("clustering iteration caps must be at least 1");
  }
  if (!(clustering.gmm.tolerance > 0.0) || !(clustering.gmm.covariance_floor > 0.0)) {
    throw ConfigError("gmm_tol and gmm_covariance_floor must be positive");
  }
}

namespace {

using nlohmann::json;

// Reads keys out of one JSON object and rejects whatever was not read.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string scope) : obj_(obj), scope_(std::move(scope)) {
    if (!obj_.is_object()) {
      throw ConfigError(where() + "expected a JSON object");
    }
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    if (it == obj_.end()) {
      return;
    }
    try {
      out = it->template get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(where() + "bad value for '" + key + "': " + e.what());
    }
  }

  template <typename T>
  void read_optional(const char* key, std::optional<T>& out) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    if (it == obj_.end() || it->is_null()) {
      return;
    }
    T value{};
    read(key, value);
    out = value;
  }

  const json* child(const char* key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void allow(std::string_view key) { seen_.insert(std::string(key)); }

  void reject_unknown() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.contains(key)) {
        throw ConfigError(where() + "unknown key '" + key + "'");
      }
    }
  }

  std::string where() const { return scope_.empty() ? "config: " : "config." + scope_ + ": "; }

 private:
  const json& obj_;
  std::string scope_;
  std::set<std::string, std::less<>> seen_;
};

Position parse_position(const json& j) {
  try {
    if (j.is_array() && j.size() == 2) {
      return {j.at(0).get<double>(), j.at(1).get<double>()};
    }
    if (j.is_object()) {
      ObjectReader r(j, "bs_pos");
      Position p;
      r.read("x", p.x);
      r.read("y", p.y);
      r.reject_unknown();
      return p;
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: bad bs_pos: ") + e.what());
  }
  throw ConfigError("config: bs_pos must be [x, y] or {\"x\": .., \"y\": ..}");
}

BitRange parse_range(const json& j, const char* key) {
  try {
    if (j.is_array() && j.size() == 2) {
      return {j.at(0).get<std::uint32_t>(), j.at(1).get<std::uint32_t>()};
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: bad ") + key + ": " + e.what());
  }
  throw ConfigError(std::string("config: ") + key + " must be [min, max]");
}

template <typename Enum, typename Parse>
void read_enum(ObjectReader& r, const char* key, Enum& out, Parse parse) {
  std::string text;
  bool present = false;
  if (const json* j = r.child(key)) {
    if (!j->is_string()) {
      throw ConfigError(r.where() + "'" + key + "' must be a string");
    }
    text = j->get<std::string>();
    present = true;
  }
  if (present) {
    const auto parsed = parse(text);
    if (!parsed) {
      throw ConfigError(r.where() + "unknown " + key + " '" + text + "'");
    }
    out = *parsed;
  }
}

void read_scheduler_block(const json& j, SchedulerConfig& s) {
  ObjectReader r(j, "scheduler");
  read_enum(r, "algorithm", s.algorithm, parse_scheduler);
  r.read("alpha", s.alpha);
  r.read("beta", s.beta);
  r.read("max_iterations", s.max_iterations);
  r.read("population_size", s.population_size);
  r.read_optional("mutation_rate", s.mutation_rate);
  r.read("coverage_preserving", s.coverage_preserving);
  r.read("initial_sleep_probability", s.initial_sleep_probability);
  r.read("pso_inertia", s.pso.inertia);
  r.read("pso_c1", s.pso.c1);
  r.read("pso_c2", s.pso.c2);
  r.read("pso_velocity_clamp", s.pso.velocity_clamp);
  r.reject_unknown();
}

}  // namespace

SimulationConfig config_from_json(const json& j,
                                  std::span<const std::string_view> passthrough_keys) {
  SimulationConfig cfg;
  ObjectReader r(j, "");
  for (auto key : passthrough_keys) {
    r.allow(key);
  }

  NetworkConfig& net = cfg.network;
  r.read("node_count", net.node_count);
  r.read("area_width", net.area_width);
  r.read("area_height", net.area_height);
  // Base station defaults to the center of whatever area was configured.
  net.bs_pos = {net.area_width / 2.0, net.area_height / 2.0};
  if (const json* p = r.child("bs_pos")) net.bs_pos = parse_position(*p);
  r.read("initial_energy", net.initial_energy);
  if (const json* p = r.child("msg_len_range")) net.msg_len_range = parse_range(*p, "msg_len_range");
  if (const json* p = r.child("sensed_data_range")) {
    net.sensed_data_range = parse_range(*p, "sensed_data_range");
  }
  r.read_optional("cluster_count", net.cluster_count);
  r.read("sensing_radius", net.sensing_radius);
  r.read("coverage_grid_cells", net.coverage_grid_cells);
  r.read("rng_seed", net.rng_seed);

  EnergyParams& e = cfg.energy;
  r.read("e_elec", e.e_elec);
  r.read("eps_fs", e.eps_fs);
  r.read("eps_mp", e.eps_mp);
  r.read("w1", e.w1);
  r.read("w2", e.w2);
  r.read("w3", e.w3);
  r.read("round_time", e.round_time);

  read_enum(r, "protocol", cfg.protocol, parse_protocol);
  read_enum(r, "clustering", cfg.clustering.method, parse_clustering);
  r.read("kmeans_max_iter", cfg.clustering.kmeans.max_iterations);
  r.read("gmm_max_iter", cfg.clustering.gmm.max_iterations);
  r.read("gmm_tol", cfg.clustering.gmm.tolerance);
  r.read("gmm_covariance_floor", cfg.clustering.gmm.covariance_floor);
  r.read("aggregated_len_bits", cfg.aggregated_len_bits);
  r.read("round_cap", cfg.round_cap);

  if (const json* s = r.child("scheduler")) {
    read_scheduler_block(*s, cfg.scheduler);
  }
  if (const json* l = r.child("leach")) {
    ObjectReader lr(*l, "leach");
    lr.read("p", cfg.leach.p);
    lr.reject_unknown();
  }
  if (const json* f = r.child("fcm")) {
    ObjectReader fr(*f, "fcm");
    fr.read_optional("c", cfg.fcm.c);
    fr.read("m", cfg.fcm.m);
    fr.read("tol", cfg.fcm.tol);
    fr.read("max_iter", cfg.fcm.max_iter);
    fr.reject_unknown();
  }
  r.reject_unknown();
  cfg.validate();
  return cfg;
}

nlohmann::json config_to_json(const SimulationConfig& cfg) {
  json j;
  const NetworkConfig& net = cfg.network;
  j["node_count"] = net.node_count;
  j["area_width"] = net.area_width;
  j["area_height"] = net.area_height;
  j["bs_pos"] = {net.bs_pos.x, net.bs_pos.y};
  j["initial_energy"] = net.initial_energy;
  j["msg_len_range"] = {net.msg_len_range.min, net.msg_len_range.max};
  j["sensed_data_range"] = {net.sensed_data_range.min, net.sensed_data_range.max};
  j["cluster_count"] = net.cluster_count ? json(*net.cluster_count) : json(nullptr);
  j["sensing_radius"] = net.sensing_radius;
  j["coverage_grid_cells"] = net.coverage_grid_cells;
  j["rng_seed"] = net.rng_seed;
  j["e_elec"] = cfg.energy.e_elec;
  j["eps_fs"] = cfg.energy.eps_fs;
  j["eps_mp"] = cfg.energy.eps_mp;
  j["w1"] = cfg.energy.w1;
  j["w2"] = cfg.energy.w2;
  j["w3"] = cfg.energy.w3;
  j["round_time"] = cfg.energy.round_time;
  j["protocol"] = to_string(cfg.protocol);
  j["clustering"] = to_string(cfg.clustering.method);
  j["kmeans_max_iter"] = cfg.clustering.kmeans.max_iterations;
  j["gmm_max_iter"] = cfg.clustering.gmm.max_iterations;
  j["gmm_tol"] = cfg.clustering.gmm.tolerance;
  j["gmm_covariance_floor"] = cfg.clustering.gmm.covariance_floor;
  j["aggregated_len_bits"] = cfg.aggregated_len_bits;
  j["round_cap"] = cfg.round_cap;

  const SchedulerConfig& s = cfg.scheduler;
  j["scheduler"] = {
      {"algorithm", to_string(s.algorithm)},
      {"alpha", s.alpha},
      {"beta", s.beta},
      {"max_iterations", s.max_iterations},
      {"population_size", s.population_size},
      {"mutation_rate", s.mutation_rate ? json(*s.mutation_rate) : json(nullptr)},
      {"coverage_preserving", s.coverage_preserving},
      {"initial_sleep_probability", s.initial_sleep_probability},
      {"pso_inertia", s.pso.inertia},
      {"pso_c1", s.pso.c1},
      {"pso_c2", s.pso.c2},
      {"pso_velocity_clamp", s.pso.velocity_clamp},
  };
  j["leach"] = {{"p", cfg.leach.p}};
  j["fcm"] = {{"c", cfg.fcm.c ? json(*cfg.fcm.c) : json(nullptr)},
              {"m", cfg.fcm.m},
              {"tol", cfg.fcm.tol},
              {"max_iter", cfg.fcm.max_iter}};
  return j;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read config file '" + path.string() + "'");
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in '" + path.string() + "': " + e.what());
  }
}

SimulationConfig load_config(const std::filesystem::path& path,
                             std::span<const std::string_view> passthrough_keys) {
  return config_from_json(read_json_file(path), passthrough_keys);
}

}  // namespace minen

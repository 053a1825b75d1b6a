#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "minen/baselines.hpp"
#include "minen/clustering.hpp"
#include "minen/energy.hpp"
#include "minen/network.hpp"
#include "minen/sleepsched.hpp"

namespace minen {

enum class ProtocolKind { minen, leach, fcm };

std::string_view to_string(ProtocolKind p);
std::optional<ProtocolKind> parse_protocol(std::string_view s);
std::string_view to_string(ClusteringMethod m);
std::optional<ClusteringMethod> parse_clustering(std::string_view s);

struct ClusteringOptions {
  ClusteringMethod method = ClusteringMethod::gmm;
  KMeansOptions kmeans;
  GmmOptions gmm;
};

/// Everything one simulation run needs.
struct SimulationConfig {
  NetworkConfig network;
  EnergyParams energy;
  ProtocolKind protocol = ProtocolKind::minen;
  ClusteringOptions clustering;
  SchedulerConfig scheduler;
  double aggregated_len_bits = 4000.0;
  LeachConfig leach;
  FcmConfig fcm;
  std::uint64_t round_cap = 20000;

  void validate() const;
};

/// Builds a config from JSON. Missing keys keep their defaults; unknown keys
/// throw ConfigError unless listed in `passthrough_keys` (ignored here, used
/// by callers such as the compare command).
SimulationConfig config_from_json(const nlohmann::json& j,
                                  std::span<const std::string_view> passthrough_keys = {});

nlohmann::json config_to_json(const SimulationConfig& cfg);

/// Reads and parses a JSON config file. Unreadable files and malformed JSON
/// are reported as ConfigError.
nlohmann::json read_json_file(const std::filesystem::path& path);

SimulationConfig load_config(const std::filesystem::path& path,
                             std::span<const std::string_view> passthrough_keys = {});

}  // namespace minen

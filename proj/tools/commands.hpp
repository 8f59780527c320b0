#pragma once

#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace statnet::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Invalid or inconsistent configuration. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mutable state of one run, filled in by the command as it executes.
struct Run {
  std::filesystem::path out_dir;
  nlohmann::json metrics = nlohmann::json::object();
  std::vector<std::string> artifacts;
  std::string status = "converged";
  std::string step = "start";  // last step entered, reported on failure

  /// Opens out_dir/name for writing and records it as an artifact.
  std::filesystem::path artifact(const std::string& name);
};

/// A validated command, ready to execute. Building one performs every check
/// that can fail on bad input, so execution never starts on an invalid config.
using Plan = std::function<void(Run&)>;

struct Command {
  std::string name;
  std::string help;
  nlohmann::json defaults;  // every accepted key; "seed" is null until given
  std::function<Plan(const nlohmann::json&)> prepare;
};

const std::vector<Command>& commands();

/// Overlays `user` on the defaults, rejecting unknown keys.
nlohmann::json merge_config(const nlohmann::json& defaults, const nlohmann::json& user);

/// Applies one "key=value" override. The value is parsed as JSON when
/// possible and kept as a string otherwise.
void apply_override(nlohmann::json& cfg, const std::string& assignment);

/// Writes a CSV with '\n' line endings. Each row must match the header width.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace statnet::cli

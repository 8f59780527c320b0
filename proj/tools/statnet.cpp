#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "commands.hpp"
#include "statnet/io.hpp"

using nlohmann::json;
using namespace statnet::cli;

namespace {

struct Flags {
  std::string config;
  std::optional<std::int64_t> seed;
  std::string out_dir;
  std::vector<std::string> overrides;
};

json read_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed config " + path + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

int execute(const Command& cmd, const Flags& flags) {
  json cfg;
  Plan plan;
  try {
    cfg = merge_config(cmd.defaults, read_config(flags.config));
    for (const auto& o : flags.overrides) apply_override(cfg, o);
    if (flags.seed) cfg["seed"] = *flags.seed;
    plan = cmd.prepare(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const statnet::io::FormatError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  Run run;
  run.out_dir = flags.out_dir.empty() ? std::filesystem::path("runs") / cmd.name : std::filesystem::path(flags.out_dir);
  const auto start = std::chrono::steady_clock::now();
  try {
    std::filesystem::create_directories(run.out_dir);
    plan(run);
  } catch (const std::exception& e) {
    std::cerr << "run failed during '" << run.step << "': " << e.what() << '\n';
    try {
      write_json(run.out_dir / "status.json", {{"status", "error"}, {"step", run.step}, {"message", e.what()}});
    } catch (const std::exception&) {
    }
    return 1;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json report = {{"command", cmd.name},   {"version", kVersion},   {"config_echo", cfg},
                 {"metrics", run.metrics}, {"artifacts", run.artifacts}, {"status", run.status},
                 {"wall_time_seconds", wall}};
  try {
    write_json(run.out_dir / "report.json", report);
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return 1;
  }
  std::cout << cmd.name << ": " << run.status << '\n';
  for (const auto& [k, v] : run.metrics.items()) std::cout << "  " << k << " = " << v.dump() << '\n';
  std::cout << "  report " << (run.out_dir / "report.json").string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Statistical mechanics of neural networks: mean-field, dynamics, memory and learning"};
  app.require_subcommand(1);
  Flags flags;
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& cmd : commands()) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("--config", flags.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "random seed (overrides the config)")->check(CLI::NonNegativeNumber);
    sub->add_option("--out-dir", flags.out_dir, "output directory (default runs/<command>)");
    sub->add_option("--override", flags.overrides, "key=value, value parsed as JSON (repeatable)")
        ->allow_extra_args(false);
    subs.emplace_back(sub, &cmd);
  }
  auto* version = app.add_subcommand("version", "Print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (version->parsed()) {
    std::cout << "statnet " << kVersion << '\n';
    return 0;
  }
  for (const auto& [sub, cmd] : subs) {
    if (sub->parsed()) return execute(*cmd, flags);
  }
  return 2;
}

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli/config.hpp"

namespace strongcat::cli {

/// What a subcommand gets to work with. Commands read all their config first, call
/// cfg.finish(), then compute and write files through write().
struct RunContext {
  ConfigReader& cfg;
  std::filesystem::path out_dir;
  std::uint64_t seed = 1;
  int threads = 1;
  std::ostream& log;
  std::vector<std::string> outputs;
  nlohmann::json summary = nlohmann::json::object();

  void write(const std::string& name, const std::function<void(std::ostream&)>& body);
  void write_json(const std::string& name, const nlohmann::json& j);
};

void cmd_wigner(RunContext& ctx);
void cmd_hhg(RunContext& ctx);
void cmd_condition(RunContext& ctx);
void cmd_tomo(RunContext& ctx);
void cmd_qs(RunContext& ctx);
void cmd_sweep(RunContext& ctx);

}  // namespace strongcat::cli

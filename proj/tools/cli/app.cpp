#include "cli/app.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "strongcat/errors.hpp"

#ifndef STRONGCAT_VERSION
#define STRONGCAT_VERSION "0.0.0"
#endif

namespace strongcat::cli {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

using Runner = void (*)(RunContext&);

struct CommandInfo {
  std::string name;
  std::string help;
  Runner runner;
  std::vector<std::string> keys;
};

const std::vector<std::string> kStateKeys{"state", "alpha", "alpha_im", "chi", "chi_im", "n", "k", "parity", "state_file",
                                          "state_trunc"};
const std::vector<std::string> kPulseKeys{"intensity", "wavelength", "duration", "cycles", "cep", "ip"};

std::vector<std::string> join(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

const std::vector<CommandInfo>& commands() {
  static const std::vector<CommandInfo> table{
      {"wigner", "Wigner grid and homodyne trace of a phase-space state", cmd_wigner,
       join({kStateKeys, {"range", "points", "phases", "shots", "efficiency"}})},
      {"hhg", "SFA dipole, harmonic shifts and cutoff diagnostics", cmd_hhg,
       join({kPulseKeys, {"envelope", "steps_per_cycle", "n_c", "g_eff", "n_ph"}})},
      {"condition", "conditioned field states (HHG or ATI)", cmd_condition,
       join({{"mode", "alpha", "alpha_im", "chi1", "chi1_im", "chi_plateau", "n_c", "cutoff_q", "q", "alpha2", "alpha2_im",
              "chi2", "chi2_im", "range", "points", "momentum", "g_eff"},
             kPulseKeys})},
      {"tomo", "homodyne tomography: MaxLik and inverse Radon", cmd_tomo,
       join({{"input"}, kStateKeys,
             {"phases", "shots", "efficiency", "method", "n_trunc", "max_iter", "tol", "bin_width", "cutoff", "range",
              "points"}})},
      {"qs", "quantum spectrometer shot simulation and diagonal selection", cmd_qs,
       {"shots", "q_eff", "q_orders", "absorption", "hhg_fraction", "ir_photons", "hh_photons", "noise_ir", "noise_hh",
        "width"}},
      {"sweep", "entropy sweeps: linear entropy vs |chi_1|, ATI entanglement vs energy", cmd_sweep,
       join({{"kind", "alpha", "alpha_im", "chi_plateau", "n_c", "cutoff_q", "chi1_max", "points", "g_eff", "e_min", "e_max"},
             kPulseKeys})},
  };
  return table;
}

const CommandInfo& find_command(const std::string& name) {
  for (const auto& c : commands()) {
    if (c.name == name) return c;
  }
  throw UsageError("unknown command '" + name + "'");
}

std::string flag_name(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Config load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file '" + path + "'");
  return Config::parse(is, path);
}

int execute(const CommandInfo& cmd, Config cfg, std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  ConfigReader reader(cfg);
  if (reader.has("command") && reader.text("command", cmd.name) != cmd.name) {
    reader.fail("command", "config was written for '" + reader.text("command", "") + "', not '" + cmd.name + "'");
  }
  reader.text("command", cmd.name);
  const std::uint64_t seed = reader.unsigned64("seed", 1);
  int default_threads = 1;
  if (const char* env = std::getenv("STRONGCAT_THREADS")) {
    Config env_cfg;
    env_cfg.set("threads", env, "STRONGCAT_THREADS");
    default_threads = ConfigReader(env_cfg).integer("threads", 1, 1, 1024);
  }
  const int threads = reader.integer("threads", default_threads, 1, 1024);
  const std::string out_dir = reader.text("out", "strongcat-out");

  RunContext ctx{reader, out_dir, seed, threads, out, {}, nlohmann::json::object()};
  std::filesystem::create_directories(ctx.out_dir);
  cmd.runner(ctx);

  const std::string echo = reader.echo();
  ctx.write("config.txt", [&](std::ostream& os) { os << echo; });
  ctx.write_json("summary.json", ctx.summary);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  nlohmann::json manifest{{"tool", "strongcat"},
                          {"version", STRONGCAT_VERSION},
                          {"command", cmd.name},
                          {"seed", seed},
                          {"threads", threads},
                          {"config_hash", "fnv1a64:" + hex64(fnv1a64(echo))},
                          {"wall_clock_s", wall},
                          {"outputs", ctx.outputs}};
  {
    std::ofstream os(ctx.out_dir / "run.json", std::ios::binary);
    os << manifest.dump(2) << '\n';
    if (!os) throw std::runtime_error("failed writing run.json");
  }

  out << echo;
  out << "# summary\n" << ctx.summary.dump(2) << '\n';
  out << "# wrote " << ctx.outputs.size() + 1 << " files to " << ctx.out_dir.string() << '\n';
  return kExitOk;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& c : commands()) n.push_back(c.name);
    return n;
  }();
  return names;
}

const std::vector<std::string>& command_keys(const std::string& command) { return find_command(command).keys; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"strongcat: quantum optics of intense laser-atom interaction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", STRONGCAT_VERSION);
  std::string config_path, out_dir, seed, threads;
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads (default: STRONGCAT_THREADS or 1)");

  // one string slot per (command, key); std::map keeps references stable
  std::map<std::pair<std::string, std::string>, std::string> values;
  std::map<std::string, CLI::App*> subs;
  for (const auto& cmd : commands()) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->fallthrough();
    for (const auto& key : cmd.keys) sub->add_option(flag_name(key), values[{cmd.name, key}], key);
    subs[cmd.name] = sub;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const CommandInfo* cmd = nullptr;
    for (const auto& c : commands()) {
      if (subs[c.name]->parsed()) cmd = &c;
    }
    Config cfg = config_path.empty() ? Config{} : load_config(config_path);
    auto override_key = [&](const std::string& key, const std::string& value) {
      if (!value.empty()) cfg.set(key, value, "command line");
    };
    override_key("seed", seed);
    override_key("out", out_dir);
    override_key("threads", threads);
    for (const auto& key : cmd->keys) {
      if (subs[cmd->name]->count(flag_name(key)) > 0) cfg.set(key, values[{cmd->name, key}], "command line");
    }
    return execute(*cmd, std::move(cfg), out);
  } catch (const UsageError& e) {
    err << "strongcat: usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "strongcat: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "strongcat: error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace strongcat::cli

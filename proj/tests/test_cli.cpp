#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli/app.hpp"
#include "cli/config.hpp"
#include "strongcat/errors.hpp"

using namespace strongcat;
using namespace strongcat::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("strongcat_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

nlohmann::json summary(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "summary.json")); }

std::string config_error(const std::string& text) {
  std::istringstream is(text);
  try {
    Config::parse(is, "run.cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, ParsesCommentsAndWhitespace) {
  std::istringstream is("# comment\n\n  alpha =  2.5 \nstate=cat\n");
  const auto cfg = Config::parse(is, "f");
  ASSERT_NE(cfg.find("alpha"), nullptr);
  EXPECT_EQ(cfg.find("alpha")->value, "2.5");
  EXPECT_EQ(cfg.find("alpha")->line, 3);
  EXPECT_EQ(cfg.find("state")->value, "cat");
}

TEST(Config, MalformedLinesNameTheLocation) {
  EXPECT_NE(config_error("alpha = 1\nnonsense\n").find("run.cfg:2"), std::string::npos);
  EXPECT_NE(config_error("alpha = 1\nalpha = 2\n").find("already set at line 1"), std::string::npos);
  EXPECT_NE(config_error("Alpha = 1\n").find("invalid field name"), std::string::npos);
  EXPECT_NE(config_error("alpha =\n").find("has no value"), std::string::npos);
}

TEST(ConfigReader, TypedAccessAndDiagnostics) {
  std::istringstream is("alpha = 2\nshots = 12x\nwidth = -1\nlist = 11, 13,15\nextra = 1\n");
  const auto cfg = Config::parse(is, "c.cfg");
  ConfigReader r(cfg);
  EXPECT_EQ(r.real("alpha", 0.0), 2.0);
  EXPECT_EQ(r.real("missing", 0.25), 0.25);
  try {
    r.integer("shots", 1, 0, 100);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("c.cfg:2: field 'shots'"), std::string::npos);
  }
  EXPECT_THROW(r.positive("width", 1.0), ConfigError);
  EXPECT_EQ(r.integers("list", {}, 1, 100), (std::vector<int>{11, 13, 15}));
  EXPECT_THROW(r.choice("missing_choice", "x", {"a", "b"}), ConfigError);
  try {
    r.finish("test");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("c.cfg:5: field 'extra' is not used"), std::string::npos);
  }
}

TEST(ConfigReader, EchoReplaysExactly) {
  std::istringstream is("x = 0.1\n");
  const auto cfg = Config::parse(is, "a");
  ConfigReader r(cfg);
  r.real("x", 0.0);
  r.real("y", 1.0 / 3.0);
  r.integer("n", 7, 0, 10);
  std::istringstream echo(r.echo());
  const auto replay_cfg = Config::parse(echo, "echo");
  ConfigReader replay(replay_cfg);
  EXPECT_EQ(replay.real("x", 5.0), 0.1);
  EXPECT_EQ(replay.real("y", 5.0), 1.0 / 3.0);
  EXPECT_EQ(replay.integer("n", 0, 0, 10), 7);
  EXPECT_EQ(replay.echo(), r.echo());
}

TEST(Fnv1a, ReferenceVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Cli, EveryCommandKeyIsAFlag) {
  for (const auto& name : command_names()) {
    for (const auto& key : command_keys(name)) {
      const auto dir = scratch("flags");
      std::string flag = "--" + key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      // a parse error would be exit 2 with CLI11's message; a config error names the field
      const auto r = invoke({name, flag, "not-a-value", "--out", dir.string()});
      EXPECT_EQ(r.err.find("The following argument was not expected"), std::string::npos) << name << " " << flag;
    }
  }
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("exit");
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"wigner", "--no-such-flag", "1"}).code, kExitUsage);
  const auto bad = invoke({"wigner", "--alpha", "abc", "--out", dir.string()});
  EXPECT_EQ(bad.code, kExitUsage);
  EXPECT_NE(bad.err.find("field 'alpha'"), std::string::npos);
  EXPECT_EQ(invoke({"qs", "--shots", "10", "--out", dir.string()}).code, kExitUsage);
  EXPECT_EQ(invoke({"condition", "--mode", "ir-cat", "--q", "3", "--out", dir.string()}).code, kExitUsage);
  EXPECT_EQ(invoke({"tomo", "--input", (dir / "missing.csv").string(), "--out", dir.string()}).code, kExitUsage);
  // a vanishing cat displacement is a numerical failure, not a usage error
  EXPECT_EQ(invoke({"wigner", "--state", "cat", "--chi", "1e-9", "--points", "5", "--shots", "0", "--out", dir.string()}).code,
            kExitNumerical);
  EXPECT_EQ(invoke({"--version"}).code, kExitOk);
}

TEST(Cli, ConfigFileAndCommandMismatch) {
  const auto dir = scratch("mismatch");
  fs::create_directories(dir);
  std::ofstream(dir / "c.cfg") << "command = qs\n";
  const auto r = invoke({"--config", (dir / "c.cfg").string(), "wigner", "--out", dir.string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("c.cfg:1"), std::string::npos);
}

TEST(CliWigner, CoherentPeakFockNegativityCatFringes) {
  const auto dir = scratch("wigner");
  ASSERT_EQ(invoke({"wigner", "--state", "coherent", "--alpha", "2", "--range", "6", "--points", "121", "--shots", "0",
                    "--out", (dir / "coh").string()})
                .code,
            kExitOk);
  // beta = alpha = 2 sits on the grid at x = 2 sqrt(2) only approximately; the peak is close to 2/pi
  EXPECT_NEAR(summary(dir / "coh")["max"].get<double>(), 2.0 / std::numbers::pi, 0.02);
  ASSERT_EQ(invoke({"wigner", "--state", "fock", "--n", "1", "--points", "101", "--shots", "0", "--out",
                    (dir / "fock").string()})
                .code,
            kExitOk);
  EXPECT_NEAR(summary(dir / "fock")["min"].get<double>(), -2.0 / std::numbers::pi, 1e-9);
  ASSERT_EQ(invoke({"wigner", "--state", "cat", "--alpha", "2", "--chi", "1.5", "--points", "141", "--shots", "100",
                    "--out", (dir / "cat").string()})
                .code,
            kExitOk);
  const auto s = summary(dir / "cat");
  EXPECT_LT(s["min"].get<double>(), -0.05);
  EXPECT_NEAR(s["integral"].get<double>(), 1.0, 1e-3);
  EXPECT_TRUE(fs::exists(dir / "cat" / "homodyne.csv"));
}

TEST(CliHhg, ZeroFieldAndAtomNumberScaling) {
  const auto dir = scratch("hhg");
  const auto zero = invoke({"hhg", "--intensity", "0", "--out", (dir / "zero").string()});
  ASSERT_EQ(zero.code, kExitOk) << zero.err;
  EXPECT_EQ(slurp(dir / "zero" / "spectrum.csv"), "q,photon_ev,chi_re,chi_im,power\n");
  EXPECT_NE(summary(dir / "zero")["note"].get<std::string>().find("zero field"), std::string::npos);

  const std::vector<std::string> base{"hhg", "--cycles", "4", "--n-c", "25"};
  auto one = base, two = base;
  one.insert(one.end(), {"--out", (dir / "n1").string()});
  two.insert(two.end(), {"--n-ph", "2", "--out", (dir / "n2").string()});
  ASSERT_EQ(invoke(one).code, kExitOk);
  ASSERT_EQ(invoke(two).code, kExitOk);
  std::ifstream a(dir / "n1" / "spectrum.csv"), b(dir / "n2" / "spectrum.csv");
  std::string la, lb;
  std::getline(a, la);
  std::getline(b, lb);
  int rows = 0;
  while (std::getline(a, la) && std::getline(b, lb)) {
    const double pa = std::stod(la.substr(la.rfind(',') + 1));
    const double pb = std::stod(lb.substr(lb.rfind(',') + 1));
    EXPECT_NEAR(pb, 4.0 * pa, 1e-12 * std::max(1.0, pb));
    ++rows;
  }
  EXPECT_EQ(rows, 25);
}

TEST(CliCondition, IrCatIsNonClassical) {
  const auto dir = scratch("condition");
  const auto r = invoke({"condition", "--mode", "ir-cat", "--chi1", "0.5", "--points", "81", "--out", dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_LT(summary(dir)["wigner_min"].get<double>(), 0.0);
  const auto cat = nlohmann::json::parse(slurp(dir / "cat.json"));
  EXPECT_GT(cat["n_trunc"].get<int>(), 0);
}

TEST(CliTomo, RoundTripReportsFidelity) {
  const auto dir = scratch("tomo");
  const auto r = invoke({"tomo", "--state", "coherent", "--alpha", "1", "--n-trunc", "10", "--shots", "5000",
                         "--points", "31", "--out", dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_GE(summary(dir)["fidelity"].get<double>(), 0.99);
  // reconstruct again from the written trace, with no reference
  const auto again = invoke({"tomo", "--input", (dir / "homodyne.csv").string(), "--n-trunc", "10", "--method", "maxlik",
                             "--points", "31", "--out", (dir / "again").string()});
  ASSERT_EQ(again.code, kExitOk) << again.err;
  EXPECT_EQ(slurp(dir / "rho.json"), slurp(dir / "again" / "rho.json"));
  EXPECT_FALSE(summary(dir / "again").contains("fidelity"));
}

TEST(CliManifest, HashMatchesEchoedConfig) {
  const auto dir = scratch("manifest");
  ASSERT_EQ(invoke({"qs", "--shots", "2000", "--out", dir.string()}).code, kExitOk);
  const auto manifest = nlohmann::json::parse(slurp(dir / "run.json"));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(slurp(dir / "config.txt"))));
  EXPECT_EQ(manifest["config_hash"].get<std::string>(), std::string("fnv1a64:") + buf);
  EXPECT_EQ(manifest["command"], "qs");
  EXPECT_GE(manifest["wall_clock_s"].get<double>(), 0.0);
  EXPECT_NE(slurp(dir / "config.txt").find("seed = 1\n"), std::string::npos);
}

// Each run is replayed from its echoed config with a different thread count; every CSV
// must come back byte for byte.
TEST(CliReproducibility, ReplayFromEchoIsByteIdentical) {
  const std::vector<std::vector<std::string>> runs{
      {"wigner", "--state", "squeezed", "--k", "0.5", "--points", "41", "--shots", "2000", "--seed", "7"},
      {"qs", "--shots", "20000", "--q-orders", "11,13,15", "--seed", "3"},
      {"tomo", "--state", "cat", "--alpha", "1", "--chi", "1", "--n-trunc", "12", "--shots", "3000", "--points", "21"},
      {"condition", "--mode", "xuv-cat", "--chi-plateau", "0.4", "--q", "5", "--points", "31"},
      {"sweep", "--kind", "slin", "--points", "21"},
      {"hhg", "--cycles", "3", "--n-c", "15"},
  };
  int k = 0;
  for (auto args : runs) {
    const auto first = scratch("replay_a" + std::to_string(k));
    const auto second = scratch("replay_b" + std::to_string(k));
    ++k;
    args.insert(args.end(), {"--out", first.string()});
    const auto a = invoke(args);
    ASSERT_EQ(a.code, kExitOk) << args[0] << ": " << a.err;
    const auto b = invoke({"--config", (first / "config.txt").string(), "--out", second.string(), "--threads", "2", args[0]});
    ASSERT_EQ(b.code, kExitOk) << args[0] << ": " << b.err;
    int csvs = 0;
    for (const auto& entry : fs::directory_iterator(first)) {
      if (entry.path().extension() != ".csv") continue;
      ++csvs;
      EXPECT_EQ(slurp(entry.path()), slurp(second / entry.path().filename())) << entry.path();
    }
    EXPECT_GT(csvs, 0) << args[0];
  }
}

// Spawns the built CLI binary; VCAGE_CLI_BIN is set by ctest.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "vcage/pipeline.hpp"

namespace {

using nlohmann::json;

std::string cli_bin() {
  const char* bin = std::getenv("VCAGE_CLI_BIN");
  REQUIRE(bin != nullptr);
  return bin;
}

struct CliResult {
  int exit_code;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::string& args) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto out_path = dir / "vcage_cli_out.txt";
  const auto err_path = dir / "vcage_cli_err.txt";
  const std::string cmd = cli_bin() + " " + args + " >" + out_path.string() + " 2>" +
                          err_path.string();
  const int status = std::system(cmd.c_str());
  const auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  CliResult result;
  result.exit_code = WEXITSTATUS(status);
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  return result;
}

}  // namespace

TEST_CASE("usage errors exit 1") {
  CHECK(run_cli("").exit_code == 1);
  CHECK(run_cli("gen --episodes 5").exit_code == 1);          // missing --out
  CHECK(run_cli("frobnicate").exit_code == 1);                // unknown subcommand
  CHECK(run_cli("gen --episodes 5 --out /tmp/x --nope 1").exit_code == 1);
}

TEST_CASE("runtime errors exit 2 with machine-readable JSON on stderr") {
  const CliResult r = run_cli("stats --in /nonexistent_vcage.jsonl");
  CHECK(r.exit_code == 2);
  const json err = json::parse(r.err);
  CHECK(err.at("error") == "IoError");
  CHECK(err.contains("message"));
}

TEST_CASE("gen emits stats JSON on stdout and supports replay and stats") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto out = dir / "vcage_cli_ds.jsonl";

  const CliResult gen = run_cli("gen --episodes 8 --mode vcage --seed 5 --out " +
                                out.string() + " --instruction place_empty_cup");
  REQUIRE(gen.exit_code == 0);
  const json stats = json::parse(gen.out);
  CHECK(stats.at("accepted_count") == 8);
  CHECK(stats.at("purity") == 1.0);

  const CliResult replay = run_cli("replay --in " + out.string() + " --episode 0");
  CHECK(replay.exit_code == 0);
  CHECK(json::parse(replay.out).at("match") == true);

  const CliResult missing = run_cli("replay --in " + out.string() + " --episode 999");
  CHECK(missing.exit_code == 2);
  CHECK(json::parse(missing.err).at("error") == "MissingObject");

  // --expect-config guards the manifest hash
  const vcage::Dataset ds = vcage::read_dataset(out);
  const CliResult good =
      run_cli("stats --in " + out.string() + " --expect-config " +
              ds.manifest.config_sha256);
  CHECK(good.exit_code == 0);
  const CliResult mismatch =
      run_cli("stats --in " + out.string() + " --expect-config deadbeef");
  CHECK(mismatch.exit_code == 2);
  CHECK(json::parse(mismatch.err).at("error") == "SchemaError");

  std::filesystem::remove(out);
}

TEST_CASE("gate and compare print parseable JSON") {
  const CliResult gate =
      run_cli("gate --template place_mouse_pad --trials 10 --seed 3");
  REQUIRE(gate.exit_code == 0);
  const json report = json::parse(gate.out);
  CHECK(report.at("sr") == 1.0);
  CHECK(report.at("status") == "Accept");

  const CliResult cmp = run_cli("compare --episodes 20 --seed 4");
  REQUIRE(cmp.exit_code == 0);
  const json c = json::parse(cmp.out);
  CHECK(c.contains("vcage"));
  CHECK(c.contains("vanilla"));
  CHECK(c.contains("delta_purity"));
}

// vcage command line: dataset generation, gating, statistics, replay, and the
// bundled mock critic server. Machine-readable output goes to stdout as JSON;
// human-readable logs go to stderr. Exit codes: 0 success, 1 usage error,
// 2 runtime error (error JSON on stderr).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "vcage/digest.hpp"
#include "vcage/pipeline.hpp"
#include "vcage/serde.hpp"
#include "vcage/wire.hpp"

namespace {

using nlohmann::json;

int log_level() {
  const char* env = std::getenv("VCAGE_LOG");
  if (env == nullptr) return 1;  // info
  const std::string v = env;
  if (v == "error") return 0;
  if (v == "debug") return 2;
  return 1;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::fprintf(stderr, "%s\n", msg.c_str());
}

void log_debug(const std::string& msg) {
  if (log_level() >= 2) std::fprintf(stderr, "%s\n", msg.c_str());
}

struct CommonFlags {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<uint64_t> episodes;
  std::optional<int> workers;
  std::optional<std::string> instruction;
  std::optional<std::string> critic;
  std::optional<std::string> critic_endpoint;
  std::optional<std::string> planner_endpoint;
};

vcage::PipelineConfig resolve_config(const CommonFlags& flags) {
  vcage::PipelineConfig cfg;
  if (!flags.config_path.empty()) cfg = vcage::load_config(flags.config_path);
  if (flags.seed) cfg.master_seed = *flags.seed;
  if (flags.mode) cfg.mode = vcage::acceptance_mode_from_string(*flags.mode);
  if (flags.episodes) cfg.episode_target = *flags.episodes;
  if (flags.workers) cfg.workers = *flags.workers;
  if (flags.instruction) cfg.instructions = {*flags.instruction};
  if (flags.critic) {
    if (*flags.critic == "oracle") {
      cfg.critic.kind = vcage::CriticKind::oracle;
    } else if (*flags.critic == "noisy") {
      cfg.critic.kind = vcage::CriticKind::noisy;
    } else if (*flags.critic == "remote") {
      cfg.critic.kind = vcage::CriticKind::remote;
    } else {
      vcage::raise(vcage::ErrorCode::invalid_argument,
                   "unknown critic '" + *flags.critic + "'");
    }
  }
  if (flags.critic_endpoint) {
    cfg.critic.kind = vcage::CriticKind::remote;
    cfg.critic.endpoint = *flags.critic_endpoint;
  }
  if (flags.planner_endpoint) {
    cfg.planner.kind = vcage::PlannerKind::remote;
    cfg.planner.endpoint = *flags.planner_endpoint;
  }
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "pipeline config JSON file");
  cmd->add_option("--seed", flags.seed, "master seed");
  cmd->add_option("--mode", flags.mode, "acceptance rule: vcage|vanilla");
  cmd->add_option("--workers", flags.workers, "worker threads (output-invariant)");
  cmd->add_option("--instruction", flags.instruction, "instruction / template id");
  cmd->add_option("--critic", flags.critic, "critic kind: oracle|noisy|remote");
  cmd->add_option("--critic-endpoint", flags.critic_endpoint,
                  "remote critic endpoint (implies --critic remote)");
  cmd->add_option("--planner-endpoint", flags.planner_endpoint,
                  "remote planner endpoint");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vcage: verified tabletop-manipulation dataset generator"};
  app.require_subcommand(1);

  CommonFlags flags;

  auto* gen = app.add_subcommand("gen", "generate a dataset");
  add_common(gen, flags);
  uint64_t gen_episodes = 0;
  std::string gen_out;
  gen->add_option("--episodes", gen_episodes, "accepted trajectories to collect")
      ->required();
  gen->add_option("--out", gen_out, "output JSONL path")->required();

  auto* gate = app.add_subcommand("gate", "robustness-gate a task template");
  add_common(gate, flags);
  std::string gate_template_id;
  int gate_trials = 10;
  gate->add_option("--template", gate_template_id, "task template id")->required();
  gate->add_option("--trials", gate_trials, "independent trials");

  auto* stats = app.add_subcommand("stats", "recompute statistics from a dataset");
  std::string stats_in;
  std::string expect_config;
  stats->add_option("--in", stats_in, "dataset JSONL path")->required();
  stats->add_option("--expect-config", expect_config,
                    "fail unless the manifest config hash matches");

  auto* compare = app.add_subcommand("compare", "vcage vs vanilla on one stream");
  add_common(compare, flags);
  uint64_t compare_episodes = 0;
  compare->add_option("--episodes", compare_episodes, "episodes to replay");

  auto* replay = app.add_subcommand("replay", "re-simulate one stored episode");
  std::string replay_in;
  uint64_t replay_episode_idx = 0;
  std::string render_path;
  std::string replay_expect_config;
  replay->add_option("--in", replay_in, "dataset JSONL path")->required();
  replay->add_option("--episode", replay_episode_idx, "episode index")->required();
  replay->add_option("--render", render_path, "write the final state as PGM");
  replay->add_option("--expect-config", replay_expect_config,
                     "fail unless the manifest config hash matches");

  auto* mock = app.add_subcommand("mock-critic", "serve the /verify protocol");
  int mock_port = 8791;
  std::string mock_host = "127.0.0.1";
  mock->add_option("--port", mock_port, "listen port");
  mock->add_option("--host", mock_host, "listen host");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      flags.episodes = gen_episodes;
      const vcage::PipelineConfig cfg = resolve_config(flags);
      log_info("generating " + std::to_string(cfg.episode_target) +
               " accepted trajectories (seed " + std::to_string(cfg.master_seed) + ")");
      log_debug("canonical config: " + vcage::canonical_config_json(cfg).dump());
      vcage::GenerateResult result = vcage::generate_dataset(cfg);
      vcage::write_dataset(result.dataset, gen_out);
      std::cout << result.stats.to_json().dump() << "\n";
      if (result.stats.cap_exceeded) {
        const json err = {{"error", "CapExceeded"},
                          {"message", "episode cap reached before the target; "
                                      "partial dataset written"}};
        std::fprintf(stderr, "%s\n", err.dump().c_str());
        return 2;
      }
      return 0;
    }

    if (gate->parsed()) {
      const vcage::PipelineConfig cfg = resolve_config(flags);
      const vcage::GateReport report =
          vcage::gate_template(cfg, gate_template_id, gate_trials);
      const json j = {{"template", report.template_id},
                      {"trials", report.trials},
                      {"successes", report.successes},
                      {"sr", report.sr},
                      {"status", report.accept ? "Accept" : "Reject"}};
      std::cout << j.dump() << "\n";
      return 0;
    }

    if (stats->parsed()) {
      const vcage::Dataset dataset = vcage::read_dataset(stats_in);
      if (!expect_config.empty() && dataset.manifest.config_sha256 != expect_config) {
        vcage::raise(vcage::ErrorCode::schema_error,
                     "manifest config hash " + dataset.manifest.config_sha256 +
                         " does not match --expect-config");
      }
      std::cout << vcage::recompute_stats(dataset).to_json().dump() << "\n";
      return 0;
    }

    if (compare->parsed()) {
      if (compare_episodes > 0) flags.episodes = compare_episodes;
      const vcage::PipelineConfig cfg = resolve_config(flags);
      std::cout << vcage::compare_modes(cfg).to_json().dump() << "\n";
      return 0;
    }

    if (replay->parsed()) {
      const vcage::Dataset dataset = vcage::read_dataset(replay_in);
      if (!replay_expect_config.empty() &&
          dataset.manifest.config_sha256 != replay_expect_config) {
        vcage::raise(vcage::ErrorCode::schema_error,
                     "manifest config hash does not match --expect-config");
      }
      const vcage::EpisodeResult result =
          vcage::replay_episode(dataset, replay_episode_idx);
      if (!render_path.empty()) {
        vcage::PipelineConfig cfg = vcage::config_from_json(dataset.manifest.config);
        cfg.mode = dataset.manifest.mode;
        cfg.master_seed = dataset.manifest.master_seed;
        const vcage::EpisodeRun rerun =
            vcage::run_episode_full(cfg, replay_episode_idx);
        if (!rerun.final_state) {
          vcage::raise(vcage::ErrorCode::validation_error,
                       "episode has no final state to render");
        }
        const vcage::Raster raster =
            vcage::rasterize(*rerun.final_state, cfg.scene.raster_scale);
        vcage::write_pgm(raster, render_path);
        std::ofstream meta(render_path + ".json");
        meta << vcage::raster_meta_json(raster) << "\n";
        log_info("rendered " + render_path + " (+.json sidecar)");
      }
      const json j = {{"episode", replay_episode_idx},
                      {"match", true},
                      {"steps", result.record.steps.size()},
                      {"accepted", result.record.accepted}};
      std::cout << j.dump() << "\n";
      return 0;
    }

    if (mock->parsed()) {
      vcage::MockCriticServer server;
      log_info("mock-critic listening on " + mock_host + ":" + std::to_string(mock_port));
      if (!server.run_blocking(mock_host, mock_port)) {
        vcage::raise(vcage::ErrorCode::io_error,
                     "cannot listen on " + mock_host + ":" + std::to_string(mock_port));
      }
      return 0;
    }
  } catch (const vcage::Error& e) {
    const json err = {{"error", std::string(vcage::to_string(e.code()))},
                      {"message", e.message()}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 2;
  } catch (const std::exception& e) {
    const json err = {{"error", "InternalError"}, {"message", e.what()}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 2;
  }
  return 1;
}

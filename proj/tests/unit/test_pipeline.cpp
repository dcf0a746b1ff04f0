#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "vcage/digest.hpp"
#include "vcage/pipeline.hpp"

using namespace vcage;

namespace {

PipelineConfig quiet_config() {
  PipelineConfig cfg;
  cfg.master_seed = 1;
  cfg.scene.distractors_min = 0;
  cfg.scene.distractors_max = 2;
  return cfg;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("zero-noise episodes are accepted with all verdicts 1") {
  PipelineConfig cfg = quiet_config();
  cfg.instructions = {"place_bread_basket"};
  const EpisodeResult r = run_episode(cfg, 0);
  CHECK(r.status == EpisodeStatus::accepted);
  CHECK(r.record.accepted);
  CHECK(!r.record.abort_step);
  REQUIRE(r.record.steps.size() == r.record.plan.size());
  for (const StepRecord& s : r.record.steps) {
    CHECK(s.verdict == std::optional<int>(1));
    CHECK(s.injected_failure == std::optional<bool>(false));
  }
}

TEST_CASE("forced toggle miss aborts a vcage episode at that step") {
  PipelineConfig cfg = quiet_config();
  cfg.instructions = {"power_on_desk"};
  cfg.failure.toggle_miss_prob = 1.0;
  const EpisodeResult r = run_episode(cfg, 0);
  CHECK(r.status == EpisodeStatus::rejected);
  CHECK_FALSE(r.record.accepted);
  CHECK(r.record.abort_step == std::optional<int>(0));
  REQUIRE(r.record.steps.size() == 1);  // aborted after the first verdict
  CHECK(r.record.steps[0].verdict == std::optional<int>(0));

  // vanilla keeps executing and accepts the silent failures
  cfg.mode = AcceptanceMode::vanilla;
  const EpisodeResult rv = run_episode(cfg, 0);
  CHECK(rv.status == EpisodeStatus::accepted);
  CHECK(rv.record.steps.size() == rv.record.plan.size());
  CHECK(!rv.record.steps[0].verdict.has_value());
}

TEST_CASE("episodes are byte-identical across repeated runs") {
  PipelineConfig cfg = quiet_config();
  cfg.instructions = {"get_ready_for_work"};
  cfg.failure.slip_prob = 0.2;
  const EpisodeResult a = run_episode(cfg, 3);
  const EpisodeResult b = run_episode(cfg, 3);
  CHECK(a.record == b.record);
  CHECK(a.status == b.status);
}

TEST_CASE("generate_dataset conserves episode counts and orders records") {
  PipelineConfig cfg = quiet_config();
  cfg.instructions = {"power_on_desk", "place_mouse_pad"};
  cfg.failure.toggle_miss_prob = 0.4;
  cfg.failure.slip_prob = 0.2;
  cfg.episode_target = 60;
  const GenerateResult result = generate_dataset(cfg);

  CHECK(result.stats.accepted_count == 60);
  CHECK(result.stats.accepted_count + result.stats.rejected_count +
            result.stats.degenerate_count + result.stats.unverifiable_count ==
        result.stats.episodes_run);
  CHECK(result.dataset.records.size() == 60);
  for (size_t i = 1; i < result.dataset.records.size(); ++i) {
    CHECK(result.dataset.records[i - 1].episode < result.dataset.records[i].episode);
  }
  CHECK(result.dataset.manifest.counts.accepted == 60);
  CHECK(result.dataset.manifest.config_sha256 == config_sha256(cfg));
  CHECK_FALSE(result.stats.cap_exceeded);

  SUBCASE("worker count does not change the outcome") {
    PipelineConfig par = cfg;
    par.workers = 4;
    const GenerateResult threaded = generate_dataset(par);
    CHECK(threaded.dataset == result.dataset);
    CHECK(dataset_to_jsonl(threaded.dataset) == dataset_to_jsonl(result.dataset));
  }
}

TEST_CASE("cap overrun returns the partial dataset") {
  PipelineConfig cfg = quiet_config();
  cfg.instructions = {"power_on_desk"};
  cfg.failure.toggle_miss_prob = 1.0;  // nothing can be accepted
  cfg.episode_target = 3;
  cfg.episode_cap_factor = 2;
  const GenerateResult result = generate_dataset(cfg);
  CHECK(result.stats.cap_exceeded);
  CHECK(result.stats.episodes_run == 6);
  CHECK(result.dataset.records.empty());
}

TEST_CASE("invalid configs are rejected up front") {
  PipelineConfig cfg = quiet_config();
  cfg.episode_target = 0;
  CHECK_THROWS_AS(generate_dataset(cfg), Error);

  PipelineConfig bad = quiet_config();
  bad.failure.slip_prob = 1.5;
  CHECK_THROWS_AS(bad.validate(), Error);

  PipelineConfig no_instr = quiet_config();
  no_instr.instructions.clear();
  CHECK_THROWS_AS(no_instr.validate(), Error);
}

TEST_CASE("dataset JSONL round-trips exactly") {
  PipelineConfig cfg = quiet_config();
  cfg.instructions = {"stack_bowls_three", "place_empty_cup"};
  cfg.failure.slip_prob = 0.3;
  cfg.episode_target = 40;
  const GenerateResult result = generate_dataset(cfg);

  const auto path = temp_path("vcage_roundtrip.jsonl");
  write_dataset(result.dataset, path);
  const Dataset loaded = read_dataset(path);
  CHECK(loaded == result.dataset);
  CHECK(dataset_to_jsonl(loaded) == dataset_to_jsonl(result.dataset));

  SUBCASE("manifest hash is self-consistent with the embedded config") {
    const PipelineConfig rebuilt = config_from_json(loaded.manifest.config);
    CHECK(config_sha256(rebuilt) == loaded.manifest.config_sha256);
  }

  SUBCASE("truncated final line names the line") {
    std::string text = dataset_to_jsonl(result.dataset);
    text.resize(text.size() - 40);  // chop into the last record
    try {
      dataset_from_jsonl(text);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::schema_error);
      CHECK(std::string(e.what()).find("line " +
                                       std::to_string(result.dataset.records.size())) !=
            std::string::npos);
    }
  }

  SUBCASE("unsupported schema version") {
    std::string text = dataset_to_jsonl(result.dataset);
    const size_t pos = text.find("vcage-ds-v1");
    text.replace(pos, 11, "vcage-ds-v9");
    CHECK_THROWS_AS(dataset_from_jsonl(text), Error);
  }

  std::filesystem::remove(path);
}

TEST_CASE("recompute_stats re-checks the acceptance predicate") {
  PipelineConfig cfg = quiet_config();
  cfg.instructions = {"power_on_desk"};
  cfg.failure.toggle_miss_prob = 0.3;
  cfg.episode_target = 30;
  const GenerateResult result = generate_dataset(cfg);

  const StatsReport stats = recompute_stats(result.dataset);
  CHECK(stats.accepted_count == result.stats.accepted_count);
  CHECK(stats.episodes_run == result.stats.episodes_run);
  CHECK(stats.purity == result.stats.purity);

  SUBCASE("tampered verdict is caught") {
    Dataset tampered = result.dataset;
    tampered.records[0].steps[0].verdict = 0;
    CHECK_THROWS_AS(recompute_stats(tampered), Error);
  }
}

TEST_CASE("replay matches stored records and catches tampering") {
  PipelineConfig cfg = quiet_config();
  cfg.instructions = {"move_can_pot"};  // exercises the layout-proposal path
  cfg.failure.slip_prob = 0.25;
  cfg.episode_target = 10;
  const GenerateResult result = generate_dataset(cfg);
  REQUIRE(!result.dataset.records.empty());

  const uint64_t episode = result.dataset.records.front().episode;
  const EpisodeResult replayed = replay_episode(result.dataset, episode);
  CHECK(replayed.record == result.dataset.records.front());

  SUBCASE("absent episode") {
    CHECK_THROWS_AS(replay_episode(result.dataset, 999999), Error);
  }

  SUBCASE("tampered digest fails the match") {
    Dataset tampered = result.dataset;
    tampered.records.front().steps.back().state_digest["tick"] = 999;
    try {
      replay_episode(tampered, episode);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::validation_error);
    }
  }
}

TEST_CASE("compare_modes pairs the two rules on one stream") {
  PipelineConfig cfg = quiet_config();
  cfg.instructions = {"place_dual_shoes"};
  cfg.failure.slip_prob = 0.3;
  cfg.episode_target = 300;
  const CompareResult cmp = compare_modes(cfg);

  // oracle-verified purity is exactly 1
  REQUIRE(cmp.vcage.purity.has_value());
  CHECK(*cmp.vcage.purity == 1.0);

  // the same stream, so vcage acceptance equals vanilla purity
  REQUIRE(cmp.vanilla.purity.has_value());
  CHECK(cmp.vcage.acceptance_rate ==
        doctest::Approx(*cmp.vanilla.purity).epsilon(1e-12));

  // monotone filtering
  for (uint64_t id : cmp.vcage_accepted_ids) {
    CHECK(std::find(cmp.vanilla_accepted_ids.begin(), cmp.vanilla_accepted_ids.end(),
                    id) != cmp.vanilla_accepted_ids.end());
  }

  // all-noise-zero: both modes coincide
  PipelineConfig clean = quiet_config();
  clean.instructions = {"place_mouse_pad"};
  clean.episode_target = 50;
  const CompareResult same = compare_modes(clean);
  CHECK(same.vcage_accepted_ids == same.vanilla_accepted_ids);
  CHECK(same.delta_purity == 0.0);

  // requires ground truth
  PipelineConfig noisy = quiet_config();
  noisy.critic.kind = CriticKind::noisy;
  CHECK_THROWS_AS(compare_modes(noisy), Error);
}

TEST_CASE("soak: every bundled template survives mixed noise") {
  PipelineConfig cfg = quiet_config();
  cfg.failure.slip_prob = 0.3;
  cfg.failure.toggle_miss_prob = 0.3;
  cfg.failure.press_miss_prob = 0.3;
  cfg.scene.distractors_min = 1;
  cfg.scene.distractors_max = 4;

  for (const TaskTemplate& tpl : TemplateLibrary::bundled().templates()) {
    cfg.instructions = {tpl.id};
    cfg.master_seed = mix64(std::hash<std::string>{}(tpl.id));
    uint64_t accepted = 0, rejected = 0, degenerate = 0;
    for (uint64_t i = 0; i < 40; ++i) {
      const EpisodeResult r = run_episode(cfg, i);
      switch (r.status) {
        case EpisodeStatus::accepted:
          ++accepted;
          CHECK(r.record.steps.size() == r.record.plan.size());
          break;
        case EpisodeStatus::rejected: ++rejected; break;
        case EpisodeStatus::degenerate: ++degenerate; break;
        default: CHECK(false);
      }
      // any hard error must leave the step's digest equal to the previous one
      for (size_t s = 1; s < r.record.steps.size(); ++s) {
        if (r.record.steps[s].hard_error) {
          CHECK(r.record.steps[s].state_digest ==
                r.record.steps[s - 1].state_digest);
        }
      }
    }
    CHECK(accepted + rejected + degenerate == 40);
    CHECK(accepted > 0);  // even under heavy noise something gets through
  }
}

TEST_CASE("abort policies both converge, with distinct retry streams") {
  // shrink the workspace so scatter retries actually happen
  PipelineConfig cfg = quiet_config();
  cfg.instructions = {"place_bread_basket"};
  cfg.scene.distractors_min = 4;
  cfg.scene.distractors_max = 6;
  cfg.scene.workspace.min_x = -0.35;
  cfg.scene.workspace.max_x = 0.35;
  cfg.scene.workspace.min_y = -0.25;
  cfg.scene.workspace.max_y = 0.25;
  cfg.scene.max_place_attempts = 32;
  cfg.episode_target = 20;
  cfg.episode_cap_factor = 20;

  cfg.abort_policy = AbortPolicy::resample_scene;
  const GenerateResult resample = generate_dataset(cfg);
  CHECK(resample.stats.accepted_count == 20);

  cfg.abort_policy = AbortPolicy::reset_same_scene;
  const GenerateResult reset = generate_dataset(cfg);
  CHECK(reset.stats.accepted_count == 20);
  // different policies are different semantic configs
  CHECK(reset.dataset.manifest.config_sha256 != resample.dataset.manifest.config_sha256);
}

TEST_CASE("vanilla datasets store null verdicts and round-trip") {
  PipelineConfig cfg = quiet_config();
  cfg.mode = AcceptanceMode::vanilla;
  cfg.instructions = {"power_on_desk"};
  cfg.failure.toggle_miss_prob = 0.5;
  cfg.episode_target = 10;
  const GenerateResult result = generate_dataset(cfg);
  REQUIRE(result.dataset.records.size() == 10);
  bool saw_failure = false;
  for (const TrajectoryRecord& r : result.dataset.records) {
    for (const StepRecord& s : r.steps) {
      CHECK(!s.verdict.has_value());
      saw_failure = saw_failure || (s.injected_failure && *s.injected_failure);
    }
  }
  CHECK(saw_failure);  // vanilla admits silent failures
  CHECK(dataset_from_jsonl(dataset_to_jsonl(result.dataset)) == result.dataset);
  CHECK(recompute_stats(result.dataset).accepted_count == 10);
}

TEST_CASE("noisy critic settings come through config files") {
  const nlohmann::json j = {{"critic",
                             {{"kind", "noisy"}, {"alpha", 0.25}, {"beta", 0.1},
                              {"seed_stream", 3}}}};
  const PipelineConfig cfg = config_from_json(j);
  CHECK(cfg.critic.kind == CriticKind::noisy);
  CHECK(cfg.critic.alpha == 0.25);
  CHECK(cfg.critic.beta == 0.1);
  CHECK(cfg.critic.seed_stream == 3);

  // out-of-range rates are rejected
  const nlohmann::json bad = {{"critic", {{"kind", "noisy"}, {"alpha", 1.5}}}};
  CHECK_THROWS_AS(config_from_json(bad), Error);
}

TEST_CASE("config files load with overrides and hash canonically") {
  const auto path = temp_path("vcage_cfg.json");
  {
    std::ofstream out(path);
    out << R"({"master_seed": 9, "mode": "vanilla",
               "failure": {"slip_prob": 0.1},
               "instructions": ["place_mouse_pad", "power_on_desk"],
               "workers": 8})";
  }
  const PipelineConfig cfg = load_config(path);
  CHECK(cfg.master_seed == 9);
  CHECK(cfg.mode == AcceptanceMode::vanilla);
  CHECK(cfg.failure.slip_prob == 0.1);
  CHECK(cfg.workers == 8);

  // workers and transports stay out of the canonical hash
  PipelineConfig serial = cfg;
  serial.workers = 1;
  CHECK(config_sha256(serial) == config_sha256(cfg));
  PipelineConfig remote = cfg;
  remote.critic.kind = CriticKind::remote;
  remote.critic.endpoint = "http://127.0.0.1:1";
  CHECK(config_sha256(remote) == config_sha256(cfg));
  // noisy critics do change the bytes, so they change the hash
  PipelineConfig noisy = cfg;
  noisy.critic.kind = CriticKind::noisy;
  noisy.critic.alpha = 0.2;
  CHECK(config_sha256(noisy) != config_sha256(cfg));

  std::filesystem::remove(path);
}

TEST_CASE("sha256 matches a known vector") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("base64 round-trips binary data") {
  CHECK(base64_encode("vcage") == "dmNhZ2U=");
  CHECK(base64_decode("dmNhZ2U=") == "vcage");
  std::string blob;
  for (int i = 0; i < 257; ++i) blob.push_back(static_cast<char>(i & 0xff));
  CHECK(base64_decode(base64_encode(blob)) == blob);
  CHECK_THROWS_AS(base64_decode("!!!!"), Error);
  CHECK_THROWS_AS(base64_decode("abc"), Error);
}

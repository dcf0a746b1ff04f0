#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vcage/grounding.hpp"
#include "vcage/verify.hpp"

namespace vcage {

struct CriticConfig {
  CriticKind kind = CriticKind::oracle;
  double alpha = 0.0;  // noisy only
  double beta = 0.0;   // noisy only
  uint64_t seed_stream = 0;
  std::string endpoint;  // remote only
};

enum class PlannerKind { rule_engine, remote };

struct PlannerConfig {
  PlannerKind kind = PlannerKind::rule_engine;
  std::string endpoint;
};

struct SceneParams {
  int distractors_min = 2;
  int distractors_max = 4;
  WorkspaceBounds workspace;
  double raster_scale = 0.005;
  bool use_layout_proposal = true;
  int max_place_attempts = 256;
  int scene_retries = 8;
};

// What happens after scene synthesis fails or an episode aborts:
// resample_scene re-derives everything from a fresh retry seed,
// reset_same_scene keeps the object set and re-draws placements only.
enum class AbortPolicy { reset_same_scene, resample_scene };

std::string_view to_string(AbortPolicy p);
AbortPolicy abort_policy_from_string(std::string_view s);

struct PipelineConfig {
  uint64_t master_seed = 0;
  AcceptanceMode mode = AcceptanceMode::vcage;
  CriticConfig critic;
  PlannerConfig planner;
  std::vector<std::string> instructions = {"place_mouse_pad"};
  FailureModel failure;
  int gate_trials = 10;
  double gate_tau = 0.5;
  SceneParams scene;
  SimParams sim;
  RefineConfig refine;  // per-episode seeds are derived; cfg.refine.seed is ignored
  AbortPolicy abort_policy = AbortPolicy::resample_scene;
  uint64_t episode_target = 100;
  uint64_t episode_cap_factor = 50;  // cap = factor * episode_target
  int workers = 1;
  WireOptions wire;
  std::string catalog_path;  // empty = bundled catalog

  void validate() const;
};

// Config file parsing (all fields optional, defaults above).
PipelineConfig config_from_json(const nlohmann::json& j);
PipelineConfig load_config(const std::filesystem::path& path);

// Canonical semantic config: the fields that determine dataset bytes.
// Execution details (workers, wire endpoints/timeouts, catalog path) are
// excluded, and a conformant remote critic hashes identically to the oracle
// it mirrors. Keys are sorted; sha256 of the dump is the manifest hash.
nlohmann::json canonical_config_json(const PipelineConfig& cfg);
std::string config_sha256(const PipelineConfig& cfg);

enum class EpisodeStatus { accepted, rejected, degenerate, unverifiable };

std::string_view to_string(EpisodeStatus s);

// One dataset line (schema vcage-ds-v1).
struct StepRecord {
  Subtask subtask;
  std::optional<std::string> hard_error;
  std::optional<bool> injected_failure;
  std::optional<int> verdict;  // null in vanilla mode
  nlohmann::json state_digest;

  bool operator==(const StepRecord&) const = default;
};

struct TrajectoryRecord {
  uint64_t episode = 0;
  uint64_t seed = 0;
  std::string instruction;
  std::vector<Subtask> plan;
  std::vector<StepRecord> steps;
  bool accepted = false;
  std::optional<int> abort_step;  // set iff a 0 verdict aborted a vcage episode

  bool operator==(const TrajectoryRecord&) const = default;
};

struct EpisodeResult {
  TrajectoryRecord record;
  EpisodeStatus status = EpisodeStatus::rejected;
};

struct DatasetCounts {
  uint64_t episodes_run = 0;
  uint64_t accepted = 0;
  uint64_t rejected = 0;
  uint64_t degenerate = 0;
  uint64_t unverifiable = 0;

  bool operator==(const DatasetCounts&) const = default;
};

struct DatasetManifest {
  std::string schema = "vcage-ds-v1";
  std::string config_sha256;
  uint64_t master_seed = 0;
  AcceptanceMode mode = AcceptanceMode::vcage;
  nlohmann::json config;  // canonical config, enough to replay
  DatasetCounts counts;

  bool operator==(const DatasetManifest&) const = default;
};

// Append-only container of accepted trajectories.
struct Dataset {
  DatasetManifest manifest;
  std::vector<TrajectoryRecord> records;

  bool operator==(const Dataset&) const = default;
};

// JSONL: line 0 is the manifest, then one record per line.
// read(write(d)) == d; corrupt input raises SchemaError naming the line.
void write_dataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset read_dataset(const std::filesystem::path& path);
std::string dataset_to_jsonl(const Dataset& dataset);
Dataset dataset_from_jsonl(const std::string& text);

struct StatsReport {
  uint64_t episodes_run = 0;
  uint64_t accepted_count = 0;
  uint64_t rejected_count = 0;
  uint64_t degenerate_count = 0;
  uint64_t unverifiable_count = 0;
  double acceptance_rate = 0.0;
  std::optional<double> purity;  // null when nothing was accepted
  std::vector<uint64_t> rejection_histogram;  // verdict-0 aborts by step index
  double hard_error_rate = 0.0;         // episodes with a hard error / run
  double all_postcondition_rate = 0.0;  // fully-successful episodes / run
  bool cap_exceeded = false;

  nlohmann::json to_json() const;
};

// Fraction of accepted trajectories whose every step truly satisfied its
// postcondition (no hard error, no injected failure). Throws
// MissingAnnotations when a record lacks the ground-truth flags; returns
// nullopt for an empty accepted set.
std::optional<double> purity(const std::vector<TrajectoryRecord>& records);

// Runs one full episode: ground -> scene synthesis (with retries) ->
// execute/verify -> acceptance. Deterministic in (config, episode_index).
EpisodeResult run_episode(const PipelineConfig& cfg, uint64_t episode_index);

struct EpisodeRun {
  EpisodeResult result;
  std::optional<SimState> final_state;  // unset when scene synthesis failed
};

// run_episode plus the final simulator state (for rendering/inspection).
EpisodeRun run_episode_full(const PipelineConfig& cfg, uint64_t episode_index);

struct GenerateResult {
  Dataset dataset;
  StatsReport stats;
};

// Runs episodes in index order (parallelizable; output independent of
// workers) until episode_target trajectories are accepted or the episode cap
// is hit; cap overrun is reported via stats.cap_exceeded with the partial
// dataset returned.
GenerateResult generate_dataset(const PipelineConfig& cfg);

struct CompareResult {
  StatsReport vcage;
  StatsReport vanilla;
  double delta_purity = 0.0;
  double delta_acceptance = 0.0;
  std::vector<uint64_t> vcage_accepted_ids;
  std::vector<uint64_t> vanilla_accepted_ids;

  nlohmann::json to_json() const;
};

// Replays the same seeded episode stream under both acceptance rules.
// Requires the oracle critic so ground truth is available; episode_target is
// the number of episodes replayed.
CompareResult compare_modes(const PipelineConfig& cfg);

// Robustness gate over a task template: trials on independently sampled
// scenes via the pipeline's scene synthesis, ground-truth success counting.
GateReport gate_template(const PipelineConfig& cfg, const std::string& template_id,
                         int trials);

// Re-derives a StatsReport from a stored dataset and re-checks every record
// against its mode's acceptance predicate (ValidationError on violation).
StatsReport recompute_stats(const Dataset& dataset);

// Re-simulates one stored episode from its seed and verifies the stored step
// digests match; returns the reconstructed result. Throws ValidationError on
// digest mismatch.
EpisodeResult replay_episode(const Dataset& dataset, uint64_t episode_index);

}  // namespace vcage

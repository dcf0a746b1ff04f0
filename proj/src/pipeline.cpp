#include "vcage/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "vcage/digest.hpp"
#include "vcage/serde.hpp"
#include "vcage/wire.hpp"

namespace vcage {

using nlohmann::json;

std::string_view to_string(AbortPolicy p) {
  return p == AbortPolicy::resample_scene ? "resample_scene" : "reset_same_scene";
}

AbortPolicy abort_policy_from_string(std::string_view s) {
  if (s == "resample_scene") return AbortPolicy::resample_scene;
  if (s == "reset_same_scene") return AbortPolicy::reset_same_scene;
  raise(ErrorCode::parse_error, "unknown abort policy '" + std::string(s) + "'");
}

std::string_view to_string(EpisodeStatus s) {
  switch (s) {
    case EpisodeStatus::accepted: return "accepted";
    case EpisodeStatus::rejected: return "rejected";
    case EpisodeStatus::degenerate: return "degenerate";
    case EpisodeStatus::unverifiable: return "unverifiable";
  }
  return "unknown";
}

void PipelineConfig::validate() const {
  if (instructions.empty()) {
    raise(ErrorCode::invalid_argument, "config needs at least one instruction");
  }
  if (episode_target < 1) {
    raise(ErrorCode::invalid_argument, "episode_target must be >= 1");
  }
  if (episode_cap_factor < 1) {
    raise(ErrorCode::invalid_argument, "episode_cap_factor must be >= 1");
  }
  if (scene.distractors_min < 0 || scene.distractors_max < scene.distractors_min) {
    raise(ErrorCode::invalid_argument, "bad distractor count range");
  }
  if (scene.scene_retries < 1 || scene.max_place_attempts < 1) {
    raise(ErrorCode::invalid_argument, "bad scene synthesis limits");
  }
  if (!(scene.raster_scale > 0.0)) {
    raise(ErrorCode::invalid_argument, "raster scale must be positive");
  }
  const auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(failure.slip_prob) || !prob(failure.toggle_miss_prob) ||
      !prob(failure.press_miss_prob) || !prob(critic.alpha) || !prob(critic.beta)) {
    raise(ErrorCode::invalid_argument, "probabilities must lie in [0, 1]");
  }
  if (gate_trials < 1 || gate_tau < 0.0 || gate_tau >= 1.0) {
    raise(ErrorCode::invalid_argument, "bad gate config");
  }
  validate_workspace(scene.workspace);
  if (critic.kind == CriticKind::remote && critic.endpoint.empty()) {
    raise(ErrorCode::invalid_argument, "remote critic needs an endpoint");
  }
  if (planner.kind == PlannerKind::remote && planner.endpoint.empty()) {
    raise(ErrorCode::invalid_argument, "remote planner needs an endpoint");
  }
}

namespace {

CriticKind critic_kind_from_string(std::string_view s) {
  if (s == "oracle") return CriticKind::oracle;
  if (s == "noisy") return CriticKind::noisy;
  if (s == "remote") return CriticKind::remote;
  raise(ErrorCode::parse_error, "unknown critic kind '" + std::string(s) + "'");
}

PlannerKind planner_kind_from_string(std::string_view s) {
  if (s == "rule_engine") return PlannerKind::rule_engine;
  if (s == "remote") return PlannerKind::remote;
  raise(ErrorCode::parse_error, "unknown planner kind '" + std::string(s) + "'");
}

}  // namespace

PipelineConfig config_from_json(const json& j) {
  PipelineConfig cfg;
  try {
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    if (j.contains("mode")) {
      cfg.mode = acceptance_mode_from_string(j.at("mode").get<std::string>());
    }
    if (j.contains("critic")) {
      const json& c = j.at("critic");
      cfg.critic.kind = critic_kind_from_string(c.value("kind", "oracle"));
      cfg.critic.alpha = c.value("alpha", 0.0);
      cfg.critic.beta = c.value("beta", 0.0);
      cfg.critic.seed_stream = c.value("seed_stream", uint64_t{0});
      cfg.critic.endpoint = c.value("endpoint", "");
    }
    if (j.contains("planner")) {
      const json& p = j.at("planner");
      cfg.planner.kind = planner_kind_from_string(p.value("kind", "rule_engine"));
      cfg.planner.endpoint = p.value("endpoint", "");
    }
    if (j.contains("instructions")) {
      cfg.instructions = j.at("instructions").get<std::vector<std::string>>();
    }
    if (j.contains("failure")) {
      const json& f = j.at("failure");
      cfg.failure.slip_prob = f.value("slip_prob", 0.0);
      cfg.failure.slip_offset_sigma = f.value("slip_offset_sigma", 0.02);
      cfg.failure.toggle_miss_prob = f.value("toggle_miss_prob", 0.0);
      cfg.failure.press_miss_prob = f.value("press_miss_prob", 0.0);
      cfg.failure.seed_stream = f.value("seed_stream", uint64_t{0});
    }
    if (j.contains("gate")) {
      cfg.gate_trials = j.at("gate").value("trials", 10);
      cfg.gate_tau = j.at("gate").value("tau", 0.5);
    }
    if (j.contains("scene")) {
      const json& s = j.at("scene");
      cfg.scene.distractors_min = s.value("distractors_min", cfg.scene.distractors_min);
      cfg.scene.distractors_max = s.value("distractors_max", cfg.scene.distractors_max);
      cfg.scene.raster_scale = s.value("raster_scale", cfg.scene.raster_scale);
      cfg.scene.use_layout_proposal =
          s.value("use_layout_proposal", cfg.scene.use_layout_proposal);
      cfg.scene.max_place_attempts =
          s.value("max_place_attempts", cfg.scene.max_place_attempts);
      cfg.scene.scene_retries = s.value("scene_retries", cfg.scene.scene_retries);
      if (s.contains("workspace")) {
        const json& w = s.at("workspace");
        cfg.scene.workspace.min_x = w.value("min_x", cfg.scene.workspace.min_x);
        cfg.scene.workspace.max_x = w.value("max_x", cfg.scene.workspace.max_x);
        cfg.scene.workspace.min_y = w.value("min_y", cfg.scene.workspace.min_y);
        cfg.scene.workspace.max_y = w.value("max_y", cfg.scene.workspace.max_y);
        cfg.scene.workspace.reach_x = w.value("reach_x", cfg.scene.workspace.reach_x);
        cfg.scene.workspace.reach_y = w.value("reach_y", cfg.scene.workspace.reach_y);
        cfg.scene.workspace.reach_radius =
            w.value("reach_radius", cfg.scene.workspace.reach_radius);
      }
    }
    if (j.contains("sim")) {
      cfg.sim.delta_pos = j.at("sim").value("delta_pos", cfg.sim.delta_pos);
    }
    if (j.contains("refine")) {
      const json& r = j.at("refine");
      cfg.refine.lambda = r.value("lambda", cfg.refine.lambda);
      cfg.refine.max_iters = r.value("max_iters", cfg.refine.max_iters);
      cfg.refine.step_init = r.value("step_init", cfg.refine.step_init);
      cfg.refine.step_decay = r.value("step_decay", cfg.refine.step_decay);
    }
    if (j.contains("abort_policy")) {
      cfg.abort_policy = abort_policy_from_string(j.at("abort_policy").get<std::string>());
    }
    cfg.episode_target = j.value("episode_target", cfg.episode_target);
    cfg.episode_cap_factor = j.value("episode_cap_factor", cfg.episode_cap_factor);
    cfg.workers = j.value("workers", cfg.workers);
    if (j.contains("wire")) {
      cfg.wire.timeout_sec = j.at("wire").value("timeout_sec", cfg.wire.timeout_sec);
      cfg.wire.retries = j.at("wire").value("retries", cfg.wire.retries);
    }
    cfg.catalog_path = j.value("catalog", "");
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    raise(ErrorCode::parse_error, std::string("bad config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::io_error, "cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    raise(ErrorCode::parse_error, e.what());
  }
  return config_from_json(doc);
}

nlohmann::json canonical_config_json(const PipelineConfig& cfg) {
  json j;
  j["master_seed"] = cfg.master_seed;
  j["mode"] = std::string(to_string(cfg.mode));
  // A conformant remote critic mirrors the oracle, so it canonicalizes to
  // the oracle and the dataset bytes stay comparable across transports.
  json critic;
  critic["kind"] = cfg.critic.kind == CriticKind::noisy ? "noisy" : "oracle";
  critic["alpha"] = cfg.critic.kind == CriticKind::noisy ? cfg.critic.alpha : 0.0;
  critic["beta"] = cfg.critic.kind == CriticKind::noisy ? cfg.critic.beta : 0.0;
  critic["seed_stream"] =
      cfg.critic.kind == CriticKind::noisy ? cfg.critic.seed_stream : uint64_t{0};
  j["critic"] = critic;
  j["instructions"] = cfg.instructions;
  j["failure"] = {{"slip_prob", cfg.failure.slip_prob},
                  {"slip_offset_sigma", cfg.failure.slip_offset_sigma},
                  {"toggle_miss_prob", cfg.failure.toggle_miss_prob},
                  {"press_miss_prob", cfg.failure.press_miss_prob},
                  {"seed_stream", cfg.failure.seed_stream}};
  j["gate"] = {{"trials", cfg.gate_trials}, {"tau", cfg.gate_tau}};
  const WorkspaceBounds& w = cfg.scene.workspace;
  j["scene"] = {{"distractors_min", cfg.scene.distractors_min},
                {"distractors_max", cfg.scene.distractors_max},
                {"raster_scale", cfg.scene.raster_scale},
                {"use_layout_proposal", cfg.scene.use_layout_proposal},
                {"max_place_attempts", cfg.scene.max_place_attempts},
                {"scene_retries", cfg.scene.scene_retries},
                {"workspace",
                 {{"min_x", w.min_x},
                  {"max_x", w.max_x},
                  {"min_y", w.min_y},
                  {"max_y", w.max_y},
                  {"reach_x", w.reach_x},
                  {"reach_y", w.reach_y},
                  {"reach_radius", w.reach_radius}}}};
  j["sim"] = {{"delta_pos", cfg.sim.delta_pos}};
  j["refine"] = {{"lambda", cfg.refine.lambda},
                 {"max_iters", cfg.refine.max_iters},
                 {"step_init", cfg.refine.step_init},
                 {"step_decay", cfg.refine.step_decay}};
  j["abort_policy"] = std::string(to_string(cfg.abort_policy));
  j["episode_target"] = cfg.episode_target;
  j["episode_cap_factor"] = cfg.episode_cap_factor;
  return j;
}

std::string config_sha256(const PipelineConfig& cfg) {
  return sha256_hex(canonical_config_json(cfg).dump());
}

namespace {

std::shared_ptr<const AssetCatalog> catalog_for(const PipelineConfig& cfg) {
  if (cfg.catalog_path.empty()) return default_catalog();
  static std::mutex mutex;
  static std::map<std::string, std::shared_ptr<const AssetCatalog>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(cfg.catalog_path);
  if (it == cache.end()) {
    it = cache
             .emplace(cfg.catalog_path, std::make_shared<const AssetCatalog>(
                                            load_catalog(cfg.catalog_path)))
             .first;
  }
  return it->second;
}

// Clearance dry-run: a scene is admitted only if the plan executes without
// hard errors under a zero-noise failure model (feasible, conflict-free
// instantiation). Zero-noise draws are no-ops, so this never perturbs the
// episode's real substreams.
void require_plan_clearance(const Scene& scene, const Plan& plan,
                            uint64_t episode_seed, const SimParams& params) {
  SimState scratch = make_sim_state(scene);
  const EpisodeStream stream(episode_seed);
  const FailureModel no_noise{};
  for (const Subtask& subtask : plan.subtasks) {
    StepOutcome outcome = execute_primitive(scratch, subtask, no_noise, stream, params);
    if (outcome.hard_error) {
      raise(ErrorCode::placement_exhausted,
            "plan blocked at '" + subtask.text + "' (" +
                std::string(to_string(*outcome.hard_error)) + ")");
    }
    scratch = std::move(outcome.new_state);
  }
}

Scene build_scene(const PipelineConfig& cfg, const GroundResult& grounded,
                  const std::shared_ptr<const AssetCatalog>& catalog,
                  uint64_t episode_seed) {
  for (int retry = 0; retry < cfg.scene.scene_retries; ++retry) {
    // reset_same_scene keeps the retry-0 object set; resample_scene re-draws it
    const uint64_t sample_idx =
        cfg.abort_policy == AbortPolicy::resample_scene ? static_cast<uint64_t>(retry) : 0;
    try {
      InstancePool pool(catalog);
      std::vector<ObjectInstance> instances;
      instances.reserve(grounded.request.slots.size());
      for (const SlotBinding& b : grounded.request.slots) {
        instances.push_back(pool.instantiate(b.class_name, b.instance_id));
      }
      Rng drng(derive_seed(episode_seed, sample_idx, stream_tag::distractors));
      const int span = cfg.scene.distractors_max - cfg.scene.distractors_min;
      const int count =
          cfg.scene.distractors_min +
          (span > 0 ? static_cast<int>(drng.next_u64() % static_cast<uint64_t>(span + 1))
                    : 0);
      for (int i = 0; i < count; ++i) {
        const size_t ci =
            static_cast<size_t>(drng.next_u64() % catalog->classes.size());
        instances.push_back(pool.instantiate_auto(catalog->classes[ci].name));
      }

      Rng srng(derive_seed(episode_seed, static_cast<uint64_t>(retry), stream_tag::scatter));
      Scene scene = scatter_initial(instances, cfg.scene.workspace, srng,
                                    cfg.scene.max_place_attempts);

      if (cfg.scene.use_layout_proposal && !grounded.initial_description.relations.empty()) {
        Rng lrng(derive_seed(episode_seed, static_cast<uint64_t>(retry), stream_tag::layout));
        const PoseMap goal = propose_layout(scene, grounded.initial_description, lrng,
                                            cfg.scene.max_place_attempts);
        RefineConfig rc = cfg.refine;
        rc.seed = derive_seed(episode_seed, static_cast<uint64_t>(retry), stream_tag::refine);
        const RefineResult refined = refine(goal, grounded.initial_description,
                                            scene_shapes(scene), scene.bounds(), rc);
        if (refined.not_collision_free) {
          raise(ErrorCode::placement_exhausted, "refinement left residual collisions");
        }
        scene = apply_poses(scene, refined.poses);
      }
      validate_plan(grounded.plan, scene);
      require_plan_clearance(scene, grounded.plan, episode_seed, cfg.sim);
      return scene;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::placement_exhausted) throw;
    }
  }
  raise(ErrorCode::placement_exhausted,
        "scene synthesis failed after " + std::to_string(cfg.scene.scene_retries) +
            " retries");
}

std::unique_ptr<Critic> make_critic(const PipelineConfig& cfg, uint64_t episode_seed) {
  switch (cfg.critic.kind) {
    case CriticKind::oracle:
      return std::make_unique<OracleCritic>(cfg.sim);
    case CriticKind::noisy:
      return std::make_unique<NoisyCritic>(
          NoisyCriticConfig{cfg.critic.alpha, cfg.critic.beta, cfg.critic.seed_stream},
          episode_seed, cfg.sim);
    case CriticKind::remote:
      return std::make_unique<RemoteCritic>(cfg.critic.endpoint, cfg.wire, cfg.sim);
  }
  raise(ErrorCode::invalid_argument, "unknown critic kind");
}

}  // namespace

EpisodeRun run_episode_full(const PipelineConfig& cfg, uint64_t episode_index) {
  const auto catalog = catalog_for(cfg);
  const uint64_t episode_seed =
      derive_seed(cfg.master_seed, episode_index, stream_tag::episode);

  EpisodeRun run;
  EpisodeResult& result = run.result;
  result.record.episode = episode_index;
  result.record.seed = episode_seed;
  result.record.instruction =
      cfg.instructions[episode_index % cfg.instructions.size()];

  Instruction instruction;
  instruction.text = result.record.instruction;
  const GroundResult grounded = ground(instruction, *catalog);

  Scene scene;
  try {
    scene = build_scene(cfg, grounded, catalog, episode_seed);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::placement_exhausted) {
      result.status = EpisodeStatus::degenerate;
      return run;
    }
    throw;
  }

  Plan plan = grounded.plan;
  if (cfg.planner.kind == PlannerKind::remote) {
    plan = remote_plan(cfg.planner.endpoint, instruction, scene_summary(scene), cfg.wire);
  }
  plan = validate_plan(plan, scene);
  result.record.plan = plan.subtasks;

  const std::unique_ptr<Critic> critic = make_critic(cfg, episode_seed);
  const bool with_raster = cfg.critic.kind == CriticKind::remote;

  SimState state = make_sim_state(std::move(scene));
  const EpisodeStream stream(episode_seed);
  std::vector<Verdict> verdicts;
  std::vector<SimHardError> hard_errors;
  bool unverifiable = false;

  for (size_t i = 0; i < plan.subtasks.size(); ++i) {
    const Subtask& subtask = plan.subtasks[i];
    StepOutcome outcome = execute_primitive(state, subtask, cfg.failure, stream, cfg.sim);

    StepRecord step;
    step.subtask = subtask;
    step.injected_failure = outcome.injected_failure;
    if (outcome.hard_error) {
      step.hard_error = std::string(to_string(*outcome.hard_error));
      step.state_digest = state_digest(state);  // unchanged by contract
      hard_errors.push_back(*outcome.hard_error);
      result.record.steps.push_back(std::move(step));
      break;
    }
    state = std::move(outcome.new_state);
    step.state_digest = state_digest(state);

    if (cfg.mode == AcceptanceMode::vcage) {
      const Snapshot snapshot =
          take_snapshot(state, static_cast<int>(i), with_raster, cfg.scene.raster_scale);
      std::optional<Verdict> verdict;
      for (int attempt = 0; attempt < 2 && !verdict; ++attempt) {
        try {
          verdict = verify_step(*critic, snapshot, subtask);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::transport_error &&
              e.code() != ErrorCode::protocol_error) {
            throw;
          }
        }
      }
      if (!verdict) {
        // Critic unavailable: not a rejection, the episode is unusable.
        result.record.steps.push_back(std::move(step));
        unverifiable = true;
        break;
      }
      verdicts.push_back(*verdict);
      step.verdict = verdict->value;
      result.record.steps.push_back(std::move(step));
      if (verdict->value == 0) {
        result.record.abort_step = static_cast<int>(i);
        break;
      }
    } else {
      result.record.steps.push_back(std::move(step));
    }
  }

  if (unverifiable) {
    result.status = EpisodeStatus::unverifiable;
  } else if (state.degenerate) {
    result.status = EpisodeStatus::degenerate;
  } else {
    result.record.accepted =
        accept_trajectory(verdicts, hard_errors, cfg.mode, plan.subtasks.size());
    result.status =
        result.record.accepted ? EpisodeStatus::accepted : EpisodeStatus::rejected;
  }
  run.final_state = std::move(state);
  return run;
}

EpisodeResult run_episode(const PipelineConfig& cfg, uint64_t episode_index) {
  return run_episode_full(cfg, episode_index).result;
}

namespace {

// Streaming statistics fold; episodes must be folded in index order.
struct StatsAccumulator {
  StatsReport stats;
  std::vector<TrajectoryRecord> accepted;

  void fold(const EpisodeResult& r) {
    ++stats.episodes_run;
    switch (r.status) {
      case EpisodeStatus::accepted:
        ++stats.accepted_count;
        accepted.push_back(r.record);
        break;
      case EpisodeStatus::rejected: ++stats.rejected_count; break;
      case EpisodeStatus::degenerate: ++stats.degenerate_count; break;
      case EpisodeStatus::unverifiable: ++stats.unverifiable_count; break;
    }
    bool any_hard = false;
    bool all_true = r.status != EpisodeStatus::degenerate &&
                    r.record.steps.size() == r.record.plan.size() &&
                    !r.record.plan.empty();
    for (const StepRecord& s : r.record.steps) {
      if (s.hard_error) any_hard = true;
      if (!s.injected_failure || *s.injected_failure) all_true = false;
    }
    if (any_hard) all_true = false;
    stats.hard_error_rate += any_hard ? 1.0 : 0.0;  // normalized in finish()
    stats.all_postcondition_rate += all_true ? 1.0 : 0.0;
    if (r.record.abort_step) {
      const size_t idx = static_cast<size_t>(*r.record.abort_step);
      if (stats.rejection_histogram.size() <= idx) {
        stats.rejection_histogram.resize(idx + 1, 0);
      }
      ++stats.rejection_histogram[idx];
    }
  }

  void finish() {
    if (stats.episodes_run > 0) {
      const double n = static_cast<double>(stats.episodes_run);
      stats.acceptance_rate = static_cast<double>(stats.accepted_count) / n;
      stats.hard_error_rate /= n;
      stats.all_postcondition_rate /= n;
    }
    stats.purity = purity(accepted);
  }
};

}  // namespace

std::optional<double> purity(const std::vector<TrajectoryRecord>& records) {
  uint64_t accepted = 0;
  uint64_t pure = 0;
  for (const TrajectoryRecord& r : records) {
    if (!r.accepted) continue;
    ++accepted;
    bool ok = true;
    for (const StepRecord& s : r.steps) {
      if (!s.injected_failure.has_value()) {
        raise(ErrorCode::missing_annotations,
              "episode " + std::to_string(r.episode) +
                  " lacks ground-truth failure annotations");
      }
      if (*s.injected_failure || s.hard_error) ok = false;
    }
    if (ok) ++pure;
  }
  if (accepted == 0) return std::nullopt;
  return static_cast<double>(pure) / static_cast<double>(accepted);
}

GenerateResult generate_dataset(const PipelineConfig& cfg) {
  cfg.validate();
  const uint64_t cap = cfg.episode_target * cfg.episode_cap_factor;
  const int workers = std::max(1, cfg.workers);
  const uint64_t wave = workers == 1 ? 1 : static_cast<uint64_t>(workers) * 4;

  StatsAccumulator acc;
  bool done = false;
  for (uint64_t base = 0; base < cap && !done; base += wave) {
    const uint64_t count = std::min(wave, cap - base);
    std::vector<EpisodeResult> results(count);
    if (workers == 1) {
      results[0] = run_episode(cfg, base);
    } else {
      std::atomic<uint64_t> next{0};
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (uint64_t k = next.fetch_add(1); k < count; k = next.fetch_add(1)) {
            results[k] = run_episode(cfg, base + k);
          }
        });
      }
      for (std::thread& t : pool) t.join();
    }
    // fold strictly in episode order; overshoot beyond the target is discarded
    for (uint64_t k = 0; k < count; ++k) {
      acc.fold(results[k]);
      if (acc.stats.accepted_count == cfg.episode_target) {
        done = true;
        break;
      }
    }
  }
  acc.finish();
  acc.stats.cap_exceeded = acc.stats.accepted_count < cfg.episode_target;

  GenerateResult out;
  out.stats = acc.stats;
  out.dataset.manifest.schema = "vcage-ds-v1";
  out.dataset.manifest.config = canonical_config_json(cfg);
  out.dataset.manifest.config_sha256 = config_sha256(cfg);
  out.dataset.manifest.master_seed = cfg.master_seed;
  out.dataset.manifest.mode = cfg.mode;
  out.dataset.manifest.counts =
      DatasetCounts{acc.stats.episodes_run, acc.stats.accepted_count,
                    acc.stats.rejected_count, acc.stats.degenerate_count,
                    acc.stats.unverifiable_count};
  out.dataset.records = std::move(acc.accepted);
  return out;
}

CompareResult compare_modes(const PipelineConfig& cfg) {
  cfg.validate();
  if (cfg.critic.kind != CriticKind::oracle) {
    raise(ErrorCode::invalid_argument,
          "compare_modes needs the oracle critic for ground truth");
  }
  PipelineConfig vc = cfg;
  vc.mode = AcceptanceMode::vcage;
  PipelineConfig va = cfg;
  va.mode = AcceptanceMode::vanilla;

  CompareResult out;
  StatsAccumulator acc_vc;
  StatsAccumulator acc_va;
  for (uint64_t i = 0; i < cfg.episode_target; ++i) {
    const EpisodeResult rv = run_episode(vc, i);
    const EpisodeResult rn = run_episode(va, i);
    acc_vc.fold(rv);
    acc_va.fold(rn);
    if (rv.status == EpisodeStatus::accepted) out.vcage_accepted_ids.push_back(i);
    if (rn.status == EpisodeStatus::accepted) out.vanilla_accepted_ids.push_back(i);
  }
  acc_vc.finish();
  acc_va.finish();
  out.vcage = acc_vc.stats;
  out.vanilla = acc_va.stats;
  out.delta_purity = out.vcage.purity.value_or(1.0) - out.vanilla.purity.value_or(1.0);
  out.delta_acceptance = out.vcage.acceptance_rate - out.vanilla.acceptance_rate;
  return out;
}

GateReport gate_template(const PipelineConfig& cfg, const std::string& template_id,
                         int trials) {
  PipelineConfig tcfg = cfg;
  tcfg.instructions = {template_id};
  tcfg.mode = AcceptanceMode::vanilla;  // ground truth is counted directly
  tcfg.critic.kind = CriticKind::oracle;
  tcfg.critic.endpoint.clear();
  // Gate trials draw from their own stream, independent of dataset episodes.
  tcfg.master_seed = derive_seed(cfg.master_seed, 0, stream_tag::gate_trial);
  tcfg.validate();

  const auto run_trial = [tcfg](uint64_t t) -> bool {
    const EpisodeResult r = run_episode(tcfg, t);
    if (r.status == EpisodeStatus::degenerate && r.record.steps.empty()) {
      raise(ErrorCode::placement_exhausted,
            "trial scene synthesis exhausted placements");
    }
    if (r.status == EpisodeStatus::degenerate) return false;
    if (r.record.steps.size() != r.record.plan.size()) return false;
    for (const StepRecord& s : r.record.steps) {
      if (s.hard_error || !s.injected_failure || *s.injected_failure) return false;
    }
    return true;
  };
  return gate_subtask(template_id, run_trial, trials, cfg.gate_tau);
}

}  // namespace vcage

#include <fstream>
#include <sstream>

#include "vcage/digest.hpp"
#include "vcage/pipeline.hpp"
#include "vcage/serde.hpp"

namespace vcage {

using nlohmann::json;

namespace {

json step_to_json(const StepRecord& s) {
  json j;
  j["subtask"] = subtask_to_json(s.subtask);
  j["hard_error"] = s.hard_error ? json(*s.hard_error) : json(nullptr);
  j["injected_failure"] = s.injected_failure ? json(*s.injected_failure) : json(nullptr);
  j["verdict"] = s.verdict ? json(*s.verdict) : json(nullptr);
  j["state_digest"] = s.state_digest;
  return j;
}

StepRecord step_from_json(const json& j) {
  StepRecord s;
  s.subtask = subtask_from_json(j.at("subtask"), ErrorCode::schema_error);
  if (j.contains("hard_error") && !j.at("hard_error").is_null()) {
    s.hard_error = j.at("hard_error").get<std::string>();
  }
  if (j.contains("injected_failure") && !j.at("injected_failure").is_null()) {
    s.injected_failure = j.at("injected_failure").get<bool>();
  }
  if (j.contains("verdict") && !j.at("verdict").is_null()) {
    s.verdict = j.at("verdict").get<int>();
    if (*s.verdict != 0 && *s.verdict != 1) {
      raise(ErrorCode::schema_error, "verdict must be 0 or 1");
    }
  }
  s.state_digest = j.value("state_digest", json::object());
  return s;
}

json record_to_json(const TrajectoryRecord& r) {
  json plan = json::array();
  for (const Subtask& t : r.plan) plan.push_back(subtask_to_json(t));
  json steps = json::array();
  for (const StepRecord& s : r.steps) steps.push_back(step_to_json(s));
  json j;
  j["episode"] = r.episode;
  j["seed"] = r.seed;
  j["instruction"] = r.instruction;
  j["plan"] = plan;
  j["steps"] = steps;
  j["accepted"] = r.accepted;
  j["abort_step"] = r.abort_step ? json(*r.abort_step) : json(nullptr);
  return j;
}

TrajectoryRecord record_from_json(const json& j) {
  TrajectoryRecord r;
  r.episode = j.at("episode").get<uint64_t>();
  r.seed = j.at("seed").get<uint64_t>();
  r.instruction = j.at("instruction").get<std::string>();
  for (const json& t : j.at("plan")) {
    r.plan.push_back(subtask_from_json(t, ErrorCode::schema_error));
  }
  for (const json& s : j.at("steps")) r.steps.push_back(step_from_json(s));
  r.accepted = j.at("accepted").get<bool>();
  if (j.contains("abort_step") && !j.at("abort_step").is_null()) {
    r.abort_step = j.at("abort_step").get<int>();
  }
  return r;
}

json manifest_to_json(const DatasetManifest& m) {
  json j;
  j["schema"] = m.schema;
  j["config_sha256"] = m.config_sha256;
  j["master_seed"] = m.master_seed;
  j["mode"] = std::string(to_string(m.mode));
  j["config"] = m.config;
  j["counts"] = {{"episodes_run", m.counts.episodes_run},
                 {"accepted", m.counts.accepted},
                 {"rejected", m.counts.rejected},
                 {"degenerate", m.counts.degenerate},
                 {"unverifiable", m.counts.unverifiable}};
  return j;
}

DatasetManifest manifest_from_json(const json& j) {
  DatasetManifest m;
  m.schema = j.at("schema").get<std::string>();
  if (m.schema != "vcage-ds-v1") {
    raise(ErrorCode::schema_error, "unsupported dataset schema '" + m.schema + "'");
  }
  m.config_sha256 = j.at("config_sha256").get<std::string>();
  m.master_seed = j.at("master_seed").get<uint64_t>();
  m.mode = acceptance_mode_from_string(j.at("mode").get<std::string>());
  m.config = j.value("config", json::object());
  if (j.contains("counts")) {
    const json& c = j.at("counts");
    m.counts.episodes_run = c.value("episodes_run", uint64_t{0});
    m.counts.accepted = c.value("accepted", uint64_t{0});
    m.counts.rejected = c.value("rejected", uint64_t{0});
    m.counts.degenerate = c.value("degenerate", uint64_t{0});
    m.counts.unverifiable = c.value("unverifiable", uint64_t{0});
  }
  return m;
}

}  // namespace

std::string dataset_to_jsonl(const Dataset& dataset) {
  std::string out = manifest_to_json(dataset.manifest).dump();
  out.push_back('\n');
  for (const TrajectoryRecord& r : dataset.records) {
    out += record_to_json(r).dump();
    out.push_back('\n');
  }
  return out;
}

Dataset dataset_from_jsonl(const std::string& text) {
  Dataset dataset;
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    if (line.empty()) {
      raise(ErrorCode::schema_error, "line " + std::to_string(line_no) + ": empty line");
    }
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error& e) {
      raise(ErrorCode::schema_error,
            "line " + std::to_string(line_no) + ": " + e.what());
    }
    try {
      if (line_no == 0) {
        dataset.manifest = manifest_from_json(doc);
      } else {
        dataset.records.push_back(record_from_json(doc));
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::schema_error) {
        raise(ErrorCode::schema_error,
              "line " + std::to_string(line_no) + ": " + e.what());
      }
      throw;
    } catch (const json::exception& e) {
      raise(ErrorCode::schema_error, "line " + std::to_string(line_no) + ": " + e.what());
    }
    ++line_no;
  }
  if (line_no == 0) raise(ErrorCode::schema_error, "empty dataset file");
  return dataset;
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::io_error, "cannot open '" + path.string() + "' for writing");
  const std::string text = dataset_to_jsonl(dataset);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) raise(ErrorCode::io_error, "short write to '" + path.string() + "'");
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::io_error, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return dataset_from_jsonl(buf.str());
}

nlohmann::json StatsReport::to_json() const {
  json j;
  j["episodes_run"] = episodes_run;
  j["accepted_count"] = accepted_count;
  j["rejected_count"] = rejected_count;
  j["degenerate_count"] = degenerate_count;
  j["unverifiable_count"] = unverifiable_count;
  j["acceptance_rate"] = acceptance_rate;
  j["purity"] = purity ? json(*purity) : json(nullptr);
  j["rejection_histogram"] = rejection_histogram;
  j["hard_error_rate"] = hard_error_rate;
  j["all_postcondition_rate"] = all_postcondition_rate;
  j["cap_exceeded"] = cap_exceeded;
  return j;
}

nlohmann::json CompareResult::to_json() const {
  json j;
  j["vcage"] = vcage.to_json();
  j["vanilla"] = vanilla.to_json();
  j["delta_purity"] = delta_purity;
  j["delta_acceptance"] = delta_acceptance;
  j["vcage_accepted_ids"] = vcage_accepted_ids;
  j["vanilla_accepted_ids"] = vanilla_accepted_ids;
  return j;
}

StatsReport recompute_stats(const Dataset& dataset) {
  // Re-check the stored invariant: every record satisfies its mode's
  // acceptance predicate.
  for (const TrajectoryRecord& r : dataset.records) {
    const std::string where = "episode " + std::to_string(r.episode);
    if (!r.accepted) {
      raise(ErrorCode::validation_error, where + ": unaccepted record in dataset");
    }
    for (const StepRecord& s : r.steps) {
      if (s.hard_error) {
        raise(ErrorCode::validation_error, where + ": accepted record has a hard error");
      }
    }
    if (dataset.manifest.mode == AcceptanceMode::vcage) {
      if (r.steps.size() != r.plan.size()) {
        raise(ErrorCode::validation_error, where + ": incomplete verified trajectory");
      }
      for (const StepRecord& s : r.steps) {
        if (!s.verdict || *s.verdict != 1) {
          raise(ErrorCode::validation_error, where + ": non-1 verdict in vcage record");
        }
      }
    }
  }
  StatsReport stats;
  stats.episodes_run = dataset.manifest.counts.episodes_run;
  stats.accepted_count = dataset.manifest.counts.accepted;
  stats.rejected_count = dataset.manifest.counts.rejected;
  stats.degenerate_count = dataset.manifest.counts.degenerate;
  stats.unverifiable_count = dataset.manifest.counts.unverifiable;
  if (stats.episodes_run > 0) {
    stats.acceptance_rate =
        static_cast<double>(stats.accepted_count) / static_cast<double>(stats.episodes_run);
  }
  stats.purity = purity(dataset.records);
  return stats;
}

EpisodeResult replay_episode(const Dataset& dataset, uint64_t episode_index) {
  const TrajectoryRecord* stored = nullptr;
  for (const TrajectoryRecord& r : dataset.records) {
    if (r.episode == episode_index) stored = &r;
  }
  if (stored == nullptr) {
    raise(ErrorCode::missing_object,
          "episode " + std::to_string(episode_index) + " is not in the dataset");
  }
  PipelineConfig cfg = config_from_json(dataset.manifest.config);
  cfg.mode = dataset.manifest.mode;
  cfg.master_seed = dataset.manifest.master_seed;

  EpisodeResult result = run_episode(cfg, episode_index);
  if (!(result.record == *stored)) {
    raise(ErrorCode::validation_error,
          "episode " + std::to_string(episode_index) +
              " re-simulation does not match the stored record");
  }
  return result;
}

}  // namespace vcage

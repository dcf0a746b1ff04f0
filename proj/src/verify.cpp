#include "vcage/verify.hpp"

namespace vcage {

std::string_view to_string(CriticKind kind) {
  switch (kind) {
    case CriticKind::oracle: return "oracle";
    case CriticKind::noisy: return "noisy";
    case CriticKind::remote: return "remote";
  }
  return "unknown";
}

std::string_view to_string(AcceptanceMode mode) {
  return mode == AcceptanceMode::vcage ? "vcage" : "vanilla";
}

AcceptanceMode acceptance_mode_from_string(std::string_view s) {
  if (s == "vcage") return AcceptanceMode::vcage;
  if (s == "vanilla") return AcceptanceMode::vanilla;
  raise(ErrorCode::parse_error, "unknown acceptance mode '" + std::string(s) + "'");
}

Verdict OracleCritic::verify(const Snapshot& snapshot, const Subtask& subtask) {
  Verdict v;
  v.value = check_postcondition(snapshot.state, subtask, params_) ? 1 : 0;
  v.critic_kind = CriticKind::oracle;
  v.subtask_index = snapshot.subtask_index;
  return v;
}

Verdict NoisyCritic::verify(const Snapshot& snapshot, const Subtask& subtask) {
  const bool truth = check_postcondition(snapshot.state, subtask, params_);
  Rng rng = stream_.fork(static_cast<uint64_t>(snapshot.subtask_index),
                         stream_tag::critic);
  const double u = rng.uniform();
  int value;
  if (truth) {
    value = u < cfg_.beta ? 0 : 1;  // false negative
  } else {
    value = u < cfg_.alpha ? 1 : 0;  // false positive
  }
  Verdict v;
  v.value = value;
  v.critic_kind = CriticKind::noisy;
  v.subtask_index = snapshot.subtask_index;
  return v;
}

Verdict verify_step(Critic& critic, const Snapshot& snapshot, const Subtask& subtask) {
  return critic.verify(snapshot, subtask);
}

bool accept_trajectory(const std::vector<Verdict>& verdicts,
                       const std::vector<SimHardError>& hard_errors,
                       AcceptanceMode mode, size_t plan_length) {
  if (!hard_errors.empty()) return false;
  if (mode == AcceptanceMode::vanilla) return true;
  if (verdicts.size() != plan_length) return false;  // aborted before the end
  for (const Verdict& v : verdicts) {
    if (v.value != 1) return false;
  }
  return true;
}

GateReport gate_subtask(const std::string& template_id,
                        const std::function<bool(uint64_t)>& run_trial, int trials,
                        double tau) {
  if (trials < 1) raise(ErrorCode::invalid_argument, "gate needs at least one trial");
  GateReport report;
  report.template_id = template_id;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    bool ok;
    try {
      ok = run_trial(static_cast<uint64_t>(t));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::placement_exhausted) {
        raise(ErrorCode::gate_error,
              "trial " + std::to_string(t) + " could not sample a scene: " + e.what());
      }
      throw;
    }
    if (ok) ++report.successes;
  }
  report.sr = static_cast<double>(report.successes) / trials;
  report.accept = tau == 0.5 ? report.successes * 2 > report.trials
                             : report.sr > tau;
  return report;
}

}  // namespace vcage

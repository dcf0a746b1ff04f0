#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vcage/sim.hpp"

namespace vcage {

enum class CriticKind { oracle, noisy, remote };

std::string_view to_string(CriticKind kind);

struct Verdict {
  int value = 0;  // 0 or 1
  CriticKind critic_kind = CriticKind::oracle;
  int subtask_index = 0;
  std::optional<double> latency_sec;
};

// Imperfect-critic model: alpha = P(verdict 1 | true failure),
// beta = P(verdict 0 | true success). Flips draw from the episode's
// critic-tagged substream, so critic noise never perturbs simulator draws.
struct NoisyCriticConfig {
  double alpha = 0.0;
  double beta = 0.0;
  uint64_t seed_stream = 0;
};

// Verification function over the post-execution snapshot; one critic
// instance per episode.
class Critic {
 public:
  virtual ~Critic() = default;
  virtual CriticKind kind() const = 0;
  // May throw TransportError/ProtocolError (remote critics only); a thrown
  // error is not a verdict.
  virtual Verdict verify(const Snapshot& snapshot, const Subtask& subtask) = 0;
};

// Ground truth: evaluates the simulator postcondition on the snapshot state.
class OracleCritic final : public Critic {
 public:
  explicit OracleCritic(const SimParams& params = {}) : params_(params) {}
  CriticKind kind() const override { return CriticKind::oracle; }
  Verdict verify(const Snapshot& snapshot, const Subtask& subtask) override;

 private:
  SimParams params_;
};

// Oracle with seeded verdict flips at the configured rates.
class NoisyCritic final : public Critic {
 public:
  NoisyCritic(const NoisyCriticConfig& cfg, uint64_t episode_seed,
              const SimParams& params = {})
      : cfg_(cfg), stream_(episode_seed ^ (cfg.seed_stream * 0x9e3779b97f4a7c15ULL)),
        params_(params) {}
  CriticKind kind() const override { return CriticKind::noisy; }
  Verdict verify(const Snapshot& snapshot, const Subtask& subtask) override;

 private:
  NoisyCriticConfig cfg_;
  EpisodeStream stream_;
  SimParams params_;
};

Verdict verify_step(Critic& critic, const Snapshot& snapshot, const Subtask& subtask);

enum class AcceptanceMode { vcage, vanilla };

std::string_view to_string(AcceptanceMode mode);
AcceptanceMode acceptance_mode_from_string(std::string_view s);

// Trajectory admission. vcage: no hard errors and all plan_length verdicts
// are 1 (the product rule; any 0 dominates). vanilla: no hard errors,
// verdicts ignored.
bool accept_trajectory(const std::vector<Verdict>& verdicts,
                       const std::vector<SimHardError>& hard_errors,
                       AcceptanceMode mode, size_t plan_length);

struct GateReport {
  std::string template_id;
  int trials = 0;
  int successes = 0;
  double sr = 0.0;
  bool accept = false;  // strict: sr > tau; integer form at the default tau
};

// Empirical robustness gate: run_trial(t) executes the template on an
// independently sampled scene and reports ground-truth success. Acceptance is
// strict (sr > tau); at the default tau = 0.5 the comparison is integer-exact
// (successes * 2 > trials). Scene exhaustion inside a trial surfaces as
// GateError.
GateReport gate_subtask(const std::string& template_id,
                        const std::function<bool(uint64_t)>& run_trial, int trials,
                        double tau = 0.5);

}  // namespace vcage

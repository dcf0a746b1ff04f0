#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <thread>

#include "vcage/grounding.hpp"
#include "vcage/verify.hpp"

namespace vcage {

// Critic backed by the /verify wire protocol:
//   POST /verify {image_pgm_b64, meta:{scale, origin}, subtask_text}
//   -> {verdict: 0|1, confidence: number}
// Transport failures (connect/timeout) retry up to options.retries more
// times, then raise TransportError; non-200 responses and bodies without a
// "verdict" raise ProtocolError. The snapshot must carry a raster.
class RemoteCritic final : public Critic {
 public:
  RemoteCritic(std::string endpoint, const WireOptions& options = {},
               const SimParams& params = {});

  CriticKind kind() const override { return CriticKind::remote; }
  Verdict verify(const Snapshot& snapshot, const Subtask& subtask) override;

 private:
  std::string endpoint_;
  WireOptions options_;
  SimParams params_;
};

// Bundled /verify server backed by the simulator oracle. The request image
// carries a machine-readable context comment (state + subtask), which the
// handler evaluates with check_postcondition, so verdicts match the in-process
// oracle bit for bit.
class MockCriticServer {
 public:
  explicit MockCriticServer(const SimParams& params = {});
  ~MockCriticServer();

  MockCriticServer(const MockCriticServer&) = delete;
  MockCriticServer& operator=(const MockCriticServer&) = delete;

  // Binds and serves on a background thread; port 0 picks a free port.
  // Returns the bound port.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  void stop();
  std::string url() const;
  int port() const { return port_; }

  // Foreground serve for the CLI; returns only on failure or stop().
  bool run_blocking(const std::string& host, int port);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::string host_;
  int port_ = 0;
  std::thread thread_;
};

// Bundled /plan server backed by the rule-engine grounding over the default
// catalog; echoes schema v1 plans.
class MockPlannerServer {
 public:
  MockPlannerServer();
  ~MockPlannerServer();

  MockPlannerServer(const MockPlannerServer&) = delete;
  MockPlannerServer& operator=(const MockPlannerServer&) = delete;

  int start(const std::string& host = "127.0.0.1", int port = 0);
  void stop();
  std::string url() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::string host_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace vcage

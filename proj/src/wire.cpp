#include "vcage/wire.hpp"

#include <chrono>
#include <cmath>

#include "httplib.h"
#include "json.hpp"
#include "vcage/digest.hpp"
#include "vcage/serde.hpp"

namespace vcage {

using nlohmann::json;

namespace {

constexpr const char* kContextPrefix = "vcage ";

httplib::Client make_client(const std::string& endpoint, const WireOptions& options) {
  httplib::Client client(endpoint);
  const auto timeout = std::chrono::duration<double>(options.timeout_sec);
  const auto sec = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  const auto usec =
      std::chrono::duration_cast<std::chrono::microseconds>(timeout - sec);
  client.set_connection_timeout(sec.count(), usec.count());
  client.set_read_timeout(sec.count(), usec.count());
  client.set_write_timeout(sec.count(), usec.count());
  return client;
}

// POST with transport retries; returns the response on any HTTP status.
httplib::Result post_with_retries(const std::string& endpoint, const std::string& path,
                                  const std::string& body, const WireOptions& options) {
  const int attempts = options.retries + 1;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    httplib::Client client = make_client(endpoint, options);
    httplib::Result res = client.Post(path, body, "application/json");
    if (res) return res;
    if (attempt + 1 == attempts) {
      raise(ErrorCode::transport_error,
            path + " unreachable after " + std::to_string(attempts) + " attempts (" +
                httplib::to_string(res.error()) + ")");
    }
  }
  raise(ErrorCode::transport_error, "unreachable");
}

// Extract the "# vcage {...}" context comment from a PGM header.
std::string pgm_context(const std::string& pgm) {
  if (pgm.rfind("P5\n", 0) != 0) {
    raise(ErrorCode::protocol_error, "payload is not a binary PGM");
  }
  size_t pos = 3;
  while (pos < pgm.size() && pgm[pos] == '#') {
    const size_t eol = pgm.find('\n', pos);
    if (eol == std::string::npos) break;
    std::string comment = pgm.substr(pos + 1, eol - pos - 1);
    if (!comment.empty() && comment.front() == ' ') comment.erase(0, 1);
    if (comment.rfind(kContextPrefix, 0) == 0) {
      return comment.substr(std::string(kContextPrefix).size());
    }
    pos = eol + 1;
  }
  raise(ErrorCode::protocol_error, "PGM carries no context comment");
}

}  // namespace

RemoteCritic::RemoteCritic(std::string endpoint, const WireOptions& options,
                           const SimParams& params)
    : endpoint_(std::move(endpoint)), options_(options), params_(params) {}

Verdict RemoteCritic::verify(const Snapshot& snapshot, const Subtask& subtask) {
  if (!snapshot.raster) {
    raise(ErrorCode::invalid_argument, "remote critic needs a snapshot raster");
  }
  json context;
  context["state"] = wire_state(snapshot.state);
  context["subtask"] = subtask_to_json(subtask);
  context["delta_pos"] = params_.delta_pos;
  const std::string pgm =
      encode_pgm(*snapshot.raster, kContextPrefix + context.dump());

  json body;
  body["image_pgm_b64"] = base64_encode(pgm);
  body["meta"] = {{"scale", snapshot.raster->scale},
                  {"origin", {snapshot.raster->origin_x, snapshot.raster->origin_y}}};
  body["subtask_text"] = subtask.text;

  const auto start = std::chrono::steady_clock::now();
  httplib::Result res = post_with_retries(endpoint_, "/verify", body.dump(), options_);
  const auto elapsed = std::chrono::duration<double>(
      std::chrono::steady_clock::now() - start);

  if (res->status != 200) {
    raise(ErrorCode::protocol_error,
          "/verify returned HTTP " + std::to_string(res->status));
  }
  json reply;
  try {
    reply = json::parse(res->body);
  } catch (const json::parse_error& e) {
    raise(ErrorCode::protocol_error, std::string("/verify body unparsable: ") + e.what());
  }
  if (!reply.contains("verdict") || !reply["verdict"].is_number_integer()) {
    raise(ErrorCode::protocol_error, "/verify reply is missing a verdict");
  }
  const int value = reply["verdict"].get<int>();
  if (value != 0 && value != 1) {
    raise(ErrorCode::protocol_error, "verdict must be 0 or 1");
  }
  Verdict v;
  v.value = value;
  v.critic_kind = CriticKind::remote;
  v.subtask_index = snapshot.subtask_index;
  v.latency_sec = elapsed.count();
  return v;
}

struct MockCriticServer::Impl {
  httplib::Server server;
  SimParams params;
};

MockCriticServer::MockCriticServer(const SimParams& params)
    : impl_(std::make_unique<Impl>()) {
  impl_->params = params;
  impl_->server.Post("/verify", [this](const httplib::Request& req,
                                       httplib::Response& res) {
    try {
      const json body = json::parse(req.body);
      const std::string pgm = base64_decode(body.at("image_pgm_b64").get<std::string>());
      const json context = json::parse(pgm_context(pgm));
      const SimState state = state_from_wire(context.at("state"));
      const Subtask subtask =
          subtask_from_json(context.at("subtask"), ErrorCode::protocol_error);
      SimParams params = impl_->params;
      params.delta_pos = context.value("delta_pos", params.delta_pos);
      const int verdict = check_postcondition(state, subtask, params) ? 1 : 0;
      res.set_content(json{{"verdict", verdict}, {"confidence", 1.0}}.dump(),
                      "application/json");
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(json{{"error", "bad_request"}, {"message", e.what()}}.dump(),
                      "application/json");
    }
  });
}

MockCriticServer::~MockCriticServer() { stop(); }

int MockCriticServer::start(const std::string& host, int port) {
  host_ = host;
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port(host);
  } else {
    if (!impl_->server.bind_to_port(host, port)) {
      raise(ErrorCode::io_error, "cannot bind to port " + std::to_string(port));
    }
    port_ = port;
  }
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port_;
}

void MockCriticServer::stop() {
  if (thread_.joinable()) {
    impl_->server.stop();
    thread_.join();
  }
}

std::string MockCriticServer::url() const {
  return "http://" + host_ + ":" + std::to_string(port_);
}

bool MockCriticServer::run_blocking(const std::string& host, int port) {
  host_ = host;
  port_ = port;
  return impl_->server.listen(host, port);
}

struct MockPlannerServer::Impl {
  httplib::Server server;
};

MockPlannerServer::MockPlannerServer() : impl_(std::make_unique<Impl>()) {
  impl_->server.Post("/plan", [](const httplib::Request& req, httplib::Response& res) {
    try {
      const json body = json::parse(req.body);
      Instruction instruction;
      instruction.text = body.at("instruction").get<std::string>();
      const GroundResult grounded = ground(instruction, *default_catalog());
      json subtasks = json::array();
      for (const Subtask& t : grounded.plan.subtasks) {
        subtasks.push_back(subtask_to_json(t));
      }
      res.set_content(json{{"schema", "v1"}, {"subtasks", subtasks}}.dump(),
                      "application/json");
    } catch (const std::exception& e) {
      res.status = 422;
      res.set_content(json{{"error", "unplannable"}, {"message", e.what()}}.dump(),
                      "application/json");
    }
  });
}

MockPlannerServer::~MockPlannerServer() { stop(); }

int MockPlannerServer::start(const std::string& host, int port) {
  host_ = host;
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port(host);
  } else {
    if (!impl_->server.bind_to_port(host, port)) {
      raise(ErrorCode::io_error, "cannot bind to port " + std::to_string(port));
    }
    port_ = port;
  }
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port_;
}

void MockPlannerServer::stop() {
  if (thread_.joinable()) {
    impl_->server.stop();
    thread_.join();
  }
}

std::string MockPlannerServer::url() const {
  return "http://" + host_ + ":" + std::to_string(port_);
}

// Planner wire client (declared in grounding.hpp): POST /plan
// {instruction, scene} -> {schema:"v1", subtasks:[...]}.
Plan remote_plan(const std::string& endpoint, const Instruction& instruction,
                 const std::string& scene_summary, const WireOptions& options) {
  json body;
  body["instruction"] = instruction.text;
  body["scene"] = scene_summary;
  httplib::Result res = post_with_retries(endpoint, "/plan", body.dump(), options);
  if (res->status != 200) {
    raise(ErrorCode::transport_error,
          "/plan returned HTTP " + std::to_string(res->status));
  }
  json reply;
  try {
    reply = json::parse(res->body);
  } catch (const json::parse_error& e) {
    raise(ErrorCode::protocol_error, std::string("/plan body unparsable: ") + e.what());
  }
  if (reply.value("schema", "") != "v1") {
    raise(ErrorCode::protocol_error, "/plan reply does not declare schema v1");
  }
  if (!reply.contains("subtasks") || !reply["subtasks"].is_array() ||
      reply["subtasks"].empty()) {
    raise(ErrorCode::protocol_error, "/plan reply has no subtasks");
  }
  Plan plan;
  plan.source = PlanSource::remote;
  for (const json& jt : reply["subtasks"]) {
    plan.subtasks.push_back(subtask_from_json(jt, ErrorCode::protocol_error));
  }
  return plan;
}

}  // namespace vcage

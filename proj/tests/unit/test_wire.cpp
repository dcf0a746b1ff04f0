#include "doctest.h"
#include "httplib.h"
#include "vcage/pipeline.hpp"
#include "vcage/serde.hpp"
#include "vcage/wire.hpp"

using namespace vcage;

namespace {

WireOptions fast_wire() {
  WireOptions w;
  w.timeout_sec = 5.0;
  w.retries = 2;
  return w;
}

// Tiny configurable server for protocol-error cases.
class CannedServer {
 public:
  CannedServer(int status, std::string body) {
    server_.Post(".*", [status, body = std::move(body)](const httplib::Request&,
                                                        httplib::Response& res) {
      res.status = status;
      res.set_content(body, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~CannedServer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  httplib::Server server_;
  int port_;
  std::thread thread_;
};

}  // namespace

TEST_CASE("remote_plan round-trips through the mock planner") {
  MockPlannerServer planner;
  planner.start();

  Instruction instr;
  instr.text = "place_mouse_pad";
  const Plan remote = remote_plan(planner.url(), instr, "scene", fast_wire());
  CHECK(remote.source == PlanSource::remote);

  const Plan local = ground(instr, *default_catalog()).plan;
  REQUIRE(remote.subtasks.size() == local.subtasks.size());
  for (size_t i = 0; i < remote.subtasks.size(); ++i) {
    CHECK(remote.subtasks[i] == local.subtasks[i]);
  }
}

TEST_CASE("planner protocol errors are typed") {
  Instruction instr;
  instr.text = "place_mouse_pad";

  SUBCASE("malformed body -> ProtocolError") {
    CannedServer garbage(200, "not json at all");
    try {
      remote_plan(garbage.url(), instr, "scene", fast_wire());
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::protocol_error);
    }
  }

  SUBCASE("missing schema field -> ProtocolError") {
    CannedServer no_schema(200, R"({"subtasks": []})");
    CHECK_THROWS_AS(remote_plan(no_schema.url(), instr, "scene", fast_wire()), Error);
  }

  SUBCASE("non-200 -> TransportError") {
    CannedServer err(500, "{}");
    try {
      remote_plan(err.url(), instr, "scene", fast_wire());
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::transport_error);
    }
  }

  SUBCASE("unreachable endpoint -> TransportError after retries") {
    WireOptions w;
    w.timeout_sec = 1.0;
    w.retries = 2;
    try {
      remote_plan("http://127.0.0.1:9", instr, "scene", w);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::transport_error);
      CHECK(std::string(e.what()).find("3 attempts") != std::string::npos);
    }
  }
}

TEST_CASE("remote critic equals the in-process oracle verdict for verdict") {
  MockCriticServer server;
  server.start();
  RemoteCritic remote(server.url(), fast_wire());
  OracleCritic oracle;

  InstancePool pool(default_catalog());
  Scene scene(WorkspaceBounds{});
  scene.place(pool.instantiate("desk_lamp", "lamp_0"), Pose{0, 0, 0, 0});
  scene.place(pool.instantiate("cup", "cup_0"), Pose{0.3, 0.1, 0.2, 0});
  SimState s0 = make_sim_state(std::move(scene));

  Subtask toggle;
  toggle.primitive = Primitive::toggle;
  toggle.object = "lamp_0";
  toggle.text = "toggle lamp_0";

  for (double miss : {0.0, 1.0}) {
    FailureModel fm;
    fm.toggle_miss_prob = miss;
    const SimState s1 = execute_primitive(s0, toggle, fm, EpisodeStream{5}).new_state;
    const Snapshot snap = take_snapshot(s1, 0, /*with_raster=*/true, 0.005);
    const Verdict vr = remote.verify(snap, toggle);
    const Verdict vo = oracle.verify(snap, toggle);
    CHECK(vr.value == vo.value);
    CHECK(vr.critic_kind == CriticKind::remote);
    CHECK(vr.latency_sec.has_value());
  }

  SUBCASE("snapshot without a raster is rejected") {
    const Snapshot bare = take_snapshot(s0, 0, /*with_raster=*/false, 0.005);
    CHECK_THROWS_AS(remote.verify(bare, toggle), Error);
  }

  SUBCASE("missing verdict -> ProtocolError") {
    CannedServer bad(200, R"({"confidence": 1.0})");
    RemoteCritic broken(bad.url(), fast_wire());
    const SimState s1 = execute_primitive(s0, toggle, FailureModel{}, EpisodeStream{5})
                            .new_state;
    const Snapshot snap = take_snapshot(s1, 0, true, 0.005);
    try {
      broken.verify(snap, toggle);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::protocol_error);
    }
  }
}

TEST_CASE("remote-critic episodes match oracle episodes record for record") {
  MockCriticServer server;
  server.start();

  PipelineConfig oracle_cfg;
  oracle_cfg.master_seed = 31;
  oracle_cfg.instructions = {"place_empty_cup"};
  oracle_cfg.failure.slip_prob = 0.3;
  oracle_cfg.scene.distractors_min = 0;
  oracle_cfg.scene.distractors_max = 1;

  PipelineConfig remote_cfg = oracle_cfg;
  remote_cfg.critic.kind = CriticKind::remote;
  remote_cfg.critic.endpoint = server.url();
  remote_cfg.wire = fast_wire();

  for (uint64_t i = 0; i < 12; ++i) {
    const EpisodeResult a = run_episode(oracle_cfg, i);
    const EpisodeResult b = run_episode(remote_cfg, i);
    CHECK(a.status == b.status);
    CHECK(a.record == b.record);
  }
}

TEST_CASE("a dead critic endpoint yields Unverifiable, not a rejection") {
  PipelineConfig cfg;
  cfg.master_seed = 8;
  cfg.instructions = {"place_mouse_pad"};
  cfg.critic.kind = CriticKind::remote;
  cfg.critic.endpoint = "http://127.0.0.1:9";  // discard port, refuses connections
  cfg.wire.timeout_sec = 1.0;
  cfg.wire.retries = 0;
  cfg.scene.distractors_min = 0;
  cfg.scene.distractors_max = 0;

  const EpisodeResult r = run_episode(cfg, 0);
  CHECK(r.status == EpisodeStatus::unverifiable);
  CHECK_FALSE(r.record.accepted);

  cfg.episode_target = 2;
  cfg.episode_cap_factor = 2;
  const GenerateResult g = generate_dataset(cfg);
  CHECK(g.stats.unverifiable_count == g.stats.episodes_run);
  CHECK(g.dataset.records.empty());
  CHECK(!g.stats.purity.has_value());  // unverifiable episodes never enter purity
}

TEST_CASE("remote planner mode reproduces rule-engine datasets") {
  MockPlannerServer planner;
  planner.start();

  PipelineConfig rule_cfg;
  rule_cfg.master_seed = 99;
  rule_cfg.instructions = {"stack_blocks_two"};
  rule_cfg.episode_target = 8;
  rule_cfg.scene.distractors_min = 0;
  rule_cfg.scene.distractors_max = 2;

  PipelineConfig remote_cfg = rule_cfg;
  remote_cfg.planner.kind = PlannerKind::remote;
  remote_cfg.planner.endpoint = planner.url();
  remote_cfg.wire = fast_wire();

  const GenerateResult a = generate_dataset(rule_cfg);
  const GenerateResult b = generate_dataset(remote_cfg);
  CHECK(dataset_to_jsonl(a.dataset) == dataset_to_jsonl(b.dataset));
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"
#include "vcage/digest.hpp"
#include "vcage/pipeline.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

vcage::PipelineConfig config_from_text(const std::string& config_json) {
  return vcage::config_from_json(json::parse(config_json));
}

}  // namespace

PYBIND11_MODULE(_vcage, m) {
  m.doc() = "Deterministic verified tabletop-manipulation dataset engine";

  py::class_<vcage::Pose>(m, "Pose")
      .def(py::init([](double x, double y, double theta, int level) {
             return vcage::make_pose(x, y, theta, level);
           }),
           py::arg("x") = 0.0, py::arg("y") = 0.0, py::arg("theta") = 0.0,
           py::arg("level") = 0)
      .def_readonly("x", &vcage::Pose::x)
      .def_readonly("y", &vcage::Pose::y)
      .def_readonly("theta", &vcage::Pose::theta)
      .def_readonly("level", &vcage::Pose::level)
      .def("__repr__", [](const vcage::Pose& p) {
        return "Pose(x=" + std::to_string(p.x) + ", y=" + std::to_string(p.y) +
               ", theta=" + std::to_string(p.theta) +
               ", level=" + std::to_string(p.level) + ")";
      });

  py::class_<vcage::Footprint>(m, "Footprint")
      .def(py::init([](double half_x, double half_y, double height) {
             vcage::Footprint fp{half_x, half_y, height};
             vcage::validate_footprint(fp, "Footprint");
             return fp;
           }),
           py::arg("half_x"), py::arg("half_y"), py::arg("height") = 0.05)
      .def_readonly("half_x", &vcage::Footprint::half_x)
      .def_readonly("half_y", &vcage::Footprint::half_y)
      .def_readonly("height", &vcage::Footprint::height);

  py::class_<vcage::WorkspaceBounds>(m, "WorkspaceBounds")
      .def(py::init<>())
      .def_readwrite("min_x", &vcage::WorkspaceBounds::min_x)
      .def_readwrite("max_x", &vcage::WorkspaceBounds::max_x)
      .def_readwrite("min_y", &vcage::WorkspaceBounds::min_y)
      .def_readwrite("max_y", &vcage::WorkspaceBounds::max_y)
      .def_readwrite("reach_x", &vcage::WorkspaceBounds::reach_x)
      .def_readwrite("reach_y", &vcage::WorkspaceBounds::reach_y)
      .def_readwrite("reach_radius", &vcage::WorkspaceBounds::reach_radius);

  m.def("normalize_angle", &vcage::normalize_angle, py::arg("theta"));
  m.def("penetration_depth", &vcage::penetration_depth, py::arg("pose_a"),
        py::arg("fp_a"), py::arg("pose_b"), py::arg("fp_b"),
        "Minimum translation distance separating two oriented rectangles");
  m.def("in_workspace", &vcage::in_workspace, py::arg("pose"), py::arg("fp"),
        py::arg("workspace"));

  m.def("default_catalog_json",
        [] { return vcage::default_catalog_text(); });

  m.def(
      "run_episode",
      [](const std::string& config_json, uint64_t index) {
        const vcage::EpisodeResult r =
            vcage::run_episode(config_from_text(config_json), index);
        json out;
        out["status"] = std::string(vcage::to_string(r.status));
        out["accepted"] = r.record.accepted;
        out["episode"] = r.record.episode;
        out["seed"] = r.record.seed;
        out["steps"] = r.record.steps.size();
        return out.dump();
      },
      py::arg("config_json"), py::arg("episode_index"),
      "Run one episode; returns a JSON summary string");

  m.def(
      "generate_dataset",
      [](const std::string& config_json, const std::string& out_path) {
        const vcage::GenerateResult result =
            vcage::generate_dataset(config_from_text(config_json));
        if (!out_path.empty()) vcage::write_dataset(result.dataset, out_path);
        return result.stats.to_json().dump();
      },
      py::arg("config_json"), py::arg("out_path") = std::string(),
      "Generate a dataset (optionally writing JSONL); returns stats JSON");

  m.def(
      "compare_modes",
      [](const std::string& config_json) {
        return vcage::compare_modes(config_from_text(config_json)).to_json().dump();
      },
      py::arg("config_json"));

  m.def(
      "gate",
      [](const std::string& config_json, const std::string& template_id, int trials) {
        const vcage::GateReport r =
            vcage::gate_template(config_from_text(config_json), template_id, trials);
        json out;
        out["template"] = r.template_id;
        out["trials"] = r.trials;
        out["successes"] = r.successes;
        out["sr"] = r.sr;
        out["status"] = r.accept ? "Accept" : "Reject";
        return out.dump();
      },
      py::arg("config_json"), py::arg("template_id"), py::arg("trials") = 10);

  m.def(
      "dataset_stats",
      [](const std::string& path) {
        return vcage::recompute_stats(vcage::read_dataset(path)).to_json().dump();
      },
      py::arg("path"));

  m.def("sha256_hex",
        [](const std::string& data) { return vcage::sha256_hex(data); });

  py::register_exception<vcage::Error>(m, "VcageError");

  m.attr("__version__") = "0.1.0";
}

#include "optisketch/snapshot.hpp"

#include "optisketch/error.hpp"

namespace optisketch {

nlohmann::json to_json(const ProjectionConfig& c) {
  nlohmann::json j = {
      {"input_dim", c.input_dim},
      {"output_dim", c.output_dim},
      {"seed", c.seed},
      {"stream", c.stream},
      {"backend", to_string(c.backend)},
      {"bit_depth", c.bit_depth},
      {"anchor_policy", to_string(c.anchor_policy)},
      {"anchor_dim", c.anchor_dim},
      {"per_column_scale", c.per_column_scale},
      {"quantization", nullptr},
  };
  if (c.quantization) {
    j["quantization"] = {{"levels", c.quantization->levels},
                         {"saturation_value", c.quantization->saturation_value},
                         {"calibration_percentile", c.quantization->calibration_percentile}};
  }
  return j;
}

ProjectionConfig config_from_json(const nlohmann::json& j) {
  try {
    ProjectionConfig c;
    c.input_dim = j.at("input_dim").get<std::size_t>();
    c.output_dim = j.at("output_dim").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.stream = j.at("stream").get<std::uint32_t>();
    c.backend = backend_from_string(j.at("backend").get<std::string>());
    c.bit_depth = j.at("bit_depth").get<int>();
    c.anchor_policy = anchor_policy_from_string(j.at("anchor_policy").get<std::string>());
    c.anchor_dim = j.at("anchor_dim").get<std::size_t>();
    c.per_column_scale = j.at("per_column_scale").get<bool>();
    if (const auto& q = j.at("quantization"); !q.is_null()) {
      ReadoutQuantization rq;
      rq.levels = q.at("levels").get<std::uint32_t>();
      rq.saturation_value = q.at("saturation_value").get<double>();
      rq.calibration_percentile = q.at("calibration_percentile").get<double>();
      c.quantization = rq;
    }
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed projector snapshot: ") + e.what());
  }
}

nlohmann::json snapshot(const Projector& projector) {
  return {{"format", "optisketch-projector"}, {"version", kSnapshotVersion}, {"config", to_json(projector.config())}};
}

Projector restore(const nlohmann::json& s) {
  if (!s.is_object() || s.value("format", "") != "optisketch-projector")
    throw ConfigError("not an optisketch projector snapshot");
  const int version = s.value("version", 0);
  if (version != kSnapshotVersion) throw ConfigError("unsupported snapshot version " + std::to_string(version));
  return build_projector(config_from_json(s.at("config")));
}

}  // namespace optisketch

// Copyright 2026 The pttc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pttc/io.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "pttc/errors.hpp"

namespace pttc::io {

namespace {

using nlohmann::json;

double parse_double(std::string_view text, const std::string& context) {
  double value = 0.0;
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(context + ": cannot parse number '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

void check_member(const json& j, const char* key, const std::string& context) {
  if (!j.contains(key)) {
    throw ParseError(context + ": missing field '" + key + "'");
  }
}

json reaction_to_json(const Reaction& reaction) {
  json j;
  if (const auto* brake = std::get_if<BrakeReaction>(&reaction)) {
    j["type"] = "brake";
    j["decel"] = brake->decel;
  } else {
    const auto& swerve = std::get<SwerveReaction>(reaction);
    j["type"] = "swerve";
    j["lateral_speed"] = swerve.lateral_speed;
    j["clearance"] = swerve.clearance;
  }
  return j;
}

Reaction reaction_from_json(const json& j) {
  check_member(j, "type", "reaction");
  const std::string type = j.at("type").get<std::string>();
  if (type == "brake") {
    BrakeReaction brake;
    brake.decel = j.value("decel", brake.decel);
    return brake;
  }
  if (type == "swerve") {
    SwerveReaction swerve;
    swerve.lateral_speed = j.value("lateral_speed", swerve.lateral_speed);
    swerve.clearance = j.value("clearance", swerve.clearance);
    return swerve;
  }
  throw ParseError("unknown reaction type '" + type + "'");
}

}  // namespace

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    if (!out) throw IoError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::map<std::string, Trajectory> read_trajectory_csv(
    const std::filesystem::path& path, std::vector<std::string>* warnings) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,agent_id,x,y") {
    throw ParseError(path.string() + ": expected header 't,agent_id,x,y', got '" + line + "'");
  }

  std::map<std::string, Trajectory> trajectories;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    const std::string context = path.string() + ":" + std::to_string(row);
    if (fields.size() != 4) throw ParseError(context + ": expected 4 fields");
    const std::string agent_id(fields[1]);
    if (agent_id.empty()) throw ParseError(context + ": empty agent id");
    Trajectory& traj = trajectories[agent_id];
    traj.agent_id = agent_id;
    traj.samples.push_back({parse_double(fields[0], context),
                            parse_double(fields[2], context),
                            parse_double(fields[3], context)});
  }

  for (auto& [id, traj] : trajectories) {
    std::stable_sort(traj.samples.begin(), traj.samples.end(),
                     [](const TrajectorySample& a, const TrajectorySample& b) {
                       return a.t < b.t;
                     });
    try {
      auto traj_warnings = validate(traj);
      if (warnings) {
        warnings->insert(warnings->end(), traj_warnings.begin(), traj_warnings.end());
      }
    } catch (const InvalidTrajectory& e) {
      throw ParseError(path.string() + ": " + e.what());
    }
  }
  return trajectories;
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<Trajectory>& trajectories) {
  std::string content = "t,agent_id,x,y\n";
  for (const auto& traj : trajectories) {
    for (const auto& s : traj.samples) {
      content += format_double(s.t);
      content += ',';
      content += traj.agent_id;
      content += ',';
      content += format_double(s.x);
      content += ',';
      content += format_double(s.y);
      content += '\n';
    }
  }
  write_text_atomic(path, content);
}

std::vector<TrialRecord> read_trial_manifest(const std::filesystem::path& path,
                                             std::vector<std::string>* warnings) {
  json manifest;
  try {
    manifest = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  check_member(manifest, "trials", path.string());
  const std::filesystem::path base = path.parent_path();

  std::vector<TrialRecord> trials;
  for (const auto& entry : manifest.at("trials")) {
    const std::string context = path.string();
    for (const char* key : {"trial_id", "kind", "rider", "pedestrian", "trajectories"}) {
      check_member(entry, key, context);
    }
    TrialRecord trial;
    trial.trial_id = entry.at("trial_id").get<std::string>();
    trial.kind = trial_kind_from_string(entry.at("kind").get<std::string>());
    const std::string rider_id = entry.at("rider").get<std::string>();
    const std::string pedestrian_id = entry.at("pedestrian").get<std::string>();

    std::map<std::string, Trajectory> trajectories;
    for (const auto& file : entry.at("trajectories")) {
      auto loaded = read_trajectory_csv(base / file.get<std::string>(), warnings);
      trajectories.merge(loaded);
    }
    const auto rider_it = trajectories.find(rider_id);
    const auto ped_it = trajectories.find(pedestrian_id);
    if (rider_it == trajectories.end() || ped_it == trajectories.end()) {
      throw ParseError(context + ": trial '" + trial.trial_id +
                       "' references agents missing from its trajectory files");
    }
    trial.rider = rider_it->second;
    trial.pedestrian = ped_it->second;

    if (entry.contains("discomfort")) {
      for (const auto& [role_name, level] : entry.at("discomfort").items()) {
        const Role role = role_name == "rider" ? Role::Rider : Role::Pedestrian;
        if (role_name != "rider" && role_name != "pedestrian") {
          throw ParseError(context + ": unknown discomfort role '" + role_name + "'");
        }
        const int value = level.get<int>();
        if (value < 0 || value > 6) {
          throw ParseError(context + ": discomfort " + std::to_string(value) +
                           " outside 0..6 in trial '" + trial.trial_id + "'");
        }
        trial.reported_discomfort[role] = value;
      }
    }
    trials.push_back(std::move(trial));
  }
  return trials;
}

void write_trial_set(const std::filesystem::path& dir,
                     const std::vector<TrialRecord>& trials) {
  std::filesystem::create_directories(dir);
  json manifest;
  manifest["trials"] = json::array();
  for (const auto& trial : trials) {
    const std::string csv_name = trial.trial_id + ".csv";
    write_trajectory_csv(dir / csv_name, {trial.rider, trial.pedestrian});

    json entry;
    entry["trial_id"] = trial.trial_id;
    entry["kind"] = to_string(trial.kind);
    entry["rider"] = trial.rider.agent_id;
    entry["pedestrian"] = trial.pedestrian.agent_id;
    entry["trajectories"] = json::array({csv_name});
    if (!trial.reported_discomfort.empty()) {
      json discomfort;
      for (const auto& [role, level] : trial.reported_discomfort) {
        discomfort[to_string(role)] = level;
      }
      entry["discomfort"] = discomfort;
    }
    manifest["trials"].push_back(entry);
  }
  write_text_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

nlohmann::json model_to_json(const CalibrationModel& model) {
  return json{{"kind", to_string(model.kind)},
              {"a", model.a},
              {"b", model.b},
              {"r2", model.r2},
              {"n", model.n}};
}

CalibrationModel model_from_json(const nlohmann::json& j) {
  for (const char* key : {"kind", "a", "b", "r2", "n"}) {
    check_member(j, key, "calibration model");
  }
  CalibrationModel model;
  model.kind = fit_kind_from_string(j.at("kind").get<std::string>());
  model.a = j.at("a").get<double>();
  model.b = j.at("b").get<double>();
  model.r2 = j.at("r2").get<double>();
  model.n = j.at("n").get<std::size_t>();
  if (!std::isfinite(model.a) || !std::isfinite(model.b) || !std::isfinite(model.r2)) {
    throw ParseError("calibration model constants must be finite");
  }
  return model;
}

void save_model(const std::filesystem::path& path, const CalibrationModel& model) {
  write_text_atomic(path, model_to_json(model).dump(2) + "\n");
}

CalibrationModel load_model(const std::filesystem::path& path) {
  try {
    return model_from_json(json::parse(read_text(path)));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

nlohmann::json box_stats_to_json(const BoxStats& stats) {
  return json{{"n", stats.n},
              {"median", stats.median},
              {"q1", stats.q1},
              {"q3", stats.q3},
              {"whisker_low", stats.whisker_low},
              {"whisker_high", stats.whisker_high},
              {"notch_low", stats.notch_low},
              {"notch_high", stats.notch_high},
              {"outliers", stats.outliers}};
}

AgentUpdate update_from_json(const nlohmann::json& j) {
  for (const char* key : {"agent_id", "t", "position"}) {
    check_member(j, key, "agent update");
  }
  AgentUpdate update;
  update.agent_id = j.at("agent_id").get<std::string>();
  update.t = j.at("t").get<double>();
  update.position = {j.at("position").at("x").get<double>(),
                     j.at("position").at("y").get<double>()};
  if (j.contains("velocity") && !j.at("velocity").is_null()) {
    update.velocity = Vec2{j.at("velocity").at("x").get<double>(),
                           j.at("velocity").at("y").get<double>()};
  }
  return update;
}

nlohmann::json ttc_to_json(const TtcValue& ttc) {
  switch (ttc.kind()) {
    case TtcValue::Kind::Finite:
      return json{{"kind", "finite"}, {"seconds", ttc.seconds()}};
    case TtcValue::Kind::NoApproach:
      return json{{"kind", "no_approach"}};
    case TtcValue::Kind::Coincident:
      return json{{"kind", "coincident"}};
  }
  return json{{"kind", "no_approach"}};
}

nlohmann::json event_to_json(const ComfortEvent& event) {
  return json{{"t", event.t},
              {"pair", json::array({event.pair.first, event.pair.second})},
              {"ttc", ttc_to_json(event.ttc)},
              {"discomfort_raw", event.discomfort_raw},
              {"discomfort_clamped", event.discomfort_clamped},
              {"alert", event.alert}};
}

SimulationSpec simulation_spec_from_json(const nlohmann::json& j) {
  check_member(j, "kind", "scenario spec");
  SimulationSpec spec;
  const TrialKind kind = trial_kind_from_string(j.at("kind").get<std::string>());
  spec.scenario = kind == TrialKind::Facing ? facing_defaults() : passing_defaults();

  ScenarioSpec& s = spec.scenario;
  s.corridor_length = j.value("corridor_length", s.corridor_length);
  s.corridor_width = j.value("corridor_width", s.corridor_width);
  s.rider_speed = j.value("rider_speed", s.rider_speed);
  s.pedestrian_speed = j.value("pedestrian_speed", s.pedestrian_speed);
  s.initial_gap = j.value("initial_gap", s.initial_gap);
  s.lateral_offset = j.value("lateral_offset", s.lateral_offset);
  s.reaction_ttc = j.value("reaction_ttc", s.reaction_ttc);
  s.sample_rate = j.value("sample_rate", s.sample_rate);
  s.seed = j.value("seed", s.seed);
  if (j.contains("reaction")) s.reaction = reaction_from_json(j.at("reaction"));

  spec.sets = j.value("sets", spec.sets);
  if (j.contains("label_model")) {
    const json& lm = j.at("label_model");
    for (const char* key : {"kind", "a", "b"}) check_member(lm, key, "label model");
    LabelModel labels;
    labels.calibration.kind = fit_kind_from_string(lm.at("kind").get<std::string>());
    labels.calibration.a = lm.at("a").get<double>();
    labels.calibration.b = lm.at("b").get<double>();
    labels.calibration.n = lm.value("n", std::size_t{0});
    labels.calibration.r2 = lm.value("r2", 0.0);
    labels.noise_sigma = lm.value("noise_sigma", labels.noise_sigma);
    labels.seed = lm.value("seed", labels.seed);
    spec.labels = labels;
  }
  return spec;
}

SimulationSpec load_simulation_spec(const std::filesystem::path& path) {
  try {
    return simulation_spec_from_json(json::parse(read_text(path)));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

nlohmann::json simulation_spec_to_json(const SimulationSpec& spec) {
  const ScenarioSpec& s = spec.scenario;
  json j{{"kind", to_string(s.kind)},
         {"corridor_length", s.corridor_length},
         {"corridor_width", s.corridor_width},
         {"rider_speed", s.rider_speed},
         {"pedestrian_speed", s.pedestrian_speed},
         {"initial_gap", s.initial_gap},
         {"lateral_offset", s.lateral_offset},
         {"reaction_ttc", s.reaction_ttc},
         {"reaction", reaction_to_json(s.reaction)},
         {"sample_rate", s.sample_rate},
         {"seed", s.seed},
         {"sets", spec.sets}};
  if (spec.labels) {
    json lm = model_to_json(spec.labels->calibration);
    lm["noise_sigma"] = spec.labels->noise_sigma;
    lm["seed"] = spec.labels->seed;
    lm.erase("r2");
    j["label_model"] = lm;
  }
  return j;
}

}  // namespace pttc::io

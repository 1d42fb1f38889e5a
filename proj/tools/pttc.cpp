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

#include <algorithm>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pttc/errors.hpp"
#include "pttc/io.hpp"
#include "pttc/stats.hpp"
#include "pttc/version.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) {
    std::cerr << json{{"warning", w}}.dump() << "\n";
  }
}

void write_run_manifest(const fs::path& path, const std::string& command,
                        const json& inputs, const json& parameters,
                        const std::vector<std::string>& outputs) {
  const json manifest{{"tool", std::string(pttc::kToolName)},
                      {"version", std::string(pttc::kVersion)},
                      {"command", command},
                      {"inputs", inputs},
                      {"parameters", parameters},
                      {"outputs", outputs}};
  pttc::io::write_text_atomic(path, manifest.dump(2) + "\n");
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      std::string known;
      for (const auto& h : header) known += (known.empty() ? "" : ", ") + h;
      throw pttc::ParseError("missing column '" + name + "' (columns: " + known + ")");
    }
    return static_cast<std::size_t>(it - header.begin());
  }
};

CsvTable read_csv(const fs::path& path) {
  std::istringstream in(pttc::io::read_text(path));
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t pos = line.find(',', start);
      if (pos == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, pos - start));
      start = pos + 1;
    }
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      if (fields.size() != table.header.size()) {
        throw pttc::ParseError(path.string() + ": row with " +
                               std::to_string(fields.size()) + " fields, expected " +
                               std::to_string(table.header.size()));
      }
      table.rows.push_back(std::move(fields));
    }
  }
  if (first) throw pttc::ParseError(path.string() + ": empty file");
  return table;
}

double parse_cell(const std::string& text, const std::string& context) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw pttc::ParseError(context + ": cannot parse number '" + text + "'");
  }
}

int run_analyze(const fs::path& trials_path, const fs::path& out_path,
                double smoothing) {
  std::vector<std::string> warnings;
  auto trials = pttc::io::read_trial_manifest(trials_path, &warnings);
  print_warnings(warnings);
  if (trials.empty()) {
    throw pttc::InvalidInput("manifest '" + trials_path.string() + "' lists no trials");
  }
  std::sort(trials.begin(), trials.end(),
            [](const pttc::TrialRecord& a, const pttc::TrialRecord& b) {
              return a.trial_id < b.trial_id;
            });

  std::string csv =
      "trial_id,kind,rider_id,pedestrian_id,min_ttc,min_ttc_time,pass_time,"
      "discomfort_rider,discomfort_pedestrian\n";
  for (const auto& trial : trials) {
    const pttc::TrialAnalysis analysis =
        pttc::analyze_trial(trial, {.smoothing_window = smoothing});
    auto label = [&trial](pttc::Role role) -> std::string {
      const auto it = trial.reported_discomfort.find(role);
      return it == trial.reported_discomfort.end() ? "" : std::to_string(it->second);
    };
    csv += trial.trial_id + ',' + pttc::to_string(trial.kind) + ',' +
           trial.rider.agent_id + ',' + trial.pedestrian.agent_id + ',' +
           pttc::io::format_double(analysis.min_ttc) + ',' +
           pttc::io::format_double(analysis.min_ttc_time) + ',' +
           pttc::io::format_double(analysis.pass_time) + ',' +
           label(pttc::Role::Rider) + ',' + label(pttc::Role::Pedestrian) + '\n';
  }
  pttc::io::write_text_atomic(out_path, csv);
  write_run_manifest(out_path.string() + ".manifest.json", "analyze",
                     json{{"trials", trials_path.string()}},
                     json{{"smoothing_window", smoothing}}, {out_path.string()});
  return 0;
}

int run_fit(const fs::path& data_path, const std::string& model_name,
            const fs::path& out_path, const std::string& label_column) {
  const CsvTable table = read_csv(data_path);
  const std::size_t ttc_col = table.column("min_ttc");

  std::string column = label_column;
  if (column == "rider") column = "discomfort_rider";
  if (column == "pedestrian") column = "discomfort_pedestrian";
  const std::size_t label_col = table.column(column);

  std::vector<pttc::ObservationPoint> points;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row[label_col].empty()) continue;  // trial without a report
    const std::string context = data_path.string() + ":" + std::to_string(r + 2);
    points.push_back({parse_cell(row[ttc_col], context),
                      parse_cell(row[label_col], context)});
  }

  const pttc::CalibrationModel model =
      pttc::fit(points, pttc::fit_kind_from_string(model_name));
  pttc::io::save_model(out_path, model);
  write_run_manifest(out_path.string() + ".manifest.json", "fit",
                     json{{"data", data_path.string()}},
                     json{{"model", model_name}, {"label_column", column}},
                     {out_path.string()});
  return 0;
}

int run_estimate(const fs::path& model_path, double ttc) {
  const pttc::CalibrationModel model = pttc::io::load_model(model_path);
  const pttc::DiscomfortEstimate result = pttc::estimate(model, ttc);
  std::cout << json{{"ttc", ttc}, {"raw", result.raw}, {"clamped", result.clamped}}.dump()
            << "\n";
  return 0;
}

int run_stats(const fs::path& data_path, const std::string& group_key,
              const fs::path& out_path, const std::optional<fs::path>& csv_path) {
  const CsvTable table = read_csv(data_path);
  const std::size_t value_col = table.column("min_ttc");
  const std::size_t key_col = table.column(group_key == "rider" ? "rider_id" : "kind");

  std::vector<std::pair<std::string, double>> values;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string context = data_path.string() + ":" + std::to_string(r + 2);
    values.emplace_back(table.rows[r][key_col],
                        parse_cell(table.rows[r][value_col], context));
  }
  if (values.empty()) throw pttc::EmptyInput("'" + data_path.string() + "' has no rows");

  const auto groups = pttc::group_by(values);
  json out{{"group_by", group_key}, {"groups", json::object()}};
  for (const auto& [key, stats] : groups) {
    out["groups"][key] = pttc::io::box_stats_to_json(stats);
  }
  pttc::io::write_text_atomic(out_path, out.dump(2) + "\n");

  std::vector<std::string> outputs{out_path.string()};
  if (csv_path) {
    std::string csv =
        "group,n,median,q1,q3,whisker_low,whisker_high,notch_low,notch_high,outliers\n";
    for (const auto& [key, stats] : groups) {
      std::string outliers;
      for (double v : stats.outliers) {
        outliers += (outliers.empty() ? "" : " ") + pttc::io::format_double(v);
      }
      csv += key + ',' + std::to_string(stats.n) + ',' +
             pttc::io::format_double(stats.median) + ',' +
             pttc::io::format_double(stats.q1) + ',' +
             pttc::io::format_double(stats.q3) + ',' +
             pttc::io::format_double(stats.whisker_low) + ',' +
             pttc::io::format_double(stats.whisker_high) + ',' +
             pttc::io::format_double(stats.notch_low) + ',' +
             pttc::io::format_double(stats.notch_high) + ',' + outliers + '\n';
    }
    pttc::io::write_text_atomic(*csv_path, csv);
    outputs.push_back(csv_path->string());
  }
  write_run_manifest(out_path.string() + ".manifest.json", "stats",
                     json{{"data", data_path.string()}},
                     json{{"group_by", group_key}}, outputs);
  return 0;
}

int run_simulate(const fs::path& spec_path, std::size_t count, const fs::path& out_dir) {
  const pttc::io::SimulationSpec spec = pttc::io::load_simulation_spec(spec_path);
  const auto trials =
      pttc::generate_ensemble(spec.scenario, count, spec.sets, spec.labels,
                              pttc::to_string(spec.scenario.kind));
  pttc::io::write_trial_set(out_dir, trials);

  std::vector<std::string> outputs{(out_dir / "manifest.json").string()};
  for (const auto& trial : trials) {
    outputs.push_back((out_dir / (trial.trial_id + ".csv")).string());
  }
  write_run_manifest(out_dir / "run_manifest.json", "simulate",
                     json{{"spec", spec_path.string()}},
                     json{{"n", count}, {"spec", pttc::io::simulation_spec_to_json(spec)}},
                     outputs);
  return 0;
}

int run_stream(const fs::path& model_path, double threshold, double staleness) {
  pttc::StreamConfig config;
  config.model = pttc::io::load_model(model_path);
  config.alert_threshold = threshold;
  config.staleness_window = staleness;
  pttc::StreamEstimator estimator(config);

  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    json parsed;
    try {
      parsed = json::parse(line);
    } catch (const json::parse_error& e) {
      throw pttc::ParseError(std::string("stdin: ") + e.what());
    }
    for (const auto& event : estimator.push_update(pttc::io::update_from_json(parsed))) {
      std::cout << pttc::io::event_to_json(event).dump() << "\n" << std::flush;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"perceived time-to-collision trajectory analytics"};
  app.set_version_flag("--version",
                       std::string(pttc::kToolName) + " " + std::string(pttc::kVersion));
  app.require_subcommand(1);
  std::function<int()> selected;

  // analyze
  auto* analyze = app.add_subcommand(
      "analyze", "Extract minimum perceived TTC and the passing moment per trial");
  {
    auto trials = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto smoothing = std::make_shared<double>(0.25);
    analyze->add_option("--trials", *trials, "trial manifest JSON")->required();
    analyze->add_option("--out", *out, "output CSV path")->required();
    analyze->add_option("--smoothing", *smoothing,
                        "velocity smoothing window, seconds (use 0 for synthetic data)");
    analyze->callback([=, &selected] {
      selected = [=] { return run_analyze(*trials, *out, *smoothing); };
    });
  }

  // fit
  auto* fit = app.add_subcommand("fit", "Fit a discomfort-vs-TTC model");
  {
    auto data = std::make_shared<std::string>();
    auto model = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto label = std::make_shared<std::string>("discomfort");
    fit->add_option("--data", *data, "CSV with min_ttc and a discomfort column")->required();
    fit->add_option("--model", *model, "line|exp|power")->required();
    fit->add_option("--out", *out, "output model JSON")->required();
    fit->add_option("--label", *label,
                    "label column: rider, pedestrian, or a column name");
    fit->callback([=, &selected] {
      selected = [=] { return run_fit(*data, *model, *out, *label); };
    });
  }

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Evaluate a model at a perceived TTC");
  {
    auto model = std::make_shared<std::string>();
    auto ttc = std::make_shared<double>(0.0);
    estimate->add_option("--model", *model, "model JSON path")->required();
    estimate->add_option("--ttc", *ttc, "perceived TTC, seconds")->required();
    estimate->callback([=, &selected] {
      selected = [=] { return run_estimate(*model, *ttc); };
    });
  }

  // stats
  auto* stats = app.add_subcommand("stats", "Grouped box-plot statistics of min TTC");
  {
    auto data = std::make_shared<std::string>();
    auto group = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto csv = std::make_shared<std::string>();
    stats->add_option("--data", *data, "analysis results CSV")->required();
    stats->add_option("--group-by", *group, "kind|rider")
        ->required()
        ->check(CLI::IsMember({"kind", "rider"}));
    stats->add_option("--out", *out, "output JSON path")->required();
    stats->add_option("--csv", *csv, "optional CSV output for plotting tools");
    stats->callback([=, &selected] {
      selected = [=] {
        return run_stats(*data, *group, *out,
                         csv->empty() ? std::nullopt
                                      : std::optional<fs::path>(*csv));
      };
    });
  }

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate synthetic trials");
  {
    auto spec = std::make_shared<std::string>();
    auto count = std::make_shared<std::size_t>(1);
    auto out = std::make_shared<std::string>();
    simulate->add_option("--spec", *spec, "scenario spec JSON")->required();
    simulate->add_option("--n", *count, "number of trials")->required();
    simulate->add_option("--out", *out, "output directory")->required();
    simulate->callback([=, &selected] {
      selected = [=] { return run_simulate(*spec, *count, *out); };
    });
  }

  // stream
  auto* stream = app.add_subcommand(
      "stream", "Line-protocol filter: agent updates in, comfort events out");
  {
    auto model = std::make_shared<std::string>();
    auto threshold = std::make_shared<double>(2.0);
    auto staleness = std::make_shared<double>(0.5);
    stream->add_option("--model", *model, "model JSON path")->required();
    stream->add_option("--threshold", *threshold, "alert threshold in [0,6]")->required();
    stream->add_option("--staleness", *staleness, "staleness window, seconds");
    stream->callback([=, &selected] {
      selected = [=] { return run_stream(*model, *threshold, *staleness); };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return selected();
  } catch (const pttc::Error& e) {
    std::cerr << json{{"error", e.name()}, {"message", e.what()}}.dump() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
}

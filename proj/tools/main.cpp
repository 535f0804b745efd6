// Copyright 2026 The IUTQ Authors
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

#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace
{

using namespace iutq;
using namespace iutq::cli;

struct ConfigFlags
{
  std::string penalty{"rho2"};
  std::optional<double> threshold;
  double decel{4.0};
  double reaction_time{0.0};
  double window{2.0};
  double v_ref{50.0 / 3.6};
  double a_ref{1.5};
  double cell{1.0};
  int workers{0};
  bool include_other{false};
  TimestampMs frame_interval{100};

  void attach(CLI::App & app)
  {
    app.add_option("--penalty", penalty, "IUTQ distance penalty: none, rho1, rho2, rho3")
      ->check(CLI::IsMember({"none", "rho1", "rho2", "rho3"}))
      ->capture_default_str();
    app.add_option("--threshold", threshold, "Override the IUTQ criticality threshold");
    app.add_option("--decel", decel, "Braking deceleration for the braking distance, m/s^2")->capture_default_str();
    app.add_option("--reaction-time", reaction_time, "Reaction time for the braking distance, s")
      ->capture_default_str();
    app.add_option("--window", window, "Acceleration averaging window, s")->capture_default_str();
    app.add_option("--v-ref", v_ref, "Reference speed, m/s")->capture_default_str();
    app.add_option("--a-ref", a_ref, "Reference acceleration, m/s^2")->capture_default_str();
    app.add_option("--cell", cell, "Conflict grid cell size for PET and ET, m")->capture_default_str();
    app.add_option("--workers", workers, "Worker threads (0 = OpenMP default)")->capture_default_str();
    app.add_flag("--include-other", include_other, "Keep agents of unrecognised type");
    app.add_option("--frame-interval", frame_interval, "Frame spacing of the track files, ms")
      ->capture_default_str();
  }

  RunConfig build() const
  {
    RunConfig c;
    c.iutq.penalty = penalty_from_string(penalty);
    c.iutq.decel = decel;
    c.iutq.reaction_time = reaction_time;
    c.iutq.window_s = window;
    c.iutq.v_ref = v_ref;
    c.iutq.a_ref = a_ref;
    c.iutq_threshold = threshold;
    c.surrogate.conflict_cell = cell;
    c.workers = workers;
    c.load.include_other_agents = include_other;
    c.load.frame_interval = frame_interval;
    return c;
  }
};

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"IUTQ criticality scoring and evaluation"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  // score
  auto * score = app.add_subcommand("score", "Score track files with the selected metrics");
  ConfigFlags score_flags;
  score_flags.attach(*score);
  std::vector<std::string> score_inputs;
  std::string score_metrics = "all";
  std::string score_out = "out";
  std::string score_manifest;
  std::string score_labels;
  bool strict = false;
  score->add_option("inputs", score_inputs, "Track files or directories of *.csv track files");
  score->add_option("--metrics", score_metrics, "Comma-separated metric ids or 'all'")->capture_default_str();
  score->add_option("--out", score_out, "Output directory")->capture_default_str();
  score->add_option("--manifest", score_manifest, "Re-run from a manifest.json (other flags ignored)");
  score->add_option("--labels", score_labels, "Label file; also writes report.csv/report.json");
  score->add_flag("--strict", strict, "Stop at the first file error");

  // evaluate
  auto * evaluate = app.add_subcommand("evaluate", "Compare criticality flags with labels");
  std::string eval_scores;
  std::string eval_labels;
  std::string eval_counts;
  std::string eval_out = "out";
  evaluate->add_option("--scores", eval_scores, "Score file written by 'score'");
  evaluate->add_option("--labels", eval_labels, "Label file");
  evaluate->add_option("--counts", eval_counts, "metric_id,tp,tn,fp,fn file instead of scores and labels");
  evaluate->add_option("--out", eval_out, "Output directory")->capture_default_str();

  // timeseries
  auto * timeseries = app.add_subcommand("timeseries", "Per-frame metric curves for one ego or pair");
  ConfigFlags ts_flags;
  ts_flags.attach(*timeseries);
  TimeseriesOptions ts_opts;
  std::string ts_metrics = "dist,wttc,iutq";
  std::string ts_out = "timeseries.csv";
  AgentId adversary = 0;
  timeseries->add_option("input", ts_opts.input, "Track file")->required();
  timeseries->add_option("--ego", ts_opts.ego_id, "Ego agent id")->required();
  auto * adv_opt = timeseries->add_option("--adversary", adversary, "Adversary id for pair values");
  timeseries->add_option("--metrics", ts_metrics, "Comma-separated metric ids")->capture_default_str();
  timeseries->add_option("--out", ts_out, "Output file")->capture_default_str();

  // sweep
  auto * sweep_cmd = app.add_subcommand("sweep", "Threshold or penalty sensitivity table");
  ConfigFlags sweep_flags;
  sweep_flags.attach(*sweep_cmd);
  std::vector<std::string> sweep_inputs;
  std::string sweep_labels;
  std::string sweep_metric = "iutq-co";
  std::string sweep_thresholds;
  std::string sweep_penalties;
  std::string sweep_out = "sweep.csv";
  sweep_cmd->add_option("inputs", sweep_inputs, "Track files or directories")->required();
  sweep_cmd->add_option("--labels", sweep_labels, "Label file")->required();
  sweep_cmd->add_option("--metric", sweep_metric, "Metric id")->capture_default_str();
  sweep_cmd->add_option("--thresholds", sweep_thresholds, "Comma-separated threshold grid");
  sweep_cmd->add_option("--penalties", sweep_penalties, "Comma-separated penalties (none,rho1,rho2,rho3)");
  sweep_cmd->add_option("--out", sweep_out, "Output file")->capture_default_str();

  // synth
  auto * synth_cmd = app.add_subcommand("synth", "Write a synthetic track file");
  SynthOptions synth_opts;
  std::string synth_out = "synthetic.csv";
  bool no_footprints = false;
  synth_cmd->add_option("--kind", synth_opts.kind, "scenario, crossing or passing")->capture_default_str();
  synth_cmd->add_option("--seed", synth_opts.seed)->capture_default_str();
  synth_cmd->add_option("--agents", synth_opts.agents)->capture_default_str();
  synth_cmd->add_option("--frames", synth_opts.frames)->capture_default_str();
  synth_cmd->add_option("--speed-law", synth_opts.speed_law)->capture_default_str();
  synth_cmd->add_option("--spatial-law", synth_opts.spatial_law)->capture_default_str();
  synth_cmd->add_option("--offset", synth_opts.offset_s, "Crossing arrival offset, s")->capture_default_str();
  synth_cmd->add_option("--speed", synth_opts.speed, "Crossing or passing speed, m/s")->capture_default_str();
  synth_cmd->add_option("--lateral", synth_opts.lateral_offset, "Passing lane offset, m")->capture_default_str();
  synth_cmd->add_flag("--bystander", synth_opts.bystander, "Add a standing agent beside the crossing");
  synth_cmd->add_flag("--point-agents", no_footprints, "Write agents without footprints");
  synth_cmd->add_option("--out", synth_out, "Output file")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (score->parsed()) {
      ScoreOptions opts;
      if (!score_manifest.empty()) {
        opts = read_manifest(score_manifest);
      } else {
        opts.inputs = score_inputs;
        opts.config = score_flags.build();
        opts.metrics = parse_metric_list(score_metrics, opts.config.iutq.penalty);
        opts.out_dir = score_out;
        opts.strict = strict;
      }
      const int rc = cmd_score(opts, std::cerr);
      if (rc == kOk && !score_labels.empty()) {
        EvaluateOptions eval;
        eval.scores = opts.out_dir / "scores.csv";
        eval.labels = score_labels;
        eval.out_dir = opts.out_dir;
        return cmd_evaluate(eval, std::cerr);
      }
      return rc;
    }
    if (evaluate->parsed()) {
      EvaluateOptions opts;
      if (!eval_scores.empty()) {
        opts.scores = eval_scores;
      }
      if (!eval_labels.empty()) {
        opts.labels = eval_labels;
      }
      if (!eval_counts.empty()) {
        opts.counts = eval_counts;
      }
      opts.out_dir = eval_out;
      return cmd_evaluate(opts, std::cerr);
    }
    if (timeseries->parsed()) {
      ts_opts.config = ts_flags.build();
      ts_opts.metrics.clear();
      for (const auto & m : parse_metric_list(ts_metrics, ts_opts.config.iutq.penalty)) {
        ts_opts.metrics.push_back(m);
      }
      if (adv_opt->count() > 0) {
        ts_opts.adversary_id = adversary;
      }
      ts_opts.out_file = ts_out;
      return cmd_timeseries(ts_opts, std::cerr);
    }
    if (sweep_cmd->parsed()) {
      SweepOptions opts;
      opts.inputs = sweep_inputs;
      opts.labels = sweep_labels;
      opts.config = sweep_flags.build();
      opts.metric = sweep_metric == "iutq" ? iutq_metric_id(opts.config.iutq.penalty) : sweep_metric;
      if (!sweep_thresholds.empty()) {
        opts.thresholds = parse_number_list(sweep_thresholds);
      }
      if (!sweep_penalties.empty()) {
        opts.penalties = parse_penalty_list(sweep_penalties);
      }
      opts.out_file = sweep_out;
      return cmd_sweep(opts, std::cerr);
    }
    if (synth_cmd->parsed()) {
      synth_opts.footprints = !no_footprints;
      synth_opts.out_file = synth_out;
      return cmd_synth(synth_opts, std::cerr);
    }
  } catch (const UsageError & e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidSpec & e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

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
#include "iutq/synth.hpp"
#include "table_one.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

using namespace iutq;
using namespace iutq::cli;
namespace fs = std::filesystem;

namespace
{

std::string slurp(const fs::path & p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string & text)
{
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    out.push_back(line);
  }
  return out;
}

std::vector<std::string> fields(const std::string & line)
{
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

fs::path small_recording(const fs::path & dir, const std::string & name = "rec_a")
{
  synth::ScenarioSpec spec;
  spec.scene.seed = 42;
  spec.scene.n_agents = 5;
  spec.scene.spatial_law = synth::SpatialLaw::crossing;
  spec.scene.speed_law = synth::SpeedLaw::bimodal;
  spec.n_frames = 20;
  const fs::path p = dir / (name + ".csv");
  synth::write_fixture(p, synth::build_scenario(spec));
  return p;
}

int run_binary(const std::string & args)
{
  const std::string cmd = std::string(IUTQ_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("metric lists")
{
  CHECK(parse_metric_list("all").size() == 11);
  CHECK(parse_metric_list("ttc,iutq-rho2") == std::vector<std::string>{"iutq-rho2", "ttc"});
  CHECK(parse_metric_list("iutq", Penalty::none) == std::vector<std::string>{"iutq-co"});
  CHECK(parse_metric_list("ttc,ttc").size() == 1);
  CHECK_THROWS_AS(parse_metric_list("ttc,foo"), UsageError);
  CHECK_THROWS_AS(parse_metric_list(""), UsageError);
  CHECK(parse_number_list("1, 1.5,2") == std::vector<double>{1.0, 1.5, 2.0});
  CHECK_THROWS_AS(parse_number_list("1,x"), UsageError);
  CHECK(penalty_of("iutq-co") == Penalty::none);
  CHECK(penalty_of("iutq-rho3") == Penalty::rho3);
}

TEST_CASE("score writes one row per agent-frame and metric")
{
  const auto dir = test::scratch_dir("cli_score");
  const auto rec = small_recording(dir);
  ScoreOptions opts;
  opts.inputs = {rec.string()};
  opts.metrics = parse_metric_list("iutq-rho2,ttc");
  opts.out_dir = dir / "out";
  std::ostringstream log;
  REQUIRE(cmd_score(opts, log) == kOk);
  const auto rows = lines(slurp(dir / "out" / "scores.csv"));
  CHECK(rows.front() == kScoreHeader);
  CHECK(rows.size() == 1 + 2 * 5 * 20);
  std::map<std::string, int> per_metric;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = fields(rows[i]);
    REQUIRE(f.size() == 6);
    CHECK(f[0] == "rec_a");
    ++per_metric[f[3]];
  }
  CHECK(per_metric["iutq-rho2"] == 100);
  CHECK(per_metric["ttc"] == 100);
  CHECK(fs::exists(dir / "out" / "manifest.json"));
}

TEST_CASE("all metrics cover the published column set")
{
  const auto dir = test::scratch_dir("cli_all");
  ScoreOptions opts;
  opts.inputs = {small_recording(dir).string()};
  opts.out_dir = dir / "out";
  std::ostringstream log;
  REQUIRE(cmd_score(opts, log) == kOk);
  std::set<std::string> ids;
  for (const ScoreRow & r : read_score_file(dir / "out" / "scores.csv")) {
    ids.insert(r.metric_id);
  }
  CHECK(ids.size() == 11);
  for (const auto & col : test::kPublishedTable) {
    CHECK(ids.count(std::string(col.metric)) == 1);
  }
}

TEST_CASE("empty input directory is an error")
{
  const auto dir = test::scratch_dir("cli_empty");
  fs::create_directories(dir / "in");
  ScoreOptions opts;
  opts.inputs = {(dir / "in").string()};
  opts.out_dir = dir / "out";
  std::ostringstream log;
  CHECK(cmd_score(opts, log) != kOk);
  CHECK(log.str().find("no recordings") != std::string::npos);
  CHECK(run_binary("score " + (dir / "in").string() + " --out " + (dir / "out").string()) == 1);
}

TEST_CASE("file errors are reported and the run continues unless strict")
{
  const auto dir = test::scratch_dir("cli_errors");
  fs::create_directories(dir / "in");
  small_recording(dir / "in", "good");
  std::ofstream(dir / "in" / "bad.csv") << "not,a,track,file\n";
  ScoreOptions opts;
  opts.inputs = {(dir / "in").string()};
  opts.metrics = {"dist"};
  opts.out_dir = dir / "out";
  std::ostringstream log;
  CHECK(cmd_score(opts, log) == kFailure);
  CHECK(log.str().find("bad.csv") != std::string::npos);
  const auto rows = read_score_file(dir / "out" / "scores.csv");
  CHECK(rows.size() == 100);

  opts.strict = true;
  opts.out_dir = dir / "strict";
  std::ostringstream strict_log;
  CHECK(cmd_score(opts, strict_log) == kFailure);
  CHECK_FALSE(fs::exists(dir / "strict" / "scores.csv"));
}

TEST_CASE("a manifest reproduces its run byte for byte")
{
  const auto dir = test::scratch_dir("cli_manifest");
  ScoreOptions opts;
  opts.inputs = {small_recording(dir).string()};
  opts.out_dir = dir / "out";
  opts.config.iutq.decel = 3.0;
  opts.config.surrogate.conflict_cell = 0.5;
  opts.config.iutq_threshold = 0.8;
  std::ostringstream log;
  REQUIRE(cmd_score(opts, log) == kOk);
  const std::string first = slurp(dir / "out" / "scores.csv");

  ScoreOptions again = read_manifest(dir / "out" / "manifest.json");
  CHECK(again.config.iutq.decel == 3.0);
  CHECK(again.config.surrogate.conflict_cell == 0.5);
  CHECK(again.config.iutq_threshold == 0.8);
  fs::remove_all(dir / "out");
  REQUIRE(cmd_score(again, log) == kOk);
  CHECK(slurp(dir / "out" / "scores.csv") == first);
}

TEST_CASE("evaluate a perfect predictor")
{
  const auto dir = test::scratch_dir("cli_eval");
  ScoreOptions opts;
  opts.inputs = {small_recording(dir).string()};
  opts.metrics = {"ttc"};
  opts.out_dir = dir / "out";
  std::ostringstream log;
  REQUIRE(cmd_score(opts, log) == kOk);
  LabelTable labels;
  for (const ScoreRow & r : read_score_file(dir / "out" / "scores.csv")) {
    labels.insert({r.recording_id, r.ego_id, r.timestamp}, r.critical);
  }
  {
    std::ofstream out(dir / "labels.csv");
    write_labels(out, labels);
  }
  EvaluateOptions eval;
  eval.scores = dir / "out" / "scores.csv";
  eval.labels = dir / "labels.csv";
  eval.out_dir = dir / "report";
  REQUIRE(cmd_evaluate(eval, log) == kOk);
  const auto report = lines(slurp(dir / "report" / "report.csv"));
  REQUIRE(report.size() == 15);
  CHECK(report[0] == "statistic,ttc,best,worst");
  CHECK(fields(report[5])[0] == "ACC");
  CHECK(fields(report[5])[1] == "1");
  CHECK(fs::exists(dir / "report" / "report.json"));
}

TEST_CASE("evaluate published counts")
{
  const auto dir = test::scratch_dir("cli_counts");
  {
    std::ofstream out(dir / "counts.csv");
    out << "metric_id,tp,tn,fp,fn\n";
    for (const auto & col : test::kPublishedTable) {
      out << col.metric << ',' << col.counts.tp << ',' << col.counts.tn << ',' << col.counts.fp << ','
          << col.counts.fn << '\n';
    }
  }
  EvaluateOptions eval;
  eval.counts = dir / "counts.csv";
  eval.out_dir = dir / "report";
  std::ostringstream log;
  REQUIRE(cmd_evaluate(eval, log) == kOk);
  const auto report = lines(slurp(dir / "report" / "report.csv"));
  REQUIRE(report.size() == 15);
  const std::vector<std::string> expected_rows{
    "TP", "TN", "FP", "FN", "ACC", "MR", "TPR", "FPR", "TNR", "FNR", "PRE", "CoK", "F1S", "MCC"};
  for (std::size_t r = 0; r < expected_rows.size(); ++r) {
    CHECK(fields(report[r + 1])[0] == expected_rows[r]);
  }
  for (std::size_t c = 0; c < test::kPublishedTable.size(); ++c) {
    for (std::size_t r = 0; r < test::kDerivedRows.size(); ++r) {
      const auto row = fields(report[static_cast<std::size_t>(test::kDerivedRows[r]) + 1]);
      CHECK(std::abs(std::stod(row[c + 1]) - test::kPublishedTable[c].derived[r]) <= 0.001);
    }
  }
}

TEST_CASE("labels for unscored keys are listed")
{
  const auto dir = test::scratch_dir("cli_missing");
  ScoreOptions opts;
  opts.inputs = {small_recording(dir).string()};
  opts.metrics = {"dist"};
  opts.out_dir = dir / "out";
  std::ostringstream log;
  REQUIRE(cmd_score(opts, log) == kOk);
  std::ofstream(dir / "labels.csv") << kLabelHeader << "\nrec_a,1,0,1\nrec_a,77,0,1\n";
  EvaluateOptions eval;
  eval.scores = dir / "out" / "scores.csv";
  eval.labels = dir / "labels.csv";
  eval.out_dir = dir / "report";
  try {
    cmd_evaluate(eval, log);
    FAIL("expected MissingPrediction");
  } catch (const MissingPrediction & e) {
    CHECK(std::string(e.what()).find("rec_a/77@0") != std::string::npos);
  }
}

TEST_CASE("time series of a constructed collision")
{
  const auto dir = test::scratch_dir("cli_ts");
  synth::CrossingSpec spec;
  spec.footprints = true;
  const auto path = dir / "crossing.csv";
  synth::write_fixture(path, synth::build_crossing_scenario(spec));

  TimeseriesOptions opts;
  opts.input = path.string();
  opts.ego_id = synth::kCrossingFirst;
  opts.metrics = {"iutq-rho2", "dist", "wttc"};
  const auto rows = lines(timeseries_text(opts));
  CHECK(rows.front() == "timestamp_ms,iutq-rho2,dist,wttc");
  CHECK(rows.size() == 1 + 61);
  bool both_zero = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = fields(rows[i]);
    if (f[2] == "0" && f[3] == "0") {
      both_zero = true;
    }
  }
  CHECK(both_zero);

  opts.ego_id = 99;
  CHECK_THROWS_AS(timeseries_text(opts), MissingAgent);
}

TEST_CASE("time series of a near miss")
{
  const auto dir = test::scratch_dir("cli_near_miss");
  const auto path = dir / "passing.csv";
  synth::write_fixture(path, synth::build_passing_scenario(10.0, 4.55, 6.0));
  TimeseriesOptions opts;
  opts.input = path.string();
  opts.ego_id = 1;
  opts.adversary_id = 2;
  opts.metrics = {"dist", "wttc"};
  const auto rows = lines(timeseries_text(opts));
  double min_dist = 1e9;
  double min_wttc = 1e9;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = fields(rows[i]);
    min_dist = std::min(min_dist, std::stod(f[1]));
    min_wttc = std::min(min_wttc, std::stod(f[2]));
  }
  CHECK(min_dist == doctest::Approx(2.75));
  CHECK(min_wttc < 0.47);
}

TEST_CASE("threshold and penalty sweeps")
{
  const auto dir = test::scratch_dir("cli_sweep");
  const auto rec = small_recording(dir);
  ScoreOptions score;
  score.inputs = {rec.string()};
  score.metrics = {"ttc"};
  score.out_dir = dir / "out";
  std::ostringstream log;
  REQUIRE(cmd_score(score, log) == kOk);
  LabelTable labels;
  int i = 0;
  for (const ScoreRow & r : read_score_file(dir / "out" / "scores.csv")) {
    labels.insert({r.recording_id, r.ego_id, r.timestamp}, (i++ % 3) == 0);
  }
  {
    std::ofstream out(dir / "labels.csv");
    write_labels(out, labels);
  }

  SweepOptions opts;
  opts.inputs = {rec.string()};
  opts.labels = dir / "labels.csv";
  opts.metric = "iutq-co";
  opts.thresholds = {1.0, 1.5, 2.0};
  const auto rows = sweep(opts);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].counts.fp >= rows[1].counts.fp);
  CHECK(rows[1].counts.fp >= rows[2].counts.fp);
  CHECK(lines(sweep_csv(rows)).size() == 4);

  opts.thresholds.clear();
  opts.penalties = {Penalty::rho1, Penalty::rho2, Penalty::rho3};
  const auto by_penalty = sweep(opts);
  REQUIRE(by_penalty.size() == 3);
  CHECK(by_penalty[1].metric_id == "iutq-rho2");

  opts.penalties.clear();
  CHECK_THROWS_AS(sweep(opts), UsageError);
  CHECK(run_binary("sweep " + rec.string() + " --labels " + (dir / "labels.csv").string()) == 2);
}

TEST_CASE("binary usage errors")
{
  CHECK(run_binary("--version") == 0);
  CHECK(run_binary("score --no-such-flag") == 2);
  CHECK(run_binary("score --metrics bogus x.csv") == 2);
  CHECK(run_binary("") == 2);
}

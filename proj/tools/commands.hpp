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

#ifndef IUTQ_TOOLS__COMMANDS_HPP_
#define IUTQ_TOOLS__COMMANDS_HPP_

#include "iutq/errors.hpp"
#include "iutq/evaluation.hpp"
#include "iutq/ingestion.hpp"
#include "iutq/iutq_engine.hpp"
#include "iutq/surrogate.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace iutq::cli
{

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kScoreHeader = "recording_id,timestamp_ms,ego_id,metric_id,value,critical";

inline constexpr std::array<std::string_view, 11> kMetricIds{
  "iutq-co", "iutq-rho1", "iutq-rho2", "iutq-rho3", "dist", "et", "gt", "pet", "pttc", "ttc", "wttc"};

/// Bad command-line input; maps to exit status 2.
class UsageError : public Error
{
public:
  using Error::Error;
};

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// "all" or a comma-separated list; returned in canonical order without
/// duplicates. The bare id "iutq" stands for the variant of `iutq_alias`.
/// Throws UsageError for unknown ids or an empty list.
std::vector<std::string> parse_metric_list(std::string_view text, Penalty iutq_alias = Penalty::rho2);

std::string iutq_metric_id(Penalty p);

/// Comma-separated penalty names; throws UsageError.
std::vector<Penalty> parse_penalty_list(std::string_view text);

/// Comma-separated numbers; throws UsageError.
std::vector<double> parse_number_list(std::string_view text);

bool is_iutq_metric(std::string_view metric_id);
/// Penalty encoded in an iutq-* id.
Penalty penalty_of(std::string_view metric_id);

struct RunConfig
{
  IutqConfig iutq;
  SurrogateConfig surrogate;
  /// Replaces both IUTQ thresholds when set.
  std::optional<double> iutq_threshold;
  int workers{0};  // 0 keeps the OpenMP default
  LoadOptions load;

  /// Threshold applied to an iutq-* metric id.
  double threshold_for(std::string_view metric_id) const;
  /// Throws InvalidSpec.
  void validate() const;
};

struct ScoreRow
{
  std::string recording_id;
  TimestampMs timestamp{0};
  AgentId ego_id{0};
  std::string metric_id;
  std::optional<double> value;
  bool critical{false};
};

/// All rows of one recording ordered by timestamp, ego id, metric order.
std::vector<ScoreRow> score_recording(
  const LoadedRecording & rec, const std::vector<std::string> & metrics, const RunConfig & config);

void write_score_rows(std::ostream & out, const std::vector<ScoreRow> & rows);
/// Throws FormatError.
std::vector<ScoreRow> read_score_file(const std::filesystem::path & path);

/// Track files named directly or found (*.csv, sorted) in named directories.
std::vector<std::filesystem::path> expand_inputs(const std::vector<std::string> & inputs);

struct ScoreOptions
{
  std::vector<std::string> inputs;
  std::vector<std::string> metrics{kMetricIds.begin(), kMetricIds.end()};
  RunConfig config;
  std::filesystem::path out_dir{"out"};
  bool strict{false};
};

/// Writes <out>/scores.csv and <out>/manifest.json.
int cmd_score(const ScoreOptions & options, std::ostream & log);

/// Rebuilds the options of a previous run from its manifest.json.
ScoreOptions read_manifest(const std::filesystem::path & path);
std::string manifest_text(const ScoreOptions & options, const std::vector<std::filesystem::path> & files);

struct EvaluateOptions
{
  std::optional<std::filesystem::path> scores;
  std::optional<std::filesystem::path> labels;
  /// `metric_id,tp,tn,fp,fn` rows instead of scores and labels.
  std::optional<std::filesystem::path> counts;
  std::filesystem::path out_dir{"out"};
};

/// Writes <out>/report.csv and <out>/report.json.
int cmd_evaluate(const EvaluateOptions & options, std::ostream & log);

struct TimeseriesOptions
{
  std::string input;
  AgentId ego_id{0};
  std::optional<AgentId> adversary_id;
  std::vector<std::string> metrics{"dist", "wttc", "iutq-rho2"};
  RunConfig config;
  std::filesystem::path out_file{"timeseries.csv"};
};

/// Header `timestamp_ms,<metric ids>`, one row per frame holding the ego
/// (and the adversary in pair mode). Throws MissingAgent.
std::string timeseries_text(const TimeseriesOptions & options);
int cmd_timeseries(const TimeseriesOptions & options, std::ostream & log);

struct SweepOptions
{
  std::vector<std::string> inputs;
  std::filesystem::path labels;
  std::string metric{"iutq-co"};
  std::vector<double> thresholds;
  std::vector<Penalty> penalties;
  RunConfig config;
  std::filesystem::path out_file{"sweep.csv"};
};

struct SweepRow
{
  std::string metric_id;
  std::string penalty;  // empty for surrogate metrics
  double threshold{0.0};
  ConfusionCounts counts;
  StatsReport stats;
};

/// Exactly one of thresholds or penalties must be non-empty (UsageError).
std::vector<SweepRow> sweep(const SweepOptions & options);
std::string sweep_csv(const std::vector<SweepRow> & rows);
int cmd_sweep(const SweepOptions & options, std::ostream & log);

struct SynthOptions
{
  std::string kind{"scenario"};  // scenario, crossing, passing
  std::uint64_t seed{1};
  std::size_t agents{30};
  std::size_t frames{1000};
  std::string speed_law{"bimodal"};
  std::string spatial_law{"grid"};
  double offset_s{1.2};
  double speed{10.0};
  double lateral_offset{4.55};  // 2.75 m between 1.8 m wide bodies
  bool footprints{true};
  bool bystander{false};
  std::filesystem::path out_file{"synthetic.csv"};
};

int cmd_synth(const SynthOptions & options, std::ostream & log);

}  // namespace iutq::cli

#endif  // IUTQ_TOOLS__COMMANDS_HPP_

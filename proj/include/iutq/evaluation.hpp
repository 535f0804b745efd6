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

#ifndef IUTQ__EVALUATION_HPP_
#define IUTQ__EVALUATION_HPP_

#include "iutq/ingestion.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace iutq
{

struct ConfusionCounts
{
  std::uint64_t tp{0};
  std::uint64_t tn{0};
  std::uint64_t fp{0};
  std::uint64_t fn{0};

  std::uint64_t total() const { return tp + tn + fp + fn; }
  bool operator==(const ConfusionCounts &) const = default;
};

/// Rates with a zero denominator are nullopt. The one exception is the
/// Matthews coefficient, whose raw value is taken as 0 (normalized 0.5) when
/// its denominator vanishes.
struct StatsReport
{
  std::optional<double> acc;
  std::optional<double> mr;
  std::optional<double> tpr;
  std::optional<double> fpr;
  std::optional<double> tnr;
  std::optional<double> fnr;
  std::optional<double> pre;
  std::optional<double> cok;
  std::optional<double> f1s;
  std::optional<double> mcc_normalized;
  double mcc_raw{0.0};
};

/// Per-(recording, ego, timestamp) criticality predictions of one metric.
using FlagTable = std::map<LabelKey, bool>;

/// Counts over the labeled keys; flags without a label are ignored.
/// Throws MissingPrediction naming the labeled keys that have no flag.
ConfusionCounts confusion(const FlagTable & flags, const LabelTable & labels);

/// Throws EmptyCounts when all four counts are zero.
StatsReport statistics(const ConfusionCounts & c);

/// The fourteen comparison rows, in table order.
enum class StatRow { tp, tn, fp, fn, acc, mr, tpr, fpr, tnr, fnr, pre, cok, f1s, mcc };
inline constexpr std::size_t kStatRowCount = 14;

std::string_view to_string(StatRow row);
/// True for rows where a larger value is better.
bool higher_is_better(StatRow row);
std::optional<double> row_value(StatRow row, const ConfusionCounts & c, const StatsReport & s);

struct MetricColumn
{
  std::string metric_id;
  ConfusionCounts counts;
  StatsReport stats;
};

struct RowMarks
{
  std::vector<std::string> best;   // metric ids, tied columns all listed
  std::vector<std::string> worst;  // empty when every defined value ties
};

struct TableReport
{
  std::vector<MetricColumn> columns;
  std::array<RowMarks, kStatRowCount> marks;
};

/// Throws std::invalid_argument for an empty column list.
TableReport table_report(const std::vector<std::pair<std::string, ConfusionCounts>> & counts);

/// One column per metric id; errors from confusion() propagate.
TableReport table_report(
  const std::vector<std::string> & metric_ids, const std::vector<FlagTable> & flags,
  const LabelTable & labels);

/// Header `statistic,<metric ids>,best,worst`; undefined values are empty.
std::string to_csv(const TableReport & report);

/// One JSON document: metrics, counts and rows with best/worst marks.
std::string to_json_text(const TableReport & report);

}  // namespace iutq

#endif  // IUTQ__EVALUATION_HPP_

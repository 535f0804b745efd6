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

#include "iutq/evaluation.hpp"

#include "iutq/errors.hpp"
#include "iutq/format.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace iutq
{

ConfusionCounts confusion(const FlagTable & flags, const LabelTable & labels)
{
  ConfusionCounts c;
  std::vector<const LabelKey *> missing;
  for (const auto & [key, truth] : labels.entries()) {
    auto it = flags.find(key);
    if (it == flags.end()) {
      missing.push_back(&key);
      continue;
    }
    const bool predicted = it->second;
    if (predicted && truth) {
      ++c.tp;
    } else if (!predicted && !truth) {
      ++c.tn;
    } else if (predicted) {
      ++c.fp;
    } else {
      ++c.fn;
    }
  }
  if (!missing.empty()) {
    constexpr std::size_t kListed = 20;
    std::string msg = std::to_string(missing.size()) + " labeled key(s) have no prediction:";
    for (std::size_t i = 0; i < missing.size() && i < kListed; ++i) {
      msg += " " + to_string(*missing[i]);
    }
    if (missing.size() > kListed) {
      msg += " ...";
    }
    throw MissingPrediction(msg);
  }
  return c;
}

namespace
{

std::optional<double> ratio(double num, double den)
{
  if (den == 0.0) {
    return std::nullopt;
  }
  return num / den;
}

}  // namespace

StatsReport statistics(const ConfusionCounts & c)
{
  if (c.total() == 0) {
    throw EmptyCounts("confusion counts are all zero");
  }
  const auto tp = static_cast<double>(c.tp);
  const auto tn = static_cast<double>(c.tn);
  const auto fp = static_cast<double>(c.fp);
  const auto fn = static_cast<double>(c.fn);
  const double n = tp + tn + fp + fn;

  StatsReport s;
  const double acc = (tp + tn) / n;
  s.acc = acc;
  s.mr = 1.0 - acc;
  s.tpr = ratio(tp, tp + fn);
  s.fpr = ratio(fp, fp + tn);
  s.tnr = ratio(tn, tn + fp);
  s.fnr = ratio(fn, fn + tp);
  s.pre = ratio(tp, tp + fp);

  // Chance agreement from the marginals of prediction and truth.
  const double p_e = ((tp + fp) * (tp + fn) + (fn + tn) * (fp + tn)) / (n * n);
  s.cok = ratio(acc - p_e, 1.0 - p_e);
  s.f1s = ratio(2.0 * tp, 2.0 * tp + fp + fn);

  const double mcc_den = std::sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn));
  s.mcc_raw = mcc_den == 0.0 ? 0.0 : (tp * tn - fp * fn) / mcc_den;
  s.mcc_normalized = (s.mcc_raw + 1.0) / 2.0;
  return s;
}

std::string_view to_string(StatRow row)
{
  static constexpr std::array<std::string_view, kStatRowCount> names{
    "TP", "TN", "FP", "FN", "ACC", "MR", "TPR", "FPR", "TNR", "FNR", "PRE", "CoK", "F1S", "MCC"};
  return names[static_cast<std::size_t>(row)];
}

bool higher_is_better(StatRow row)
{
  switch (row) {
    case StatRow::fp:
    case StatRow::fn:
    case StatRow::mr:
    case StatRow::fpr:
    case StatRow::fnr:
      return false;
    default:
      return true;
  }
}

std::optional<double> row_value(StatRow row, const ConfusionCounts & c, const StatsReport & s)
{
  switch (row) {
    case StatRow::tp:
      return static_cast<double>(c.tp);
    case StatRow::tn:
      return static_cast<double>(c.tn);
    case StatRow::fp:
      return static_cast<double>(c.fp);
    case StatRow::fn:
      return static_cast<double>(c.fn);
    case StatRow::acc:
      return s.acc;
    case StatRow::mr:
      return s.mr;
    case StatRow::tpr:
      return s.tpr;
    case StatRow::fpr:
      return s.fpr;
    case StatRow::tnr:
      return s.tnr;
    case StatRow::fnr:
      return s.fnr;
    case StatRow::pre:
      return s.pre;
    case StatRow::cok:
      return s.cok;
    case StatRow::f1s:
      return s.f1s;
    case StatRow::mcc:
      return s.mcc_normalized;
  }
  return std::nullopt;
}

TableReport table_report(const std::vector<std::pair<std::string, ConfusionCounts>> & counts)
{
  if (counts.empty()) {
    throw std::invalid_argument("table report needs at least one metric");
  }
  TableReport report;
  for (const auto & [id, c] : counts) {
    report.columns.push_back({id, c, statistics(c)});
  }

  for (std::size_t r = 0; r < kStatRowCount; ++r) {
    const auto row = static_cast<StatRow>(r);
    std::optional<double> lo;
    std::optional<double> hi;
    for (const MetricColumn & col : report.columns) {
      const auto v = row_value(row, col.counts, col.stats);
      if (!v) {
        continue;
      }
      lo = lo ? std::min(*lo, *v) : *v;
      hi = hi ? std::max(*hi, *v) : *v;
    }
    if (!lo) {
      continue;
    }
    const double best = higher_is_better(row) ? *hi : *lo;
    const double worst = higher_is_better(row) ? *lo : *hi;
    RowMarks & marks = report.marks[r];
    for (const MetricColumn & col : report.columns) {
      const auto v = row_value(row, col.counts, col.stats);
      if (!v) {
        continue;
      }
      if (*v == best) {
        marks.best.push_back(col.metric_id);
      }
      if (*v == worst && best != worst) {
        marks.worst.push_back(col.metric_id);
      }
    }
  }
  return report;
}

TableReport table_report(
  const std::vector<std::string> & metric_ids, const std::vector<FlagTable> & flags,
  const LabelTable & labels)
{
  if (metric_ids.size() != flags.size()) {
    throw std::invalid_argument("one flag table per metric id expected");
  }
  std::vector<std::pair<std::string, ConfusionCounts>> counts;
  for (std::size_t i = 0; i < metric_ids.size(); ++i) {
    counts.emplace_back(metric_ids[i], confusion(flags[i], labels));
  }
  return table_report(counts);
}

namespace
{

std::string join(const std::vector<std::string> & parts, char sep)
{
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) {
      out += sep;
    }
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string to_csv(const TableReport & report)
{
  std::ostringstream out;
  out << "statistic";
  for (const MetricColumn & col : report.columns) {
    out << ',' << col.metric_id;
  }
  out << ",best,worst\n";
  for (std::size_t r = 0; r < kStatRowCount; ++r) {
    const auto row = static_cast<StatRow>(r);
    out << to_string(row);
    for (const MetricColumn & col : report.columns) {
      out << ',' << format_sig6(row_value(row, col.counts, col.stats));
    }
    out << ',' << join(report.marks[r].best, ';') << ',' << join(report.marks[r].worst, ';') << '\n';
  }
  return out.str();
}

std::string to_json_text(const TableReport & report)
{
  nlohmann::ordered_json doc;
  doc["metrics"] = nlohmann::json::array();
  for (const MetricColumn & col : report.columns) {
    doc["metrics"].push_back(col.metric_id);
  }
  doc["rows"] = nlohmann::json::array();
  for (std::size_t r = 0; r < kStatRowCount; ++r) {
    const auto row = static_cast<StatRow>(r);
    nlohmann::ordered_json entry;
    entry["statistic"] = to_string(row);
    entry["higher_is_better"] = higher_is_better(row);
    nlohmann::ordered_json values = nlohmann::ordered_json::object();
    for (const MetricColumn & col : report.columns) {
      const auto v = row_value(row, col.counts, col.stats);
      values[col.metric_id] = v ? nlohmann::ordered_json(std::stod(format_sig6(*v))) : nlohmann::ordered_json();
    }
    entry["values"] = std::move(values);
    entry["best"] = report.marks[r].best;
    entry["worst"] = report.marks[r].worst;
    doc["rows"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

}  // namespace iutq

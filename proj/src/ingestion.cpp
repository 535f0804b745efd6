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

#include "iutq/ingestion.hpp"

#include "iutq/errors.hpp"
#include "iutq/format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <string_view>
#include <unordered_map>

namespace iutq
{

namespace
{

constexpr std::size_t kMaxDiagnostics = 20;

std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line)
{
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

template <typename T>
std::optional<T> parse_number(std::string_view text)
{
  if (!text.empty() && text.front() == '+') {
    text.remove_prefix(1);
  }
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    return std::nullopt;
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) {
      return std::nullopt;
    }
  }
  return value;
}

// Column name -> position, FormatError when a required column is missing.
class ColumnMap
{
public:
  ColumnMap(std::string_view header, const std::string & source)
  {
    const auto names = split(header);
    for (std::size_t i = 0; i < names.size(); ++i) {
      std::string name(names[i]);
      if (i == 0 && name.size() >= 3 && name.compare(0, 3, "\xEF\xBB\xBF") == 0) {
        name.erase(0, 3);
      }
      index_.emplace(std::move(name), i);
    }
    count_ = names.size();
    source_ = source;
  }

  std::size_t require(const std::string & name) const
  {
    auto it = index_.find(name);
    if (it == index_.end()) {
      throw FormatError(source_ + ": missing required column '" + name + "'");
    }
    return it->second;
  }

  std::optional<std::size_t> optional(const std::string & name) const
  {
    auto it = index_.find(name);
    if (it == index_.end()) {
      return std::nullopt;
    }
    return it->second;
  }

  std::size_t count() const { return count_; }

private:
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t count_{0};
  std::string source_;
};

}  // namespace

LoadedRecording parse_trackfile(std::istream & in, std::string recording_id, const LoadOptions & options)
{
  if (options.frame_interval <= 0) {
    throw FormatError("frame interval must be positive");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError(recording_id + ": missing header row");
  }
  const ColumnMap cols(line, recording_id);
  const std::size_t c_track = cols.require("track_id");
  const std::size_t c_frame = cols.require("frame_id");
  const std::size_t c_time = cols.require("timestamp_ms");
  const std::size_t c_type = cols.require("agent_type");
  const std::size_t c_x = cols.require("x");
  const std::size_t c_y = cols.require("y");
  const std::size_t c_vx = cols.require("vx");
  const std::size_t c_vy = cols.require("vy");
  const std::size_t c_psi = cols.require("psi_rad");
  const auto c_length = cols.optional("length");
  const auto c_width = cols.optional("width");

  LoadedRecording rec;
  rec.recording_id = std::move(recording_id);
  IngestReport & report = rec.report;

  auto drop = [&](std::size_t line_no, const std::string & why) {
    ++report.rows_dropped;
    if (report.diagnostics.size() < kMaxDiagnostics) {
      report.diagnostics.push_back("line " + std::to_string(line_no) + ": " + why);
    }
  };

  std::map<TimestampMs, std::vector<AgentState>> by_time;
  std::set<std::pair<AgentId, TimestampMs>> seen;
  std::set<AgentId> agents;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    ++report.rows_read;
    const auto f = split(line);
    if (f.size() != cols.count()) {
      drop(line_no, "expected " + std::to_string(cols.count()) + " fields, got " + std::to_string(f.size()));
      continue;
    }
    const auto track = parse_number<AgentId>(f[c_track]);
    const auto frame = parse_number<std::int64_t>(f[c_frame]);
    const auto time = parse_number<TimestampMs>(f[c_time]);
    const auto x = parse_number<double>(f[c_x]);
    const auto y = parse_number<double>(f[c_y]);
    const auto vx = parse_number<double>(f[c_vx]);
    const auto vy = parse_number<double>(f[c_vy]);
    const auto psi = parse_number<double>(f[c_psi]);
    if (!track || !frame || !time || !x || !y || !vx || !vy || !psi) {
      drop(line_no, "non-numeric or non-finite field");
      continue;
    }
    if (*time != *frame * options.frame_interval) {
      drop(line_no, "timestamp_ms does not equal frame_id * frame interval");
      continue;
    }

    std::optional<Footprint> footprint;
    const std::string_view len_text = c_length ? f[*c_length] : std::string_view{};
    const std::string_view wid_text = c_width ? f[*c_width] : std::string_view{};
    if (!len_text.empty() || !wid_text.empty()) {
      const auto len = parse_number<double>(len_text);
      const auto wid = parse_number<double>(wid_text);
      if (!len || !wid || *len <= 0.0 || *wid <= 0.0) {
        drop(line_no, "footprint needs positive length and width");
        continue;
      }
      footprint = Footprint{*len, *wid};
    }

    const AgentType type = agent_type_from_string(f[c_type]);
    if (type == AgentType::other && !options.include_other_agents) {
      ++report.rows_filtered;
      continue;
    }
    if (!seen.emplace(*track, *time).second) {
      drop(line_no, "duplicate (track_id, timestamp_ms)");
      continue;
    }
    agents.insert(*track);
    by_time[*time].push_back(AgentState::make(*track, *time, {*x, *y}, {*vx, *vy}, *psi, footprint, type));
  }

  if (by_time.empty()) {
    throw EmptyRecording(rec.recording_id + ": no valid rows");
  }

  std::vector<Scene> frames;
  frames.reserve(by_time.size());
  for (auto & [t, states] : by_time) {
    frames.emplace_back(t, std::move(states));
  }
  report.scenes = frames.size();
  report.agents = agents.size();
  report.duration_ms = frames.back().timestamp() - frames.front().timestamp();
  rec.trackset = ScenarioTrackset(std::move(frames), options.frame_interval);
  return rec;
}

LoadedRecording load_trackfile(const std::filesystem::path & path, const LoadOptions & options)
{
  std::ifstream in(path);
  if (!in) {
    throw FileError("cannot open track file " + path.string());
  }
  return parse_trackfile(in, path.stem().string(), options);
}

void write_trackfile(std::ostream & out, const ScenarioTrackset & ts)
{
  out << kTrackHeader << '\n';
  for (const Scene & scene : ts.frames()) {
    for (const AgentState & a : scene.agents()) {
      out << a.id << ',' << scene.timestamp() / ts.frame_interval() << ',' << scene.timestamp() << ','
          << to_string(a.type) << ',' << format_exact(a.position.x) << ',' << format_exact(a.position.y)
          << ',' << format_exact(a.velocity.x) << ',' << format_exact(a.velocity.y) << ','
          << format_exact(a.heading) << ',';
      if (a.footprint) {
        out << format_exact(a.footprint->length) << ',' << format_exact(a.footprint->width);
      } else {
        out << ',';
      }
      out << '\n';
    }
  }
}

void write_trackfile(const std::filesystem::path & path, const ScenarioTrackset & ts)
{
  std::ofstream out(path);
  if (!out) {
    throw FileError("cannot write track file " + path.string());
  }
  write_trackfile(out, ts);
}

std::string to_string(const LabelKey & key)
{
  return key.recording_id + "/" + std::to_string(key.ego_id) + "@" + std::to_string(key.timestamp);
}

void LabelTable::insert(LabelKey key, bool critical)
{
  auto [it, inserted] = labels_.emplace(std::move(key), critical);
  if (!inserted) {
    throw DuplicateLabel("duplicate label " + to_string(it->first));
  }
  if (critical) {
    ++positives_;
  }
}

double LabelTable::positive_rate() const
{
  if (labels_.empty()) {
    return 0.0;
  }
  return static_cast<double>(positives_) / static_cast<double>(labels_.size());
}

const bool * LabelTable::find(const LabelKey & key) const
{
  auto it = labels_.find(key);
  return it == labels_.end() ? nullptr : &it->second;
}

LabelTable parse_labels(std::istream & in, const std::string & source)
{
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError(source + ": missing header row");
  }
  const ColumnMap cols(line, source);
  const std::size_t c_rec = cols.require("recording_id");
  const std::size_t c_ego = cols.require("ego_id");
  const std::size_t c_time = cols.require("timestamp_ms");
  const std::size_t c_crit = cols.require("critical");

  LabelTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    const auto f = split(line);
    const std::string where = source + ":" + std::to_string(line_no);
    if (f.size() != cols.count()) {
      throw FormatError(where + ": wrong number of fields");
    }
    const auto ego = parse_number<AgentId>(f[c_ego]);
    const auto time = parse_number<TimestampMs>(f[c_time]);
    if (!ego || !time || f[c_rec].empty()) {
      throw FormatError(where + ": malformed key");
    }
    std::string crit(f[c_crit]);
    std::transform(crit.begin(), crit.end(), crit.begin(), [](unsigned char c) { return std::tolower(c); });
    bool critical = false;
    if (crit == "1" || crit == "true") {
      critical = true;
    } else if (crit != "0" && crit != "false") {
      throw FormatError(where + ": critical must be 0, 1, true or false");
    }
    table.insert({std::string(f[c_rec]), *ego, *time}, critical);
  }
  return table;
}

LabelTable load_labels(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw FileError("cannot open label file " + path.string());
  }
  return parse_labels(in, path.string());
}

void write_labels(std::ostream & out, const LabelTable & table)
{
  out << kLabelHeader << '\n';
  for (const auto & [key, critical] : table.entries()) {
    out << key.recording_id << ',' << key.ego_id << ',' << key.timestamp << ',' << (critical ? 1 : 0) << '\n';
  }
}

}  // namespace iutq

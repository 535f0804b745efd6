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

#ifndef IUTQ__INGESTION_HPP_
#define IUTQ__INGESTION_HPP_

#include "iutq/scene.hpp"

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace iutq
{

inline constexpr std::string_view kTrackHeader =
  "track_id,frame_id,timestamp_ms,agent_type,x,y,vx,vy,psi_rad,length,width";
inline constexpr std::string_view kLabelHeader = "recording_id,ego_id,timestamp_ms,critical";

struct LoadOptions
{
  /// Keep agents whose type maps to AgentType::other.
  bool include_other_agents{false};
  TimestampMs frame_interval{100};
};

struct IngestReport
{
  std::size_t rows_read{0};
  std::size_t rows_dropped{0};   // failed validation
  std::size_t rows_filtered{0};  // valid but excluded by the agent type filter
  std::size_t agents{0};
  std::size_t scenes{0};
  TimestampMs duration_ms{0};
  /// Reasons for the first dropped rows, "line N: reason".
  std::vector<std::string> diagnostics;
};

struct LoadedRecording
{
  std::string recording_id;
  ScenarioTrackset trackset;
  IngestReport report;
};

/// Reads a comma-separated track file. Columns are matched by header name;
/// length and width are optional (missing or empty means no footprint).
/// Throws FileError, FormatError or EmptyRecording.
LoadedRecording load_trackfile(const std::filesystem::path & path, const LoadOptions & options = {});

/// Same as load_trackfile on an already opened stream.
LoadedRecording parse_trackfile(
  std::istream & in, std::string recording_id, const LoadOptions & options = {});

/// Writes rows in timestamp then agent order using shortest round-trip
/// number formatting, so a reload reproduces the trackset bit for bit.
void write_trackfile(std::ostream & out, const ScenarioTrackset & ts);
void write_trackfile(const std::filesystem::path & path, const ScenarioTrackset & ts);

struct LabelKey
{
  std::string recording_id;
  AgentId ego_id{0};
  TimestampMs timestamp{0};

  auto operator<=>(const LabelKey &) const = default;
};

std::string to_string(const LabelKey & key);

class LabelTable
{
public:
  /// Throws DuplicateLabel.
  void insert(LabelKey key, bool critical);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  std::size_t positives() const { return positives_; }
  /// positives / size; 0 for an empty table.
  double positive_rate() const;

  const bool * find(const LabelKey & key) const;
  const std::map<LabelKey, bool> & entries() const { return labels_; }

private:
  std::map<LabelKey, bool> labels_;
  std::size_t positives_{0};
};

/// Throws FileError, FormatError or DuplicateLabel.
LabelTable load_labels(const std::filesystem::path & path);
LabelTable parse_labels(std::istream & in, const std::string & source = "<stream>");
void write_labels(std::ostream & out, const LabelTable & table);

}  // namespace iutq

#endif  // IUTQ__INGESTION_HPP_

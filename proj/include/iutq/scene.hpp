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

#ifndef IUTQ__SCENE_HPP_
#define IUTQ__SCENE_HPP_

#include "iutq/geometry.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace iutq
{

using AgentId = std::int64_t;
/// Milliseconds since recording start. Time is integral end to end.
using TimestampMs = std::int64_t;

enum class AgentType { car, truck_bus, other };

std::string_view to_string(AgentType type);
AgentType agent_type_from_string(std::string_view text);

/// Kinematic state of one vehicle at one timestamp.
struct AgentState
{
  AgentId id{0};
  TimestampMs timestamp{0};
  Vec2 position;
  Vec2 velocity;
  double speed{0.0};    // always |velocity|
  double heading{0.0};  // [-pi, pi]
  std::optional<Footprint> footprint;
  AgentType type{AgentType::car};

  /// Builds a state with speed derived from velocity and heading wrapped.
  static AgentState make(
    AgentId id, TimestampMs timestamp, Vec2 position, Vec2 velocity, double heading,
    std::optional<Footprint> footprint = std::nullopt, AgentType type = AgentType::car);

  std::optional<OrientedBox> box() const;
  double circumradius() const { return footprint ? footprint->circumradius() : 0.0; }
};

/// All agent states at one timestamp, sorted by agent id.
class Scene
{
public:
  Scene() = default;
  /// Throws InvalidTrackset on duplicate ids or mismatching timestamps.
  Scene(TimestampMs timestamp, std::vector<AgentState> agents);

  TimestampMs timestamp() const { return timestamp_; }
  std::span<const AgentState> agents() const { return agents_; }
  std::size_t size() const { return agents_.size(); }
  bool empty() const { return agents_.empty(); }

  const AgentState * find(AgentId id) const;
  /// Throws MissingAgent.
  const AgentState & at(AgentId id) const;

private:
  TimestampMs timestamp_{0};
  std::vector<AgentState> agents_;
};

struct KinematicSample
{
  TimestampMs timestamp{0};
  double speed{0.0};
  double acceleration{0.0};  // backward difference of speed, 0 on the first frame of a track
};

struct KinematicHistory
{
  AgentId agent_id{0};
  std::vector<KinematicSample> window;  // oldest first, ends at the query time
};

/// Time-ordered recording. Immutable after construction.
class ScenarioTrackset
{
public:
  ScenarioTrackset() = default;
  /// Frames must have strictly increasing timestamps spaced by multiples of
  /// `frame_interval`; throws InvalidTrackset otherwise.
  ScenarioTrackset(std::vector<Scene> frames, TimestampMs frame_interval);

  std::span<const Scene> frames() const { return frames_; }
  TimestampMs frame_interval() const { return frame_interval_; }
  bool empty() const { return frames_.empty(); }

  const Scene * scene_at(TimestampMs t) const;
  const AgentState * state(AgentId id, TimestampMs t) const;

  /// Sorted ids of every agent appearing anywhere in the recording.
  std::vector<AgentId> agent_ids() const;

  struct TrackPoint
  {
    TimestampMs timestamp;
    std::uint32_t frame;  // index into frames()
    std::uint32_t slot;   // index into frames()[frame].agents()
  };
  /// Time-ordered appearances of one agent; empty when the id is unknown.
  std::span<const TrackPoint> track(AgentId id) const;
  const AgentState & state_of(const TrackPoint & p) const { return frames_[p.frame].agents()[p.slot]; }

private:
  std::vector<Scene> frames_;
  TimestampMs frame_interval_{100};
  std::unordered_map<AgentId, std::vector<TrackPoint>> tracks_;
};

double center_distance(const AgentState & a, const AgentState & b);

/// Body-to-body distance between footprints; center distance when either
/// agent has no footprint.
double gap_distance(const AgentState & a, const AgentState & b);

/// speed * reaction_time + speed^2 / (2 * decel)
double braking_distance(const AgentState & ego, double decel, double reaction_time);

/// Non-ego agents whose gap to the ego is within the ego's braking distance.
/// Sorted by id. A zero braking distance selects nobody.
std::vector<AgentId> agents_within_braking_distance(
  const Scene & scene, AgentId ego_id, double decel, double reaction_time);

inline constexpr double kMinGapFloor = 0.1;

/// Smallest gap to any other agent, floored at kMinGapFloor; nullopt for a lone ego.
std::optional<double> min_gap_to_any(const Scene & scene, AgentId ego_id);

/// Samples from max(t - window, start of the contiguous presence) to t.
KinematicHistory history(
  const ScenarioTrackset & ts, AgentId agent_id, TimestampMs t, double window_s);

}  // namespace iutq

#endif  // IUTQ__SCENE_HPP_

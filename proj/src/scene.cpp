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

#include "iutq/scene.hpp"

#include "iutq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace iutq
{

std::string_view to_string(AgentType type)
{
  switch (type) {
    case AgentType::car:
      return "car";
    case AgentType::truck_bus:
      return "truck_bus";
    case AgentType::other:
      return "other";
  }
  return "other";
}

AgentType agent_type_from_string(std::string_view text)
{
  if (text == "car") {
    return AgentType::car;
  }
  if (text == "truck_bus" || text == "truck" || text == "bus") {
    return AgentType::truck_bus;
  }
  return AgentType::other;
}

AgentState AgentState::make(
  AgentId id, TimestampMs timestamp, Vec2 position, Vec2 velocity, double heading,
  std::optional<Footprint> footprint, AgentType type)
{
  AgentState s;
  s.id = id;
  s.timestamp = timestamp;
  s.position = position;
  s.velocity = velocity;
  s.speed = velocity.norm();
  s.heading = normalize_angle(heading);
  s.footprint = footprint;
  s.type = type;
  return s;
}

std::optional<OrientedBox> AgentState::box() const
{
  if (!footprint) {
    return std::nullopt;
  }
  return OrientedBox::make(position, heading, *footprint);
}

Scene::Scene(TimestampMs timestamp, std::vector<AgentState> agents)
: timestamp_(timestamp), agents_(std::move(agents))
{
  std::sort(agents_.begin(), agents_.end(), [](const auto & a, const auto & b) { return a.id < b.id; });
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    if (agents_[i].timestamp != timestamp_) {
      throw InvalidTrackset(
        "agent " + std::to_string(agents_[i].id) + " has timestamp " +
        std::to_string(agents_[i].timestamp) + " in scene " + std::to_string(timestamp_));
    }
    if (i > 0 && agents_[i - 1].id == agents_[i].id) {
      throw InvalidTrackset(
        "duplicate agent " + std::to_string(agents_[i].id) + " in scene " +
        std::to_string(timestamp_));
    }
  }
}

const AgentState * Scene::find(AgentId id) const
{
  auto it = std::lower_bound(
    agents_.begin(), agents_.end(), id, [](const AgentState & a, AgentId v) { return a.id < v; });
  if (it == agents_.end() || it->id != id) {
    return nullptr;
  }
  return &*it;
}

const AgentState & Scene::at(AgentId id) const
{
  const AgentState * s = find(id);
  if (s == nullptr) {
    throw MissingAgent(
      "agent " + std::to_string(id) + " not present at " + std::to_string(timestamp_) + " ms");
  }
  return *s;
}

ScenarioTrackset::ScenarioTrackset(std::vector<Scene> frames, TimestampMs frame_interval)
: frames_(std::move(frames)), frame_interval_(frame_interval)
{
  if (frame_interval_ <= 0) {
    throw InvalidTrackset("frame interval must be positive");
  }
  for (std::size_t f = 0; f < frames_.size(); ++f) {
    if (f > 0) {
      const TimestampMs step = frames_[f].timestamp() - frames_[f - 1].timestamp();
      if (step <= 0 || step % frame_interval_ != 0) {
        throw InvalidTrackset(
          "frame at " + std::to_string(frames_[f].timestamp()) +
          " ms breaks the frame grid of " + std::to_string(frame_interval_) + " ms");
      }
    }
    const auto agents = frames_[f].agents();
    for (std::size_t k = 0; k < agents.size(); ++k) {
      tracks_[agents[k].id].push_back(
        {frames_[f].timestamp(), static_cast<std::uint32_t>(f), static_cast<std::uint32_t>(k)});
    }
  }
}

const Scene * ScenarioTrackset::scene_at(TimestampMs t) const
{
  auto it = std::lower_bound(
    frames_.begin(), frames_.end(), t, [](const Scene & s, TimestampMs v) { return s.timestamp() < v; });
  if (it == frames_.end() || it->timestamp() != t) {
    return nullptr;
  }
  return &*it;
}

const AgentState * ScenarioTrackset::state(AgentId id, TimestampMs t) const
{
  const auto points = track(id);
  auto it = std::lower_bound(
    points.begin(), points.end(), t, [](const TrackPoint & p, TimestampMs v) { return p.timestamp < v; });
  if (it == points.end() || it->timestamp != t) {
    return nullptr;
  }
  return &state_of(*it);
}

std::vector<AgentId> ScenarioTrackset::agent_ids() const
{
  std::vector<AgentId> ids;
  ids.reserve(tracks_.size());
  for (const auto & [id, _] : tracks_) {
    ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::span<const ScenarioTrackset::TrackPoint> ScenarioTrackset::track(AgentId id) const
{
  auto it = tracks_.find(id);
  if (it == tracks_.end()) {
    return {};
  }
  return it->second;
}

double center_distance(const AgentState & a, const AgentState & b)
{
  return (b.position - a.position).norm();
}

double gap_distance(const AgentState & a, const AgentState & b)
{
  const auto box_a = a.box();
  const auto box_b = b.box();
  if (!box_a || !box_b) {
    return center_distance(a, b);
  }
  return box_distance(*box_a, *box_b);
}

double braking_distance(const AgentState & ego, double decel, double reaction_time)
{
  return ego.speed * reaction_time + ego.speed * ego.speed / (2.0 * decel);
}

std::vector<AgentId> agents_within_braking_distance(
  const Scene & scene, AgentId ego_id, double decel, double reaction_time)
{
  const AgentState & ego = scene.at(ego_id);
  const double reach = braking_distance(ego, decel, reaction_time);
  std::vector<AgentId> out;
  if (reach <= 0.0) {
    return out;
  }
  for (const AgentState & other : scene.agents()) {
    if (other.id != ego_id && gap_distance(ego, other) <= reach) {
      out.push_back(other.id);
    }
  }
  return out;
}

std::optional<double> min_gap_to_any(const Scene & scene, AgentId ego_id)
{
  const AgentState & ego = scene.at(ego_id);
  double best = std::numeric_limits<double>::infinity();
  for (const AgentState & other : scene.agents()) {
    if (other.id != ego_id) {
      best = std::min(best, gap_distance(ego, other));
    }
  }
  if (!std::isfinite(best)) {
    return std::nullopt;
  }
  return std::max(best, kMinGapFloor);
}

KinematicHistory history(
  const ScenarioTrackset & ts, AgentId agent_id, TimestampMs t, double window_s)
{
  const auto points = ts.track(agent_id);
  auto it = std::lower_bound(
    points.begin(), points.end(), t,
    [](const ScenarioTrackset::TrackPoint & p, TimestampMs v) { return p.timestamp < v; });
  if (it == points.end() || it->timestamp != t) {
    throw MissingAgent(
      "agent " + std::to_string(agent_id) + " not present at " + std::to_string(t) + " ms");
  }

  const TimestampMs dt = ts.frame_interval();
  const TimestampMs earliest = t - static_cast<TimestampMs>(std::llround(window_s * 1000.0));
  const auto begin_index = static_cast<std::size_t>(it - points.begin());

  // Walk back over the contiguous run that ends at t.
  std::size_t first = begin_index;
  while (first > 0 && points[first - 1].timestamp == points[first].timestamp - dt &&
         points[first - 1].timestamp >= earliest) {
    --first;
  }

  KinematicHistory h;
  h.agent_id = agent_id;
  h.window.reserve(begin_index - first + 1);
  const double dt_s = static_cast<double>(dt) / 1000.0;
  for (std::size_t k = first; k <= begin_index; ++k) {
    const double speed = ts.state_of(points[k]).speed;
    double accel = 0.0;
    if (k > 0 && points[k - 1].timestamp == points[k].timestamp - dt) {
      accel = (speed - ts.state_of(points[k - 1]).speed) / dt_s;
    }
    h.window.push_back({points[k].timestamp, speed, accel});
  }
  return h;
}

}  // namespace iutq

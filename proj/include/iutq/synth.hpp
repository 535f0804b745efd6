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

#ifndef IUTQ__SYNTH_HPP_
#define IUTQ__SYNTH_HPP_

// Deterministic synthetic scenes and scenarios, plus brute-force reference
// computations that share no code path with the production metrics.

#include "iutq/scene.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

namespace iutq::synth
{

enum class SpeedLaw { uniform, bimodal, all_standing, one_fast };
enum class SpatialLaw { grid, corridor, crossing };

struct SceneSpec
{
  std::uint64_t seed{0};
  std::size_t n_agents{1};
  SpeedLaw speed_law{SpeedLaw::uniform};
  SpatialLaw spatial_law{SpatialLaw::grid};
  double bounds{100.0};  // side of the square area, meters
  bool footprints{true};
  TimestampMs timestamp{0};

  /// Throws InvalidSpec.
  void validate() const;
};

/// Pure function of `spec`. Agent ids are 1..n_agents.
///   uniform      every agent has one common speed drawn from [2, 15) m/s
///   bimodal      each agent is slow [0, 2) or fast [10, 15) m/s
///   all_standing every speed is 0
///   one_fast     agent 1 moves at 10 m/s, all others stand
Scene build_scene(const SceneSpec & spec);

struct ScenarioSpec
{
  SceneSpec scene;
  std::size_t n_frames{100};
  TimestampMs frame_interval{100};
};

/// Evolves build_scene(spec.scene) with smooth per-agent acceleration and
/// yaw-rate profiles. Speeds never go negative.
ScenarioTrackset build_scenario(const ScenarioSpec & spec);

inline constexpr AgentId kCrossingFirst = 1;   // drives along +x through the origin
inline constexpr AgentId kCrossingSecond = 2;  // drives along +y through the origin
inline constexpr AgentId kBystander = 3;       // stands beside the crossing

struct CrossingSpec
{
  double speed_first{10.0};
  double speed_second{10.0};
  /// Arrival of the second agent at the origin minus arrival of the first.
  double offset_s{0.0};
  /// Time from recording start until the first agent reaches the origin.
  double lead_time_s{3.0};
  /// Recording continues this long after the second agent's arrival.
  double tail_time_s{3.0};
  /// 4.5 m x 1.8 m bodies when set, point agents otherwise.
  bool footprints{false};
  bool standing_bystander{false};
  TimestampMs frame_interval{100};
};

/// Two agents on perpendicular straight paths meeting at the origin. Positions
/// are exact at frame times, so offset 0 puts both centers on the origin.
ScenarioTrackset build_crossing_scenario(const CrossingSpec & spec);

/// Two agents approaching head on along the x axis, for near-miss studies:
/// the second agent drives on a parallel lane `lateral_offset` meters away.
ScenarioTrackset build_passing_scenario(
  double speed, double lateral_offset, double duration_s, bool footprints = true,
  TimestampMs frame_interval = 100);

/// Writes a scenario in the track-file format read by load_trackfile.
void write_fixture(const std::filesystem::path & path, const ScenarioTrackset & ts);

/// Deterministic uniform double in [lo, hi) independent of the standard
/// library's distribution implementations.
double uniform(std::mt19937_64 & rng, double lo, double hi);

// Brute-force references --------------------------------------------------------

namespace oracle
{

/// Gap between footprints by dense boundary sampling: `samples` points per
/// rectangle, each measured against the other rectangle in its local frame.
/// Falls back to center distance without footprints.
double gap_distance_sampled(const AgentState & a, const AgentState & b, int samples = 10000);

/// Smallest t in [0, inf) where two reachable disks touch, by bisection.
double wttc_bisection(double distance, double speed_sum, double a_max, double radius_sum);

/// Time until the sampled gap closes when both agents keep their velocity,
/// stepping `dt` seconds up to `horizon_s`; nullopt if contact never happens.
std::optional<double> ttc_rollout(
  const AgentState & a, const AgentState & b, double dt = 0.01, double horizon_s = 30.0);

/// Positive root of 0.5 * decel * t^2 + closing * t - gap by bisection.
std::optional<double> pttc_bisection(double gap, double closing, double decel);

/// Coefficient of variation by the textbook two-pass formula with a floored mean.
double speed_cv(const std::vector<double> & speeds, double epsilon_speed);

}  // namespace oracle

struct ReferenceValue
{
  TimestampMs timestamp{0};
  AgentId ego_id{0};
  AgentId adversary_id{0};
  std::optional<double> value;
};

/// Recomputes a pair metric ("dist", "ttc" or "wttc") for every ordered
/// pair in every frame with the oracles above. Scenario limit: 5 agents,
/// 100 frames (InvalidSpec beyond). Other metric ids throw UnsupportedMetric.
std::vector<ReferenceValue> brute_force_reference(
  std::string_view metric_id, const ScenarioTrackset & ts, double a_max_wttc = 7.0);

}  // namespace iutq::synth

#endif  // IUTQ__SYNTH_HPP_

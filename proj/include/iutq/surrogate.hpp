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

#ifndef IUTQ__SURROGATE_HPP_
#define IUTQ__SURROGATE_HPP_

#include "iutq/conflict_grid.hpp"
#include "iutq/scene.hpp"

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace iutq
{

/// Baseline surrogate safety metrics, in comparison-table column order.
enum class SurrogateMetric { dist, et, gt, pet, pttc, ttc, wttc };

inline constexpr std::array<SurrogateMetric, 7> kAllSurrogates{
  SurrogateMetric::dist, SurrogateMetric::et,   SurrogateMetric::gt,  SurrogateMetric::pet,
  SurrogateMetric::pttc, SurrogateMetric::ttc, SurrogateMetric::wttc};

std::string_view to_string(SurrogateMetric m);
std::optional<SurrogateMetric> surrogate_from_string(std::string_view text);

struct SurrogateConfig
{
  double ttc_threshold{1.5};
  double pttc_threshold{1.5};
  double pet_threshold{1.5};
  double et_threshold{1.5};
  double gt_threshold{1.5};
  double wttc_threshold{0.47};
  double dist_threshold{1.0};
  double a_max_wttc{7.0};
  /// Fixed adversary deceleration for PTTC; unset uses the observed one.
  std::optional<double> pttc_decel;
  double conflict_cell{1.0};
  /// Gap time only considers crossings both agents reach within this horizon.
  double gt_horizon_s{10.0};

  double threshold(SurrogateMetric m) const;
  /// Throws InvalidSpec.
  void validate() const;
};

/// Undefined values are never critical; otherwise critical below threshold.
bool is_critical(SurrogateMetric m, const std::optional<double> & value, const SurrogateConfig & config);

// Kinematic kernels -----------------------------------------------------------

/// -d/dt of the center distance under constant velocities; 0 for coincident centers.
double closing_speed(const AgentState & a, const AgentState & b);

/// gap / closing, defined only for closing > 0.
std::optional<double> ttc_kinematic(double gap, double closing);

/// Smallest t >= 0 with 0.5 * decel * t^2 + closing * t = gap.
std::optional<double> pttc_kinematic(double gap, double closing, double decel);

/// Smallest t >= 0 with distance <= speed_sum * t + a_max * t^2 + radius_sum,
/// i.e. two reachable disks each growing by speed_i * t + a_max * t^2 / 2.
double wttc_kinematic(double distance, double speed_sum, double a_max, double radius_sum);

// Pair metrics ----------------------------------------------------------------

/// Closest body gap to any other agent (no floor); nullopt for a lone ego.
std::optional<double> dist_metric(const Scene & scene, AgentId ego_id);

std::optional<double> ttc(const Scene & scene, AgentId ego_id, AgentId adversary_id);

/// Deceleration of the adversary: config.pttc_decel, or the observed braking
/// (backward speed difference) at the scene timestamp.
std::optional<double> pttc(
  const ScenarioTrackset & ts, const Scene & scene, AgentId ego_id, AgentId adversary_id,
  const SurrogateConfig & config);

double wttc(const Scene & scene, AgentId ego_id, AgentId adversary_id, double a_max);

std::optional<double> pet(const ScenarioTrackset & ts, AgentId ego_id, AgentId adversary_id, double cell);
std::optional<double> et(const ScenarioTrackset & ts, AgentId ego_id, AgentId adversary_id, double cell);

/// Arrival-time difference at the crossing of the two constant-velocity
/// center paths; nullopt for standing or parallel agents or crossings behind
/// either agent or beyond the horizon.
std::optional<double> gt(
  const Scene & scene, AgentId ego_id, AgentId adversary_id, double horizon_s = 10.0);

// Batch scoring ---------------------------------------------------------------

struct PairMetricValue
{
  TimestampMs timestamp{0};
  AgentId ego_id{0};
  AgentId adversary_id{0};
  SurrogateMetric metric{SurrogateMetric::dist};
  std::optional<double> value;

  bool defined() const { return value.has_value(); }
};

struct SceneMetricValue
{
  TimestampMs timestamp{0};
  AgentId ego_id{0};
  SurrogateMetric metric{SurrogateMetric::dist};
  std::optional<double> value;
  bool critical{false};
};

struct SurrogateOptions
{
  std::vector<SurrogateMetric> metrics{kAllSurrogates.begin(), kAllSurrogates.end()};
  bool include_pairs{false};
};

struct SurrogateScores
{
  /// Ordered by timestamp, ego id, metric order of the options.
  std::vector<SceneMetricValue> scene_values;
  /// Ordered by timestamp, ego id, adversary id, metric.
  std::vector<PairMetricValue> pairs;
};

/// Scene value = minimum over adversaries of the defined pair values.
/// Trajectory-level PET and ET apply to every frame that holds both agents.
SurrogateScores score_all_surrogates(
  const ScenarioTrackset & ts, const SurrogateConfig & config, const SurrogateOptions & options = {});

/// Single-threaded reference for score_all_surrogates.
SurrogateScores score_all_surrogates_serial(
  const ScenarioTrackset & ts, const SurrogateConfig & config, const SurrogateOptions & options = {});

}  // namespace iutq

#endif  // IUTQ__SURROGATE_HPP_

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

#ifndef IUTQ__IUTQ_ENGINE_HPP_
#define IUTQ__IUTQ_ENGINE_HPP_

#include "iutq/scene.hpp"

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace iutq
{

enum class Penalty { none, rho1, rho2, rho3 };

std::string_view to_string(Penalty p);
/// Throws std::invalid_argument for unknown names.
Penalty penalty_from_string(std::string_view text);

struct IutqConfig
{
  double v_ref{50.0 / 3.6};  // 50 km/h
  double a_ref{1.5};
  double window_s{2.0};
  double decel{4.0};
  double reaction_time{0.0};
  double epsilon_speed{0.1};
  Penalty penalty{Penalty::rho2};
  double threshold_combined{1.5};
  double threshold_penalized{1.0};

  /// Throws InvalidSpec when a parameter is out of range.
  void validate() const;
  double active_threshold() const
  {
    return penalty == Penalty::none ? threshold_combined : threshold_penalized;
  }
};

struct IutqBreakdown
{
  double tq_macro{0.0};
  double tq_meta{0.0};
  double tq_meso{0.0};
  double tq_micro{0.0};
  double tq_combined{0.0};
  double penalty_factor{1.0};
  double tq_final{0.0};
  bool critical{false};
  std::optional<double> d_min;
};

/// Speed coefficient of variation over the whole scene.
double tq_macroscopic(const Scene & scene, double epsilon_speed = 0.1);

/// Share of the other agents that lie inside the ego's braking distance.
double tq_metascopic(const Scene & scene, AgentId ego_id, const IutqConfig & config);

/// Speed coefficient of variation over the ego and the agents inside its
/// braking distance.
double tq_mesoscopic(const Scene & scene, AgentId ego_id, const IutqConfig & config);

/// Ego speed and |acceleration| over the history window, relative to the
/// reference values.
double tq_microscopic(
  const ScenarioTrackset & ts, AgentId ego_id, TimestampMs t, const IutqConfig & config);

double tq_combined(const std::array<double, 4> & sub_metrics);

/// Distance penalty. A lone ego (no d_min) gets 0 unless kind is none.
double penalty_factor(Penalty kind, std::optional<double> d_min);

/// Re-derives tq_final and the critical flag of `b` for another penalty.
IutqBreakdown with_penalty(IutqBreakdown b, Penalty kind, const IutqConfig & config);

/// `scene` must be a frame of `ts`.
IutqBreakdown score_scene(
  const ScenarioTrackset & ts, const Scene & scene, AgentId ego_id, const IutqConfig & config);

struct IutqRecord
{
  TimestampMs timestamp{0};
  AgentId ego_id{0};
  IutqBreakdown breakdown;
};

/// One record per agent per frame, ordered by timestamp then ego id.
/// Frames are scored in parallel; results are identical to score_all_serial.
std::vector<IutqRecord> score_all(const ScenarioTrackset & ts, const IutqConfig & config);

/// Single-threaded reference for score_all.
std::vector<IutqRecord> score_all_serial(const ScenarioTrackset & ts, const IutqConfig & config);

}  // namespace iutq

#endif  // IUTQ__IUTQ_ENGINE_HPP_

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

#include "iutq/iutq_engine.hpp"

#include "iutq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace iutq
{

std::string_view to_string(Penalty p)
{
  switch (p) {
    case Penalty::none:
      return "none";
    case Penalty::rho1:
      return "rho1";
    case Penalty::rho2:
      return "rho2";
    case Penalty::rho3:
      return "rho3";
  }
  return "none";
}

Penalty penalty_from_string(std::string_view text)
{
  if (text == "none" || text == "co") {
    return Penalty::none;
  }
  if (text == "rho1") {
    return Penalty::rho1;
  }
  if (text == "rho2") {
    return Penalty::rho2;
  }
  if (text == "rho3") {
    return Penalty::rho3;
  }
  throw std::invalid_argument("unknown penalty '" + std::string(text) + "'");
}

void IutqConfig::validate() const
{
  auto positive = [](double v, const char * name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidSpec(std::string(name) + " must be positive");
    }
  };
  positive(v_ref, "v_ref");
  positive(a_ref, "a_ref");
  positive(window_s, "window_s");
  positive(decel, "decel");
  positive(epsilon_speed, "epsilon_speed");
  positive(threshold_combined, "threshold_combined");
  positive(threshold_penalized, "threshold_penalized");
  if (!(reaction_time >= 0.0)) {
    throw InvalidSpec("reaction_time must be non-negative");
  }
}

namespace
{

// Population standard deviation over floored mean. Exactly 0 for uniform speeds.
template <typename Range>
double coefficient_of_variation(const Range & speeds, double epsilon_speed)
{
  std::size_t n = 0;
  double sum = 0.0;
  double lo = INFINITY;
  double hi = -INFINITY;
  for (double v : speeds) {
    sum += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    ++n;
  }
  if (n == 0 || lo == hi) {
    return 0.0;
  }
  const double mean = sum / static_cast<double>(n);
  double sq = 0.0;
  for (double v : speeds) {
    sq += (v - mean) * (v - mean);
  }
  const double sigma = std::sqrt(sq / static_cast<double>(n));
  return sigma / std::max(mean, epsilon_speed);
}

double metascopic_from(const Scene & scene, std::size_t within_count)
{
  const std::size_t others = scene.size() - 1;
  if (others == 0) {
    return 0.0;
  }
  return static_cast<double>(within_count) / static_cast<double>(others);
}

double mesoscopic_from(
  const Scene & scene, const AgentState & ego, const std::vector<AgentId> & within,
  double epsilon_speed)
{
  if (within.empty()) {
    return 0.0;
  }
  std::vector<double> speeds;
  speeds.reserve(within.size() + 1);
  speeds.push_back(ego.speed);
  for (AgentId id : within) {
    speeds.push_back(scene.at(id).speed);
  }
  return coefficient_of_variation(speeds, epsilon_speed);
}

}  // namespace

double tq_macroscopic(const Scene & scene, double epsilon_speed)
{
  if (scene.empty()) {
    throw EmptyScene("scene at " + std::to_string(scene.timestamp()) + " ms has no agents");
  }
  std::vector<double> speeds;
  speeds.reserve(scene.size());
  for (const AgentState & a : scene.agents()) {
    speeds.push_back(a.speed);
  }
  return coefficient_of_variation(speeds, epsilon_speed);
}

double tq_metascopic(const Scene & scene, AgentId ego_id, const IutqConfig & config)
{
  const auto within =
    agents_within_braking_distance(scene, ego_id, config.decel, config.reaction_time);
  return metascopic_from(scene, within.size());
}

double tq_mesoscopic(const Scene & scene, AgentId ego_id, const IutqConfig & config)
{
  const auto within =
    agents_within_braking_distance(scene, ego_id, config.decel, config.reaction_time);
  return mesoscopic_from(scene, scene.at(ego_id), within, config.epsilon_speed);
}

double tq_microscopic(
  const ScenarioTrackset & ts, AgentId ego_id, TimestampMs t, const IutqConfig & config)
{
  const KinematicHistory h = history(ts, ego_id, t, config.window_s);
  double abs_accel = 0.0;
  double speed = 0.0;
  for (const KinematicSample & s : h.window) {
    abs_accel += std::abs(s.acceleration);
    speed += s.speed;
  }
  const auto n = static_cast<double>(h.window.size());
  return (abs_accel / n / config.a_ref + speed / n / config.v_ref) / 2.0;
}

double tq_combined(const std::array<double, 4> & sub_metrics)
{
  double sq = 0.0;
  for (double v : sub_metrics) {
    sq += v * v;
  }
  return std::sqrt(sq);
}

double penalty_factor(Penalty kind, std::optional<double> d_min)
{
  if (kind == Penalty::none) {
    return 1.0;
  }
  if (!d_min) {
    return 0.0;
  }
  switch (kind) {
    case Penalty::rho1:
      return 1.5 / *d_min;
    case Penalty::rho2:
      return std::exp(-*d_min / 5.0);
    case Penalty::rho3:
      return std::exp(-(*d_min - 1.0) / 10.0);
    case Penalty::none:
      break;
  }
  return 1.0;
}

IutqBreakdown with_penalty(IutqBreakdown b, Penalty kind, const IutqConfig & config)
{
  b.penalty_factor = penalty_factor(kind, b.d_min);
  b.tq_final = b.penalty_factor * b.tq_combined;
  b.critical = kind == Penalty::none ? b.tq_combined >= config.threshold_combined
                                     : b.tq_final >= config.threshold_penalized;
  return b;
}

namespace
{

IutqBreakdown score_with_macro(
  const ScenarioTrackset & ts, const Scene & scene, AgentId ego_id, const IutqConfig & config,
  double macro)
{
  const AgentState & ego = scene.at(ego_id);
  const auto within =
    agents_within_braking_distance(scene, ego_id, config.decel, config.reaction_time);

  IutqBreakdown b;
  b.tq_macro = macro;
  b.tq_meta = metascopic_from(scene, within.size());
  b.tq_meso = mesoscopic_from(scene, ego, within, config.epsilon_speed);
  b.tq_micro = tq_microscopic(ts, ego_id, scene.timestamp(), config);
  b.tq_combined = tq_combined({b.tq_macro, b.tq_meta, b.tq_meso, b.tq_micro});
  b.d_min = min_gap_to_any(scene, ego_id);
  return with_penalty(b, config.penalty, config);
}

}  // namespace

IutqBreakdown score_scene(
  const ScenarioTrackset & ts, const Scene & scene, AgentId ego_id, const IutqConfig & config)
{
  return score_with_macro(ts, scene, ego_id, config, tq_macroscopic(scene, config.epsilon_speed));
}

std::vector<IutqRecord> score_all(const ScenarioTrackset & ts, const IutqConfig & config)
{
  const auto frames = ts.frames();
  std::vector<std::size_t> offsets(frames.size() + 1, 0);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    offsets[f + 1] = offsets[f] + frames[f].size();
  }
  std::vector<IutqRecord> out(offsets.back());

  const auto n_frames = static_cast<std::ptrdiff_t>(frames.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t f = 0; f < n_frames; ++f) {
    const Scene & scene = frames[f];
    if (scene.empty()) {
      continue;
    }
    const double macro = tq_macroscopic(scene, config.epsilon_speed);
    std::size_t slot = offsets[f];
    for (const AgentState & ego : scene.agents()) {
      out[slot++] = {scene.timestamp(), ego.id, score_with_macro(ts, scene, ego.id, config, macro)};
    }
  }
  return out;
}

std::vector<IutqRecord> score_all_serial(const ScenarioTrackset & ts, const IutqConfig & config)
{
  std::vector<IutqRecord> out;
  for (const Scene & scene : ts.frames()) {
    for (const AgentState & ego : scene.agents()) {
      out.push_back({scene.timestamp(), ego.id, score_scene(ts, scene, ego.id, config)});
    }
  }
  return out;
}

}  // namespace iutq

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

#include "iutq/surrogate.hpp"

#include "iutq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

namespace iutq
{

std::string_view to_string(SurrogateMetric m)
{
  switch (m) {
    case SurrogateMetric::dist:
      return "dist";
    case SurrogateMetric::et:
      return "et";
    case SurrogateMetric::gt:
      return "gt";
    case SurrogateMetric::pet:
      return "pet";
    case SurrogateMetric::pttc:
      return "pttc";
    case SurrogateMetric::ttc:
      return "ttc";
    case SurrogateMetric::wttc:
      return "wttc";
  }
  return "dist";
}

std::optional<SurrogateMetric> surrogate_from_string(std::string_view text)
{
  for (SurrogateMetric m : kAllSurrogates) {
    if (to_string(m) == text) {
      return m;
    }
  }
  return std::nullopt;
}

double SurrogateConfig::threshold(SurrogateMetric m) const
{
  switch (m) {
    case SurrogateMetric::dist:
      return dist_threshold;
    case SurrogateMetric::et:
      return et_threshold;
    case SurrogateMetric::gt:
      return gt_threshold;
    case SurrogateMetric::pet:
      return pet_threshold;
    case SurrogateMetric::pttc:
      return pttc_threshold;
    case SurrogateMetric::ttc:
      return ttc_threshold;
    case SurrogateMetric::wttc:
      return wttc_threshold;
  }
  return 0.0;
}

void SurrogateConfig::validate() const
{
  for (SurrogateMetric m : kAllSurrogates) {
    if (!(threshold(m) > 0.0)) {
      throw InvalidSpec(std::string(to_string(m)) + " threshold must be positive");
    }
  }
  if (!(a_max_wttc > 0.0)) {
    throw InvalidSpec("a_max_wttc must be positive");
  }
  if (!(conflict_cell > 0.0)) {
    throw InvalidSpec("conflict_cell must be positive");
  }
  if (!(gt_horizon_s > 0.0)) {
    throw InvalidSpec("gt_horizon_s must be positive");
  }
  if (pttc_decel && !(*pttc_decel >= 0.0)) {
    throw InvalidSpec("pttc_decel must be non-negative");
  }
}

bool is_critical(SurrogateMetric m, const std::optional<double> & value, const SurrogateConfig & config)
{
  return value.has_value() && *value < config.threshold(m);
}

double closing_speed(const AgentState & a, const AgentState & b)
{
  const Vec2 d = b.position - a.position;
  const double dist = d.norm();
  if (dist == 0.0) {
    return 0.0;
  }
  return -d.dot(b.velocity - a.velocity) / dist;
}

std::optional<double> ttc_kinematic(double gap, double closing)
{
  if (!(closing > 0.0)) {
    return std::nullopt;
  }
  return std::max(gap, 0.0) / closing;
}

std::optional<double> pttc_kinematic(double gap, double closing, double decel)
{
  decel = std::max(decel, 0.0);
  if (decel == 0.0) {
    return ttc_kinematic(gap, closing);
  }
  if (gap <= 0.0) {
    return 0.0;
  }
  const double root = std::sqrt(closing * closing + 2.0 * decel * gap);
  if (closing >= 0.0) {
    return 2.0 * gap / (closing + root);
  }
  return (root - closing) / decel;
}

double wttc_kinematic(double distance, double speed_sum, double a_max, double radius_sum)
{
  const double gap = distance - radius_sum;
  if (gap <= 0.0) {
    return 0.0;
  }
  // a_max * t^2 + speed_sum * t - gap = 0, stable form of the positive root.
  return 2.0 * gap / (speed_sum + std::sqrt(speed_sum * speed_sum + 4.0 * a_max * gap));
}

std::optional<double> dist_metric(const Scene & scene, AgentId ego_id)
{
  const AgentState & ego = scene.at(ego_id);
  std::optional<double> best;
  for (const AgentState & other : scene.agents()) {
    if (other.id == ego_id) {
      continue;
    }
    const double gap = gap_distance(ego, other);
    if (!best || gap < *best) {
      best = gap;
    }
  }
  return best;
}

std::optional<double> ttc(const Scene & scene, AgentId ego_id, AgentId adversary_id)
{
  const AgentState & ego = scene.at(ego_id);
  const AgentState & adv = scene.at(adversary_id);
  return ttc_kinematic(gap_distance(ego, adv), closing_speed(ego, adv));
}

namespace
{

double observed_deceleration(const ScenarioTrackset & ts, const AgentState & agent)
{
  const AgentState * prev = ts.state(agent.id, agent.timestamp - ts.frame_interval());
  if (prev == nullptr) {
    return 0.0;
  }
  const double dt = static_cast<double>(ts.frame_interval()) / 1000.0;
  return std::max(0.0, (prev->speed - agent.speed) / dt);
}

double pttc_decel_for(const ScenarioTrackset & ts, const AgentState & adv, const SurrogateConfig & config)
{
  return config.pttc_decel ? *config.pttc_decel : observed_deceleration(ts, adv);
}

}  // namespace

std::optional<double> pttc(
  const ScenarioTrackset & ts, const Scene & scene, AgentId ego_id, AgentId adversary_id,
  const SurrogateConfig & config)
{
  const AgentState & ego = scene.at(ego_id);
  const AgentState & adv = scene.at(adversary_id);
  return pttc_kinematic(gap_distance(ego, adv), closing_speed(ego, adv), pttc_decel_for(ts, adv, config));
}

double wttc(const Scene & scene, AgentId ego_id, AgentId adversary_id, double a_max)
{
  const AgentState & ego = scene.at(ego_id);
  const AgentState & adv = scene.at(adversary_id);
  return wttc_kinematic(
    center_distance(ego, adv), ego.speed + adv.speed, a_max, ego.circumradius() + adv.circumradius());
}

std::optional<double> pet(const ScenarioTrackset & ts, AgentId ego_id, AgentId adversary_id, double cell)
{
  return pet_from(conflict_regions(ts, ego_id, adversary_id, cell));
}

std::optional<double> et(const ScenarioTrackset & ts, AgentId ego_id, AgentId adversary_id, double cell)
{
  return et_from(conflict_regions(ts, ego_id, adversary_id, cell));
}

namespace
{

std::optional<double> gap_time(const AgentState & ego, const AgentState & adv, double horizon_s)
{
  if (ego.speed == 0.0 || adv.speed == 0.0) {
    return std::nullopt;
  }
  const double denom = ego.velocity.cross(adv.velocity);
  // Directions within ~1e-9 rad count as parallel: the paths never cross.
  if (std::abs(denom) <= 1e-9 * ego.speed * adv.speed) {
    return std::nullopt;
  }
  const Vec2 d = adv.position - ego.position;
  const double t_ego = d.cross(adv.velocity) / denom;
  const double t_adv = d.cross(ego.velocity) / denom;
  if (t_ego < 0.0 || t_adv < 0.0 || t_ego > horizon_s || t_adv > horizon_s) {
    return std::nullopt;
  }
  return std::abs(t_ego - t_adv);
}

}  // namespace

std::optional<double> gt(const Scene & scene, AgentId ego_id, AgentId adversary_id, double horizon_s)
{
  return gap_time(scene.at(ego_id), scene.at(adversary_id), horizon_s);
}

// Batch scoring ---------------------------------------------------------------

namespace
{

using AgentPair = std::pair<AgentId, AgentId>;

AgentPair ordered(AgentId a, AgentId b)
{
  return a < b ? AgentPair{a, b} : AgentPair{b, a};
}

struct EncroachmentValues
{
  std::optional<double> pet;
  std::optional<double> et;
};

EncroachmentValues encroachment(const ConflictIndex & index, AgentId a, AgentId b)
{
  const auto [lo, hi] = ordered(a, b);
  const auto cells = index.conflict_regions(lo, hi);
  return {pet_from(cells), et_from(cells)};
}

bool needs_encroachment(const SurrogateOptions & options)
{
  return std::any_of(options.metrics.begin(), options.metrics.end(), [](SurrogateMetric m) {
    return m == SurrogateMetric::pet || m == SurrogateMetric::et;
  });
}

void fold_min(std::optional<double> & best, const std::optional<double> & v)
{
  if (v && (!best || *v < *best)) {
    best = v;
  }
}

// Encroachment values of every co-present pair, sorted for binary search.
class EncroachmentTable
{
public:
  EncroachmentTable(const ScenarioTrackset & ts, const ConflictIndex & index)
  {
    for (const Scene & scene : ts.frames()) {
      const auto agents = scene.agents();
      for (std::size_t i = 0; i < agents.size(); ++i) {
        for (std::size_t j = i + 1; j < agents.size(); ++j) {
          keys_.emplace_back(agents[i].id, agents[j].id);
        }
      }
    }
    std::sort(keys_.begin(), keys_.end());
    keys_.erase(std::unique(keys_.begin(), keys_.end()), keys_.end());
    values_.resize(keys_.size());
    const auto n = static_cast<std::ptrdiff_t>(keys_.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      values_[k] = encroachment(index, keys_[k].first, keys_[k].second);
    }
  }

  const EncroachmentValues & at(AgentId a, AgentId b) const
  {
    auto it = std::lower_bound(keys_.begin(), keys_.end(), ordered(a, b));
    return values_[static_cast<std::size_t>(it - keys_.begin())];
  }

private:
  std::vector<AgentPair> keys_;
  std::vector<EncroachmentValues> values_;
};

// Scores one frame: scene-level minima into `scene_out` (agents x metrics
// slots), pair values appended to `pairs_out` when non-null.
void score_frame(
  const ScenarioTrackset & ts, const Scene & scene, const SurrogateConfig & config,
  const std::vector<SurrogateMetric> & metrics, const EncroachmentTable * table,
  SceneMetricValue * scene_out, std::vector<PairMetricValue> * pairs_out)
{
  std::vector<std::optional<double>> best(metrics.size());
  std::vector<std::optional<double>> pair(metrics.size());
  for (const AgentState & ego : scene.agents()) {
    std::fill(best.begin(), best.end(), std::nullopt);
    for (const AgentState & adv : scene.agents()) {
      if (adv.id == ego.id) {
        continue;
      }
      const double gap = gap_distance(ego, adv);
      const double closing = closing_speed(ego, adv);
      for (std::size_t m = 0; m < metrics.size(); ++m) {
        switch (metrics[m]) {
          case SurrogateMetric::dist:
            pair[m] = gap;
            break;
          case SurrogateMetric::ttc:
            pair[m] = ttc_kinematic(gap, closing);
            break;
          case SurrogateMetric::pttc:
            pair[m] = pttc_kinematic(gap, closing, pttc_decel_for(ts, adv, config));
            break;
          case SurrogateMetric::wttc:
            pair[m] = wttc_kinematic(
              center_distance(ego, adv), ego.speed + adv.speed, config.a_max_wttc,
              ego.circumradius() + adv.circumradius());
            break;
          case SurrogateMetric::gt:
            pair[m] = gap_time(ego, adv, config.gt_horizon_s);
            break;
          case SurrogateMetric::pet:
            pair[m] = table->at(ego.id, adv.id).pet;
            break;
          case SurrogateMetric::et:
            pair[m] = table->at(ego.id, adv.id).et;
            break;
        }
        fold_min(best[m], pair[m]);
        if (pairs_out != nullptr) {
          pairs_out->push_back({scene.timestamp(), ego.id, adv.id, metrics[m], pair[m]});
        }
      }
    }
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      *scene_out++ = {
        scene.timestamp(), ego.id, metrics[m], best[m], is_critical(metrics[m], best[m], config)};
    }
  }
}

}  // namespace

SurrogateScores score_all_surrogates(
  const ScenarioTrackset & ts, const SurrogateConfig & config, const SurrogateOptions & options)
{
  config.validate();
  std::optional<ConflictIndex> index;
  std::optional<EncroachmentTable> table;
  if (needs_encroachment(options)) {
    index.emplace(ts, config.conflict_cell);
    table.emplace(ts, *index);
  }

  const auto frames = ts.frames();
  const std::size_t per_agent = options.metrics.size();
  std::vector<std::size_t> offsets(frames.size() + 1, 0);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    offsets[f + 1] = offsets[f] + frames[f].size() * per_agent;
  }

  SurrogateScores scores;
  scores.scene_values.resize(offsets.back());
  std::vector<std::vector<PairMetricValue>> pair_buckets(options.include_pairs ? frames.size() : 0);

  const auto n_frames = static_cast<std::ptrdiff_t>(frames.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t f = 0; f < n_frames; ++f) {
    score_frame(
      ts, frames[f], config, options.metrics, table ? &*table : nullptr,
      scores.scene_values.data() + offsets[f],
      options.include_pairs ? &pair_buckets[f] : nullptr);
  }

  for (auto & bucket : pair_buckets) {
    scores.pairs.insert(scores.pairs.end(), bucket.begin(), bucket.end());
  }
  return scores;
}

SurrogateScores score_all_surrogates_serial(
  const ScenarioTrackset & ts, const SurrogateConfig & config, const SurrogateOptions & options)
{
  config.validate();
  std::optional<ConflictIndex> index;
  if (needs_encroachment(options)) {
    index.emplace(ts, config.conflict_cell, false);
  }
  std::map<AgentPair, EncroachmentValues> cache;
  auto encroach = [&](AgentId a, AgentId b) -> const EncroachmentValues & {
    const AgentPair key = ordered(a, b);
    auto it = cache.find(key);
    if (it == cache.end()) {
      it = cache.emplace(key, encroachment(*index, a, b)).first;
    }
    return it->second;
  };

  SurrogateScores scores;
  for (const Scene & scene : ts.frames()) {
    for (const AgentState & ego : scene.agents()) {
      std::vector<std::optional<double>> best(options.metrics.size());
      for (const AgentState & adv : scene.agents()) {
        if (adv.id == ego.id) {
          continue;
        }
        for (std::size_t m = 0; m < options.metrics.size(); ++m) {
          std::optional<double> v;
          switch (options.metrics[m]) {
            case SurrogateMetric::dist:
              v = gap_distance(ego, adv);
              break;
            case SurrogateMetric::ttc:
              v = ttc(scene, ego.id, adv.id);
              break;
            case SurrogateMetric::pttc:
              v = pttc(ts, scene, ego.id, adv.id, config);
              break;
            case SurrogateMetric::wttc:
              v = wttc(scene, ego.id, adv.id, config.a_max_wttc);
              break;
            case SurrogateMetric::gt:
              v = gt(scene, ego.id, adv.id, config.gt_horizon_s);
              break;
            case SurrogateMetric::pet:
              v = encroach(ego.id, adv.id).pet;
              break;
            case SurrogateMetric::et:
              v = encroach(ego.id, adv.id).et;
              break;
          }
          fold_min(best[m], v);
          if (options.include_pairs) {
            scores.pairs.push_back({scene.timestamp(), ego.id, adv.id, options.metrics[m], v});
          }
        }
      }
      for (std::size_t m = 0; m < options.metrics.size(); ++m) {
        scores.scene_values.push_back(
          {scene.timestamp(), ego.id, options.metrics[m], best[m],
           is_critical(options.metrics[m], best[m], config)});
      }
    }
  }
  return scores;
}

}  // namespace iutq

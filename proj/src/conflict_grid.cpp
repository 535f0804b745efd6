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

#include "iutq/conflict_grid.hpp"

#include "iutq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace iutq
{

namespace
{

std::int64_t cell_index(double coord, double cell)
{
  return static_cast<std::int64_t>(std::floor(coord / cell));
}

void mark(OccupancyMap & map, const GridCell & c, double entry, double exit)
{
  auto [it, inserted] = map.try_emplace(c, Occupancy{entry, exit});
  if (!inserted) {
    it->second.entry = std::min(it->second.entry, entry);
    it->second.exit = std::max(it->second.exit, exit);
  }
}

void rasterize(
  OccupancyMap & map, const Vec2 & center, double heading, const std::optional<Footprint> & fp,
  double cell, double entry, double exit)
{
  if (!fp) {
    mark(map, {cell_index(center.x, cell), cell_index(center.y, cell)}, entry, exit);
    return;
  }
  const OrientedBox box = OrientedBox::make(center, heading, *fp);
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  for (const Vec2 & c : box.corners()) {
    min_x = std::min(min_x, c.x);
    min_y = std::min(min_y, c.y);
    max_x = std::max(max_x, c.x);
    max_y = std::max(max_y, c.y);
  }
  const double half = 0.5 * cell;
  for (std::int64_t ix = cell_index(min_x, cell); ix <= cell_index(max_x, cell); ++ix) {
    for (std::int64_t iy = cell_index(min_y, cell); iy <= cell_index(max_y, cell); ++iy) {
      const OrientedBox square{
        {(static_cast<double>(ix) + 0.5) * cell, (static_cast<double>(iy) + 0.5) * cell},
        {1.0, 0.0},
        {0.0, 1.0},
        half,
        half};
      if (boxes_overlap(square, box)) {
        mark(map, {ix, iy}, entry, exit);
      }
    }
  }
}

double angle_delta(double from, double to)
{
  return normalize_angle(to - from);
}

}  // namespace

OccupancyMap agent_occupancy(const ScenarioTrackset & ts, AgentId id, double cell)
{
  const auto points = ts.track(id);
  OccupancyMap map;
  const TimestampMs dt = ts.frame_interval();
  for (std::size_t k = 0; k < points.size(); ++k) {
    const AgentState & s = ts.state_of(points[k]);
    const double t0 = static_cast<double>(points[k].timestamp);
    const bool has_next = k + 1 < points.size() && points[k + 1].timestamp == points[k].timestamp + dt;
    if (!has_next) {
      rasterize(map, s.position, s.heading, s.footprint, cell, t0 / 1000.0,
                (t0 + static_cast<double>(dt)) / 1000.0);
      continue;
    }
    const AgentState & next = ts.state_of(points[k + 1]);
    const double turn = angle_delta(s.heading, next.heading);
    const double sweep = (next.position - s.position).norm() + std::abs(turn) * s.circumradius();
    const auto steps = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(sweep / (0.5 * cell))));
    const double step_ms = static_cast<double>(dt) / static_cast<double>(steps);
    for (std::int64_t j = 0; j < steps; ++j) {
      const double u = static_cast<double>(j) / static_cast<double>(steps);
      const Vec2 pos = s.position + (next.position - s.position) * u;
      const double heading = s.heading + turn * u;
      const double entry = (t0 + step_ms * static_cast<double>(j)) / 1000.0;
      const double exit = (t0 + step_ms * static_cast<double>(j + 1)) / 1000.0;
      rasterize(map, pos, heading, s.footprint, cell, entry, exit);
    }
  }
  return map;
}

std::vector<SharedCell> shared_cells(const OccupancyMap & first, const OccupancyMap & second)
{
  std::vector<SharedCell> out;
  const bool first_smaller = first.size() <= second.size();
  const OccupancyMap & small = first_smaller ? first : second;
  const OccupancyMap & large = first_smaller ? second : first;
  for (const auto & [cell, occ] : small) {
    auto it = large.find(cell);
    if (it == large.end()) {
      continue;
    }
    if (first_smaller) {
      out.push_back({cell, occ, it->second});
    } else {
      out.push_back({cell, it->second, occ});
    }
  }
  std::sort(out.begin(), out.end(), [](const SharedCell & a, const SharedCell & b) { return a.cell < b.cell; });
  return out;
}

std::vector<SharedCell> conflict_regions(
  const ScenarioTrackset & ts, AgentId ego_id, AgentId adversary_id, double cell)
{
  for (AgentId id : {ego_id, adversary_id}) {
    if (ts.track(id).empty()) {
      throw MissingAgent("agent " + std::to_string(id) + " does not appear in the recording");
    }
  }
  return shared_cells(agent_occupancy(ts, ego_id, cell), agent_occupancy(ts, adversary_id, cell));
}

std::optional<double> pet_from(const std::vector<SharedCell> & cells)
{
  std::optional<double> best;
  for (const SharedCell & c : cells) {
    double gap = 0.0;
    if (c.first.exit <= c.second.entry) {
      gap = c.second.entry - c.first.exit;
    } else if (c.second.exit <= c.first.entry) {
      gap = c.first.entry - c.second.exit;
    }
    if (!best || gap < *best) {
      best = gap;
    }
  }
  return best;
}

std::optional<double> et_from(const std::vector<SharedCell> & cells)
{
  if (cells.empty()) {
    return std::nullopt;
  }
  Occupancy a{INFINITY, -INFINITY};
  Occupancy b{INFINITY, -INFINITY};
  for (const SharedCell & c : cells) {
    a.entry = std::min(a.entry, c.first.entry);
    a.exit = std::max(a.exit, c.first.exit);
    b.entry = std::min(b.entry, c.second.entry);
    b.exit = std::max(b.exit, c.second.exit);
  }
  if (a.entry == b.entry) {
    return std::min(a.exit - a.entry, b.exit - b.entry);
  }
  const Occupancy & leader = a.entry < b.entry ? a : b;
  return leader.exit - leader.entry;
}

ConflictIndex::ConflictIndex(const ScenarioTrackset & ts, double cell, bool parallel) : cell_(cell)
{
  const std::vector<AgentId> ids = ts.agent_ids();
  std::vector<OccupancyMap> maps(ids.size());
  const auto n = static_cast<std::ptrdiff_t>(ids.size());
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    maps[i] = agent_occupancy(ts, ids[i], cell);
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    maps_.emplace(ids[i], std::move(maps[i]));
  }
}

const OccupancyMap & ConflictIndex::occupancy(AgentId id) const
{
  auto it = maps_.find(id);
  if (it == maps_.end()) {
    throw MissingAgent("agent " + std::to_string(id) + " does not appear in the recording");
  }
  return it->second;
}

std::vector<SharedCell> ConflictIndex::conflict_regions(AgentId first, AgentId second) const
{
  return shared_cells(occupancy(first), occupancy(second));
}

}  // namespace iutq

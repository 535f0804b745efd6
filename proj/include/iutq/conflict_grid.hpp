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

#ifndef IUTQ__CONFLICT_GRID_HPP_
#define IUTQ__CONFLICT_GRID_HPP_

#include "iutq/scene.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

namespace iutq
{

struct GridCell
{
  std::int64_t ix{0};
  std::int64_t iy{0};

  auto operator<=>(const GridCell &) const = default;
};

struct GridCellHash
{
  std::size_t operator()(const GridCell & c) const noexcept
  {
    const auto h = static_cast<std::uint64_t>(c.ix) * 0x9E3779B97F4A7C15ULL ^
                   (static_cast<std::uint64_t>(c.iy) + 0x632BE59BD9B4E019ULL);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

/// Half-open occupation interval [entry, exit) in seconds since recording start.
struct Occupancy
{
  double entry{0.0};
  double exit{0.0};
};

using OccupancyMap = std::unordered_map<GridCell, Occupancy, GridCellHash>;

/// Every grid cell swept by one agent's footprint (or center point, without a
/// footprint) over the recording, with first entry and last exit times.
///
/// A frame followed by another frame of the same agent covers
/// [t_k, t_k+1) and is subdivided so that consecutive poses move by at most
/// half a cell; the last frame of a contiguous run covers one frame interval.
OccupancyMap agent_occupancy(const ScenarioTrackset & ts, AgentId id, double cell);

struct SharedCell
{
  GridCell cell;
  Occupancy first;   // the agent passed first as argument
  Occupancy second;  // the other agent
};

/// Cells visited by both agents, sorted by cell.
std::vector<SharedCell> shared_cells(const OccupancyMap & first, const OccupancyMap & second);

/// Throws MissingAgent when either agent never appears.
std::vector<SharedCell> conflict_regions(
  const ScenarioTrackset & ts, AgentId ego_id, AgentId adversary_id, double cell);

/// Minimum gap between one agent leaving and the other entering a shared
/// cell; 0 on co-occupation; nullopt without shared cells.
std::optional<double> pet_from(const std::vector<SharedCell> & cells);

/// Occupation time of the shared region by whichever agent entered it first.
std::optional<double> et_from(const std::vector<SharedCell> & cells);

/// Per-agent occupancy for a whole recording. Read-only after construction.
class ConflictIndex
{
public:
  /// `parallel` builds the per-agent maps on the OpenMP pool.
  ConflictIndex(const ScenarioTrackset & ts, double cell, bool parallel = true);

  double cell() const { return cell_; }
  /// Throws MissingAgent.
  const OccupancyMap & occupancy(AgentId id) const;
  std::vector<SharedCell> conflict_regions(AgentId first, AgentId second) const;

private:
  double cell_;
  std::unordered_map<AgentId, OccupancyMap> maps_;
};

}  // namespace iutq

#endif  // IUTQ__CONFLICT_GRID_HPP_

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

#ifndef IUTQ_TESTS__TEST_SUPPORT_HPP_
#define IUTQ_TESTS__TEST_SUPPORT_HPP_

#include "iutq/scene.hpp"
#include "iutq/synth.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace iutq::test
{

inline AgentState car(
  AgentId id, double x, double y, double vx = 0.0, double vy = 0.0, TimestampMs t = 0,
  std::optional<Footprint> fp = Footprint{4.5, 1.8})
{
  const double heading = (vx == 0.0 && vy == 0.0) ? 0.0 : std::atan2(vy, vx);
  return AgentState::make(id, t, {x, y}, {vx, vy}, heading, fp);
}

inline AgentState point(AgentId id, double x, double y, double vx = 0.0, double vy = 0.0, TimestampMs t = 0)
{
  return car(id, x, y, vx, vy, t, std::nullopt);
}

/// Every agent keeps its velocity; positions advance from the t = 0 pose.
inline ScenarioTrackset constant_velocity(
  const std::vector<AgentState> & start, std::size_t frames, TimestampMs interval = 100)
{
  std::vector<Scene> out;
  for (std::size_t k = 0; k < frames; ++k) {
    const auto t = static_cast<TimestampMs>(k) * interval;
    std::vector<AgentState> agents;
    for (const AgentState & a : start) {
      const double dt = static_cast<double>(t) / 1000.0;
      agents.push_back(
        AgentState::make(a.id, t, a.position + a.velocity * dt, a.velocity, a.heading, a.footprint, a.type));
    }
    out.emplace_back(t, std::move(agents));
  }
  return ScenarioTrackset(std::move(out), interval);
}

/// Small hand-rolled generator for property tests.
class Gen
{
public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double real(double lo, double hi) { return synth::uniform(rng_, lo, hi); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(real(0.0, static_cast<double>(n))); }
  bool coin(double p = 0.5) { return real(0.0, 1.0) < p; }
  double angle() { return real(-std::numbers::pi, std::numbers::pi); }

  AgentState agent(AgentId id, double extent = 30.0, double max_speed = 15.0, bool footprint = true)
  {
    const double x = real(-extent, extent);
    const double y = real(-extent, extent);
    const double h = angle();
    const double s = real(0.0, max_speed);
    std::optional<Footprint> fp;
    if (footprint) {
      fp = Footprint{real(3.0, 12.0), real(1.5, 2.6)};
    }
    return AgentState::make(id, 0, {x, y}, {s * std::cos(h), s * std::sin(h)}, h, fp);
  }

  std::mt19937_64 & engine() { return rng_; }

private:
  std::mt19937_64 rng_;
};

inline std::filesystem::path scratch_dir(const std::string & name)
{
  const auto dir = std::filesystem::temp_directory_path() / ("iutq_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace iutq::test

#endif  // IUTQ_TESTS__TEST_SUPPORT_HPP_

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

#include "iutq/synth.hpp"

#include "iutq/errors.hpp"
#include "iutq/ingestion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace iutq::synth
{

double uniform(std::mt19937_64 & rng, double lo, double hi)
{
  // 53 random mantissa bits; the engine output is specified bit for bit.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

namespace
{

constexpr Footprint kCar{4.5, 1.8};
constexpr Footprint kTruck{12.0, 2.5};

std::size_t pick(std::mt19937_64 & rng, std::size_t n)
{
  return static_cast<std::size_t>(uniform(rng, 0.0, static_cast<double>(n)));
}

// Quarter turns by component swaps keep |v| bitwise identical across agents.
Vec2 quarter_turn(const Vec2 & v, std::size_t k)
{
  switch (k % 4) {
    case 1:
      return {-v.y, v.x};
    case 2:
      return {-v.x, -v.y};
    case 3:
      return {v.y, -v.x};
    default:
      return v;
  }
}

struct Placement
{
  Vec2 position;
  double base_heading{0.0};
  std::size_t quarter{0};
};

std::vector<Placement> place(const SceneSpec & spec, std::mt19937_64 & rng)
{
  const std::size_t n = spec.n_agents;
  const double b = spec.bounds;
  std::vector<Placement> out(n);
  switch (spec.spatial_law) {
    case SpatialLaw::grid: {
      const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
      const double pitch = b / static_cast<double>(cols);
      const double base = uniform(rng, -std::numbers::pi, std::numbers::pi);
      for (std::size_t i = 0; i < n; ++i) {
        const double jx = uniform(rng, -0.2, 0.2) * pitch;
        const double jy = uniform(rng, -0.2, 0.2) * pitch;
        out[i].position = {
          (static_cast<double>(i % cols) + 0.5) * pitch + jx, (static_cast<double>(i / cols) + 0.5) * pitch + jy};
        out[i].base_heading = base;
        out[i].quarter = pick(rng, 4);
      }
      break;
    }
    case SpatialLaw::corridor: {
      const double pitch = b / static_cast<double>((n + 1) / 2);
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lane = i % 2;
        const double jx = uniform(rng, -0.2, 0.2) * pitch;
        out[i].position = {(static_cast<double>(i / 2) + 0.5) * pitch + jx, lane == 0 ? -1.75 : 1.75};
        out[i].quarter = lane == 0 ? 0 : 2;
      }
      break;
    }
    case SpatialLaw::crossing: {
      const double pitch = 0.5 * b / static_cast<double>((n + 1) / 2);
      for (std::size_t i = 0; i < n; ++i) {
        const double along = -(static_cast<double>(i / 2) + 0.5) * pitch + uniform(rng, -0.2, 0.2) * pitch;
        if (i % 2 == 0) {
          out[i].position = {along, 0.0};
          out[i].quarter = 0;
        } else {
          out[i].position = {0.0, along};
          out[i].quarter = 1;
        }
      }
      break;
    }
  }
  return out;
}

std::vector<double> speeds(const SceneSpec & spec, std::mt19937_64 & rng)
{
  std::vector<double> out(spec.n_agents, 0.0);
  switch (spec.speed_law) {
    case SpeedLaw::uniform: {
      const double s = uniform(rng, 2.0, 15.0);
      std::fill(out.begin(), out.end(), s);
      break;
    }
    case SpeedLaw::bimodal:
      for (double & s : out) {
        s = uniform(rng, 0.0, 1.0) < 0.5 ? uniform(rng, 0.0, 2.0) : uniform(rng, 10.0, 15.0);
      }
      break;
    case SpeedLaw::all_standing:
      break;
    case SpeedLaw::one_fast:
      out.front() = 10.0;
      break;
  }
  return out;
}

}  // namespace

void SceneSpec::validate() const
{
  if (n_agents == 0) {
    throw InvalidSpec("scene needs at least one agent");
  }
  if (!(bounds > 0.0) || !std::isfinite(bounds)) {
    throw InvalidSpec("scene bounds must be positive");
  }
}

Scene build_scene(const SceneSpec & spec)
{
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const auto placements = place(spec, rng);
  const auto speed = speeds(spec, rng);

  std::vector<AgentState> agents;
  agents.reserve(spec.n_agents);
  for (std::size_t i = 0; i < spec.n_agents; ++i) {
    const Placement & p = placements[i];
    const Vec2 unit{std::cos(p.base_heading), std::sin(p.base_heading)};
    const Vec2 velocity = quarter_turn(unit * speed[i], p.quarter);
    const double heading = p.base_heading + static_cast<double>(p.quarter) * 0.5 * std::numbers::pi;

    const bool truck = uniform(rng, 0.0, 1.0) < 0.1;
    std::optional<Footprint> fp;
    if (spec.footprints) {
      fp = truck ? kTruck : kCar;
    }
    agents.push_back(AgentState::make(
      static_cast<AgentId>(i + 1), spec.timestamp, p.position, velocity, heading, fp,
      truck ? AgentType::truck_bus : AgentType::car));
  }
  return Scene(spec.timestamp, std::move(agents));
}

ScenarioTrackset build_scenario(const ScenarioSpec & spec)
{
  if (spec.n_frames == 0) {
    throw InvalidSpec("scenario needs at least one frame");
  }
  if (spec.frame_interval <= 0) {
    throw InvalidSpec("frame interval must be positive");
  }
  const Scene first = build_scene(spec.scene);

  struct Profile
  {
    double amplitude;
    double omega;
    double phase;
    double yaw_rate;
  };
  std::mt19937_64 rng(spec.scene.seed ^ 0x9E3779B97F4A7C15ULL);
  std::vector<Profile> profiles;
  std::vector<AgentState> state(first.agents().begin(), first.agents().end());
  for (const AgentState & a : state) {
    Profile p{};
    p.amplitude = uniform(rng, 0.0, 1.5);
    p.omega = uniform(rng, 0.1, 0.6);
    p.phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    p.yaw_rate = uniform(rng, -0.15, 0.15);
    if (a.speed == 0.0) {
      p.amplitude = 0.0;  // parked agents stay parked
      p.yaw_rate = 0.0;
    }
    profiles.push_back(p);
  }

  const double dt = static_cast<double>(spec.frame_interval) / 1000.0;
  std::vector<Scene> frames;
  frames.reserve(spec.n_frames);
  const TimestampMs t0 = spec.scene.timestamp;
  frames.push_back(first);
  for (std::size_t k = 1; k < spec.n_frames; ++k) {
    const TimestampMs t = t0 + static_cast<TimestampMs>(k) * spec.frame_interval;
    const double ts = static_cast<double>(k) * dt;
    std::vector<AgentState> next;
    next.reserve(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) {
      const AgentState & a = state[i];
      const Profile & p = profiles[i];
      const double accel = p.amplitude * std::sin(p.omega * ts + p.phase);
      const double speed = std::max(0.0, a.speed + accel * dt);
      const double heading = a.heading + p.yaw_rate * dt;
      const Vec2 velocity{speed * std::cos(heading), speed * std::sin(heading)};
      next.push_back(
        AgentState::make(a.id, t, a.position + velocity * dt, velocity, heading, a.footprint, a.type));
    }
    state = next;
    frames.emplace_back(t, std::move(next));
  }
  return ScenarioTrackset(std::move(frames), spec.frame_interval);
}

ScenarioTrackset build_crossing_scenario(const CrossingSpec & spec)
{
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(spec.speed_first) || !positive(spec.speed_second)) {
    throw InvalidSpec("crossing speeds must be positive");
  }
  if (!(spec.lead_time_s >= 0.0) || !(spec.tail_time_s >= 0.0) || !std::isfinite(spec.offset_s)) {
    throw InvalidSpec("crossing times must be finite and non-negative");
  }
  if (spec.frame_interval <= 0) {
    throw InvalidSpec("frame interval must be positive");
  }
  const TimestampMs arrive_first = std::llround(spec.lead_time_s * 1000.0);
  const TimestampMs arrive_second = arrive_first + std::llround(spec.offset_s * 1000.0);
  if (arrive_second < 0) {
    throw InvalidSpec("second agent would arrive before the recording starts");
  }
  const TimestampMs end = std::max(arrive_first, arrive_second) + std::llround(spec.tail_time_s * 1000.0);

  std::optional<Footprint> fp;
  if (spec.footprints) {
    fp = kCar;
  }
  std::vector<Scene> frames;
  for (TimestampMs t = 0; t <= end; t += spec.frame_interval) {
    const double x = spec.speed_first * static_cast<double>(t - arrive_first) / 1000.0;
    const double y = spec.speed_second * static_cast<double>(t - arrive_second) / 1000.0;
    std::vector<AgentState> agents{
      AgentState::make(kCrossingFirst, t, {x, 0.0}, {spec.speed_first, 0.0}, 0.0, fp),
      AgentState::make(kCrossingSecond, t, {0.0, y}, {0.0, spec.speed_second}, 0.5 * std::numbers::pi, fp)};
    if (spec.standing_bystander) {
      agents.push_back(AgentState::make(kBystander, t, {-5.0, -5.0}, {0.0, 0.0}, 0.0, fp));
    }
    frames.emplace_back(t, std::move(agents));
  }
  return ScenarioTrackset(std::move(frames), spec.frame_interval);
}

ScenarioTrackset build_passing_scenario(
  double speed, double lateral_offset, double duration_s, bool footprints, TimestampMs frame_interval)
{
  if (!(speed >= 0.0) || !(duration_s > 0.0) || !std::isfinite(lateral_offset) || frame_interval <= 0) {
    throw InvalidSpec("passing scenario needs speed >= 0, duration > 0 and a positive frame interval");
  }
  const TimestampMs end = std::llround(duration_s * 1000.0);
  const TimestampMs meet = end / 2;
  std::optional<Footprint> fp;
  if (footprints) {
    fp = kCar;
  }
  std::vector<Scene> frames;
  for (TimestampMs t = 0; t <= end; t += frame_interval) {
    const double x = speed * static_cast<double>(t - meet) / 1000.0;
    frames.emplace_back(
      t, std::vector<AgentState>{
           AgentState::make(1, t, {x, 0.0}, {speed, 0.0}, 0.0, fp),
           AgentState::make(2, t, {-x, lateral_offset}, {-speed, 0.0}, std::numbers::pi, fp)});
  }
  return ScenarioTrackset(std::move(frames), frame_interval);
}

void write_fixture(const std::filesystem::path & path, const ScenarioTrackset & ts)
{
  write_trackfile(path, ts);
}

namespace oracle
{

namespace
{

struct Rect
{
  double cx, cy, c, s, hl, hw;
};

Rect rect_of(const AgentState & a)
{
  return {a.position.x, a.position.y, std::cos(a.heading), std::sin(a.heading),
          a.footprint->length / 2.0, a.footprint->width / 2.0};
}

// Distance from a point to a solid rectangle, by clamping in its local frame.
double point_to_rect(double px, double py, const Rect & r)
{
  const double dx = px - r.cx;
  const double dy = py - r.cy;
  const double u = std::abs(dx * r.c + dy * r.s);
  const double v = std::abs(-dx * r.s + dy * r.c);
  return std::hypot(std::max(u - r.hl, 0.0), std::max(v - r.hw, 0.0));
}

// Closest approach of the boundary of `from` to the solid `to`.
double boundary_to_rect(const Rect & from, const Rect & to, int samples)
{
  const int per_edge = std::max(1, samples / 4);
  const double sx[4] = {1, -1, -1, 1};
  const double sy[4] = {1, 1, -1, -1};
  double best = std::numeric_limits<double>::infinity();
  for (int e = 0; e < 4; ++e) {
    const int f = (e + 1) % 4;
    for (int k = 0; k <= per_edge; ++k) {
      const double w = static_cast<double>(k) / per_edge;
      const double lx = ((1 - w) * sx[e] + w * sx[f]) * from.hl;
      const double ly = ((1 - w) * sy[e] + w * sy[f]) * from.hw;
      const double px = from.cx + lx * from.c - ly * from.s;
      const double py = from.cy + lx * from.s + ly * from.c;
      best = std::min(best, point_to_rect(px, py, to));
    }
  }
  return best;
}

}  // namespace

double gap_distance_sampled(const AgentState & a, const AgentState & b, int samples)
{
  if (!a.footprint || !b.footprint) {
    return std::hypot(a.position.x - b.position.x, a.position.y - b.position.y);
  }
  const Rect ra = rect_of(a);
  const Rect rb = rect_of(b);
  // A center inside the other body catches full containment.
  if (point_to_rect(ra.cx, ra.cy, rb) == 0.0 || point_to_rect(rb.cx, rb.cy, ra) == 0.0) {
    return 0.0;
  }
  return std::min(boundary_to_rect(ra, rb, samples), boundary_to_rect(rb, ra, samples));
}

double wttc_bisection(double distance, double speed_sum, double a_max, double radius_sum)
{
  const double target = distance - radius_sum;
  if (target <= 0.0) {
    return 0.0;
  }
  auto reach = [&](double t) { return speed_sum * t + a_max * t * t; };
  if (speed_sum == 0.0 && a_max == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  double lo = 0.0;
  double hi = 1.0;
  while (reach(hi) < target) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (reach(mid) < target ? lo : hi) = mid;
  }
  return hi;
}

std::optional<double> ttc_rollout(const AgentState & a, const AgentState & b, double dt, double horizon_s)
{
  const auto steps = static_cast<long>(std::ceil(horizon_s / dt));
  AgentState pa = a;
  AgentState pb = b;
  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    pa.position = a.position + a.velocity * t;
    pb.position = b.position + b.velocity * t;
    if (gap_distance_sampled(pa, pb, 400) <= 1e-9) {
      return t;
    }
  }
  return std::nullopt;
}

std::optional<double> pttc_bisection(double gap, double closing, double decel)
{
  if (!(decel > 0.0)) {
    if (!(closing > 0.0)) {
      return std::nullopt;
    }
    return std::max(gap, 0.0) / closing;
  }
  if (gap <= 0.0) {
    return 0.0;
  }
  auto covered = [&](double t) { return 0.5 * decel * t * t + closing * t; };
  double lo = 0.0;
  double hi = 1.0;
  while (covered(hi) < gap) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (covered(mid) < gap ? lo : hi) = mid;
  }
  return hi;
}

double speed_cv(const std::vector<double> & speeds, double epsilon_speed)
{
  if (speeds.empty()) {
    return 0.0;
  }
  const double n = static_cast<double>(speeds.size());
  double mean = 0.0;
  for (double v : speeds) {
    mean += v;
  }
  mean /= n;
  double var = 0.0;
  for (double v : speeds) {
    var += (v - mean) * (v - mean);
  }
  var /= n;
  return std::sqrt(var) / std::max(mean, epsilon_speed);
}

}  // namespace oracle

std::vector<ReferenceValue> brute_force_reference(
  std::string_view metric_id, const ScenarioTrackset & ts, double a_max_wttc)
{
  enum class Kind { dist, ttc, wttc };
  Kind kind{};
  if (metric_id == "dist") {
    kind = Kind::dist;
  } else if (metric_id == "ttc") {
    kind = Kind::ttc;
  } else if (metric_id == "wttc") {
    kind = Kind::wttc;
  } else {
    throw UnsupportedMetric("no brute-force reference for metric '" + std::string(metric_id) + "'");
  }
  if (ts.frames().size() > 100 || ts.agent_ids().size() > 5) {
    throw InvalidSpec("brute-force reference is limited to 5 agents and 100 frames");
  }

  std::vector<ReferenceValue> out;
  for (const Scene & scene : ts.frames()) {
    for (const AgentState & ego : scene.agents()) {
      for (const AgentState & adv : scene.agents()) {
        if (adv.id == ego.id) {
          continue;
        }
        ReferenceValue rv{scene.timestamp(), ego.id, adv.id, std::nullopt};
        switch (kind) {
          case Kind::dist:
            rv.value = oracle::gap_distance_sampled(ego, adv);
            break;
          case Kind::ttc:
            rv.value = oracle::ttc_rollout(ego, adv);
            break;
          case Kind::wttc: {
            auto radius = [](const AgentState & s) {
              return s.footprint ? std::sqrt(s.footprint->length * s.footprint->length +
                                             s.footprint->width * s.footprint->width) / 2.0
                                 : 0.0;
            };
            const double d = std::hypot(ego.position.x - adv.position.x, ego.position.y - adv.position.y);
            rv.value = oracle::wttc_bisection(d, ego.speed + adv.speed, a_max_wttc, radius(ego) + radius(adv));
            break;
          }
        }
        out.push_back(rv);
      }
    }
  }
  return out;
}

}  // namespace iutq::synth

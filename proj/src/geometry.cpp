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

#include "iutq/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace iutq
{

OrientedBox OrientedBox::make(const Vec2 & center, double heading, const Footprint & fp)
{
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  return OrientedBox{center, {c, s}, {-s, c}, 0.5 * fp.length, 0.5 * fp.width};
}

std::array<Vec2, 4> OrientedBox::corners() const
{
  const Vec2 l = axis_long * half_length;
  const Vec2 w = axis_lat * half_width;
  return {center + l + w, center - l + w, center - l - w, center + l - w};
}

bool OrientedBox::contains(const Vec2 & p) const
{
  const Vec2 d = p - center;
  return std::abs(d.dot(axis_long)) <= half_length && std::abs(d.dot(axis_lat)) <= half_width;
}

namespace
{

// Projection radius of a box onto a unit axis.
double projected_radius(const OrientedBox & b, const Vec2 & axis)
{
  return b.half_length * std::abs(b.axis_long.dot(axis)) +
         b.half_width * std::abs(b.axis_lat.dot(axis));
}

}  // namespace

bool boxes_overlap(const OrientedBox & a, const OrientedBox & b)
{
  const Vec2 t = b.center - a.center;
  for (const Vec2 & axis : {a.axis_long, a.axis_lat, b.axis_long, b.axis_lat}) {
    if (std::abs(t.dot(axis)) > projected_radius(a, axis) + projected_radius(b, axis)) {
      return false;
    }
  }
  return true;
}

double point_segment_distance(const Vec2 & p, const Vec2 & s0, const Vec2 & s1)
{
  const Vec2 seg = s1 - s0;
  const double len2 = seg.dot(seg);
  if (len2 == 0.0) {
    return (p - s0).norm();
  }
  const double u = std::clamp((p - s0).dot(seg) / len2, 0.0, 1.0);
  return (p - (s0 + seg * u)).norm();
}

double box_distance(const OrientedBox & a, const OrientedBox & b)
{
  if (boxes_overlap(a, b)) {
    return 0.0;
  }
  // Disjoint convex polygons: the closest pair always involves a vertex of one
  // polygon and an edge of the other.
  const auto ca = a.corners();
  const auto cb = b.corners();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < 4; ++i) {
    const Vec2 & a0 = ca[i];
    const Vec2 & a1 = ca[(i + 1) % 4];
    for (std::size_t j = 0; j < 4; ++j) {
      const Vec2 & b0 = cb[j];
      const Vec2 & b1 = cb[(j + 1) % 4];
      best = std::min({best, point_segment_distance(a0, b0, b1), point_segment_distance(b0, a0, a1)});
    }
  }
  return best;
}

double normalize_angle(double radians)
{
  constexpr double pi = std::numbers::pi;
  if (radians >= -pi && radians <= pi) {
    return radians;
  }
  double r = std::fmod(radians + pi, 2.0 * pi);
  if (r < 0.0) {
    r += 2.0 * pi;
  }
  return r - pi;
}

}  // namespace iutq

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

#ifndef IUTQ__GEOMETRY_HPP_
#define IUTQ__GEOMETRY_HPP_

#include <array>
#include <cmath>

namespace iutq
{

struct Vec2
{
  double x{0.0};
  double y{0.0};

  constexpr Vec2 operator+(const Vec2 & o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2 & o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr bool operator==(const Vec2 &) const = default;

  constexpr double dot(const Vec2 & o) const { return x * o.x + y * o.y; }
  constexpr double cross(const Vec2 & o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
};

/// Rectangular vehicle footprint, length along the heading axis.
struct Footprint
{
  double length{0.0};
  double width{0.0};

  constexpr bool operator==(const Footprint &) const = default;

  /// Radius of the circle through the four corners.
  double circumradius() const { return 0.5 * std::hypot(length, width); }
};

/// Footprint placed in the world: center, heading and half extents.
struct OrientedBox
{
  Vec2 center;
  Vec2 axis_long;  // unit vector along the heading
  Vec2 axis_lat;   // unit vector 90 degrees counter-clockwise of the heading
  double half_length{0.0};
  double half_width{0.0};

  static OrientedBox make(const Vec2 & center, double heading, const Footprint & fp);

  std::array<Vec2, 4> corners() const;
  bool contains(const Vec2 & p) const;
};

/// True when the closed boxes intersect (separating axis test).
bool boxes_overlap(const OrientedBox & a, const OrientedBox & b);

/// Minimum Euclidean distance between two closed boxes, 0 on overlap.
double box_distance(const OrientedBox & a, const OrientedBox & b);

double point_segment_distance(const Vec2 & p, const Vec2 & s0, const Vec2 & s1);

/// Wraps an angle into [-pi, pi].
double normalize_angle(double radians);

}  // namespace iutq

#endif  // IUTQ__GEOMETRY_HPP_

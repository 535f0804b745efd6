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

#include "iutq/errors.hpp"
#include "iutq/iutq_engine.hpp"
#include "iutq/synth.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>

using namespace iutq;
using iutq::test::point;

namespace
{

Scene speeds_scene(const std::vector<double> & speeds)
{
  std::vector<AgentState> agents;
  for (std::size_t i = 0; i < speeds.size(); ++i) {
    agents.push_back(point(static_cast<AgentId>(i + 1), 100.0 * static_cast<double>(i), 0, speeds[i], 0));
  }
  return Scene(0, std::move(agents));
}

}  // namespace

TEST_CASE("macroscopic coefficient of variation")
{
  CHECK(tq_macroscopic(speeds_scene({7.3, 7.3, 7.3, 7.3})) == 0.0);
  CHECK(tq_macroscopic(speeds_scene({0, 0, 10})) == doctest::Approx(1.41421356).epsilon(1e-8));
  CHECK(tq_macroscopic(speeds_scene({0, 0, 0})) == 0.0);
  CHECK_THROWS_AS(tq_macroscopic(Scene(0, {})), EmptyScene);
}

TEST_CASE("metascopic share of agents within braking distance")
{
  const IutqConfig cfg;
  const Scene standing(0, {point(1, 0, 0), point(2, 1, 0)});
  CHECK(tq_metascopic(standing, 1, cfg) == 0.0);

  const Scene all_close(0, {point(1, 0, 0, 10, 0), point(2, 5, 0), point(3, 0, 5)});
  CHECK(tq_metascopic(all_close, 1, cfg) == 1.0);

  std::vector<AgentState> agents{point(1, 0, 0, 10, 0), point(2, 5, 0), point(3, 0, -10)};
  for (int k = 0; k < 6; ++k) {
    agents.push_back(point(10 + k, 20.0 + 10.0 * k, 20.0));
  }
  CHECK(tq_metascopic(Scene(0, agents), 1, cfg) == 0.25);
}

TEST_CASE("mesoscopic variation among agents within braking distance")
{
  const IutqConfig cfg;
  const Scene nobody(0, {point(1, 0, 0, 10, 0), point(2, 50, 0)});
  CHECK(tq_mesoscopic(nobody, 1, cfg) == 0.0);

  const Scene one_standing(0, {point(1, 0, 0, 10, 0), point(2, 5, 0)});
  CHECK(tq_mesoscopic(one_standing, 1, cfg) == doctest::Approx(1.0).epsilon(1e-12));

  const Scene equal(0, {point(1, 0, 0, 10, 0), point(2, 5, 0, 10, 0), point(3, 10, 0, 10, 0)});
  CHECK(tq_mesoscopic(equal, 1, cfg) == 0.0);
}

TEST_CASE("microscopic mean acceleration and speed")
{
  IutqConfig cfg;
  const auto cruising = test::constant_velocity({point(1, 0, 0, cfg.v_ref, 0)}, 50);
  CHECK(tq_microscopic(cruising, 1, 4000, cfg) == doctest::Approx(0.5).epsilon(1e-12));

  const auto parked = test::constant_velocity({point(1, 0, 0)}, 50);
  CHECK(tq_microscopic(parked, 1, 4000, cfg) == 0.0);

  // Speed alternates 0 / 0.15 m/s every 100 ms, so |a| is a_ref throughout.
  std::vector<Scene> frames;
  for (int k = 0; k < 50; ++k) {
    const TimestampMs t = 100 * k;
    frames.emplace_back(t, std::vector<AgentState>{point(1, 0, 0, (k % 2) * 0.15, 0, t)});
  }
  const ScenarioTrackset saw(std::move(frames), 100);
  cfg.v_ref = 1e12;  // isolate the acceleration term
  CHECK(tq_microscopic(saw, 1, 4000, cfg) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("combined score is the euclidean norm")
{
  CHECK(tq_combined({0, 0, 0, 0}) == 0.0);
  CHECK(tq_combined({1, 0, 0, 0}) == 1.0);
  CHECK(tq_combined({0.5, 0.5, 0.5, 0.5}) == 1.0);
  CHECK(tq_combined({1.108, 0.4375, 1.403, 0.294}) == doctest::Approx(1.864).epsilon(0.002 / 1.864));
}

TEST_CASE("distance penalties")
{
  CHECK(penalty_factor(Penalty::rho1, 1.5) == 1.0);
  CHECK(penalty_factor(Penalty::rho2, 5.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(penalty_factor(Penalty::rho3, 1.0) == 1.0);
  CHECK(penalty_factor(Penalty::none, 0.1) == 1.0);
  CHECK(penalty_factor(Penalty::rho2, std::nullopt) == 0.0);
  CHECK(penalty_factor(Penalty::none, std::nullopt) == 1.0);
}

TEST_CASE("penalty names")
{
  CHECK(penalty_from_string("co") == Penalty::none);
  CHECK(penalty_from_string("rho3") == Penalty::rho3);
  CHECK(to_string(Penalty::rho1) == "rho1");
  CHECK_THROWS_AS(penalty_from_string("rho4"), std::invalid_argument);
}

TEST_CASE("configuration validation")
{
  IutqConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.decel = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidSpec);
  cfg = {};
  cfg.window_s = -1.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidSpec);
}

TEST_CASE("lone standing ego scores zero")
{
  const auto ts = test::constant_velocity({point(1, 0, 0)}, 5);
  const auto b = score_scene(ts, ts.frames()[4], 1, IutqConfig{});
  CHECK(b.tq_macro == 0.0);
  CHECK(b.tq_meta == 0.0);
  CHECK(b.tq_meso == 0.0);
  CHECK(b.tq_micro == 0.0);
  CHECK(b.tq_final == 0.0);
  CHECK_FALSE(b.critical);
  CHECK_FALSE(b.d_min.has_value());
}

TEST_CASE("rho2 final score is the exact product")
{
  const auto ts = test::constant_velocity({point(1, 0, 0, 10, 0), point(2, 6, 0), point(3, -20, 3, 4, 0)}, 30);
  IutqConfig cfg;
  cfg.penalty = Penalty::rho2;
  for (const Scene & scene : ts.frames()) {
    for (const AgentState & a : scene.agents()) {
      const auto b = score_scene(ts, scene, a.id, cfg);
      REQUIRE(b.d_min.has_value());
      CHECK(b.tq_final == std::exp(-*b.d_min / 5.0) * b.tq_combined);
    }
  }
}

TEST_CASE("critical flag uses the active threshold inclusively")
{
  IutqBreakdown b;
  b.tq_combined = 1.5;
  b.d_min = 1.5;
  IutqConfig cfg;
  CHECK(with_penalty(b, Penalty::none, cfg).critical);
  CHECK(with_penalty(b, Penalty::rho1, cfg).tq_final == 1.5);
  b.tq_combined = 1.4999;
  CHECK_FALSE(with_penalty(b, Penalty::none, cfg).critical);
}

TEST_CASE("batch scoring covers every agent-frame")
{
  const auto two = test::constant_velocity({point(1, 0, 0, 5, 0), point(2, 10, 0)}, 3);
  CHECK(score_all(two, IutqConfig{}).size() == 6);

  std::vector<Scene> frames{
    Scene(0, {point(1, 0, 0, 0, 0, 0), point(2, 5, 0, 0, 0, 0)}),
    Scene(100, {point(1, 0, 0, 0, 0, 100)}),
    Scene(200, {point(1, 0, 0, 0, 0, 200), point(2, 5, 0, 0, 0, 200)})};
  const ScenarioTrackset partial(std::move(frames), 100);
  const auto records = score_all(partial, IutqConfig{});
  CHECK(records.size() == 5);
  CHECK(records[2].ego_id == 1);
  CHECK(records[2].timestamp == 100);
}

TEST_CASE("parallel batch scoring matches the serial reference bit for bit")
{
  synth::ScenarioSpec spec;
  spec.scene.seed = 17;
  spec.scene.n_agents = 12;
  spec.scene.speed_law = synth::SpeedLaw::bimodal;
  spec.n_frames = 60;
  const auto ts = synth::build_scenario(spec);
  IutqConfig cfg;
  const auto par = score_all(ts, cfg);
  const auto ser = score_all_serial(ts, cfg);
  REQUIRE(par.size() == ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    CHECK(par[i].timestamp == ser[i].timestamp);
    CHECK(par[i].ego_id == ser[i].ego_id);
    CHECK(std::memcmp(&par[i].breakdown.tq_final, &ser[i].breakdown.tq_final, sizeof(double)) == 0);
    CHECK(std::memcmp(&par[i].breakdown.tq_combined, &ser[i].breakdown.tq_combined, sizeof(double)) == 0);
  }
  const auto again = score_all(ts, cfg);
  for (std::size_t i = 0; i < par.size(); ++i) {
    CHECK(std::memcmp(&par[i].breakdown.tq_final, &again[i].breakdown.tq_final, sizeof(double)) == 0);
  }
}

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

#include "commands.hpp"
#include "iutq/evaluation.hpp"
#include "iutq/iutq_engine.hpp"
#include "iutq/surrogate.hpp"
#include "iutq/synth.hpp"
#include "table_one.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

using namespace iutq;
namespace fs = std::filesystem;

namespace
{

// Tolerances and budgets, fixed here so a run cannot drift them.
constexpr double kTableTolerance = 0.001;
constexpr double kTableBudgetS = 1.0;
constexpr double kPenaltyIdentityTolerance = 1e-12;
constexpr int kRandomScenes = 10000;
constexpr double kInvarianceTolerance = 1e-9;
constexpr double kPropertyBudgetS = 30.0;
constexpr int kOracleCases = 1000;
constexpr double kWttcOracleTolerance = 1e-6;
constexpr double kGapOracleTolerance = 0.05;
constexpr double kPttcTtcTolerance = 1e-9;
constexpr double kPetTolerance = 0.1;
constexpr double kTraceExpected = 1.864;
constexpr double kTraceTolerance = 0.002;
constexpr double kPipelineBudgetS = 60.0;

struct Outcome
{
  bool pass{true};
  std::string detail;

  void fail(const std::string & why)
  {
    if (pass) {
      detail = why;
    }
    pass = false;
  }
};

double seconds_since(std::chrono::steady_clock::time_point start)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char * f, double a, double b = 0.0)
{
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Outcome published_table()
{
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto & col : test::kPublishedTable) {
    const auto s = statistics(col.counts);
    for (std::size_t i = 0; i < test::kDerivedRows.size(); ++i) {
      const auto v = row_value(test::kDerivedRows[i], col.counts, s);
      if (!v) {
        o.fail(std::string(col.metric) + " has an undefined " + std::string(to_string(test::kDerivedRows[i])));
        continue;
      }
      worst = std::max(worst, std::abs(*v - col.derived[i]));
    }
  }
  const double elapsed = seconds_since(start);
  if (worst > kTableTolerance) {
    o.fail(fmt("max deviation %.6f", worst));
  }
  if (elapsed >= kTableBudgetS) {
    o.fail(fmt("took %.3f s", elapsed));
  }
  if (o.pass) {
    o.detail = fmt("11 columns, max deviation %.6f, %.4f s", worst, elapsed);
  }
  return o;
}

Outcome penalty_functions()
{
  Outcome o;
  int steps = 0;
  double prev[3] = {};
  for (int k = 1; k <= 500; ++k) {
    const double d = 0.1 * k;
    const double expected[3] = {1.5 / d, std::exp(-d / 5.0), std::exp(-(d - 1.0) / 10.0)};
    const Penalty kinds[3] = {Penalty::rho1, Penalty::rho2, Penalty::rho3};
    for (int i = 0; i < 3; ++i) {
      const double v = penalty_factor(kinds[i], d);
      if (std::abs(v - expected[i]) > kPenaltyIdentityTolerance * std::max(1.0, expected[i])) {
        o.fail(std::string(to_string(kinds[i])) + fmt(" differs at d = %.1f", d));
      }
      if (k > 1 && !(v < prev[i])) {
        o.fail(std::string(to_string(kinds[i])) + fmt(" not decreasing at d = %.1f", d));
      }
      prev[i] = v;
    }
    ++steps;
  }
  if (penalty_factor(Penalty::rho2, std::nullopt) != 0.0) {
    o.fail("lone ego not zeroed");
  }
  if (o.pass) {
    o.detail = std::to_string(steps) + " distances per penalty";
  }
  return o;
}

Scene rebuilt(const Scene & s, const std::function<AgentState(const AgentState &, std::size_t)> & f)
{
  std::vector<AgentState> agents;
  for (std::size_t i = 0; i < s.size(); ++i) {
    agents.push_back(f(s.agents()[i], i));
  }
  return Scene(s.timestamp(), std::move(agents));
}

Outcome sub_metric_properties()
{
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240917);
  const IutqConfig cfg;
  long violations = 0;
  long checks = 0;
  auto violate = [&](const std::string & what, std::uint64_t seed) {
    ++violations;
    o.fail(what + " (scene seed " + std::to_string(seed) + ")");
  };
  for (int i = 0; i < kRandomScenes; ++i) {
    synth::SceneSpec spec;
    spec.seed = 100000 + static_cast<std::uint64_t>(i);
    spec.n_agents = 1 + static_cast<std::size_t>(synth::uniform(rng, 0.0, 40.0));
    spec.speed_law = static_cast<synth::SpeedLaw>(i % 4);
    spec.spatial_law = static_cast<synth::SpatialLaw>((i / 4) % 3);
    const Scene s = synth::build_scene(spec);
    const ScenarioTrackset ts({s}, 100);

    for (const AgentState & ego : s.agents()) {
      const auto b = score_scene(ts, s, ego.id, cfg);
      ++checks;
      if (b.tq_meta < 0.0 || b.tq_meta > 1.0) {
        violate("metascopic out of range", spec.seed);
      }
      for (double v : {b.tq_macro, b.tq_meta, b.tq_meso, b.tq_micro}) {
        if (b.tq_combined < v) {
          violate("combined below a sub-metric", spec.seed);
        }
      }
      if (spec.speed_law == synth::SpeedLaw::uniform && (b.tq_macro != 0.0 || b.tq_meso != 0.0)) {
        violate("uniform speeds give nonzero variation", spec.seed);
      }
    }

    // Relabel the agents in reverse order: the scene-wide measure must not move.
    const AgentId n = static_cast<AgentId>(s.size());
    const Scene permuted = rebuilt(s, [&](const AgentState & a, std::size_t) {
      return AgentState::make(n + 1 - a.id, a.timestamp, a.position, a.velocity, a.heading, a.footprint, a.type);
    });
    const double macro = tq_macroscopic(s, cfg.epsilon_speed);
    if (std::abs(tq_macroscopic(permuted, cfg.epsilon_speed) - macro) > kInvarianceTolerance * std::max(1.0, macro)) {
      violate("macroscopic changes under relabelling", spec.seed);
    }

    // Scaling all speeds leaves the variation unchanged while the mean stays above the floor.
    const double c = synth::uniform(rng, 0.5, 2.0);
    double mean = 0.0;
    for (const AgentState & a : s.agents()) {
      mean += a.speed;
    }
    mean /= static_cast<double>(s.size());
    if (std::min(mean, mean * c) > cfg.epsilon_speed) {
      const Scene scaled = rebuilt(s, [&](const AgentState & a, std::size_t) {
        return AgentState::make(a.id, a.timestamp, a.position, a.velocity * c, a.heading, a.footprint, a.type);
      });
      if (std::abs(tq_macroscopic(scaled, cfg.epsilon_speed) - macro) > kInvarianceTolerance * std::max(1.0, macro)) {
        violate("macroscopic changes under speed scaling", spec.seed);
      }
    }
  }
  const double elapsed = seconds_since(start);
  if (elapsed >= kPropertyBudgetS) {
    o.fail(fmt("took %.1f s", elapsed));
  }
  if (o.pass) {
    o.detail = std::to_string(kRandomScenes) + " scenes, " + std::to_string(checks) + " egos, 0 violations, " +
               fmt("%.1f s", elapsed);
  } else {
    o.detail += ", " + std::to_string(violations) + " violations";
  }
  return o;
}

Outcome oracle_agreement()
{
  Outcome o;
  std::mt19937_64 rng(77);
  auto real = [&](double lo, double hi) { return synth::uniform(rng, lo, hi); };
  double worst_wttc = 0.0;
  double worst_gap = 0.0;
  double worst_pttc = 0.0;
  for (int i = 0; i < kOracleCases; ++i) {
    const double d = real(0.0, 100.0);
    const double s = real(0.0, 40.0);
    const double a = real(0.1, 10.0);
    const double r = real(0.0, 8.0);
    worst_wttc = std::max(worst_wttc, std::abs(wttc_kinematic(d, s, a, r) - synth::oracle::wttc_bisection(d, s, a, r)));

    auto agent = [&](AgentId id) {
      const double h = real(-std::numbers::pi, std::numbers::pi);
      return AgentState::make(
        id, 0, {real(-12.0, 12.0), real(-12.0, 12.0)}, {0.0, 0.0}, h, Footprint{real(3.0, 12.0), real(1.5, 2.6)});
    };
    const auto x = agent(1);
    const auto y = agent(2);
    worst_gap = std::max(worst_gap, std::abs(gap_distance(x, y) - synth::oracle::gap_distance_sampled(x, y)));

    const double gap = real(0.0, 60.0);
    const double closing = real(-10.0, 30.0);
    const auto p = pttc_kinematic(gap, closing, 0.0);
    const auto t = ttc_kinematic(gap, closing);
    if (p.has_value() != t.has_value()) {
      o.fail(fmt("PTTC/TTC definedness differs at gap %.3f closing %.3f", gap, closing));
    } else if (p) {
      worst_pttc = std::max(worst_pttc, std::abs(*p - *t));
    }
  }
  if (worst_wttc >= kWttcOracleTolerance) {
    o.fail(fmt("WTTC deviation %.3g", worst_wttc));
  }
  if (worst_gap >= kGapOracleTolerance) {
    o.fail(fmt("gap deviation %.4f m", worst_gap));
  }
  if (worst_pttc >= kPttcTtcTolerance) {
    o.fail(fmt("PTTC vs TTC deviation %.3g", worst_pttc));
  }
  if (o.pass) {
    o.detail = std::to_string(kOracleCases) + " cases, max WTTC " + fmt("%.2g, gap %.4f m, ", worst_wttc, worst_gap) +
               fmt("PTTC %.2g", worst_pttc);
  }
  return o;
}

Outcome constructed_crossings()
{
  Outcome o;
  const SurrogateConfig scfg;

  synth::CrossingSpec spec;
  spec.speed_first = 12.0;
  spec.speed_second = 14.0;
  spec.offset_s = 1.2;
  const auto close = pet(synth::build_crossing_scenario(spec), synth::kCrossingFirst, synth::kCrossingSecond,
                         scfg.conflict_cell);
  if (!close || std::abs(*close - 1.2) > kPetTolerance) {
    o.fail(close ? fmt("PET %.3f for offset 1.2 s", *close) : "PET undefined for offset 1.2 s");
  } else if (!is_critical(SurrogateMetric::pet, close, scfg)) {
    o.fail("PET for offset 1.2 s not critical");
  }

  spec.offset_s = 2.0;
  const auto late = pet(synth::build_crossing_scenario(spec), synth::kCrossingFirst, synth::kCrossingSecond,
                        scfg.conflict_cell);
  if (is_critical(SurrogateMetric::pet, late, scfg)) {
    o.fail(fmt("PET %.3f for offset 2.0 s flagged critical", *late));
  }

  spec.offset_s = 0.0;
  spec.standing_bystander = true;
  const auto ts = synth::build_crossing_scenario(spec);
  IutqConfig icfg;
  icfg.penalty = Penalty::rho2;
  bool contact = false;
  double ego_at_contact = 0.0;
  double bystander_max = 0.0;
  for (const IutqRecord & r : score_all(ts, icfg)) {
    if (r.ego_id == synth::kBystander) {
      bystander_max = std::max(bystander_max, r.breakdown.tq_final);
      if (r.breakdown.critical) {
        o.fail(fmt("bystander critical at t = %.0f ms", static_cast<double>(r.timestamp)));
      }
      continue;
    }
    if (r.ego_id != synth::kCrossingFirst) {
      continue;
    }
    const Scene & scene = *ts.scene_at(r.timestamp);
    const auto d = gap_distance(scene.at(synth::kCrossingFirst), scene.at(synth::kCrossingSecond));
    const double w = wttc(scene, synth::kCrossingFirst, synth::kCrossingSecond, scfg.a_max_wttc);
    if (d == 0.0 && w == 0.0) {
      contact = true;
      ego_at_contact = r.breakdown.tq_final;
      if (!r.breakdown.critical) {
        o.fail(fmt("ego IUTQ %.3f at contact not critical", ego_at_contact));
      }
    }
  }
  if (!contact) {
    o.fail("no frame with distance 0 and WTTC 0");
  }
  if (o.pass) {
    o.detail = fmt("PET %.2f s at offset 1.2, ", *close) + (late ? fmt("%.2f s at offset 2.0, ", *late) : "") +
               fmt("contact IUTQ %.3f, bystander max %.3f", ego_at_contact, bystander_max);
  }
  return o;
}

Outcome published_trace()
{
  Outcome o;
  const double v = tq_combined({1.108, 0.4375, 1.403, 0.294});
  if (std::abs(v - kTraceExpected) > kTraceTolerance) {
    o.fail(fmt("combined %.4f", v));
  } else {
    o.detail = fmt("combined %.4f", v);
  }
  return o;
}

std::string slurp(const fs::path & p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome full_pipeline()
{
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "iutq_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir / "in");

  synth::ScenarioSpec spec;
  spec.scene.seed = 7;
  spec.scene.n_agents = 30;
  spec.scene.speed_law = synth::SpeedLaw::bimodal;
  spec.scene.spatial_law = synth::SpatialLaw::grid;
  spec.n_frames = 1000;
  synth::write_fixture(dir / "in" / "synthetic.csv", synth::build_scenario(spec));

  std::string outputs[3];
  double times[3] = {};
  const int workers[3] = {1, 4, 4};
  for (int run = 0; run < 3; ++run) {
    cli::ScoreOptions opts;
    opts.inputs = {(dir / "in").string()};
    opts.config.workers = workers[run];
    opts.out_dir = dir / ("out" + std::to_string(run));
    std::ostringstream log;
    const auto start = std::chrono::steady_clock::now();
    const int rc = cli::cmd_score(opts, log);
    times[run] = seconds_since(start);
    if (rc != cli::kOk) {
      o.fail("score exited with " + std::to_string(rc) + ": " + log.str());
      return o;
    }
    outputs[run] = slurp(opts.out_dir / "scores.csv");
    if (times[run] >= kPipelineBudgetS) {
      o.fail(fmt("run %.0f took %.1f s", run, times[run]));
    }
  }
  const auto rows = static_cast<std::size_t>(std::count(outputs[0].begin(), outputs[0].end(), '\n'));
  if (rows != 1 + 30 * 1000 * cli::kMetricIds.size()) {
    o.fail("unexpected row count " + std::to_string(rows));
  }
  if (outputs[0] != outputs[1]) {
    o.fail("1 and 4 workers disagree");
  }
  if (outputs[1] != outputs[2]) {
    o.fail("rerun differs");
  }
  if (o.pass) {
    o.detail = std::to_string(rows - 1) + " rows, " + fmt("%.1f s with 1 worker, %.1f s with 4", times[0], times[1]) +
               ", identical output";
  }
  fs::remove_all(dir);
  return o;
}

}  // namespace

int main()
{
  struct Criterion
  {
    const char * name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
    {"published table statistics", published_table},
    {"penalty functions", penalty_functions},
    {"sub-metric properties on random scenes", sub_metric_properties},
    {"surrogate kernels against oracles", oracle_agreement},
    {"constructed crossing scenarios", constructed_crossings},
    {"published combined trace", published_trace},
    {"full recording pipeline", full_pipeline},
  };
  int failures = 0;
  int index = 0;
  for (const Criterion & c : criteria) {
    ++index;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception & e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) {
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}

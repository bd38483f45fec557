/*
 * Copyright 2026 The harvest_nav Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "harvest_nav/mission.hpp"

using namespace harvest;

TEST(StateMachine, NamesRoundTrip) {
  for (int i = 0; i < kPhaseCount; ++i) EXPECT_EQ(parse_phase(to_string(static_cast<Phase>(i))), static_cast<Phase>(i));
  for (int i = 0; i < kEventCount; ++i)
    EXPECT_EQ(parse_event(to_string(static_cast<EventKind>(i))), static_cast<EventKind>(i));
  EXPECT_FALSE(parse_phase("Sleeping"));
  EXPECT_FALSE(parse_event("nap"));
}

TEST(StateMachine, NominalCycle) {
  MissionStateMachine m({4});
  const std::vector<MissionEvent> events = {
      {EventKind::kTargetReady, 4}, {EventKind::kPlanSucceeded}, {EventKind::kDriveSucceeded},
      {EventKind::kArmRetracted},   {EventKind::kScanDone},      {EventKind::kGraspPlanned},
      {EventKind::kGrabDone},       {EventKind::kHoldRetracted}, {EventKind::kQueueEmpty}};
  const std::vector<Phase> expect = {Phase::kPlanApproach, Phase::kDrive,      Phase::kRetractArm,
                                     Phase::kScan,         Phase::kDetectAndGraspPlan, Phase::kExtendGrab,
                                     Phase::kRetractHold,  Phase::kGetTarget,  Phase::kDone};
  for (std::size_t i = 0; i < events.size(); ++i) {
    ASSERT_TRUE(m.handle(events[i])) << i;
    EXPECT_EQ(m.phase(), expect[i]);
    if (i < 7) EXPECT_EQ(m.current(), 4);
  }
  EXPECT_TRUE(m.terminal());
  EXPECT_FALSE(m.current());
  EXPECT_TRUE(log_consistent(m.log()));
}

TEST(StateMachine, Fallbacks) {
  MissionStateMachine m({1, 2});
  ASSERT_TRUE(m.handle({EventKind::kTargetReady, 1}));
  ASSERT_TRUE(m.handle({EventKind::kPlanFailed}));
  EXPECT_EQ(m.phase(), Phase::kGetTarget);
  EXPECT_EQ(m.queue().front(), 2);
  ASSERT_TRUE(m.handle({EventKind::kTargetReady, 2}));
  ASSERT_TRUE(m.handle({EventKind::kPlanSucceeded}));
  ASSERT_TRUE(m.handle({EventKind::kTrackingFailed}));
  EXPECT_EQ(m.phase(), Phase::kPlanApproach);
  EXPECT_EQ(m.current(), 2);
  ASSERT_TRUE(m.handle({EventKind::kAbort}));
  EXPECT_EQ(m.phase(), Phase::kAborted);
  EXPECT_FALSE(m.handle({EventKind::kQueueEmpty}));
  EXPECT_FALSE(m.handle({EventKind::kAbort}));
}

TEST(StateMachine, OutOfOrderEventIsRejected) {
  MissionStateMachine m({3, 5});
  EXPECT_FALSE(m.handle({EventKind::kDriveSucceeded}));
  EXPECT_FALSE(m.handle({EventKind::kTargetReady, 5}));  // not the queue head
  EXPECT_FALSE(m.handle({EventKind::kQueueEmpty}));      // queue not empty
  EXPECT_EQ(m.phase(), Phase::kGetTarget);
  EXPECT_EQ(m.queue().size(), 2u);
  ASSERT_EQ(m.log().size(), 3u);
  for (const LogRecord& r : m.log()) {
    EXPECT_TRUE(r.violation);
    EXPECT_EQ(r.from, r.to);
  }
  EXPECT_EQ(m.log()[2].seq, 2u);
  EXPECT_TRUE(log_consistent(m.log()));
}

TEST(StateMachine, RelationShape) {
  const auto arcs = transition_relation();
  // 8 non-terminal phases x abort + 12 nominal/fallback arcs.
  EXPECT_EQ(arcs.size(), 8u + 12u);
  for (const Transition& t : arcs) EXPECT_NE(t.from, Phase::kDone);
  for (int p = 0; p < kPhaseCount; ++p) {
    const Phase ph = static_cast<Phase>(p);
    if (ph == Phase::kDone || ph == Phase::kAborted) continue;
    bool reaches_done = false;
    // Every live phase can still finish: follow any arc chain toward kDone.
    std::vector<Phase> frontier{ph};
    std::vector<bool> seen(kPhaseCount, false);
    while (!frontier.empty()) {
      const Phase f = frontier.back();
      frontier.pop_back();
      if (f == Phase::kDone) reaches_done = true;
      if (seen[static_cast<int>(f)]) continue;
      seen[static_cast<int>(f)] = true;
      for (const Transition& t : arcs)
        if (t.from == f) frontier.push_back(t.to);
    }
    EXPECT_TRUE(reaches_done) << to_string(ph);
  }
}

TEST(StateMachine, FuzzedSequencesStayOnGraph) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> event(0, kEventCount - 1);
  std::uniform_int_distribution<int> len(1, 60);
  std::uniform_int_distribution<int> tgt(0, 4);
  for (int run = 0; run < 10000; ++run) {
    MissionStateMachine m({0, 1, 2, 3, 4});
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
      const Phase before = m.phase();
      const std::size_t queued = m.queue().size();
      const MissionEvent e{static_cast<EventKind>(event(rng)), tgt(rng)};
      const bool ok = m.handle(e);
      if (!ok) {
        ASSERT_EQ(m.phase(), before);
        ASSERT_EQ(m.queue().size(), queued);
      } else {
        ASSERT_EQ(next_phase(before, e.kind), m.phase());
      }
    }
    ASSERT_TRUE(log_consistent(m.log())) << run;
  }
}

TEST(StateMachine, ConsistencyCheckCatchesTampering) {
  MissionStateMachine m({0});
  m.handle({EventKind::kTargetReady, 0});
  m.handle({EventKind::kPlanSucceeded});
  auto log = m.log();
  ASSERT_TRUE(log_consistent(log));
  log[1].to = Phase::kScan;
  EXPECT_FALSE(log_consistent(log));
  log = m.log();
  std::swap(log[0], log[1]);
  EXPECT_FALSE(log_consistent(log));
}

TEST(EventChannel, PreservesOrderAcrossThreads) {
  EventChannel ch;
  MissionStateMachine m({0, 1, 2});
  std::thread producer([&] {
    for (int t = 0; t < 3; ++t) {
      ch.push({EventKind::kTargetReady, t});
      ch.push({EventKind::kPlanFailed});
    }
    ch.push({EventKind::kQueueEmpty});
    ch.close();
  });
  while (auto e = ch.pop()) EXPECT_TRUE(m.handle(*e));
  producer.join();
  EXPECT_EQ(m.phase(), Phase::kDone);
  EXPECT_FALSE(ch.try_pop());
  ch.push({EventKind::kAbort});  // dropped after close
  EXPECT_FALSE(ch.pop());
}

TEST(Grasp, YawIsBearingToTree) {
  const GraspPose g = grasp_pose(Pose2d(0.0, 0.0, 1.0), {5.0, 0.0}, GraspParams{});
  EXPECT_NEAR(g.yaw, 0.0, 1e-12);
  EXPECT_NEAR(g.position.z(), 1.3, 1e-12);
  EXPECT_NEAR(g.position.x(), 5.0, 1e-12);
  const GraspPose h = grasp_pose(Pose2d(1.0, 1.0, 0.0), {1.0, 7.0}, GraspParams{}, 2.0);
  EXPECT_NEAR(h.yaw, std::numbers::pi / 2, 1e-12);
  EXPECT_NEAR(h.position.z(), 3.3, 1e-12);
}

TEST(Grasp, RotationInvariance) {
  const Pose2d base(2.0, -1.0, 0.4);
  const Eigen::Vector2d tree(6.0, 2.0);
  const GraspPose g = grasp_pose(base, tree, GraspParams{});
  for (double a : {0.3, 1.7, -2.5}) {
    const Pose2d rot(0.0, 0.0, a);
    const GraspPose r = grasp_pose(rot * base, rot * tree, GraspParams{});
    EXPECT_NEAR(normalize_angle(r.yaw - g.yaw - a), 0.0, 1e-12);
    EXPECT_NEAR((r.position.head<2>() - rot * tree).norm(), 0.0, 1e-12);
  }
}

TEST(Grasp, OutOfReachThrows) {
  EXPECT_THROW(grasp_pose(Pose2d(), {8.01, 0.0}, GraspParams{}), OutOfReach);
  EXPECT_NO_THROW(grasp_pose(Pose2d(), {8.0, 0.0}, GraspParams{}));
}

TEST(Arm, HermiteEndpointsAndMidpoint) {
  EXPECT_DOUBLE_EQ(hermite(2.0, 0.0, 6.0, 0.0, 0.0), 2.0);
  EXPECT_DOUBLE_EQ(hermite(2.0, 0.0, 6.0, 0.0, 1.0), 6.0);
  EXPECT_DOUBLE_EQ(hermite(2.0, 0.0, 6.0, 0.0, 0.5), 4.0);
  EXPECT_DOUBLE_EQ(hermite(0.0, 1.0, 0.0, 1.0, 0.5), 0.0);
}

TEST(Arm, ManeuverShapeAndContinuity) {
  const ArmParams p;
  const ArmWaypoint cur{6.0, 0.2, 1.3}, goal{7.0, 2.0, 1.5};
  const ArmTrajectory tr = arm_maneuver_waypoints(cur, goal, p);
  ASSERT_EQ(tr.waypoints().size(), 4u);
  EXPECT_DOUBLE_EQ(tr.waypoints()[1].radius, p.min_reach);
  EXPECT_DOUBLE_EQ(tr.waypoints()[2].radius, p.min_reach);
  EXPECT_DOUBLE_EQ(tr.waypoints()[2].yaw, 2.0);
  const ArmWaypoint end = tr.at(tr.duration());
  EXPECT_NEAR(end.radius, 7.0, 1e-12);
  EXPECT_NEAR(end.z, 1.5, 1e-12);
  // C1: positions and velocities agree across segment boundaries.
  double t = 0.0;
  for (std::size_t i = 0; i + 1 < tr.durations().size(); ++i) {
    t += tr.durations()[i];
    const double h = 1e-7;
    const ArmWaypoint a = tr.at(t - h), b = tr.at(t + h);
    EXPECT_NEAR(a.radius, b.radius, 1e-6);
    EXPECT_NEAR(a.yaw, b.yaw, 1e-6);
    EXPECT_NEAR((tr.velocity(t - h) - tr.velocity(t + h)).norm(), 0.0, 1e-5);
  }
  // Average speed caps per segment.
  for (std::size_t i = 0; i < tr.durations().size(); ++i) {
    const double turn = std::abs(tr.waypoints()[i + 1].yaw - tr.waypoints()[i].yaw);
    EXPECT_LE(turn / tr.durations()[i], p.max_angular_speed + 1e-12);
  }
  EXPECT_NEAR(tr.durations()[0], 3.0 / p.max_linear_speed, 1e-3);
}

TEST(Arm, TurnTakesShortWayAndDegenerateStagesDrop) {
  const ArmParams p;
  const ArmTrajectory turn = arm_maneuver_waypoints({3.0, 3.0, 1.3}, {3.0, -3.0, 1.3}, p);
  ASSERT_EQ(turn.waypoints().size(), 2u);
  EXPECT_NEAR(turn.waypoints()[1].yaw - 3.0, 2 * std::numbers::pi - 6.0, 1e-12);
  const ArmTrajectory still = arm_maneuver_waypoints({3.0, 0.0, 1.3}, {3.0, 0.0, 1.3}, p);
  EXPECT_EQ(still.waypoints().size(), 1u);
  EXPECT_EQ(still.duration(), 0.0);
  EXPECT_THROW(ArmTrajectory({{1, 0, 0}, {2, 0, 0}}, {0.0}), std::invalid_argument);
}

namespace {

ForestWorld small_alley(std::uint64_t seed, std::vector<int>* targets, int n = 2) {
  ScenarioSpec sp;
  sp.density = 0.05;
  sp.seed = seed;
  sp.max_targets = n;
  ForestWorld w = generate_forest(sp);
  *targets = select_targets(w, sp);
  return w;
}

}  // namespace

TEST(Mission, EmptyTargetListFinishesDone) {
  std::vector<int> unused;
  const ForestWorld w = small_alley(1, &unused);
  const MissionReport r = run_mission(w, {}, MissionParams{}, NoiseModel{}, 1);
  EXPECT_EQ(r.final_phase, Phase::kDone);
  EXPECT_TRUE(r.trees.empty());
  EXPECT_EQ(r.log.size(), 1u);
}

TEST(Mission, RejectsUnknownTarget) {
  std::vector<int> unused;
  const ForestWorld w = small_alley(1, &unused);
  EXPECT_THROW(MissionRunner(w, {static_cast<int>(w.trees.size())}, MissionParams{}, NoiseModel{}, 1),
               std::invalid_argument);
}

TEST(Mission, NoiselessRunGrabsAndReportsEvents) {
  std::vector<int> targets;
  const ForestWorld w = small_alley(2, &targets);
  ASSERT_EQ(targets.size(), 2u);
  std::vector<std::pair<std::string, std::string>> events;
  MissionRunner runner(w, targets, MissionParams{}, NoiseModel{}, 3,
                       [&](const std::string& t, const std::string& p) { events.emplace_back(t, p); });
  while (runner.step()) {
  }
  const MissionReport r = runner.report();
  EXPECT_EQ(r.final_phase, Phase::kDone);
  EXPECT_TRUE(log_consistent(r.log));
  ASSERT_EQ(r.trees.size(), 2u);
  int per_tree = 0;
  for (const auto& [type, payload] : events) {
    const auto j = nlohmann::json::parse(payload);
    EXPECT_TRUE(j.is_object());
    per_tree += type == "tree_grabbed" || type == "tree_failed";
  }
  EXPECT_EQ(per_tree, 2);
  EXPECT_EQ(events.back().first, "mission_done");
  for (const TreeOutcome& t : r.trees) {
    if (t.outcome != "grabbed") continue;
    EXPECT_LT(t.gripper_error, 0.1);
    EXPECT_GT(t.cycle_time, 0.0);
    ASSERT_TRUE(t.executed_pose);
    EXPECT_LE(planar_distance(*t.executed_pose, *t.planned_pose), 0.5);
  }
  EXPECT_GE(r.grabbed, 1);
}

TEST(Mission, ReportIsReproducibleJsonLines) {
  std::vector<int> targets;
  const ForestWorld w = small_alley(4, &targets);
  NoiseModel noise;
  noise.pose_sigma_xy = 0.3;
  std::ostringstream a, b;
  write_report_jsonl(a, run_mission(w, targets, MissionParams{}, noise, 9));
  write_report_jsonl(b, run_mission(w, targets, MissionParams{}, noise, 9));
  EXPECT_EQ(a.str(), b.str());
  std::istringstream in(a.str());
  std::string line, last;
  int n = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j.contains("type"));
    last = j["type"];
    ++n;
  }
  EXPECT_EQ(n, static_cast<int>(targets.size()) + 1);
  EXPECT_EQ(last, "summary");
}

TEST(Mission, AbortEndsInAborted) {
  std::vector<int> targets;
  const ForestWorld w = small_alley(5, &targets);
  MissionRunner runner(w, targets, MissionParams{}, NoiseModel{}, 1);
  runner.step();
  runner.step();
  runner.abort();
  EXPECT_EQ(runner.phase(), Phase::kAborted);
  EXPECT_FALSE(runner.step());
  const MissionReport r = runner.report();
  ASSERT_EQ(r.trees.size(), 1u);
  EXPECT_EQ(r.trees[0].outcome, "aborted");
  EXPECT_TRUE(log_consistent(r.log));
}

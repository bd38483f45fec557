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

#include "harvest_nav/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "harvest_nav/collision.hpp"
#include "harvest_nav/reeds_shepp.hpp"

namespace harvest {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Node {
  Pose2d pose;
  int parent = -1;
  double cost = 0.0;
  ReedsSheppPath edge;  // from parent
  std::vector<int> children;
};

struct GoalLink {
  int node;
  int candidate;
  ReedsSheppPath edge;
};

class Clock {
 public:
  Clock() : t0_(std::chrono::steady_clock::now()) {}
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

class Rrt {
 public:
  Rrt(const Pose2d& start, const std::vector<Pose2d>& goals, const CollisionChecker& checker,
      const RRTParams& rp)
      : goals_(goals), checker_(checker), rp_(rp) {
    std::seed_seq seq{rp.rng_seed, std::uint64_t{0x5eed}};
    rng_.seed(seq);
    nodes_.push_back({start, -1, 0.0, {}, {}});
    const Eigen::Vector2d margin = Eigen::Vector2d::Constant(1.0);
    lo_ = checker.map().min_corner() + margin;
    hi_ = checker.map().max_corner() - margin;
  }

  // One growth step; returns true if the tree grew.
  bool iterate() {
    const Pose2d q = sample();
    const int nearest = nearest_node(q);
    ReedsSheppPath to_q = reeds_shepp_shortest(nodes_[nearest].pose, q, rp_.turning_radius);
    Pose2d x_new = q;
    if (to_q.length() > rp_.max_extension) {
      x_new = reeds_shepp_pose_at(nodes_[nearest].pose, to_q, rp_.max_extension);
      to_q = reeds_shepp_shortest(nodes_[nearest].pose, x_new, rp_.turning_radius);
    }
    if (to_q.length() < 1e-6) return false;
    if (!edge_free(nodes_[nearest].pose, to_q)) return false;

    // Choose the cheapest collision-free parent among the near set.
    const double n = static_cast<double>(nodes_.size());
    const double radius =
        std::min(rp_.neighbor_radius_const * std::cbrt(std::log(n + 1.0) / (n + 1.0)), 3.0 * rp_.max_extension);
    std::vector<std::pair<int, ReedsSheppPath>> near;
    for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) {
      if (planar_distance(nodes_[i].pose, x_new) > radius) continue;
      ReedsSheppPath e = reeds_shepp_shortest(nodes_[i].pose, x_new, rp_.turning_radius);
      if (e.length() <= radius) near.emplace_back(i, std::move(e));
    }
    int parent = nearest;
    ReedsSheppPath edge = to_q;
    double best = nodes_[nearest].cost + to_q.length();
    std::sort(near.begin(), near.end(), [&](const auto& a, const auto& b) {
      return nodes_[a.first].cost + a.second.length() < nodes_[b.first].cost + b.second.length();
    });
    for (const auto& [i, e] : near) {
      const double c = nodes_[i].cost + e.length();
      if (c >= best) break;
      if (i != nearest && edge_free(nodes_[i].pose, e)) {
        parent = i;
        edge = e;
        best = c;
        break;
      }
    }
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({x_new, parent, best, edge, {}});
    nodes_[parent].children.push_back(id);

    // Rewire neighbors through the new node.
    for (const auto& [i, unused] : near) {
      if (i == parent) continue;
      ReedsSheppPath e = reeds_shepp_shortest(x_new, nodes_[i].pose, rp_.turning_radius);
      const double c = best + e.length();
      if (c + 1e-9 >= nodes_[i].cost || !edge_free(x_new, e)) continue;
      auto& siblings = nodes_[nodes_[i].parent].children;
      siblings.erase(std::find(siblings.begin(), siblings.end(), i));
      nodes_[i].parent = id;
      nodes_[i].edge = std::move(e);
      nodes_[id].children.push_back(i);
      propagate(i, c - nodes_[i].cost);
    }

    try_goals(id);
    return true;
  }

  // Best goal link by total cost, or -1.
  int best_link() const {
    int best = -1;
    double best_cost = kInf;
    for (int k = 0; k < static_cast<int>(links_.size()); ++k) {
      const double c = link_cost(k);
      if (c < best_cost) {
        best_cost = c;
        best = k;
      }
    }
    return best;
  }

  double link_cost(int k) const { return nodes_[links_[k].node].cost + links_[k].edge.length(); }
  const GoalLink& link(int k) const { return links_[k]; }
  bool solved() const { return !links_.empty(); }
  int size() const { return static_cast<int>(nodes_.size()); }

  PathSE2 extract(int k) const {
    std::vector<int> chain;
    for (int i = links_[k].node; i >= 0; i = nodes_[i].parent) chain.push_back(i);
    std::reverse(chain.begin(), chain.end());
    PathSE2 path({nodes_[0].pose}, {});
    for (std::size_t j = 1; j < chain.size(); ++j) {
      const Node& nd = nodes_[chain[j]];
      path.append(discretize(nodes_[nd.parent].pose, nd.edge, rp_.step_resolution));
    }
    path.append(discretize(nodes_[links_[k].node].pose, links_[k].edge, rp_.step_resolution));
    return path;
  }

  // Connects the root straight to the goals (first iteration shortcut).
  void try_goals(int id) {
    const double current = solved() ? link_cost(best_link()) : kInf;
    const Node& nd = nodes_[id];
    for (int g = 0; g < static_cast<int>(goals_.size()); ++g) {
      if (nd.cost + planar_distance(nd.pose, goals_[g]) >= current) continue;
      ReedsSheppPath e = reeds_shepp_shortest(nd.pose, goals_[g], rp_.turning_radius);
      if (nd.cost + e.length() >= current) continue;
      if (!edge_free(nd.pose, e)) continue;
      links_.push_back({id, g, std::move(e)});
    }
  }

 private:
  Pose2d sample() {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (!goals_.empty() && u(rng_) < rp_.goal_bias) {
      std::uniform_int_distribution<std::size_t> pick(0, goals_.size() - 1);
      return goals_[pick(rng_)];
    }
    return {lo_.x() + (hi_.x() - lo_.x()) * u(rng_), lo_.y() + (hi_.y() - lo_.y()) * u(rng_),
            (2.0 * u(rng_) - 1.0) * std::numbers::pi};
  }

  int nearest_node(const Pose2d& q) {
    order_.resize(nodes_.size());
    std::iota(order_.begin(), order_.end(), 0);
    lb_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) lb_[i] = planar_distance(nodes_[i].pose, q);
    std::sort(order_.begin(), order_.end(), [&](int a, int b) { return lb_[a] < lb_[b]; });
    int best = order_[0];
    double best_d = kInf;
    for (int i : order_) {
      if (lb_[i] >= best_d) break;
      const double d = reeds_shepp_distance(nodes_[i].pose, q, rp_.turning_radius);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return best;
  }

  bool edge_free(const Pose2d& from, const ReedsSheppPath& e) const {
    const PathSE2 sampled = discretize(from, e, rp_.step_resolution);
    const auto& poses = sampled.poses();
    const int n = static_cast<int>(poses.size());
    // Coarse-to-fine ordering finds collisions early on long edges.
    for (int stride : {16, 4, 1})
      for (int i = 0; i < n; i += stride) {
        if (stride != 16 && i % (stride * 4) == 0) continue;
        if (!checker_.pose_free(poses[i])) return false;
      }
    return true;
  }

  void propagate(int i, double delta) {
    std::vector<int> stack{i};
    while (!stack.empty()) {
      const int j = stack.back();
      stack.pop_back();
      nodes_[j].cost += delta;
      for (int c : nodes_[j].children) stack.push_back(c);
    }
  }

  const std::vector<Pose2d>& goals_;
  const CollisionChecker& checker_;
  RRTParams rp_;
  std::mt19937_64 rng_;
  Eigen::Vector2d lo_, hi_;
  std::vector<Node> nodes_;
  std::vector<GoalLink> links_;
  std::vector<int> order_;
  std::vector<double> lb_;
};

}  // namespace

void RRTParams::validate() const {
  if (!(turning_radius > 0.0)) throw std::invalid_argument("turning_radius must be positive");
  if (!(max_time > 0.0)) throw std::invalid_argument("max_time must be positive");
  if (!(step_resolution > 0.0)) throw std::invalid_argument("step_resolution must be positive");
  if (goal_bias < 0.0 || goal_bias > 1.0) throw std::invalid_argument("goal_bias must be in [0, 1]");
}

std::string to_string(PlanStatus status) {
  switch (status) {
    case PlanStatus::kSuccess:
      return "success";
    case PlanStatus::kInfeasibleTarget:
      return "infeasible target";
    case PlanStatus::kNotAttained:
      return "not attained within budget";
    case PlanStatus::kStartInCollision:
      return "start in collision";
  }
  return "unknown";
}

PlanOutcome plan(const Pose2d& start, const Eigen::Vector2d& target, const GridMap2D& occupancy,
                 const ApproachParams& ap, const RRTParams& rp) {
  rp.validate();
  const Clock clock;
  PlanOutcome out;
  const std::vector<Pose2d> goals = compute_candidate_approach_poses(target, occupancy, ap);
  out.result.candidate_count = static_cast<int>(goals.size());
  out.result.t_approach = clock.elapsed();
  if (goals.empty()) {
    out.status = PlanStatus::kInfeasibleTarget;
    out.result.t_total = clock.elapsed();
    return out;
  }
  const CollisionChecker checker(occupancy, ap.path_footprint);
  if (!checker.pose_free(start)) {
    out.status = PlanStatus::kStartInCollision;
    out.result.t_total = clock.elapsed();
    return out;
  }

  Rrt tree(start, goals, checker, rp);
  tree.try_goals(0);
  PlanResult& r = out.result;
  bool first = false;
  auto note_first = [&] {
    if (first || !tree.solved()) return;
    first = true;
    r.t_first_solution = clock.elapsed();
    r.length_initial = tree.link_cost(tree.best_link());
  };
  note_first();
  int it = 0;
  while (!(first && rp.stop_at_first_solution)) {
    if (rp.max_iterations > 0 && it >= rp.max_iterations) break;
    if (clock.elapsed() >= rp.max_time) break;
    tree.iterate();
    ++it;
    note_first();
  }
  r.iterations = it;
  r.tree_size = tree.size();
  if (!tree.solved()) {
    out.status = PlanStatus::kNotAttained;
    r.t_total = clock.elapsed();
    return out;
  }
  const int k = tree.best_link();
  r.approach_pose = goals[tree.link(k).candidate];
  r.path = tree.extract(k);
  r.length_final = tree.link_cost(k);
  r.length_lower_bound = planar_distance(start, r.approach_pose);
  r.t_total = clock.elapsed();
  out.status = PlanStatus::kSuccess;
  return out;
}

bool feasibility_probe(const Pose2d& start, const Eigen::Vector2d& target, const GridMap2D& occupancy,
                       const ApproachParams& ap, const RRTParams& rp, double budget) {
  RRTParams p = rp;
  p.max_time = budget;
  p.stop_at_first_solution = true;
  return plan(start, target, occupancy, ap, p).ok();
}

}  // namespace harvest

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "crowdsense/direction_miner.hpp"
#include "crowdsense/error.hpp"
#include "crowdsense/random.hpp"
#include "crowdsense/generators.hpp"

using namespace crowdsense;
using direction::MatchedTrajectory;
using direction::Trajectory;
using direction::Traversal;

namespace {

// 0 --1-- 1 --2-- 2 along the x axis, 100 m each, and a spur 1 --3-- 3 north.
RoadNetwork line_network() {
  RoadNetwork net;
  net.add_node(0, {0, 0});
  net.add_node(1, {100, 0});
  net.add_node(2, {200, 0});
  net.add_node(3, {100, 100});
  net.add_segment(1, 0, 1);
  net.add_segment(2, 1, 2);
  net.add_segment(3, 1, 3);
  return net;
}

Trajectory march(geo::PlanarPoint a, geo::PlanarPoint b, int n) {
  Trajectory t;
  for (int i = 0; i < n; ++i) {
    const double s = (i + 0.5) / n;
    t.points.push_back(a + s * (b - a));
  }
  return t;
}

MatchedTrajectory kept(Travel travel) {
  MatchedTrajectory m;
  m.source = {-400, 10};
  m.destination = {600, -10};
  m.traversals = {{1, travel}};
  return m;
}

}  // namespace

TEST(Match, SingleSegmentForwardAndBackward) {
  const auto net = line_network();
  const auto fwd = direction::match_trajectory(march({5, 1}, {95, -1}, 10), net, 30);
  ASSERT_EQ(fwd.traversals.size(), 1u);
  EXPECT_EQ(fwd.traversals[0], (Traversal{1, Travel::Forward}));
  const auto bwd = direction::match_trajectory(march({95, -1}, {5, 1}, 10), net, 30);
  ASSERT_EQ(bwd.traversals.size(), 1u);
  EXPECT_EQ(bwd.traversals[0], (Traversal{1, Travel::Backward}));
}

TEST(Match, ChainAcrossSegments) {
  const auto net = line_network();
  Trajectory t = march({5, 0}, {195, 0}, 20);
  const auto m = direction::match_trajectory(t, net, 30);
  EXPECT_EQ(m.traversals, (std::vector<Traversal>{{1, Travel::Forward}, {2, Travel::Forward}}));
  EXPECT_EQ(m.source, t.points.front());
  EXPECT_EQ(m.destination, t.points.back());

  const auto turn = direction::match_trajectory(
      [] {
        Trajectory x = march({195, 0}, {105, 0}, 9);
        const auto up = march({100, 5}, {100, 95}, 9);
        x.points.insert(x.points.end(), up.points.begin(), up.points.end());
        return x;
      }(),
      net, 30);
  EXPECT_EQ(turn.traversals, (std::vector<Traversal>{{2, Travel::Backward}, {3, Travel::Forward}}));
}

TEST(Match, GateDropsFarPoints) {
  const auto net = line_network();
  Trajectory t = march({5, 0}, {95, 0}, 10);
  t.points.insert(t.points.begin() + 5, geo::PlanarPoint{50, -500});
  const auto m = direction::match_trajectory(t, net, 30);
  EXPECT_EQ(m.traversals, (std::vector<Traversal>{{1, Travel::Forward}}));
  EXPECT_LE(m.traversals.size(), t.points.size());
}

TEST(Match, NothingInRange) {
  const auto net = line_network();
  try {
    direction::match_trajectory(march({0, 600}, {100, 600}, 5), net, 30);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoMatch);
  }
}

TEST(Match, OutputNoLongerThanInput) {
  const auto grid = synth::gen_grid_network(6, 6, 100, 1, 1, 3);
  Rng rng(2);
  std::uniform_real_distribution<double> c(-50, 550);
  for (int i = 0; i < 200; ++i) {
    Trajectory t;
    const int n = 2 + static_cast<int>(rng() % 30);
    for (int k = 0; k < n; ++k) t.points.push_back({c(rng), c(rng)});
    try {
      const auto m = direction::match_trajectory(t, grid.scored.network, 30);
      ASSERT_LE(m.traversals.size(), t.points.size());
      for (std::size_t k = 1; k < m.traversals.size(); ++k) ASSERT_NE(m.traversals[k], m.traversals[k - 1]);
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), ErrorCode::NoMatch);
    }
  }
}

TEST(Determine, MajorityVote) {
  const auto net = line_network();
  std::vector<MatchedTrajectory> trajs(4, kept(Travel::Forward));
  trajs.push_back(kept(Travel::Backward));
  EXPECT_EQ(direction::determine_direction(net, 1, trajs, {-500, 0}, {700, 0}), AllowedDirection::Forward);
  trajs.push_back(kept(Travel::Backward));
  trajs.push_back(kept(Travel::Backward));
  trajs.push_back(kept(Travel::Backward));
  EXPECT_EQ(direction::determine_direction(net, 1, trajs, {-500, 0}, {700, 0}), AllowedDirection::Both);
  trajs.push_back(kept(Travel::Backward));
  EXPECT_EQ(direction::determine_direction(net, 1, trajs, {-500, 0}, {700, 0}), AllowedDirection::Backward);
}

TEST(Determine, NothingKeptMeansBoth) {
  const auto net = line_network();
  EXPECT_EQ(direction::determine_direction(net, 1, {}, {-500, 0}, {700, 0}), AllowedDirection::Both);
  // sources on the far side fail the angle test
  auto m = kept(Travel::Forward);
  m.source = {900, 0};
  std::vector<MatchedTrajectory> trajs(5, m);
  EXPECT_EQ(direction::determine_direction(net, 1, trajs, {-500, 0}, {700, 0}), AllowedDirection::Both);
  // and trajectories not touching the segment do not vote
  auto other = kept(Travel::Forward);
  other.traversals = {{2, Travel::Forward}};
  std::vector<MatchedTrajectory> elsewhere(5, other);
  EXPECT_EQ(direction::determine_direction(net, 1, elsewhere, {-500, 0}, {700, 0}), AllowedDirection::Both);
}

TEST(Determine, AngleToleranceIsInclusiveBound) {
  const auto net = line_network();
  auto m = kept(Travel::Forward);
  // source at 60 degrees off the start->near heading
  m.source = {-500 * 0.5, 500 * std::sqrt(3.0) / 2};
  std::vector<MatchedTrajectory> trajs{m};
  EXPECT_EQ(direction::determine_direction(net, 1, trajs, {-500, 0}, {700, 0}), AllowedDirection::Both);
  EXPECT_EQ(direction::determine_direction(net, 1, trajs, {-500, 0}, {700, 0}, geo::kPi / 2.5),
            AllowedDirection::Forward);
}

TEST(Determine, PermutationInvariant) {
  const auto grid = synth::gen_grid_network(12, 12, 100, 1, 1, 5);
  for (int seed = 0; seed < 10; ++seed) {
    const auto fleet = synth::gen_taxi_fleet(grid.scored, {}, seed);
    std::vector<MatchedTrajectory> matched;
    for (const auto& t : fleet.trajectories) {
      matched.push_back(direction::match_trajectory(t, grid.scored.network, 30));
    }
    const auto base = direction::determine_direction(grid.scored.network, fleet.target, matched, fleet.start, fleet.end);
    Rng rng(seed);
    for (int k = 0; k < 5; ++k) {
      std::shuffle(matched.begin(), matched.end(), rng);
      ASSERT_EQ(direction::determine_direction(grid.scored.network, fleet.target, matched, fleet.start, fleet.end),
                base);
    }
  }
}

TEST(Determine, ReversalFlipsNoiselessOutcome) {
  const auto grid = synth::gen_grid_network(12, 12, 100, 1, 1, 6);
  synth::FleetConfig cfg;
  cfg.endpoint_jitter = 0;
  cfg.gps_sigma = 0;
  cfg.aligned_share = 0.7;
  cfg.reverse_share = 0.3;
  int decided = 0;
  for (int seed = 0; seed < 30; ++seed) {
    const auto fleet = synth::gen_taxi_fleet(grid.scored, cfg, seed);
    std::vector<MatchedTrajectory> matched, flipped;
    for (const auto& t : fleet.trajectories) {
      matched.push_back(direction::match_trajectory(t, grid.scored.network, 30));
      flipped.push_back(direction::reversed(matched.back()));
    }
    const auto& net = grid.scored.network;
    for (const auto& seg : net.segments()) {
      // an endpoint sitting on a query end makes the angle test vacuous on one side only
      const auto pu = net.node(seg.u), pv = net.node(seg.v);
      if (std::min({geo::distance(pu, fleet.start), geo::distance(pv, fleet.start), geo::distance(pu, fleet.end),
                    geo::distance(pv, fleet.end)}) < 1e-9)
        continue;
      const auto a = direction::determine_direction(net, seg.id, matched, fleet.start, fleet.end);
      const auto b = direction::determine_direction(net, seg.id, flipped, fleet.end, fleet.start);
      if (a == AllowedDirection::Both) continue;
      ++decided;
      ASSERT_EQ(b, a == AllowedDirection::Forward ? AllowedDirection::Backward : AllowedDirection::Forward)
          << "seed " << seed << " segment " << seg.id;
    }
  }
  EXPECT_GT(decided, 30);
}

TEST(Determine, PlantedDirectionRecovered) {
  const auto grid = synth::gen_grid_network(20, 20, 100, 1, 1, 0);
  int hits = 0;
  for (int seed = 0; seed < 30; ++seed) {
    const auto fleet = synth::gen_taxi_fleet(grid.scored, {}, seed);
    std::vector<MatchedTrajectory> matched;
    for (const auto& t : fleet.trajectories) {
      matched.push_back(direction::match_trajectory(t, grid.scored.network, 30));
    }
    const auto got = direction::determine_direction(grid.scored.network, fleet.target, matched, fleet.start, fleet.end);
    const auto want = fleet.planted == Travel::Forward ? AllowedDirection::Forward : AllowedDirection::Backward;
    hits += got == want;
  }
  EXPECT_GE(hits, 28);
}

TEST(MineDirections, WritesOnlyListedSegments) {
  auto grid = synth::gen_grid_network(10, 10, 100, 1, 1, 1);
  const auto fleet = synth::gen_taxi_fleet(grid.scored, {}, 4);
  std::vector<MatchedTrajectory> matched;
  for (const auto& t : fleet.trajectories) matched.push_back(direction::match_trajectory(t, grid.scored.network, 30));
  const std::vector<SegmentId> only{fleet.target};
  direction::mine_directions(grid.scored, only, matched, fleet.start, fleet.end);
  for (const auto& seg : grid.scored.network.segments()) {
    if (seg.id == fleet.target) continue;
    ASSERT_EQ(grid.scored.score(seg.id).direction, AllowedDirection::Both);
  }
  EXPECT_EQ(grid.scored.score(fleet.target).direction,
            direction::determine_direction(grid.scored.network, fleet.target, matched, fleet.start, fleet.end));
}

TEST(Reversed, Involution) {
  MatchedTrajectory m;
  m.source = {1, 2};
  m.destination = {3, 4};
  m.traversals = {{1, Travel::Forward}, {7, Travel::Backward}};
  const auto r = direction::reversed(m);
  EXPECT_EQ(r.traversals, (std::vector<Traversal>{{7, Travel::Forward}, {1, Travel::Backward}}));
  EXPECT_EQ(r.source, m.destination);
  const auto rr = direction::reversed(r);
  EXPECT_EQ(rr.traversals, m.traversals);
  EXPECT_EQ(rr.source, m.source);
}

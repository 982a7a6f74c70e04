#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "crowdsense/error.hpp"
#include "crowdsense/generators.hpp"

using namespace crowdsense;

TEST(EventScene, NoiselessHeadingsHitTruth) {
  const geo::PlanarPoint truth{12, -7};
  const auto s = synth::gen_event_scene(truth, 8, 30, 0, 0, 5);
  ASSERT_EQ(s.observations.size(), 8u);
  for (const auto& o : s.observations) {
    EXPECT_NEAR(geo::distance(o.location, truth), 30, 1e-9);
    const double want = geo::Heading::between(o.location, truth).radians();
    EXPECT_NEAR(geo::angular_difference(o.heading, geo::Heading(want)), 0, 1e-12);
  }
  event::TrapezoidConfig cfg;
  EXPECT_NEAR(event::compute_dmvd(s.observations, cfg), 30, 1e-9);
}

TEST(EventScene, DiameterWithinNoiseBand) {
  for (int seed = 0; seed < 50; ++seed) {
    const auto s = synth::gen_event_scene({0, 0}, 8, 30, 3, 5, seed);
    double maxd = 0;
    for (std::size_t i = 0; i < s.observations.size(); ++i)
      for (std::size_t j = i + 1; j < s.observations.size(); ++j)
        maxd = std::max(maxd, geo::distance(s.observations[i].location, s.observations[j].location));
    EXPECT_NEAR(maxd, 60, 2 * 3 * 3) << "seed " << seed;
  }
}

TEST(EventScene, Deterministic) {
  const auto a = synth::gen_event_scene({0, 0}, 8, 30, 3, 5, 77);
  const auto b = synth::gen_event_scene({0, 0}, 8, 30, 3, 5, 77);
  const auto c = synth::gen_event_scene({0, 0}, 8, 30, 3, 5, 78);
  for (std::size_t i = 0; i < a.observations.size(); ++i) {
    EXPECT_EQ(a.observations[i].location, b.observations[i].location);
    EXPECT_EQ(a.observations[i].heading.radians(), b.observations[i].heading.radians());
  }
  EXPECT_NE(a.observations[0].location, c.observations[0].location);
  EXPECT_THROW(synth::gen_event_scene({0, 0}, 1, 30, 3, 5, 0), Error);
}

TEST(PictureStream, NoBiasFullCoverage) {
  const auto g = synth::gen_picture_stream(5, 12, 1.0, 0.0, 3);
  ASSERT_EQ(g.truth.segment_count(), 5u);
  for (const auto& [b, e] : g.truth.segments()) {
    std::map<std::string, int> counts;
    for (std::size_t i = b; i < e; ++i) ++counts[g.stream.events[i].contributor];
    EXPECT_EQ(counts.size(), 12u);
    for (const auto& [_, n] : counts) EXPECT_EQ(n, 1);
  }
  EXPECT_EQ(g.stream.viewer_count, 12);
}

TEST(PictureStream, SingleSubEvent) {
  const auto g = synth::gen_picture_stream(1, 10, 0.5, 2.0, 9);
  EXPECT_EQ(g.truth.segment_count(), 1u);
  EXPECT_EQ(g.truth.length(), g.stream.events.size());
}

TEST(PictureStream, CoverageAndOrdering) {
  for (int seed = 0; seed < 30; ++seed) {
    const auto g = synth::gen_picture_stream(6, 20, 0.4, 2.0, seed);
    for (std::size_t i = 1; i < g.stream.events.size(); ++i) {
      ASSERT_LE(g.stream.events[i - 1].timestamp, g.stream.events[i].timestamp);
    }
    for (const auto& [b, e] : g.truth.segments()) {
      std::set<std::string> who;
      for (std::size_t i = b; i < e; ++i) who.insert(g.stream.events[i].contributor);
      ASSERT_EQ(who.size(), 8u);
    }
  }
  EXPECT_THROW(synth::gen_picture_stream(3, 10, 0.0, 1, 0), Error);
  EXPECT_THROW(synth::gen_picture_stream(3, 10, 1.5, 1, 0), Error);
}

TEST(Grid, LatticeCounts) {
  const auto g = synth::gen_grid_network(20, 20, 100, 10, 0.1, 1);
  EXPECT_EQ(g.scored.network.nodes().size(), 400u);
  EXPECT_EQ(g.scored.network.segment_count(), 760u);
  EXPECT_EQ(g.corridor.size(), 38u);
  for (const auto& seg : g.scored.network.segments()) EXPECT_DOUBLE_EQ(seg.length, 100);
  EXPECT_EQ(g.scored.network.node(g.node_at(3, 5)), (geo::PlanarPoint{300, 500}));
}

TEST(Grid, CorridorIsMonotoneWalk) {
  const auto g = synth::gen_grid_network(10, 7, 50, 10, 0.1, 4);
  NodeId at = g.node_at(0, 0);
  for (const auto id : g.corridor) {
    const auto& seg = g.scored.network.segment(id);
    ASSERT_EQ(seg.u, at);  // lattice segments point right or up
    at = seg.v;
    ASSERT_EQ(g.scored.score(id).si, 10);
  }
  EXPECT_EQ(at, g.node_at(9, 6));
  std::size_t background = 0;
  for (const auto& s : g.scored.scores) background += s.si == 0.1;
  EXPECT_EQ(background, g.scored.network.segment_count() - g.corridor.size());
}

TEST(Grid, DegenerateScoresAndDeterminism) {
  const auto flat = synth::gen_grid_network(5, 5, 100, 2, 2, 8);
  for (const auto& s : flat.scored.scores) EXPECT_EQ(s.si, 2);
  const auto a = synth::gen_grid_network(9, 9, 100, 10, 0.1, 8);
  const auto b = synth::gen_grid_network(9, 9, 100, 10, 0.1, 8);
  EXPECT_EQ(a.corridor, b.corridor);
  EXPECT_THROW(synth::gen_grid_network(1, 5, 100, 1, 1, 0), Error);
}

TEST(ScenicEvidence, PlantedSegmentRanksFirst) {
  const auto g = synth::gen_grid_network(12, 12, 100, 1, 1, 2);
  const auto ev = synth::gen_scenic_evidence(g, 2);
  EXPECT_EQ(ev.labels.size(), ev.checkins.size());
  scenic::ScoringConfig cfg;
  cfg.delta = 30;
  const auto scored = scenic::score_network(g.scored.network, ev.photos, ev.checkins, cfg);
  SegmentId best = -1;
  double top = -1;
  for (std::size_t i = 0; i < scored.scores.size(); ++i) {
    if (scored.scores[i].si > top) {
      top = scored.scores[i].si;
      best = scored.network.segments()[i].id;
    }
  }
  EXPECT_EQ(best, ev.planted);
  for (std::size_t i = 0; i < ev.labels.size(); ++i) {
    EXPECT_EQ(scenic::categorize_poi(ev.labels[i]), ev.checkins[i].category);
  }
}

TEST(Fleet, ShapeAndDeterminism) {
  const auto g = synth::gen_grid_network(15, 15, 100, 1, 1, 0);
  const auto a = synth::gen_taxi_fleet(g.scored, {}, 5);
  const auto b = synth::gen_taxi_fleet(g.scored, {}, 5);
  ASSERT_FALSE(a.trajectories.empty());
  EXPECT_LE(a.trajectories.size(), 40u);
  EXPECT_EQ(a.target, b.target);
  ASSERT_EQ(a.trajectories.size(), b.trajectories.size());
  for (std::size_t i = 0; i < a.trajectories.size(); ++i) {
    ASSERT_EQ(a.trajectories[i].points, b.trajectories[i].points);
    ASSERT_GE(a.trajectories[i].points.size(), 2u);
  }
  EXPECT_GE(geo::distance(a.start, a.end), 0.5 * std::hypot(1400, 1400));
}

TEST(SamplePath, EvenSpacing) {
  const auto g = synth::gen_grid_network(4, 4, 100, 1, 1, 0);
  const std::vector<direction::Traversal> path{{0, Travel::Forward}, {1, Travel::Forward}};
  const auto t = synth::sample_path(g.scored.network, path, 10);
  ASSERT_EQ(t.points.size(), 20u);
  EXPECT_EQ(t.points.front(), (geo::PlanarPoint{5, 0}));
  for (std::size_t i = 1; i < t.points.size(); ++i) {
    EXPECT_NEAR(geo::distance(t.points[i - 1], t.points[i]), 10, 1e-9);
  }
}

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "crowdsense/error.hpp"
#include "crowdsense/random.hpp"
#include "crowdsense/scenic_scorer.hpp"

using namespace crowdsense;
using scenic::CheckIn;
using scenic::GeoTaggedPhoto;
using scenic::POIGroup;

namespace {

RoadNetwork one_segment() {
  RoadNetwork net;
  net.add_node(1, {0, 0});
  net.add_node(2, {1000, 0});
  net.add_segment(10, 1, 2);
  return net;
}

std::vector<GeoTaggedPhoto> photos_near(int n, double y = 10) {
  std::vector<GeoTaggedPhoto> out;
  for (int i = 0; i < n; ++i) out.push_back({{100.0 + 50 * i, y}});
  return out;
}

// 2 natural + 1 tourist in range, 7 far away: the hand-evaluated fixture.
std::vector<CheckIn> ten_checkins() {
  std::vector<CheckIn> out{{{100, 5}, POIGroup::NaturalScenery},
                           {{300, -20}, POIGroup::NaturalScenery},
                           {{500, 50}, POIGroup::TouristAttraction}};
  for (int i = 0; i < 7; ++i) out.push_back({{100.0 * i, 5000}, POIGroup::Others});
  return out;
}

}  // namespace

TEST(Categorize, ListedLabels) {
  const std::vector<std::string> natural{"Park",  "garden", "lake",   "forest", "mountain", "beach",
                                         "sea",   "river",  "bridge", "harbor", "scenic",   "hiking"};
  const std::vector<std::string> tourist{"Museum",   "palace", "church", "gallery", "memorial",
                                         "monument", "square", "zoo",    "university", "historic site"};
  for (const auto& l : natural) EXPECT_EQ(scenic::categorize_poi(l), POIGroup::NaturalScenery) << l;
  for (const auto& l : tourist) EXPECT_EQ(scenic::categorize_poi(l), POIGroup::TouristAttraction) << l;
  EXPECT_EQ(natural.size() + tourist.size(), 22u);
  EXPECT_EQ(scenic::natural_scenery_labels().size(), natural.size());
  EXPECT_EQ(scenic::tourist_attraction_labels().size(), tourist.size());
}

TEST(Categorize, FreeTextLabels) {
  EXPECT_EQ(scenic::categorize_poi("Laundromat"), POIGroup::Others);
  EXPECT_EQ(scenic::categorize_poi("Restaurant"), POIGroup::Others);
  EXPECT_EQ(scenic::categorize_poi("HISTORIC SITE Museum"), POIGroup::TouristAttraction);
  EXPECT_EQ(scenic::categorize_poi("Golden Gate Bridge"), POIGroup::NaturalScenery);
  EXPECT_EQ(scenic::categorize_poi("City Parks"), POIGroup::NaturalScenery);
  // natural keywords win over tourist ones
  EXPECT_EQ(scenic::categorize_poi("Museum Garden"), POIGroup::NaturalScenery);
  // whole words only
  EXPECT_EQ(scenic::categorize_poi("Parking"), POIGroup::Others);
  EXPECT_EQ(scenic::categorize_poi("Seafood"), POIGroup::Others);
  EXPECT_EQ(scenic::categorize_poi(""), POIGroup::Others);
}

TEST(ScorePhotos, Smoothing) {
  const auto net = one_segment();
  const auto& seg = net.segment(10);
  const scenic::ScoringConfig cfg;
  EXPECT_EQ(scenic::score_photos(seg, {}, cfg), 0.0);
  EXPECT_NEAR(scenic::score_photos(seg, photos_near(9), cfg), std::log(10.0), 1e-12);
  EXPECT_NEAR(std::log(10.0), 2.3026, 1e-4);
}

TEST(ScorePhotos, StrictRadius) {
  const auto net = one_segment();
  scenic::ScoringConfig cfg;
  cfg.delta = 10;
  const std::vector<GeoTaggedPhoto> edge{{{500, 10}}}, inside{{{500, 9.999}}}, past_end{{{1005, 0}}};
  EXPECT_EQ(scenic::score_photos(net.segment(10), edge, cfg), 0.0);
  EXPECT_GT(scenic::score_photos(net.segment(10), inside, cfg), 0.0);
  EXPECT_GT(scenic::score_photos(net.segment(10), past_end, cfg), 0.0);
}

TEST(ScorePhotos, MonotoneInAddedPhotos) {
  const auto net = one_segment();
  const scenic::ScoringConfig cfg;
  Rng rng(4);
  std::uniform_real_distribution<double> x(-200, 1200), y(-300, 300);
  std::vector<GeoTaggedPhoto> photos;
  double prev = 0;
  for (int i = 0; i < 300; ++i) {
    photos.push_back({{x(rng), y(rng)}});
    const double sp = scenic::score_photos(net.segment(10), photos, cfg);
    ASSERT_GE(sp, prev);
    prev = sp;
  }
}

TEST(ScoreCheckins, WeightedFixture) {
  const auto net = one_segment();
  const scenic::ScoringConfig cfg;
  const auto ck = ten_checkins();
  EXPECT_NEAR(scenic::score_checkins(net.segment(10), ck, ck.size(), cfg), 0.16, 1e-9);
  const std::vector<CheckIn> far{{{0, 9000}, POIGroup::NaturalScenery}};
  EXPECT_EQ(scenic::score_checkins(net.segment(10), far, 1, cfg), 0.0);
}

TEST(ScoreCheckins, NaturalOutweighsOthers) {
  const auto net = one_segment();
  const scenic::ScoringConfig cfg;
  auto ck = ten_checkins();
  ck.push_back({{700, 0}, POIGroup::Others});
  const double before = scenic::score_checkins(net.segment(10), ck, ck.size(), cfg);
  ck.back().category = POIGroup::NaturalScenery;
  EXPECT_GT(scenic::score_checkins(net.segment(10), ck, ck.size(), cfg), before);
}

TEST(ScoreCheckins, EmptySetRejected) {
  const auto net = one_segment();
  try {
    scenic::score_checkins(net.segment(10), {}, 0, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyCheckInSet);
  }
}

TEST(ScoreIntegrated, Product) {
  EXPECT_EQ(scenic::score_integrated(0.0, 5.0), 0.0);
  EXPECT_EQ(scenic::score_integrated(5.0, 0.0), 0.0);
  EXPECT_NEAR(scenic::score_integrated(std::log(10.0), 0.16), 0.3684, 1e-4);
}

TEST(ScoreNetwork, OneSegmentComposition) {
  const auto net = one_segment();
  const auto scored = scenic::score_network(net, photos_near(9), ten_checkins(), {});
  ASSERT_EQ(scored.scores.size(), 1u);
  EXPECT_NEAR(scored.score(10).sp, std::log(10.0), 1e-12);
  EXPECT_NEAR(scored.score(10).sc, 0.16, 1e-12);
  EXPECT_NEAR(scored.score(10).si, 0.3684, 1e-4);
  EXPECT_EQ(scored.score(10).direction, AllowedDirection::Both);
}

TEST(ScoreNetwork, FarDataScoresZero) {
  const auto net = one_segment();
  std::vector<GeoTaggedPhoto> photos{{{0, 500}}, {{900, -101}}};
  std::vector<CheckIn> ck{{{0, 500}, POIGroup::NaturalScenery}};
  const auto scored = scenic::score_network(net, photos, ck, {});
  EXPECT_EQ(scored.score(10).si, 0.0);
}

namespace {

RoadNetwork random_network(Rng& rng, geo::PlanarPoint shift) {
  std::uniform_real_distribution<double> c(0, 2000);
  RoadNetwork net;
  for (int i = 0; i < 30; ++i) net.add_node(i, geo::PlanarPoint{c(rng), c(rng)} + shift);
  for (int i = 1; i < 30; ++i) {
    const auto a = net.node(i), b = net.node(i - 1);
    const geo::PlanarPoint bend{a.x, b.y};
    net.add_segment(i, i, i - 1, {a, bend, b});
  }
  return net;
}

}  // namespace

TEST(ScoreNetwork, PermutationAndThreadInvariant) {
  Rng rng(8);
  const auto net = random_network(rng, {0, 0});
  std::uniform_real_distribution<double> c(0, 2000);
  std::vector<GeoTaggedPhoto> photos;
  std::vector<CheckIn> ck;
  for (int i = 0; i < 500; ++i) photos.push_back({{c(rng), c(rng)}});
  for (int i = 0; i < 120; ++i) ck.push_back({{c(rng), c(rng)}, static_cast<POIGroup>(1 + i % 3)});
  const auto base = scenic::score_network(net, photos, ck, {});
  std::shuffle(photos.begin(), photos.end(), rng);
  std::shuffle(ck.begin(), ck.end(), rng);
  for (const unsigned threads : {1u, 3u, 8u}) {
    const auto other = scenic::score_network(net, photos, ck, {}, threads);
    for (std::size_t i = 0; i < base.scores.size(); ++i) {
      ASSERT_EQ(base.scores[i].sp, other.scores[i].sp);
      ASSERT_EQ(base.scores[i].sc, other.scores[i].sc);
      ASSERT_EQ(base.scores[i].si, other.scores[i].si);
    }
  }
}

TEST(ScoreNetwork, TranslationInvariant) {
  // power-of-two shift keeps every coordinate difference exact
  const geo::PlanarPoint shift{4096, -8192};
  Rng a(12), b(12);
  const auto net = random_network(a, {0, 0});
  const auto moved = random_network(b, shift);
  std::uniform_real_distribution<double> c(0, 2000);
  std::vector<GeoTaggedPhoto> photos, photos2;
  std::vector<CheckIn> ck, ck2;
  for (int i = 0; i < 300; ++i) {
    const geo::PlanarPoint p{std::round(c(a)), std::round(c(a))};
    photos.push_back({p});
    photos2.push_back({p + shift});
  }
  for (int i = 0; i < 90; ++i) {
    const geo::PlanarPoint p{std::round(c(a)), std::round(c(a))};
    ck.push_back({p, static_cast<POIGroup>(1 + i % 3)});
    ck2.push_back({p + shift, static_cast<POIGroup>(1 + i % 3)});
  }
  const auto s1 = scenic::score_network(net, photos, ck, {});
  const auto s2 = scenic::score_network(moved, photos2, ck2, {});
  for (std::size_t i = 0; i < s1.scores.size(); ++i) {
    ASSERT_EQ(s1.scores[i].si, s2.scores[i].si) << "segment index " << i;
  }
}

TEST(ScoreNetwork, NaturalCheckinsOutrankBusyOrdinaryRoad) {
  // Road A: a few photos, many natural-scenery check-ins. Road B: more photos
  // but only ordinary venues.
  RoadNetwork net;
  net.add_node(0, {0, 0});
  net.add_node(1, {1000, 0});
  net.add_node(2, {0, 5000});
  net.add_node(3, {1000, 5000});
  net.add_segment(1, 0, 1);
  net.add_segment(2, 2, 3);
  std::vector<GeoTaggedPhoto> photos;
  for (int i = 0; i < 4; ++i) photos.push_back({{100.0 + 200 * i, 10}});
  for (int i = 0; i < 12; ++i) photos.push_back({{50.0 + 75 * i, 5010}});
  std::vector<CheckIn> ck;
  for (int i = 0; i < 8; ++i) ck.push_back({{100.0 + 100 * i, -20}, POIGroup::NaturalScenery});
  for (int i = 0; i < 20; ++i) ck.push_back({{40.0 + 45 * i, 4980}, POIGroup::Others});
  const auto scored = scenic::score_network(net, photos, ck, {});
  EXPECT_GT(scored.score(1).si, scored.score(2).si);
  EXPECT_GT(scored.score(2).sp, scored.score(1).sp);
}

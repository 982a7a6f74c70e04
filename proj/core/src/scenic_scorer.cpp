#include "crowdsense/scenic_scorer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "crowdsense/error.hpp"

namespace crowdsense::scenic {

namespace {

constexpr std::array<std::string_view, 12> kNatural{
    "park", "garden", "lake", "forest", "mountain", "beach",
    "sea",  "river",  "bridge", "harbor", "scenic", "hiking"};
constexpr std::array<std::string_view, 10> kTourist{
    "museum", "palace", "church", "gallery", "memorial",
    "monument", "square", "zoo", "university", "historic site"};

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

bool token_matches(const std::string& token, const std::string& word) {
  // "parks" counts as "park"
  return token == word || (token.size() == word.size() + 1 && token.back() == 's' &&
                           token.compare(0, word.size(), word) == 0);
}

bool contains_keyword(const std::vector<std::string>& tokens, std::string_view keyword) {
  const auto words = tokenize(keyword);
  if (words.empty() || words.size() > tokens.size()) return false;
  for (std::size_t start = 0; start + words.size() <= tokens.size(); ++start) {
    bool all = true;
    for (std::size_t k = 0; k < words.size() && all; ++k) {
      all = token_matches(tokens[start + k], words[k]);
    }
    if (all) return true;
  }
  return false;
}

// Bucketed point set for delta-range queries around polylines.
class PointBuckets {
 public:
  PointBuckets(std::span<const geo::PlanarPoint> points, double cell) : cell_(cell) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      buckets_[{key(points[i].x), key(points[i].y)}].push_back(i);
    }
  }

  template <typename Fn>
  void for_each_near(const geo::BoundingBox& box, Fn&& fn) const {
    for (auto cx = key(box.min_x); cx <= key(box.max_x); ++cx) {
      for (auto cy = key(box.min_y); cy <= key(box.max_y); ++cy) {
        const auto it = buckets_.find({cx, cy});
        if (it == buckets_.end()) continue;
        for (const auto i : it->second) fn(i);
      }
    }
  }

 private:
  std::int64_t key(double v) const { return static_cast<std::int64_t>(std::floor(v / cell_)); }

  double cell_;
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>> buckets_;
};

}  // namespace

void ScoringConfig::validate() const {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
  for (const double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorCode::InvalidArgument, "POI group weights must be non-negative");
  }
}

std::span<const std::string_view> natural_scenery_labels() { return kNatural; }
std::span<const std::string_view> tourist_attraction_labels() { return kTourist; }

POIGroup categorize_poi(std::string_view label) {
  const auto tokens = tokenize(label);
  for (const auto kw : kNatural) {
    if (contains_keyword(tokens, kw)) return POIGroup::NaturalScenery;
  }
  for (const auto kw : kTourist) {
    if (contains_keyword(tokens, kw)) return POIGroup::TouristAttraction;
  }
  return POIGroup::Others;
}

double score_photos(const RoadSegment& segment, std::span<const GeoTaggedPhoto> photos,
                    const ScoringConfig& cfg) {
  std::size_t count = 0;
  for (const auto& p : photos) {
    if (geo::point_to_polyline_distance(p.loc, segment.polyline) < cfg.delta) ++count;
  }
  return std::log1p(static_cast<double>(count));
}

double score_checkins(const RoadSegment& segment, std::span<const CheckIn> checkins,
                      std::size_t total_checkins, const ScoringConfig& cfg) {
  if (total_checkins == 0) throw Error(ErrorCode::EmptyCheckInSet, "check-in set is empty");
  std::array<std::size_t, 3> counts{};
  for (const auto& ck : checkins) {
    if (geo::point_to_polyline_distance(ck.loc, segment.polyline) < cfg.delta) {
      ++counts[static_cast<std::size_t>(ck.category) - 1];
    }
  }
  double weighted = 0.0;
  for (std::size_t k = 0; k < 3; ++k) weighted += cfg.weights[k] * static_cast<double>(counts[k]);
  return weighted / static_cast<double>(total_checkins);
}

ScoredRoadNetwork score_network(const RoadNetwork& network, std::span<const GeoTaggedPhoto> photos,
                                std::span<const CheckIn> checkins, const ScoringConfig& cfg,
                                unsigned threads) {
  cfg.validate();
  if (checkins.empty()) throw Error(ErrorCode::EmptyCheckInSet, "check-in set is empty");

  std::vector<geo::PlanarPoint> photo_pts;
  photo_pts.reserve(photos.size());
  for (const auto& p : photos) photo_pts.push_back(p.loc);
  std::vector<geo::PlanarPoint> checkin_pts;
  checkin_pts.reserve(checkins.size());
  for (const auto& c : checkins) checkin_pts.push_back(c.loc);
  const PointBuckets photo_index(photo_pts, cfg.delta);
  const PointBuckets checkin_index(checkin_pts, cfg.delta);

  ScoredRoadNetwork out{network, std::vector<SegmentScore>(network.segment_count())};
  const auto segs = network.segments();
  const double total = static_cast<double>(checkins.size());

  auto score_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto& seg = segs[i];
      const auto box = geo::BoundingBox::of(seg.polyline).expanded(cfg.delta);
      std::size_t photo_count = 0;
      photo_index.for_each_near(box, [&](std::size_t k) {
        if (geo::point_to_polyline_distance(photo_pts[k], seg.polyline) < cfg.delta) ++photo_count;
      });
      std::array<std::size_t, 3> counts{};
      checkin_index.for_each_near(box, [&](std::size_t k) {
        if (geo::point_to_polyline_distance(checkin_pts[k], seg.polyline) < cfg.delta) {
          ++counts[static_cast<std::size_t>(checkins[k].category) - 1];
        }
      });
      double weighted = 0.0;
      for (std::size_t k = 0; k < 3; ++k) weighted += cfg.weights[k] * static_cast<double>(counts[k]);
      auto& s = out.scores[i];
      s.sp = std::log1p(static_cast<double>(photo_count));
      s.sc = weighted / total;
      s.si = score_integrated(s.sp, s.sc);
      s.direction = AllowedDirection::Both;
    }
  };

  const std::size_t n = segs.size();
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers <= 1) {
    score_range(0, n);
    return out;
  }
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin < end) pool.emplace_back(score_range, begin, end);
    }
  }  // joins
  return out;
}

}  // namespace crowdsense::scenic

#pragma once

#include <array>
#include <span>
#include <string_view>

#include "crowdsense/geomath.hpp"
#include "crowdsense/road_network.hpp"

namespace crowdsense::scenic {

enum class POIGroup { NaturalScenery = 1, TouristAttraction = 2, Others = 3 };

struct GeoTaggedPhoto {
  geo::PlanarPoint loc;
};

struct CheckIn {
  geo::PlanarPoint loc;
  POIGroup category = POIGroup::Others;
};

struct ScoringConfig {
  double delta = 100.0;                           // visibility radius, meters
  std::array<double, 3> weights{0.65, 0.30, 0.05};  // natural, tourist, others

  void validate() const;
};

/// Venue labels of the natural-scenery and tourist-attraction groups.
std::span<const std::string_view> natural_scenery_labels();
std::span<const std::string_view> tourist_attraction_labels();

/// Whole-word keyword match of a free-text venue label; the natural-scenery
/// keywords are tried first, anything unmatched is Others.
POIGroup categorize_poi(std::string_view label);

/// ln(1 + number of photos strictly closer than delta to the polyline).
double score_photos(const RoadSegment& segment, std::span<const GeoTaggedPhoto> photos,
                    const ScoringConfig& cfg);

/// Group-weighted count of nearby check-ins divided by the total check-in count.
double score_checkins(const RoadSegment& segment, std::span<const CheckIn> checkins,
                      std::size_t total_checkins, const ScoringConfig& cfg);

inline double score_integrated(double sp, double sc) { return sp * sc; }

/// Scores every segment. `threads` > 1 splits the segments across workers;
/// the result does not depend on it. Directions start out as Both.
ScoredRoadNetwork score_network(const RoadNetwork& network, std::span<const GeoTaggedPhoto> photos,
                                std::span<const CheckIn> checkins, const ScoringConfig& cfg,
                                unsigned threads = 1);

}  // namespace crowdsense::scenic

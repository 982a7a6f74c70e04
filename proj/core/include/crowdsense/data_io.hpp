#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "crowdsense/direction_miner.hpp"
#include "crowdsense/event_localizer.hpp"
#include "crowdsense/geomath.hpp"
#include "crowdsense/road_network.hpp"
#include "crowdsense/route_planner.hpp"
#include "crowdsense/scenic_scorer.hpp"
#include "crowdsense/stream_segmenter.hpp"

// File formats (UTF-8 CSV with a header row, coordinates in decimal degrees):
//
//   nodes         id,lat,lon
//   edges         id,u,v,polyline      polyline optional: "lon lat;lon lat;..."
//   scores        segment_id,sp,sc,si,allowed_direction
//   photos        lat,lon
//   checkins      lat,lon,category_label
//   observations  lat,lon,heading_deg,timestamp,contributor
//   trajectories  traj_id,seq,lat,lon
//   stream        timestamp,contributor
//   segmentation  segment                 (one label per stream row)
//   point         lat,lon                 (single row, e.g. a ground truth)
//
// heading_deg is measured counterclockwise from due east.

namespace crowdsense::io {

namespace fs = std::filesystem;

/// Local equirectangular frame shared by every dataset of a run.
struct Projection {
  geo::GeoPoint origin;

  geo::PlanarPoint to_planar(geo::GeoPoint p) const { return geo::project(p, origin); }
  geo::GeoPoint to_geo(geo::PlanarPoint p) const { return geo::unproject(p, origin); }

  /// Origin at the arithmetic mean of the points; (0, 0) for an empty set.
  static Projection centroid_of(std::span<const geo::GeoPoint> points);
};

struct NetworkData {
  Projection projection;
  RoadNetwork network;
};

/// Everything one run works on, projected into a single frame.
struct DatasetBundle {
  Projection projection;
  RoadNetwork network;
  std::vector<scenic::GeoTaggedPhoto> photos;
  std::vector<scenic::CheckIn> checkins;
  std::vector<direction::Trajectory> trajectories;
  std::vector<segment::PictureStream> streams;
  std::vector<event::PhotoObservation> observations;
};

/// Projection origin is the centroid of the node file.
NetworkData load_network(const fs::path& nodes_file, const fs::path& edges_file);
NetworkData load_network(const fs::path& nodes_file, const fs::path& edges_file,
                         const Projection& projection);
void save_network(const RoadNetwork& network, const Projection& projection, const fs::path& nodes_file,
                  const fs::path& edges_file);

void save_scores(const ScoredRoadNetwork& scored, const fs::path& file);
/// Attaches a score file to `network`; every segment must be listed once.
ScoredRoadNetwork load_scores(RoadNetwork network, const fs::path& file);

std::string_view to_string(AllowedDirection d);
AllowedDirection parse_direction(std::string_view text);

enum class PointKind { Photos, CheckIns, Observations, Trajectories, Stream };
/// Throws UnknownKind for anything but photos|checkins|observations|trajectories|stream.
PointKind parse_point_kind(std::string_view text);

using PointSet = std::variant<std::vector<scenic::GeoTaggedPhoto>, std::vector<scenic::CheckIn>,
                              std::vector<event::PhotoObservation>, std::vector<direction::Trajectory>,
                              segment::PictureStream>;

PointSet load_points(const fs::path& file, PointKind kind, const Projection& projection);

std::vector<scenic::GeoTaggedPhoto> load_photos(const fs::path& file, const Projection& projection);
std::vector<scenic::CheckIn> load_checkins(const fs::path& file, const Projection& projection);
std::vector<event::PhotoObservation> load_observations(const fs::path& file, const Projection& projection);
/// Rows are grouped by traj_id (ascending) and ordered by seq within a trajectory.
std::vector<direction::Trajectory> load_trajectories(const fs::path& file, const Projection& projection);
/// Events are stably sorted by timestamp.
segment::PictureStream load_stream(const fs::path& file, std::optional<int> viewer_count = std::nullopt);
segment::Segmentation load_segmentation(const fs::path& file);
/// lat/lon columns of any of the point files.
std::vector<geo::GeoPoint> load_positions(const fs::path& file);
geo::GeoPoint load_point(const fs::path& file);

void save_photos(std::span<const scenic::GeoTaggedPhoto> photos, const Projection& projection, const fs::path& file);
void save_checkins(std::span<const scenic::CheckIn> checkins, std::span<const std::string> labels,
                   const Projection& projection, const fs::path& file);
void save_observations(std::span<const event::PhotoObservation> observations, const Projection& projection,
                       const fs::path& file);
void save_trajectories(std::span<const direction::Trajectory> trajectories, const Projection& projection,
                       const fs::path& file);
void save_stream(const segment::PictureStream& stream, const fs::path& file);
void save_segmentation(const segment::Segmentation& segmentation, const fs::path& file);
void save_point(geo::GeoPoint point, const fs::path& file);

// GeoJSON (RFC 7946, [lon, lat] positions). The *_geojson functions return
// the document text; export_geojson writes it to a file.

std::string grid_geojson(const event::AttentionGrid& grid, const event::EventLocation& location,
                         const Projection& projection);
std::string location_geojson(const event::EventLocation& location, double glen, const Projection& projection);

struct RouteProperties {
  std::string strategy;
  std::uint64_t seed = 0;
};
std::string route_geojson(const route::TravelRoute& route, const ScoredRoadNetwork& network,
                          const RouteProperties& props, const Projection& projection);
std::string network_geojson(const ScoredRoadNetwork& scored, const Projection& projection);

void export_geojson(const event::AttentionGrid& grid, const event::EventLocation& location,
                    const Projection& projection, const fs::path& file);
void export_geojson(const event::EventLocation& location, double glen, const Projection& projection,
                    const fs::path& file);
void export_geojson(const route::TravelRoute& route, const ScoredRoadNetwork& network,
                    const RouteProperties& props, const Projection& projection, const fs::path& file);
void export_geojson(const ScoredRoadNetwork& scored, const Projection& projection, const fs::path& file);

void write_text(const fs::path& file, std::string_view text);

}  // namespace crowdsense::io

#include "crowdsense/data_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "crowdsense/error.hpp"
#include "csv.hpp"

namespace crowdsense::io {

using detail::CsvRow;
using detail::CsvTable;
using detail::format_double;
using detail::parse_double;
using detail::parse_int;
using json = nlohmann::ordered_json;

namespace {

std::ofstream open_out(const fs::path& file) {
  if (file.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(file.parent_path(), ec);
  }
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + file.string());
  return out;
}

void finish(std::ofstream& out, const fs::path& file) {
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + file.string());
}

[[noreturn]] void row_fail(const CsvTable& t, const CsvRow& row, const std::string& what) {
  throw Error(ErrorCode::ParseError, t.path.string() + ":" + std::to_string(row.line) + ": " + what);
}

bool empty_table(const CsvTable& t) { return t.header.empty() && t.rows.empty(); }

geo::GeoPoint read_geo(const CsvTable& t, const CsvRow& row, std::size_t lat_col, std::size_t lon_col) {
  const geo::GeoPoint p{parse_double(t, row, lat_col), parse_double(t, row, lon_col)};
  if (!p.valid()) row_fail(t, row, "coordinate out of range");
  return p;
}

std::vector<geo::GeoPoint> parse_polyline(const CsvTable& t, const CsvRow& row, std::string_view text) {
  std::vector<geo::GeoPoint> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find(';', pos), text.size());
    const std::string pair(text.substr(pos, end - pos));
    std::istringstream ss(pair);
    double lon = 0.0;
    double lat = 0.0;
    std::string rest;
    if (!(ss >> lon >> lat) || (ss >> rest)) row_fail(t, row, "malformed polyline vertex '" + pair + "'");
    const geo::GeoPoint p{lat, lon};
    if (!p.valid()) row_fail(t, row, "polyline vertex out of range");
    out.push_back(p);
    pos = end + 1;
  }
  if (out.size() < 2) row_fail(t, row, "polyline needs at least two vertices");
  return out;
}

json position(const Projection& proj, geo::PlanarPoint p) {
  const auto g = proj.to_geo(p);
  return json::array({g.lon, g.lat});
}

json feature(json geometry, json properties) {
  json f;
  f["type"] = "Feature";
  f["geometry"] = std::move(geometry);
  f["properties"] = std::move(properties);
  return f;
}

json collection(json features) {
  json c;
  c["type"] = "FeatureCollection";
  c["features"] = std::move(features);
  return c;
}

json cell_polygon(const event::AttentionGrid& grid, event::CellIndex c, const Projection& proj) {
  const double x0 = static_cast<double>(c.ix) * grid.glen;
  const double y0 = static_cast<double>(c.iy) * grid.glen;
  const double x1 = x0 + grid.glen;
  const double y1 = y0 + grid.glen;
  json ring = json::array({position(proj, {x0, y0}), position(proj, {x1, y0}), position(proj, {x1, y1}),
                           position(proj, {x0, y1}), position(proj, {x0, y0})});
  return json{{"type", "Polygon"}, {"coordinates", json::array({std::move(ring)})}};
}

}  // namespace

Projection Projection::centroid_of(std::span<const geo::GeoPoint> points) {
  if (points.empty()) return {};
  double lat = 0.0;
  double lon = 0.0;
  for (const auto& p : points) {
    lat += p.lat;
    lon += p.lon;
  }
  const auto n = static_cast<double>(points.size());
  return Projection{{lat / n, lon / n}};
}

// ---------------------------------------------------------------- network

namespace {

struct RawNode {
  NodeId id;
  geo::GeoPoint pos;
};

std::vector<RawNode> read_nodes(const fs::path& file) {
  const auto t = detail::read_csv(file);
  std::vector<RawNode> nodes;
  if (empty_table(t)) return nodes;
  const auto id = t.column("id");
  const auto lat = t.column("lat");
  const auto lon = t.column("lon");
  nodes.reserve(t.rows.size());
  for (const auto& row : t.rows) nodes.push_back({parse_int(t, row, id), read_geo(t, row, lat, lon)});
  return nodes;
}

NetworkData build_network(const std::vector<RawNode>& nodes, const fs::path& edges_file,
                          const Projection& proj) {
  NetworkData data{proj, {}};
  for (const auto& n : nodes) {
    try {
      data.network.add_node(n.id, proj.to_planar(n.pos));
    } catch (const Error&) {
      throw Error(ErrorCode::ParseError, "duplicate node id " + std::to_string(n.id));
    }
  }
  const auto t = detail::read_csv(edges_file);
  if (empty_table(t)) return data;
  const auto id = t.column("id");
  const auto u = t.column("u");
  const auto v = t.column("v");
  const bool has_poly = t.has_column("polyline");
  const auto poly = has_poly ? t.column("polyline") : 0;
  for (const auto& row : t.rows) {
    std::vector<geo::PlanarPoint> line;
    if (has_poly && !row.fields[poly].empty()) {
      for (const auto& g : parse_polyline(t, row, row.fields[poly])) line.push_back(proj.to_planar(g));
    }
    const auto seg_id = parse_int(t, row, id);
    const auto a = parse_int(t, row, u);
    const auto b = parse_int(t, row, v);
    if (data.network.find(seg_id)) row_fail(t, row, "duplicate segment id " + std::to_string(seg_id));
    try {
      data.network.add_segment(seg_id, a, b, std::move(line));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DanglingEndpoint) {
        throw Error(ErrorCode::DanglingEndpoint, edges_file.string() + ":" + std::to_string(row.line) +
                                                     ": segment " + std::to_string(seg_id) +
                                                     " references an unknown node");
      }
      row_fail(t, row, e.what());
    }
  }
  return data;
}

}  // namespace

NetworkData load_network(const fs::path& nodes_file, const fs::path& edges_file) {
  const auto nodes = read_nodes(nodes_file);
  std::vector<geo::GeoPoint> pts;
  pts.reserve(nodes.size());
  for (const auto& n : nodes) pts.push_back(n.pos);
  return build_network(nodes, edges_file, Projection::centroid_of(pts));
}

NetworkData load_network(const fs::path& nodes_file, const fs::path& edges_file,
                         const Projection& projection) {
  return build_network(read_nodes(nodes_file), edges_file, projection);
}

void save_network(const RoadNetwork& network, const Projection& projection, const fs::path& nodes_file,
                  const fs::path& edges_file) {
  {
    auto out = open_out(nodes_file);
    out << "id,lat,lon\n";
    for (const auto& [id, p] : network.nodes()) {
      const auto g = projection.to_geo(p);
      out << id << ',' << format_double(g.lat) << ',' << format_double(g.lon) << '\n';
    }
    finish(out, nodes_file);
  }
  auto out = open_out(edges_file);
  out << "id,u,v,polyline\n";
  for (const auto& seg : network.segments()) {
    out << seg.id << ',' << seg.u << ',' << seg.v << ',';
    if (seg.polyline.size() > 2) {
      for (std::size_t i = 0; i < seg.polyline.size(); ++i) {
        const auto g = projection.to_geo(seg.polyline[i]);
        if (i > 0) out << ';';
        out << format_double(g.lon) << ' ' << format_double(g.lat);
      }
    }
    out << '\n';
  }
  finish(out, edges_file);
}

// ---------------------------------------------------------------- scores

std::string_view to_string(AllowedDirection d) {
  switch (d) {
    case AllowedDirection::Forward: return "forward";
    case AllowedDirection::Backward: return "backward";
    case AllowedDirection::Both: return "both";
  }
  return "both";
}

AllowedDirection parse_direction(std::string_view text) {
  if (text == "forward") return AllowedDirection::Forward;
  if (text == "backward") return AllowedDirection::Backward;
  if (text == "both" || text.empty()) return AllowedDirection::Both;
  throw Error(ErrorCode::ParseError, "unknown allowed_direction '" + std::string(text) + "'");
}

void save_scores(const ScoredRoadNetwork& scored, const fs::path& file) {
  auto out = open_out(file);
  out << "segment_id,sp,sc,si,allowed_direction\n";
  const auto segs = scored.network.segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto& s = scored.scores[i];
    out << segs[i].id << ',' << format_double(s.sp) << ',' << format_double(s.sc) << ','
        << format_double(s.si) << ',' << to_string(s.direction) << '\n';
  }
  finish(out, file);
}

ScoredRoadNetwork load_scores(RoadNetwork network, const fs::path& file) {
  const auto t = detail::read_csv(file);
  ScoredRoadNetwork scored{std::move(network), {}};
  const auto segs = scored.network.segments();
  scored.scores.resize(segs.size());
  std::vector<bool> seen(segs.size(), false);
  if (!empty_table(t)) {
    const auto id = t.column("segment_id");
    const auto sp = t.column("sp");
    const auto sc = t.column("sc");
    const auto si = t.column("si");
    const bool has_dir = t.has_column("allowed_direction");
    const auto dir = has_dir ? t.column("allowed_direction") : 0;
    for (const auto& row : t.rows) {
      const auto seg_id = parse_int(t, row, id);
      const auto idx = scored.network.find(seg_id);
      if (!idx) row_fail(t, row, "unknown segment " + std::to_string(seg_id));
      if (seen[*idx]) row_fail(t, row, "segment " + std::to_string(seg_id) + " listed twice");
      seen[*idx] = true;
      auto& s = scored.scores[*idx];
      s.sp = parse_double(t, row, sp);
      s.sc = parse_double(t, row, sc);
      s.si = parse_double(t, row, si);
      if (has_dir) {
        try {
          s.direction = parse_direction(row.fields[dir]);
        } catch (const Error&) {
          row_fail(t, row, "unknown allowed_direction '" + row.fields[dir] + "'");
        }
      }
    }
  }
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (!seen[i]) {
      throw Error(ErrorCode::ParseError,
                  file.string() + ": no score for segment " + std::to_string(segs[i].id));
    }
  }
  return scored;
}

// ---------------------------------------------------------------- points

PointKind parse_point_kind(std::string_view text) {
  if (text == "photos") return PointKind::Photos;
  if (text == "checkins") return PointKind::CheckIns;
  if (text == "observations") return PointKind::Observations;
  if (text == "trajectories") return PointKind::Trajectories;
  if (text == "stream") return PointKind::Stream;
  throw Error(ErrorCode::UnknownKind, "unknown point kind '" + std::string(text) + "'");
}

PointSet load_points(const fs::path& file, PointKind kind, const Projection& projection) {
  switch (kind) {
    case PointKind::Photos: return load_photos(file, projection);
    case PointKind::CheckIns: return load_checkins(file, projection);
    case PointKind::Observations: return load_observations(file, projection);
    case PointKind::Trajectories: return load_trajectories(file, projection);
    case PointKind::Stream: return load_stream(file);
  }
  throw Error(ErrorCode::UnknownKind, "unknown point kind");
}

std::vector<scenic::GeoTaggedPhoto> load_photos(const fs::path& file, const Projection& projection) {
  const auto t = detail::read_csv(file);
  std::vector<scenic::GeoTaggedPhoto> out;
  if (empty_table(t)) return out;
  const auto lat = t.column("lat");
  const auto lon = t.column("lon");
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) out.push_back({projection.to_planar(read_geo(t, row, lat, lon))});
  return out;
}

std::vector<scenic::CheckIn> load_checkins(const fs::path& file, const Projection& projection) {
  const auto t = detail::read_csv(file);
  std::vector<scenic::CheckIn> out;
  if (empty_table(t)) return out;
  const auto lat = t.column("lat");
  const auto lon = t.column("lon");
  const auto label = t.column("category_label");
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    out.push_back({projection.to_planar(read_geo(t, row, lat, lon)), scenic::categorize_poi(row.fields[label])});
  }
  return out;
}

std::vector<event::PhotoObservation> load_observations(const fs::path& file, const Projection& projection) {
  const auto t = detail::read_csv(file);
  std::vector<event::PhotoObservation> out;
  if (empty_table(t)) return out;
  const auto lat = t.column("lat");
  const auto lon = t.column("lon");
  const auto heading = t.column("heading_deg");
  const auto ts = t.column("timestamp");
  const auto who = t.column("contributor");
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    const double deg = parse_double(t, row, heading);
    if (!std::isfinite(deg)) row_fail(t, row, "heading_deg is not finite");
    out.push_back({projection.to_planar(read_geo(t, row, lat, lon)), geo::Heading::from_degrees(deg),
                   parse_double(t, row, ts), row.fields[who]});
  }
  return out;
}

std::vector<direction::Trajectory> load_trajectories(const fs::path& file, const Projection& projection) {
  const auto t = detail::read_csv(file);
  std::vector<direction::Trajectory> out;
  if (empty_table(t)) return out;
  const auto id = t.column("traj_id");
  const auto seq = t.column("seq");
  const auto lat = t.column("lat");
  const auto lon = t.column("lon");
  std::map<long long, std::map<long long, geo::PlanarPoint>> grouped;
  for (const auto& row : t.rows) {
    const auto tid = parse_int(t, row, id);
    const auto s = parse_int(t, row, seq);
    if (!grouped[tid].emplace(s, projection.to_planar(read_geo(t, row, lat, lon))).second) {
      row_fail(t, row, "duplicate seq " + std::to_string(s) + " in trajectory " + std::to_string(tid));
    }
  }
  out.reserve(grouped.size());
  for (const auto& [tid, pts] : grouped) {
    direction::Trajectory traj;
    traj.points.reserve(pts.size());
    for (const auto& [s, p] : pts) traj.points.push_back(p);
    out.push_back(std::move(traj));
  }
  return out;
}

segment::PictureStream load_stream(const fs::path& file, std::optional<int> viewer_count) {
  const auto t = detail::read_csv(file);
  segment::PictureStream stream;
  stream.viewer_count = viewer_count;
  if (empty_table(t)) return stream;
  const auto ts = t.column("timestamp");
  const auto who = t.column("contributor");
  stream.events.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    if (row.fields[who].empty()) row_fail(t, row, "empty contributor");
    stream.events.push_back({parse_double(t, row, ts), row.fields[who]});
  }
  std::stable_sort(stream.events.begin(), stream.events.end(),
                   [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
  return stream;
}

segment::Segmentation load_segmentation(const fs::path& file) {
  const auto t = detail::read_csv(file);
  if (empty_table(t)) return {};
  const auto col = t.column("segment");
  std::vector<int> labels;
  labels.reserve(t.rows.size());
  for (const auto& row : t.rows) labels.push_back(static_cast<int>(parse_int(t, row, col)));
  try {
    return segment::Segmentation::from_labels(labels);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, file.string() + ": " + e.what());
  }
}

std::vector<geo::GeoPoint> load_positions(const fs::path& file) {
  const auto t = detail::read_csv(file);
  std::vector<geo::GeoPoint> out;
  if (empty_table(t)) return out;
  const auto lat = t.column("lat");
  const auto lon = t.column("lon");
  for (const auto& row : t.rows) out.push_back(read_geo(t, row, lat, lon));
  return out;
}

geo::GeoPoint load_point(const fs::path& file) {
  const auto pts = load_positions(file);
  if (pts.size() != 1) {
    throw Error(ErrorCode::ParseError, file.string() + ": expected exactly one point, found " +
                                           std::to_string(pts.size()));
  }
  return pts.front();
}

// ---------------------------------------------------------------- writers

void save_photos(std::span<const scenic::GeoTaggedPhoto> photos, const Projection& projection,
                 const fs::path& file) {
  auto out = open_out(file);
  out << "lat,lon\n";
  for (const auto& p : photos) {
    const auto g = projection.to_geo(p.loc);
    out << format_double(g.lat) << ',' << format_double(g.lon) << '\n';
  }
  finish(out, file);
}

void save_checkins(std::span<const scenic::CheckIn> checkins, std::span<const std::string> labels,
                   const Projection& projection, const fs::path& file) {
  if (labels.size() != checkins.size()) {
    throw Error(ErrorCode::MismatchedLength, "one label per check-in is required");
  }
  auto out = open_out(file);
  out << "lat,lon,category_label\n";
  for (std::size_t i = 0; i < checkins.size(); ++i) {
    const auto g = projection.to_geo(checkins[i].loc);
    out << format_double(g.lat) << ',' << format_double(g.lon) << ',' << detail::csv_escape(labels[i]) << '\n';
  }
  finish(out, file);
}

void save_observations(std::span<const event::PhotoObservation> observations, const Projection& projection,
                       const fs::path& file) {
  auto out = open_out(file);
  out << "lat,lon,heading_deg,timestamp,contributor\n";
  for (const auto& o : observations) {
    const auto g = projection.to_geo(o.location);
    out << format_double(g.lat) << ',' << format_double(g.lon) << ',' << format_double(o.heading.degrees())
        << ',' << format_double(o.timestamp) << ',' << detail::csv_escape(o.contributor) << '\n';
  }
  finish(out, file);
}

void save_trajectories(std::span<const direction::Trajectory> trajectories, const Projection& projection,
                       const fs::path& file) {
  auto out = open_out(file);
  out << "traj_id,seq,lat,lon\n";
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    const auto& pts = trajectories[i].points;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const auto g = projection.to_geo(pts[k]);
      out << i << ',' << k << ',' << format_double(g.lat) << ',' << format_double(g.lon) << '\n';
    }
  }
  finish(out, file);
}

void save_stream(const segment::PictureStream& stream, const fs::path& file) {
  auto out = open_out(file);
  out << "timestamp,contributor\n";
  for (const auto& e : stream.events) {
    out << format_double(e.timestamp) << ',' << detail::csv_escape(e.contributor) << '\n';
  }
  finish(out, file);
}

void save_segmentation(const segment::Segmentation& segmentation, const fs::path& file) {
  auto out = open_out(file);
  out << "segment\n";
  for (const auto l : segmentation.labels()) out << l << '\n';
  finish(out, file);
}

void save_point(geo::GeoPoint point, const fs::path& file) {
  auto out = open_out(file);
  out << "lat,lon\n" << format_double(point.lat) << ',' << format_double(point.lon) << '\n';
  finish(out, file);
}

void write_text(const fs::path& file, std::string_view text) {
  auto out = open_out(file);
  out << text;
  finish(out, file);
}

// ---------------------------------------------------------------- GeoJSON

std::string grid_geojson(const event::AttentionGrid& grid, const event::EventLocation& location,
                         const Projection& projection) {
  json features = json::array();
  for (const auto& [cell, alc] : grid.cells) {
    const bool in_region = std::binary_search(location.region.begin(), location.region.end(), cell);
    features.push_back(feature(cell_polygon(grid, cell, projection),
                               {{"ix", cell.ix}, {"iy", cell.iy}, {"alc", alc}, {"in_region", in_region}}));
  }
  return collection(std::move(features)).dump(1);
}

std::string location_geojson(const event::EventLocation& location, double glen, const Projection& projection) {
  json features = json::array();
  if (!location.region.empty()) {
    event::AttentionGrid grid;
    grid.glen = glen;
    for (const auto& cell : location.region) {
      features.push_back(feature(cell_polygon(grid, cell, projection), {{"ix", cell.ix}, {"iy", cell.iy}}));
    }
    features.push_back(feature({{"type", "Point"}, {"coordinates", position(projection, location.centroid)}},
                               {{"role", "centroid"}}));
  }
  return collection(std::move(features)).dump(1);
}

std::string route_geojson(const route::TravelRoute& route, const ScoredRoadNetwork& network,
                          const RouteProperties& props, const Projection& projection) {
  json coords = json::array();
  coords.push_back(position(projection, network.network.node(route.origin_node)));
  json segments = json::array();
  for (const auto& t : route.traversals) {
    const auto& seg = network.network.segment(t.segment);
    if (t.travel == Travel::Forward) {
      for (std::size_t i = 1; i < seg.polyline.size(); ++i) coords.push_back(position(projection, seg.polyline[i]));
    } else {
      for (std::size_t i = seg.polyline.size() - 1; i-- > 0;) coords.push_back(position(projection, seg.polyline[i]));
    }
    segments.push_back(json{{"id", t.segment}, {"travel", t.travel == Travel::Forward ? "forward" : "backward"}});
  }
  if (coords.size() == 1) coords.push_back(coords.front());
  json properties{{"strategy", props.strategy},
                  {"seed", props.seed},
                  {"total_distance", route.total_distance},
                  {"scenic_score", route.scenic_score},
                  {"origin_node", route.origin_node},
                  {"destination_node", route.destination_node},
                  {"segments", std::move(segments)},
                  {"selected", route.selected_segments()}};
  json features = json::array();
  features.push_back(
      feature({{"type", "LineString"}, {"coordinates", std::move(coords)}}, std::move(properties)));
  return collection(std::move(features)).dump(1);
}

std::string network_geojson(const ScoredRoadNetwork& scored, const Projection& projection) {
  json features = json::array();
  const auto segs = scored.network.segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    json coords = json::array();
    for (const auto& p : segs[i].polyline) coords.push_back(position(projection, p));
    const auto& s = scored.scores[i];
    features.push_back(feature({{"type", "LineString"}, {"coordinates", std::move(coords)}},
                               {{"id", segs[i].id},
                                {"u", segs[i].u},
                                {"v", segs[i].v},
                                {"length", segs[i].length},
                                {"sp", s.sp},
                                {"sc", s.sc},
                                {"si", s.si},
                                {"allowed_direction", to_string(s.direction)}}));
  }
  return collection(std::move(features)).dump(1);
}

void export_geojson(const event::AttentionGrid& grid, const event::EventLocation& location,
                    const Projection& projection, const fs::path& file) {
  write_text(file, grid_geojson(grid, location, projection) + "\n");
}

void export_geojson(const event::EventLocation& location, double glen, const Projection& projection,
                    const fs::path& file) {
  write_text(file, location_geojson(location, glen, projection) + "\n");
}

void export_geojson(const route::TravelRoute& route, const ScoredRoadNetwork& network,
                    const RouteProperties& props, const Projection& projection, const fs::path& file) {
  write_text(file, route_geojson(route, network, props, projection) + "\n");
}

void export_geojson(const ScoredRoadNetwork& scored, const Projection& projection, const fs::path& file) {
  write_text(file, network_geojson(scored, projection) + "\n");
}

}  // namespace crowdsense::io

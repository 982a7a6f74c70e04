#include "crowdsense/road_network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "crowdsense/error.hpp"

namespace crowdsense {

void RoadNetwork::add_node(NodeId id, geo::PlanarPoint p) {
  if (!nodes_.emplace(id, p).second) {
    throw Error(ErrorCode::InvalidArgument, "duplicate node id " + std::to_string(id));
  }
}

const RoadSegment& RoadNetwork::add_segment(SegmentId id, NodeId u, NodeId v,
                                            std::vector<geo::PlanarPoint> polyline) {
  const auto nu = nodes_.find(u);
  const auto nv = nodes_.find(v);
  if (nu == nodes_.end() || nv == nodes_.end()) {
    throw Error(ErrorCode::DanglingEndpoint,
                "segment " + std::to_string(id) + " references unknown node " +
                    std::to_string(nu == nodes_.end() ? u : v));
  }
  if (index_.contains(id)) {
    throw Error(ErrorCode::InvalidArgument, "duplicate segment id " + std::to_string(id));
  }
  // Pin the geometry to the endpoint nodes.
  constexpr double kSame = 1e-6;
  if (polyline.empty() || geo::distance(polyline.front(), nu->second) > kSame) {
    polyline.insert(polyline.begin(), nu->second);
  } else {
    polyline.front() = nu->second;
  }
  if (polyline.size() < 2 || geo::distance(polyline.back(), nv->second) > kSame) {
    polyline.push_back(nv->second);
  } else {
    polyline.back() = nv->second;
  }
  RoadSegment seg{id, u, v, std::move(polyline), 0.0};
  seg.length = geo::polyline_length(seg.polyline);
  if (!(seg.length > 0.0)) {
    throw Error(ErrorCode::InvalidGeometry, "segment " + std::to_string(id) + " has zero length");
  }

  if (segments_.empty() || segments_.back().id < id) {
    index_.emplace(id, segments_.size());
    segments_.push_back(std::move(seg));
    return segments_.back();
  }
  const auto pos = std::lower_bound(segments_.begin(), segments_.end(), id,
                                    [](const RoadSegment& s, SegmentId key) { return s.id < key; });
  const auto at = static_cast<std::size_t>(pos - segments_.begin());
  segments_.insert(pos, std::move(seg));
  for (std::size_t i = at; i < segments_.size(); ++i) index_[segments_[i].id] = i;
  return segments_[at];
}

geo::PlanarPoint RoadNetwork::node(NodeId id) const {
  const auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error(ErrorCode::InvalidArgument, "unknown node " + std::to_string(id));
  return it->second;
}

std::optional<std::size_t> RoadNetwork::find(SegmentId id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t RoadNetwork::index_of(SegmentId id) const {
  const auto found = find(id);
  if (!found) throw Error(ErrorCode::InvalidArgument, "unknown segment " + std::to_string(id));
  return *found;
}

SegmentIndex::SegmentIndex(const RoadNetwork& network, double cell_size)
    : network_(&network), cell_size_(cell_size) {
  if (!(cell_size > 0.0)) throw Error(ErrorCode::InvalidArgument, "index cell size must be positive");
  const auto segs = network.segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto box = geo::BoundingBox::of(segs[i].polyline);
    for (auto cx = cell(box.min_x); cx <= cell(box.max_x); ++cx) {
      for (auto cy = cell(box.min_y); cy <= cell(box.max_y); ++cy) buckets_[{cx, cy}].push_back(i);
    }
  }
}

std::int64_t SegmentIndex::cell(double v) const {
  return static_cast<std::int64_t>(std::floor(v / cell_size_));
}

std::vector<std::size_t> SegmentIndex::candidates(geo::PlanarPoint p, double radius) const {
  std::set<std::size_t> found;
  for (auto cx = cell(p.x - radius); cx <= cell(p.x + radius); ++cx) {
    for (auto cy = cell(p.y - radius); cy <= cell(p.y + radius); ++cy) {
      const auto it = buckets_.find({cx, cy});
      if (it != buckets_.end()) found.insert(it->second.begin(), it->second.end());
    }
  }
  return {found.begin(), found.end()};
}

std::optional<SegmentIndex::Nearest> SegmentIndex::nearest(geo::PlanarPoint p, double radius) const {
  std::optional<Nearest> best;
  const auto segs = network_->segments();
  // candidates() is ascending by index, which is ascending by segment id
  for (const auto i : candidates(p, radius)) {
    const double d = geo::point_to_polyline_distance(p, segs[i].polyline);
    if (d > radius) continue;
    if (!best || d < best->distance) best = Nearest{i, d};
  }
  return best;
}

}  // namespace crowdsense

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "crowdsense/geomath.hpp"

namespace crowdsense {

using NodeId = std::int64_t;
using SegmentId = std::int64_t;

enum class Travel { Forward, Backward };  // u->v or v->u
enum class AllowedDirection { Forward, Backward, Both };

inline Travel reversed(Travel t) { return t == Travel::Forward ? Travel::Backward : Travel::Forward; }
inline bool permits(AllowedDirection a, Travel t) {
  return a == AllowedDirection::Both || (a == AllowedDirection::Forward) == (t == Travel::Forward);
}

struct RoadSegment {
  SegmentId id = 0;
  NodeId u = 0;
  NodeId v = 0;
  std::vector<geo::PlanarPoint> polyline;  // starts at u, ends at v
  double length = 0.0;

  NodeId start(Travel t) const { return t == Travel::Forward ? u : v; }
  NodeId end(Travel t) const { return t == Travel::Forward ? v : u; }
};

/// Nodes and undirected road segments in a planar frame. Segments are kept
/// sorted by id so iteration order is deterministic.
class RoadNetwork {
 public:
  void add_node(NodeId id, geo::PlanarPoint p);
  /// Empty polyline means a straight line between the endpoints. Throws
  /// DanglingEndpoint for unknown nodes and InvalidGeometry for zero length.
  const RoadSegment& add_segment(SegmentId id, NodeId u, NodeId v,
                                 std::vector<geo::PlanarPoint> polyline = {});

  const std::map<NodeId, geo::PlanarPoint>& nodes() const noexcept { return nodes_; }
  std::span<const RoadSegment> segments() const noexcept { return segments_; }
  std::size_t segment_count() const noexcept { return segments_.size(); }

  bool has_node(NodeId id) const { return nodes_.contains(id); }
  geo::PlanarPoint node(NodeId id) const;
  /// Position of `id` in segments(); throws InvalidArgument when absent.
  std::size_t index_of(SegmentId id) const;
  std::optional<std::size_t> find(SegmentId id) const;
  const RoadSegment& segment(SegmentId id) const { return segments_[index_of(id)]; }

  bool empty() const noexcept { return segments_.empty(); }

 private:
  std::map<NodeId, geo::PlanarPoint> nodes_;
  std::vector<RoadSegment> segments_;
  std::unordered_map<SegmentId, std::size_t> index_;
};

struct SegmentScore {
  double sp = 0.0;
  double sc = 0.0;
  double si = 0.0;
  AllowedDirection direction = AllowedDirection::Both;
};

/// Road network with per-segment scenic scores aligned to network.segments().
struct ScoredRoadNetwork {
  RoadNetwork network;
  std::vector<SegmentScore> scores;

  const SegmentScore& score(SegmentId id) const { return scores[network.index_of(id)]; }
  SegmentScore& score(SegmentId id) { return scores[network.index_of(id)]; }
};

/// Uniform bucket index over segment bounding boxes for nearest-segment and
/// range queries.
class SegmentIndex {
 public:
  SegmentIndex(const RoadNetwork& network, double cell_size);

  /// Segment indices whose bounding box comes within `radius` of p.
  std::vector<std::size_t> candidates(geo::PlanarPoint p, double radius) const;

  struct Nearest {
    std::size_t index = 0;
    double distance = 0.0;
  };
  /// Closest segment within `radius`; ties go to the smaller segment id.
  std::optional<Nearest> nearest(geo::PlanarPoint p, double radius) const;

 private:
  std::int64_t cell(double v) const;

  const RoadNetwork* network_;
  double cell_size_;
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>> buckets_;
};

}  // namespace crowdsense

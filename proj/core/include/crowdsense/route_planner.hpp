#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crowdsense/direction_miner.hpp"
#include "crowdsense/geomath.hpp"
#include "crowdsense/random.hpp"
#include "crowdsense/road_network.hpp"

namespace crowdsense::route {

using direction::Traversal;
using geo::PlanarPoint;

enum class Strategy { HfS, PbS, RbS };

std::string_view to_string(Strategy s);
/// Accepts "hfs", "pbs", "rbs" in any case; throws InvalidArgument otherwise.
Strategy parse_strategy(std::string_view text);

inline constexpr double kPbsFloor = 1e-6;
inline constexpr double kDefaultSnapRadius = 250.0;

struct RouteQuery {
  PlanarPoint origin;
  PlanarPoint destination;
  double distmax = 0.0;
  Strategy strategy = Strategy::HfS;
  int trials = 50;          // PbS/RbS repetitions; HfS runs once
  std::uint64_t seed = 0;
  double area_margin = 0.0;
  double snap_radius = kDefaultSnapRadius;
  unsigned threads = 1;     // trial workers; does not affect the result
};

struct TravelRoute {
  NodeId origin_node = 0;
  NodeId destination_node = 0;
  std::vector<Traversal> traversals;
  double total_distance = 0.0;
  double scenic_score = 0.0;
  std::vector<Traversal> selected;  // inserted segments, in route order

  std::vector<SegmentId> selected_segments() const;
};

struct InterestedArea {
  geo::BoundingBox bounds;
  std::vector<SegmentId> segments;  // ascending
};

/// Rectangle spanned by the two points, grown by `margin`, keeping only the
/// segments whose whole polyline lies inside.
InterestedArea interested_area(const ScoredRoadNetwork& network, PlanarPoint origin,
                               PlanarPoint destination, double margin);

struct Path {
  std::vector<Traversal> traversals;
  double distance = 0.0;
};

/// Directed view of (a subset of) a scored network. A segment contributes a
/// u->v arc when its allowed direction permits Forward and a v->u arc when
/// it permits Backward.
class RoadGraph {
 public:
  explicit RoadGraph(const ScoredRoadNetwork& network);
  RoadGraph(const ScoredRoadNetwork& network, std::span<const SegmentId> segments);

  const ScoredRoadNetwork& network() const noexcept { return *network_; }
  std::span<const SegmentId> segments() const noexcept { return segment_ids_; }
  bool contains_segment(SegmentId id) const;
  bool has_node(NodeId id) const;
  std::size_t node_count() const noexcept { return node_ids_.size(); }

  /// Dijkstra. At equal distance the arc with the smaller segment id wins.
  Path shortest_path(NodeId from, NodeId to) const;

  /// Nearest graph node within `radius`; ties go to the smaller node id.
  std::optional<NodeId> nearest_node(PlanarPoint p, double radius) const;

  struct Arc {
    std::uint32_t from = 0;
    std::uint32_t to = 0;
    SegmentId segment = 0;
    Travel travel = Travel::Forward;
    double length = 0.0;
  };

  // Dense node indexing used by the distance table.
  std::span<const NodeId> node_ids() const noexcept { return node_ids_; }
  std::uint32_t node_index(NodeId id) const;
  std::span<const Arc> arcs() const noexcept { return arcs_; }
  std::span<const Arc> out_arcs(std::uint32_t node) const;

  struct Tree {
    std::vector<double> dist;
    std::vector<std::int32_t> pred_arc;  // -1 at the root and unreachable nodes
  };
  Tree shortest_path_tree(std::uint32_t source) const;

 private:
  const ScoredRoadNetwork* network_;
  std::vector<SegmentId> segment_ids_;
  std::vector<NodeId> node_ids_;  // ascending
  std::vector<Arc> arcs_;
  std::vector<std::uint32_t> arc_offsets_;  // CSR over arcs_ grouped by from
};

/// All-pairs shortest paths over a RoadGraph; immutable once built so trials
/// can share it across threads.
class DistanceTable {
 public:
  explicit DistanceTable(const RoadGraph& graph, unsigned threads = 1);

  const RoadGraph& graph() const noexcept { return *graph_; }
  double distance(NodeId from, NodeId to) const;
  Path path(NodeId from, NodeId to) const;

 private:
  double distance_ix(std::uint32_t from, std::uint32_t to) const {
    return dist_[static_cast<std::size_t>(from) * n_ + to];
  }

  const RoadGraph* graph_;
  std::size_t n_ = 0;
  std::vector<double> dist_;
  std::vector<std::int32_t> pred_;
};

Path shortest_path(const ScoredRoadNetwork& network, NodeId from, NodeId to);

struct Candidate {
  SegmentId id = 0;
  double si = 0.0;
};

/// Picks one candidate. HfS: highest si, smaller id on ties. PbS: probability
/// proportional to si + kPbsFloor. RbS: uniform.
SegmentId select_segment(std::span<const Candidate> candidates, Strategy strategy, Rng& rng);
/// Same, returning the position in `candidates`.
std::size_t select_index(std::span<const Candidate> candidates, Strategy strategy, Rng& rng);

/// Route from `origin` to `destination` along the table's shortest path.
TravelRoute initial_route(NodeId origin, NodeId destination, const DistanceTable& table);

/// Inserts `segment` into every gap between already selected segments, in
/// every permitted direction, joins the pieces with shortest paths and keeps
/// the shortest variant (earliest gap, then Forward, on ties).
TravelRoute insert_segment(const TravelRoute& route, SegmentId segment, const DistanceTable& table);
/// Convenience overload over the whole network.
TravelRoute insert_segment(const TravelRoute& route, SegmentId segment,
                           const ScoredRoadNetwork& network);

/// Sum of si over the distinct segments the route traverses.
double route_score(const TravelRoute& route, const ScoredRoadNetwork& network);
double route_score(std::span<const Traversal> traversals, const ScoredRoadNetwork& network);

TravelRoute plan_route(const RouteQuery& query, const ScoredRoadNetwork& network);

/// Checks connectivity, endpoints, distance bookkeeping, direction
/// permissions and the budget. Returns a description of the first violation.
std::optional<std::string> check_route(const TravelRoute& route, const ScoredRoadNetwork& network,
                                       double distmax);

}  // namespace crowdsense::route

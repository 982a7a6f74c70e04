#pragma once

#include <span>
#include <vector>

#include "crowdsense/geomath.hpp"
#include "crowdsense/road_network.hpp"

namespace crowdsense::direction {

struct Trajectory {
  std::vector<geo::PlanarPoint> points;  // time-ordered, at least two
};

struct Traversal {
  SegmentId segment = 0;
  Travel travel = Travel::Forward;

  friend bool operator==(const Traversal&, const Traversal&) = default;
};

struct MatchedTrajectory {
  std::vector<Traversal> traversals;
  geo::PlanarPoint source;       // first raw point
  geo::PlanarPoint destination;  // last raw point
};

/// Per-point nearest-segment snapping.
///
/// Points farther than `snap_gate` from every segment are dropped. Runs of
/// points on the same segment collapse into one traversal whose direction is
/// the sign of the projections' advance along the polyline. A run with no
/// advance (a single point) takes the direction that connects it to its
/// neighbouring traversals, or Forward when nothing connects. Consecutive
/// traversals share a node whenever the sampling is dense enough that no
/// segment is skipped between two fixes.
MatchedTrajectory match_trajectory(const Trajectory& traj, const RoadNetwork& network,
                                   double snap_gate);

/// As above with a prebuilt index over `network`.
MatchedTrajectory match_trajectory(const Trajectory& traj, const RoadNetwork& network,
                                   const SegmentIndex& index, double snap_gate);

/// Majority driving direction of `segment_id` over the trajectories whose
/// source and destination agree, within `angle_tol`, with the query's start
/// and end as seen from the segment's near node (the endpoint closer to
/// `start`). Both when no trajectory qualifies or the vote ties.
AllowedDirection determine_direction(const RoadNetwork& network, SegmentId segment_id,
                                     std::span<const MatchedTrajectory> trajectories,
                                     geo::PlanarPoint start, geo::PlanarPoint end,
                                     double angle_tol = geo::kPi / 4.0);

/// Applies determine_direction to every listed segment of `scored`.
void mine_directions(ScoredRoadNetwork& scored, std::span<const SegmentId> segments,
                     std::span<const MatchedTrajectory> trajectories, geo::PlanarPoint start,
                     geo::PlanarPoint end, double angle_tol = geo::kPi / 4.0);

/// Reverses traversal order and direction and swaps source/destination.
MatchedTrajectory reversed(const MatchedTrajectory& m);

}  // namespace crowdsense::direction

#include "crowdsense/direction_miner.hpp"

#include <algorithm>
#include <optional>

#include "crowdsense/error.hpp"

namespace crowdsense::direction {

namespace {

struct Run {
  std::size_t index;  // into network.segments()
  double first_offset;
  double last_offset;
  std::optional<Travel> travel;
};

// Headings agree within tol; a zero-length vector carries no evidence either way.
bool directions_close(geo::PlanarPoint from_a, geo::PlanarPoint to_a, geo::PlanarPoint from_b,
                      geo::PlanarPoint to_b, double tol) {
  constexpr double kDegenerate = 1e-9;
  if (geo::distance(from_a, to_a) < kDegenerate || geo::distance(from_b, to_b) < kDegenerate) {
    return true;
  }
  return geo::angular_difference(geo::Heading::between(from_a, to_a),
                                 geo::Heading::between(from_b, to_b)) <= tol;
}

}  // namespace

MatchedTrajectory match_trajectory(const Trajectory& traj, const RoadNetwork& network,
                                   double snap_gate) {
  const SegmentIndex index(network, std::max(snap_gate, 1.0));
  return match_trajectory(traj, network, index, snap_gate);
}

MatchedTrajectory match_trajectory(const Trajectory& traj, const RoadNetwork& network,
                                   const SegmentIndex& index, double snap_gate) {
  if (network.empty()) throw Error(ErrorCode::InvalidArgument, "road network is empty");
  if (traj.points.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "a trajectory needs at least two points");
  }
  const auto segs = network.segments();

  std::vector<Run> runs;
  for (const auto& p : traj.points) {
    const auto hit = index.nearest(p, snap_gate);
    if (!hit) continue;
    const double offset = geo::project_onto_polyline(p, segs[hit->index].polyline).offset;
    if (!runs.empty() && runs.back().index == hit->index) {
      runs.back().last_offset = offset;
    } else {
      runs.push_back({hit->index, offset, offset, std::nullopt});
    }
  }
  if (runs.empty()) {
    throw Error(ErrorCode::NoMatch, "no trajectory point lies within the snap gate of a segment");
  }

  constexpr double kAdvance = 1e-9;
  for (auto& run : runs) {
    if (run.last_offset > run.first_offset + kAdvance) {
      run.travel = Travel::Forward;
    } else if (run.last_offset < run.first_offset - kAdvance) {
      run.travel = Travel::Backward;
    }
  }

  MatchedTrajectory out;
  out.source = traj.points.front();
  out.destination = traj.points.back();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const RoadSegment& seg = segs[runs[i].index];
    Travel travel = Travel::Forward;
    std::optional<NodeId> prev_end;
    if (!out.traversals.empty()) {
      const auto& prev = out.traversals.back();
      prev_end = network.segment(prev.segment).end(prev.travel);
    }
    if (runs[i].travel) {
      travel = *runs[i].travel;
    } else if (prev_end && (*prev_end == seg.u || *prev_end == seg.v)) {
      travel = *prev_end == seg.u ? Travel::Forward : Travel::Backward;
    } else if (i + 1 < runs.size()) {
      const RoadSegment& next = segs[runs[i + 1].index];
      if (next.u == seg.v || next.v == seg.v) {
        travel = Travel::Forward;
      } else if (next.u == seg.u || next.v == seg.u) {
        travel = Travel::Backward;
      }
    }
    const Traversal t{seg.id, travel};
    if (out.traversals.empty() || !(out.traversals.back() == t)) out.traversals.push_back(t);
  }
  return out;
}

AllowedDirection determine_direction(const RoadNetwork& network, SegmentId segment_id,
                                     std::span<const MatchedTrajectory> trajectories,
                                     geo::PlanarPoint start, geo::PlanarPoint end,
                                     double angle_tol) {
  const RoadSegment& seg = network.segment(segment_id);
  const geo::PlanarPoint pu = network.node(seg.u);
  const geo::PlanarPoint pv = network.node(seg.v);
  const geo::PlanarPoint near = geo::distance(pu, start) <= geo::distance(pv, start) ? pu : pv;

  std::size_t forward = 0;
  std::size_t backward = 0;
  for (const auto& traj : trajectories) {
    const bool contains = std::any_of(traj.traversals.begin(), traj.traversals.end(),
                                      [&](const Traversal& t) { return t.segment == segment_id; });
    if (!contains) continue;
    if (!directions_close(traj.source, near, start, near, angle_tol)) continue;
    if (!directions_close(near, traj.destination, near, end, angle_tol)) continue;
    for (const auto& t : traj.traversals) {
      if (t.segment != segment_id) continue;
      (t.travel == Travel::Forward ? forward : backward) += 1;
    }
  }
  if (forward > backward) return AllowedDirection::Forward;
  if (backward > forward) return AllowedDirection::Backward;
  return AllowedDirection::Both;
}

void mine_directions(ScoredRoadNetwork& scored, std::span<const SegmentId> segments,
                     std::span<const MatchedTrajectory> trajectories, geo::PlanarPoint start,
                     geo::PlanarPoint end, double angle_tol) {
  for (const auto id : segments) {
    scored.score(id).direction =
        determine_direction(scored.network, id, trajectories, start, end, angle_tol);
  }
}

MatchedTrajectory reversed(const MatchedTrajectory& m) {
  MatchedTrajectory out;
  out.source = m.destination;
  out.destination = m.source;
  out.traversals.reserve(m.traversals.size());
  for (auto it = m.traversals.rbegin(); it != m.traversals.rend(); ++it) {
    out.traversals.push_back({it->segment, crowdsense::reversed(it->travel)});
  }
  return out;
}

}  // namespace crowdsense::direction

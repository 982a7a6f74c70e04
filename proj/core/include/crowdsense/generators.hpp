#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crowdsense/direction_miner.hpp"
#include "crowdsense/event_localizer.hpp"
#include "crowdsense/road_network.hpp"
#include "crowdsense/scenic_scorer.hpp"
#include "crowdsense/stream_segmenter.hpp"

// Seeded synthetic fixtures. Every generator is a pure function of its
// arguments: the same seed yields bit-identical output.

namespace crowdsense::synth {

struct EventScene {
  std::vector<event::PhotoObservation> observations;
  geo::PlanarPoint truth;
};

/// Viewers equally spaced (random phase) on a circle around `truth`, each
/// aiming at it. The reported position gets isotropic Gaussian noise of
/// `gps_sigma` meters, the heading Gaussian noise of `heading_sigma_deg`.
EventScene gen_event_scene(geo::PlanarPoint truth, int n_viewers, double radius, double gps_sigma,
                           double heading_sigma_deg, std::uint64_t seed);

struct SyntheticStream {
  segment::PictureStream stream;
  segment::Segmentation truth;
};

/// `k_subevents` consecutive sub-events watched by the same
/// ceil(coverage * viewers) contributors. Each of them posts once per
/// sub-event in shuffled order; on top of that Poisson(bias) extra pictures
/// per sub-event come from a random minority of those contributors, each
/// placed after the author's first picture of that sub-event.
SyntheticStream gen_picture_stream(int k_subevents, int viewers, double coverage, double bias,
                                   std::uint64_t seed);

struct GridFixture {
  ScoredRoadNetwork scored;
  int columns = 0;
  int rows = 0;
  double cell = 0.0;
  std::vector<SegmentId> corridor;  // in walking order from node 0

  NodeId node_at(int column, int row) const { return static_cast<NodeId>(row) * columns + column; }
};

/// columns x rows lattice with node (c, r) at (c * cell, r * cell) and id
/// r * columns + c. Horizontal segments are numbered first (row-major), then
/// vertical ones. A random monotone staircase from (0, 0) to the opposite
/// corner gets `corridor_si`, everything else `background_si` (sp = si,
/// sc = 1, all directions Both).
GridFixture gen_grid_network(int columns, int rows, double cell, double corridor_si, double background_si,
                             std::uint64_t seed);

struct ScenicEvidence {
  std::vector<scenic::GeoTaggedPhoto> photos;
  std::vector<scenic::CheckIn> checkins;
  std::vector<std::string> labels;  // venue label of each check-in
  SegmentId planted = 0;
};

/// Photos and check-ins for a grid. The middle corridor segment is the
/// planted favourite (30 photos, 3 natural-scenery check-ins within 10 m of
/// its midpoint); other corridor segments get 5 photos and one
/// tourist-attraction check-in each. 200 photos and 50 other check-ins are
/// scattered uniformly over the whole grid.
ScenicEvidence gen_scenic_evidence(const GridFixture& grid, std::uint64_t seed);

struct FleetConfig {
  int trips = 40;
  double aligned_share = 0.6;      // start side -> end side through the target
  double contrarian_share = 0.2;   // of the aligned trips, crossing the target backwards
  double reverse_share = 0.25;     // end side -> start side through the target
  double endpoint_jitter = 150.0;  // trip endpoints are nodes within this distance of start/end
  double spacing = 10.0;           // GPS sampling interval along the path, meters
  double gps_sigma = 3.0;
};

struct TaxiFleet {
  std::vector<direction::Trajectory> trajectories;
  geo::PlanarPoint start;
  geo::PlanarPoint end;
  SegmentId target = 0;
  Travel planted = Travel::Forward;
};

/// Random query (start, end) and a target segment halfway along their
/// shortest path. Aligned trips run near start -> target -> near end, most
/// of them across the target in the planted direction; the rest of the
/// fleet drives the other way or between random nodes.
TaxiFleet gen_taxi_fleet(const ScoredRoadNetwork& network, const FleetConfig& cfg, std::uint64_t seed);

/// GPS points every `spacing` meters along the concatenated polylines,
/// starting half a spacing in so no sample sits exactly on a node.
direction::Trajectory sample_path(const RoadNetwork& network, std::span<const direction::Traversal> path,
                                  double spacing);

}  // namespace crowdsense::synth

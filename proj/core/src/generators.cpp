#include "crowdsense/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "crowdsense/error.hpp"
#include "crowdsense/random.hpp"
#include "crowdsense/route_planner.hpp"

namespace crowdsense::synth {

using direction::Traversal;
using geo::PlanarPoint;

EventScene gen_event_scene(PlanarPoint truth, int n_viewers, double radius, double gps_sigma,
                           double heading_sigma_deg, std::uint64_t seed) {
  if (n_viewers < 2) throw Error(ErrorCode::InvalidArgument, "an event scene needs at least two viewers");
  if (!(radius > 0.0) || !(gps_sigma >= 0.0) || !(heading_sigma_deg >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "radius must be positive and sigmas non-negative");
  }
  Rng rng(derive_seed(seed, 0));
  std::uniform_real_distribution<double> phase_dist(0.0, geo::kTwoPi);
  std::normal_distribution<double> unit(0.0, 1.0);

  EventScene scene;
  scene.truth = truth;
  const double phase = phase_dist(rng);
  for (int i = 0; i < n_viewers; ++i) {
    const double a = phase + geo::kTwoPi * i / n_viewers;
    const PlanarPoint at = truth + PlanarPoint{radius * std::cos(a), radius * std::sin(a)};
    const double dx = gps_sigma * unit(rng);
    const double dy = gps_sigma * unit(rng);
    const double dh = heading_sigma_deg * unit(rng);
    event::PhotoObservation obs;
    obs.location = at + PlanarPoint{dx, dy};
    obs.heading = geo::Heading(geo::Heading::between(at, truth).radians() + dh * geo::kPi / 180.0);
    obs.timestamp = static_cast<double>(i);
    obs.contributor = "v" + std::to_string(i + 1);
    scene.observations.push_back(std::move(obs));
  }
  return scene;
}

SyntheticStream gen_picture_stream(int k_subevents, int viewers, double coverage, double bias,
                                   std::uint64_t seed) {
  if (k_subevents < 1 || viewers < 1) {
    throw Error(ErrorCode::InvalidArgument, "need at least one sub-event and one viewer");
  }
  if (!(coverage > 0.0 && coverage <= 1.0)) throw Error(ErrorCode::InvalidArgument, "coverage must lie in (0, 1]");
  if (!(bias >= 0.0)) throw Error(ErrorCode::InvalidArgument, "bias must be non-negative");

  Rng rng(derive_seed(seed, 0));
  const int active_count = std::clamp(static_cast<int>(std::ceil(coverage * viewers - 1e-9)), 1, viewers);
  std::vector<int> everyone(static_cast<std::size_t>(viewers));
  std::iota(everyone.begin(), everyone.end(), 1);
  std::shuffle(everyone.begin(), everyone.end(), rng);
  const std::vector<int> active(everyone.begin(), everyone.begin() + active_count);
  const int minority_size = std::max(1, active_count / 3);
  std::poisson_distribution<int> extras_dist(bias);

  SyntheticStream out;
  out.stream.viewer_count = viewers;
  std::vector<std::size_t> sizes;
  double clock = 0.0;
  for (int k = 0; k < k_subevents; ++k) {
    std::vector<int> order = active;
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<int> minority = active;
    std::shuffle(minority.begin(), minority.end(), rng);
    minority.resize(static_cast<std::size_t>(minority_size));

    const int extras = bias > 0.0 ? extras_dist(rng) : 0;
    for (int e = 0; e < extras; ++e) {
      const int who = minority[std::uniform_int_distribution<std::size_t>(0, minority.size() - 1)(rng)];
      const auto first = std::find(order.begin(), order.end(), who) - order.begin();
      const auto lo = static_cast<std::size_t>(first) + 1;
      const auto at = std::uniform_int_distribution<std::size_t>(lo, order.size())(rng);
      order.insert(order.begin() + static_cast<std::ptrdiff_t>(at), who);
    }
    for (const int who : order) {
      clock += 1.0;
      out.stream.events.push_back({clock, "v" + std::to_string(who)});
    }
    sizes.push_back(order.size());
    clock += 30.0;
  }
  out.truth = segment::Segmentation::from_sizes(sizes);
  return out;
}

GridFixture gen_grid_network(int columns, int rows, double cell, double corridor_si, double background_si,
                             std::uint64_t seed) {
  if (columns < 2 || rows < 2) throw Error(ErrorCode::InvalidArgument, "a grid needs at least 2x2 nodes");
  if (!(cell > 0.0)) throw Error(ErrorCode::InvalidArgument, "cell length must be positive");

  GridFixture g;
  g.columns = columns;
  g.rows = rows;
  g.cell = cell;
  RoadNetwork& net = g.scored.network;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < columns; ++c) net.add_node(g.node_at(c, r), {c * cell, r * cell});
  }
  const auto horizontal_id = [&](int c, int r) { return static_cast<SegmentId>(r) * (columns - 1) + c; };
  const auto vertical_id = [&](int c, int r) {
    return static_cast<SegmentId>(rows) * (columns - 1) + static_cast<SegmentId>(r) * columns + c;
  };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c + 1 < columns; ++c) net.add_segment(horizontal_id(c, r), g.node_at(c, r), g.node_at(c + 1, r));
  }
  for (int r = 0; r + 1 < rows; ++r) {
    for (int c = 0; c < columns; ++c) net.add_segment(vertical_id(c, r), g.node_at(c, r), g.node_at(c, r + 1));
  }

  Rng rng(derive_seed(seed, 0));
  std::vector<bool> steps(static_cast<std::size_t>(columns - 1), true);  // true = east
  steps.resize(static_cast<std::size_t>(columns + rows - 2), false);
  std::shuffle(steps.begin(), steps.end(), rng);
  int c = 0;
  int r = 0;
  for (const bool east : steps) {
    if (east) {
      g.corridor.push_back(horizontal_id(c, r));
      ++c;
    } else {
      g.corridor.push_back(vertical_id(c, r));
      ++r;
    }
  }

  g.scored.scores.assign(net.segment_count(), SegmentScore{background_si, 1.0, background_si});
  for (const auto id : g.corridor) g.scored.score(id) = SegmentScore{corridor_si, 1.0, corridor_si};
  return g;
}

ScenicEvidence gen_scenic_evidence(const GridFixture& grid, std::uint64_t seed) {
  if (grid.corridor.empty()) throw Error(ErrorCode::InvalidArgument, "grid has no corridor");
  Rng rng(derive_seed(seed, 1));
  std::uniform_real_distribution<double> along(-10.0, 10.0);
  std::uniform_real_distribution<double> across(-5.0, 5.0);
  const auto natural = scenic::natural_scenery_labels();
  const auto tourist = scenic::tourist_attraction_labels();
  static constexpr std::string_view kOther[] = {"Office", "Gas Station", "Supermarket", "Bank", "Parking"};
  const auto pick_label = [&](auto labels) {
    return std::string(labels[std::uniform_int_distribution<std::size_t>(0, std::size(labels) - 1)(rng)]);
  };

  ScenicEvidence ev;
  ev.planted = grid.corridor[grid.corridor.size() / 2];
  const auto& net = grid.scored.network;
  const auto near_midpoint = [&](const RoadSegment& seg) {
    const PlanarPoint a = seg.polyline.front();
    const PlanarPoint b = seg.polyline.back();
    const PlanarPoint dir = (b - a) * (1.0 / geo::distance(a, b));
    const PlanarPoint normal{-dir.y, dir.x};
    return (a + b) * 0.5 + dir * along(rng) + normal * across(rng);
  };
  const auto add_checkin = [&](PlanarPoint p, std::string label) {
    ev.checkins.push_back({p, scenic::categorize_poi(label)});
    ev.labels.push_back(std::move(label));
  };

  for (const auto id : grid.corridor) {
    const auto& seg = net.segment(id);
    const bool planted = id == ev.planted;
    for (int i = 0; i < (planted ? 30 : 5); ++i) ev.photos.push_back({near_midpoint(seg)});
    if (planted) {
      for (int i = 0; i < 3; ++i) add_checkin(near_midpoint(seg), pick_label(natural));
    } else {
      add_checkin(near_midpoint(seg), pick_label(tourist));
    }
  }
  const double width = (grid.columns - 1) * grid.cell;
  const double height = (grid.rows - 1) * grid.cell;
  std::uniform_real_distribution<double> ux(0.0, width);
  std::uniform_real_distribution<double> uy(0.0, height);
  for (int i = 0; i < 200; ++i) ev.photos.push_back({{ux(rng), uy(rng)}});
  for (int i = 0; i < 50; ++i) add_checkin({ux(rng), uy(rng)}, pick_label(std::span<const std::string_view>(kOther)));
  return ev;
}

direction::Trajectory sample_path(const RoadNetwork& network, std::span<const Traversal> path, double spacing) {
  if (!(spacing > 0.0)) throw Error(ErrorCode::InvalidArgument, "sample spacing must be positive");
  std::vector<PlanarPoint> line;
  for (const auto& t : path) {
    const auto& seg = network.segment(t.segment);
    std::vector<PlanarPoint> pts = seg.polyline;
    if (t.travel == Travel::Backward) std::reverse(pts.begin(), pts.end());
    line.insert(line.end(), line.empty() ? pts.begin() : pts.begin() + 1, pts.end());
  }
  direction::Trajectory traj;
  if (line.size() < 2) return traj;
  double next = spacing / 2.0;
  double walked = 0.0;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    const double len = geo::distance(line[i], line[i + 1]);
    while (next <= walked + len) {
      const double f = len > 0.0 ? (next - walked) / len : 0.0;
      traj.points.push_back(line[i] + (line[i + 1] - line[i]) * f);
      next += spacing;
    }
    walked += len;
  }
  return traj;
}

namespace {

std::vector<NodeId> nodes_near(const RoadNetwork& network, PlanarPoint p, double radius) {
  std::vector<NodeId> out;
  for (const auto& [id, q] : network.nodes()) {
    if (geo::distance(p, q) <= radius) out.push_back(id);
  }
  return out;
}

void append(std::vector<Traversal>& path, const route::Path& piece) {
  path.insert(path.end(), piece.traversals.begin(), piece.traversals.end());
}

}  // namespace

TaxiFleet gen_taxi_fleet(const ScoredRoadNetwork& scored, const FleetConfig& cfg, std::uint64_t seed) {
  const RoadNetwork& net = scored.network;
  if (net.nodes().size() < 2 || net.empty()) throw Error(ErrorCode::InvalidArgument, "network too small for a fleet");
  if (cfg.trips < 1 || !(cfg.spacing > 0.0) || !(cfg.gps_sigma >= 0.0) || !(cfg.endpoint_jitter >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "invalid fleet configuration");
  }
  const route::RoadGraph graph(scored);
  std::vector<NodeId> node_ids;
  std::vector<PlanarPoint> positions;
  for (const auto& [id, p] : net.nodes()) {
    node_ids.push_back(id);
    positions.push_back(p);
  }
  const auto box = geo::BoundingBox::of(positions);
  const double diagonal = std::hypot(box.max_x - box.min_x, box.max_y - box.min_y);

  Rng rng(derive_seed(seed, 0));
  std::uniform_int_distribution<std::size_t> pick_node(0, node_ids.size() - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, cfg.gps_sigma > 0.0 ? cfg.gps_sigma : 1.0);

  // Query pair far enough apart that the target sits well inside the trip.
  NodeId start = 0;
  NodeId end = 0;
  route::Path spine;
  for (int attempt = 0;; ++attempt) {
    start = node_ids[pick_node(rng)];
    end = node_ids[pick_node(rng)];
    if (start == end || geo::distance(net.node(start), net.node(end)) < 0.5 * diagonal) {
      if (attempt > 10000) throw Error(ErrorCode::InvalidArgument, "cannot find a distant node pair");
      continue;
    }
    try {
      spine = graph.shortest_path(start, end);
    } catch (const Error&) {
      continue;
    }
    if (spine.traversals.size() >= 3) break;
  }

  TaxiFleet fleet;
  fleet.start = net.node(start);
  fleet.end = net.node(end);
  const Traversal target = spine.traversals[spine.traversals.size() / 2];
  fleet.target = target.segment;
  fleet.planted = target.travel;
  const RoadSegment& seg = net.segment(target.segment);

  const auto start_side = nodes_near(net, fleet.start, cfg.endpoint_jitter);
  const auto end_side = nodes_near(net, fleet.end, cfg.endpoint_jitter);
  const auto pick = [&](const std::vector<NodeId>& from) {
    return from[std::uniform_int_distribution<std::size_t>(0, from.size() - 1)(rng)];
  };
  // src -> target crossed in `travel` -> dst
  const auto through_target = [&](NodeId src, NodeId dst, Travel travel) {
    std::vector<Traversal> path;
    append(path, graph.shortest_path(src, seg.start(travel)));
    path.push_back({seg.id, travel});
    append(path, graph.shortest_path(seg.end(travel), dst));
    return path;
  };

  for (int i = 0; i < cfg.trips; ++i) {
    const double roll = coin(rng);
    std::vector<Traversal> path;
    try {
      if (roll < cfg.aligned_share) {
        const bool contrarian = coin(rng) < cfg.contrarian_share;
        path = through_target(pick(start_side), pick(end_side), contrarian ? reversed(target.travel) : target.travel);
      } else if (roll < cfg.aligned_share + cfg.reverse_share) {
        path = through_target(pick(end_side), pick(start_side), reversed(target.travel));
      } else {
        const NodeId a = node_ids[pick_node(rng)];
        NodeId b = node_ids[pick_node(rng)];
        if (a == b) b = node_ids[(pick_node(rng) + 1) % node_ids.size()];
        if (a != b) append(path, graph.shortest_path(a, b));
      }
    } catch (const Error&) {
      path.clear();  // unreachable under one-way restrictions; skip the trip
    }
    auto traj = sample_path(net, path, cfg.spacing);
    if (traj.points.size() < 2) continue;
    if (cfg.gps_sigma > 0.0) {
      for (auto& p : traj.points) p = p + PlanarPoint{noise(rng), noise(rng)};
    }
    fleet.trajectories.push_back(std::move(traj));
  }
  return fleet;
}

}  // namespace crowdsense::synth

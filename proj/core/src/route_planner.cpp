#include "crowdsense/route_planner.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <thread>
#include <unordered_set>

#include "crowdsense/error.hpp"

namespace crowdsense::route {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string id_str(std::int64_t id) { return std::to_string(id); }

const RoadSegment& segment_of(const RoadGraph& g, SegmentId id) { return g.network().network.segment(id); }

double traversal_length(const RoadGraph& g, const Traversal& t) { return segment_of(g, t.segment).length; }

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::HfS: return "HfS";
    case Strategy::PbS: return "PbS";
    case Strategy::RbS: return "RbS";
  }
  return "?";
}

Strategy parse_strategy(std::string_view text) {
  std::string lower;
  for (const char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "hfs") return Strategy::HfS;
  if (lower == "pbs") return Strategy::PbS;
  if (lower == "rbs") return Strategy::RbS;
  throw Error(ErrorCode::InvalidArgument, "unknown strategy '" + std::string(text) + "'");
}

std::vector<SegmentId> TravelRoute::selected_segments() const {
  std::vector<SegmentId> ids;
  ids.reserve(selected.size());
  for (const auto& t : selected) ids.push_back(t.segment);
  return ids;
}

InterestedArea interested_area(const ScoredRoadNetwork& network, PlanarPoint origin,
                               PlanarPoint destination, double margin) {
  if (!(margin >= 0.0)) throw Error(ErrorCode::InvalidArgument, "area margin must be non-negative");
  InterestedArea area;
  area.bounds = geo::BoundingBox::of(std::vector<PlanarPoint>{origin, destination}).expanded(margin);
  if (!(area.bounds.max_x > area.bounds.min_x) || !(area.bounds.max_y > area.bounds.min_y)) {
    throw Error(ErrorCode::EmptyArea, "the interested area has zero extent");
  }
  constexpr double kEdge = 1e-9;
  for (const auto& seg : network.network.segments()) {
    const bool inside = std::all_of(seg.polyline.begin(), seg.polyline.end(),
                                    [&](PlanarPoint p) { return area.bounds.contains(p, kEdge); });
    if (inside) area.segments.push_back(seg.id);
  }
  if (area.segments.empty()) {
    throw Error(ErrorCode::EmptyArea, "no road segment lies inside the interested area");
  }
  return area;
}

// ---------------------------------------------------------------------------
// RoadGraph

namespace {
std::vector<SegmentId> all_segment_ids(const ScoredRoadNetwork& network) {
  std::vector<SegmentId> all;
  all.reserve(network.network.segment_count());
  for (const auto& s : network.network.segments()) all.push_back(s.id);
  return all;
}
}  // namespace

RoadGraph::RoadGraph(const ScoredRoadNetwork& network)
    : RoadGraph(network, all_segment_ids(network)) {}

RoadGraph::RoadGraph(const ScoredRoadNetwork& network, std::span<const SegmentId> segments)
    : network_(&network), segment_ids_(segments.begin(), segments.end()) {
  std::sort(segment_ids_.begin(), segment_ids_.end());
  segment_ids_.erase(std::unique(segment_ids_.begin(), segment_ids_.end()), segment_ids_.end());

  std::set<NodeId> nodes;
  for (const auto id : segment_ids_) {
    const auto& seg = network.network.segment(id);
    nodes.insert(seg.u);
    nodes.insert(seg.v);
  }
  node_ids_.assign(nodes.begin(), nodes.end());

  std::vector<Arc> arcs;
  for (const auto id : segment_ids_) {
    const auto& seg = network.network.segment(id);
    const auto allowed = network.score(id).direction;
    if (permits(allowed, Travel::Forward)) {
      arcs.push_back({node_index(seg.u), node_index(seg.v), id, Travel::Forward, seg.length});
    }
    if (permits(allowed, Travel::Backward)) {
      arcs.push_back({node_index(seg.v), node_index(seg.u), id, Travel::Backward, seg.length});
    }
  }
  std::stable_sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) { return a.from < b.from; });
  arcs_ = std::move(arcs);
  arc_offsets_.assign(node_ids_.size() + 1, 0);
  for (const auto& a : arcs_) ++arc_offsets_[a.from + 1];
  for (std::size_t i = 1; i < arc_offsets_.size(); ++i) arc_offsets_[i] += arc_offsets_[i - 1];
}

bool RoadGraph::contains_segment(SegmentId id) const {
  return std::binary_search(segment_ids_.begin(), segment_ids_.end(), id);
}

bool RoadGraph::has_node(NodeId id) const {
  return std::binary_search(node_ids_.begin(), node_ids_.end(), id);
}

std::uint32_t RoadGraph::node_index(NodeId id) const {
  const auto it = std::lower_bound(node_ids_.begin(), node_ids_.end(), id);
  if (it == node_ids_.end() || *it != id) {
    throw Error(ErrorCode::InvalidArgument, "node " + id_str(id) + " is not part of the graph");
  }
  return static_cast<std::uint32_t>(it - node_ids_.begin());
}

std::span<const RoadGraph::Arc> RoadGraph::out_arcs(std::uint32_t node) const {
  return std::span<const Arc>(arcs_).subspan(arc_offsets_[node], arc_offsets_[node + 1] - arc_offsets_[node]);
}

RoadGraph::Tree RoadGraph::shortest_path_tree(std::uint32_t source) const {
  const std::size_t n = node_ids_.size();
  Tree tree{std::vector<double>(n, kInf), std::vector<std::int32_t>(n, -1)};
  std::vector<char> settled(n, 0);
  using Entry = std::pair<double, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  tree.dist[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [d, node] = queue.top();
    queue.pop();
    if (settled[node]) continue;
    settled[node] = 1;
    for (std::uint32_t k = arc_offsets_[node]; k < arc_offsets_[node + 1]; ++k) {
      const Arc& arc = arcs_[k];
      if (settled[arc.to]) continue;
      const double nd = d + arc.length;
      const auto pred = tree.pred_arc[arc.to];
      if (nd < tree.dist[arc.to]) {
        tree.dist[arc.to] = nd;
        tree.pred_arc[arc.to] = static_cast<std::int32_t>(k);
        queue.emplace(nd, arc.to);
      } else if (nd == tree.dist[arc.to] && pred >= 0 && arc.segment < arcs_[pred].segment) {
        tree.pred_arc[arc.to] = static_cast<std::int32_t>(k);
      }
    }
  }
  return tree;
}

Path RoadGraph::shortest_path(NodeId from, NodeId to) const {
  const auto s = node_index(from);
  const auto t = node_index(to);
  const Tree tree = shortest_path_tree(s);
  if (!std::isfinite(tree.dist[t])) {
    throw Error(ErrorCode::Unreachable, "no path from node " + id_str(from) + " to node " + id_str(to));
  }
  Path path;
  path.distance = tree.dist[t];
  for (auto at = t; at != s;) {
    const Arc& arc = arcs_[static_cast<std::size_t>(tree.pred_arc[at])];
    path.traversals.push_back({arc.segment, arc.travel});
    at = arc.from;
  }
  std::reverse(path.traversals.begin(), path.traversals.end());
  return path;
}

std::optional<NodeId> RoadGraph::nearest_node(PlanarPoint p, double radius) const {
  std::optional<NodeId> best;
  double best_d = kInf;
  for (const auto id : node_ids_) {
    const double d = geo::distance(network_->network.node(id), p);
    if (d <= radius && d < best_d) {
      best = id;
      best_d = d;
    }
  }
  return best;
}

Path shortest_path(const ScoredRoadNetwork& network, NodeId from, NodeId to) {
  const RoadGraph graph(network);
  if (!graph.has_node(from) || !graph.has_node(to)) {
    throw Error(ErrorCode::InvalidArgument, "shortest_path endpoints must be network nodes");
  }
  return graph.shortest_path(from, to);
}

// ---------------------------------------------------------------------------
// DistanceTable

DistanceTable::DistanceTable(const RoadGraph& graph, unsigned threads)
    : graph_(&graph), n_(graph.node_count()), dist_(n_ * n_, kInf), pred_(n_ * n_, -1) {
  auto fill = [this](std::uint32_t source) {
    auto tree = graph_->shortest_path_tree(source);
    std::copy(tree.dist.begin(), tree.dist.end(), dist_.begin() + static_cast<std::ptrdiff_t>(source * n_));
    std::copy(tree.pred_arc.begin(), tree.pred_arc.end(),
              pred_.begin() + static_cast<std::ptrdiff_t>(source * n_));
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_)));
  if (workers == 1) {
    for (std::uint32_t s = 0; s < n_; ++s) fill(s);
    return;
  }
  std::atomic<std::uint32_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (auto s = next.fetch_add(1); s < n_; s = next.fetch_add(1)) fill(s);
    });
  }
}

double DistanceTable::distance(NodeId from, NodeId to) const {
  return distance_ix(graph_->node_index(from), graph_->node_index(to));
}

Path DistanceTable::path(NodeId from, NodeId to) const {
  const auto s = graph_->node_index(from);
  const auto t = graph_->node_index(to);
  if (!std::isfinite(distance_ix(s, t))) {
    throw Error(ErrorCode::Unreachable, "no path from node " + id_str(from) + " to node " + id_str(to));
  }
  Path path;
  path.distance = distance_ix(s, t);
  const auto arcs = graph_->arcs();
  for (auto at = t; at != s;) {
    const auto& arc = arcs[static_cast<std::size_t>(pred_[s * n_ + at])];
    path.traversals.push_back({arc.segment, arc.travel});
    at = arc.from;
  }
  std::reverse(path.traversals.begin(), path.traversals.end());
  return path;
}

// ---------------------------------------------------------------------------
// Selection

std::size_t select_index(std::span<const Candidate> candidates, Strategy strategy, Rng& rng) {
  if (candidates.empty()) throw Error(ErrorCode::EmptyCandidates, "no candidate segments left");
  switch (strategy) {
    case Strategy::HfS: {
      std::size_t best = 0;
      for (std::size_t i = 1; i < candidates.size(); ++i) {
        const auto& c = candidates[i];
        const auto& b = candidates[best];
        if (c.si > b.si || (c.si == b.si && c.id < b.id)) best = i;
      }
      return best;
    }
    case Strategy::PbS: {
      double total = 0.0;
      for (const auto& c : candidates) total += std::max(c.si, 0.0) + kPbsFloor;
      const double target = std::uniform_real_distribution<double>(0.0, total)(rng);
      double acc = 0.0;
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        acc += std::max(candidates[i].si, 0.0) + kPbsFloor;
        if (target < acc) return i;
      }
      return candidates.size() - 1;
    }
    case Strategy::RbS:
      return std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng);
  }
  return 0;
}

SegmentId select_segment(std::span<const Candidate> candidates, Strategy strategy, Rng& rng) {
  return candidates[select_index(candidates, strategy, rng)].id;
}

// ---------------------------------------------------------------------------
// Route construction

namespace {

double gap_distance(const DistanceTable& table, NodeId from, NodeId to) { return table.distance(from, to); }

// Cost of visiting `selected` in order between origin and destination.
struct Layout {
  std::vector<NodeId> gap_from;  // n+1 gaps
  std::vector<NodeId> gap_to;
  std::vector<double> gap_cost;
  double total = 0.0;
};

Layout layout_of(NodeId origin, NodeId destination, std::span<const Traversal> selected,
                 const DistanceTable& table) {
  const RoadGraph& g = table.graph();
  Layout out;
  NodeId at = origin;
  for (const auto& t : selected) {
    const auto& seg = segment_of(g, t.segment);
    out.gap_from.push_back(at);
    out.gap_to.push_back(seg.start(t.travel));
    at = seg.end(t.travel);
  }
  out.gap_from.push_back(at);
  out.gap_to.push_back(destination);
  for (std::size_t k = 0; k < out.gap_from.size(); ++k) {
    out.gap_cost.push_back(gap_distance(table, out.gap_from[k], out.gap_to[k]));
    out.total += out.gap_cost.back();
  }
  for (const auto& t : selected) out.total += traversal_length(g, t);
  return out;
}

struct Insertion {
  std::size_t position = 0;
  Travel travel = Travel::Forward;
  double total = kInf;
};

std::optional<Insertion> best_insertion(const Layout& layout, SegmentId segment,
                                        const DistanceTable& table) {
  const RoadGraph& g = table.graph();
  const auto& seg = segment_of(g, segment);
  const auto allowed = g.network().score(segment).direction;
  std::optional<Insertion> best;
  for (std::size_t k = 0; k < layout.gap_cost.size(); ++k) {
    for (const Travel travel : {Travel::Forward, Travel::Backward}) {
      if (!permits(allowed, travel)) continue;
      const double via = gap_distance(table, layout.gap_from[k], seg.start(travel)) + seg.length +
                         gap_distance(table, seg.end(travel), layout.gap_to[k]);
      if (!std::isfinite(via)) continue;
      const double total = layout.total - layout.gap_cost[k] + via;
      if (!best || total < best->total) best = Insertion{k, travel, total};
    }
  }
  return best;
}

TravelRoute materialize(NodeId origin, NodeId destination, std::vector<Traversal> selected,
                        const DistanceTable& table) {
  const RoadGraph& g = table.graph();
  TravelRoute route;
  route.origin_node = origin;
  route.destination_node = destination;
  NodeId at = origin;
  auto append_path = [&](NodeId to) {
    const Path p = table.path(at, to);
    route.traversals.insert(route.traversals.end(), p.traversals.begin(), p.traversals.end());
  };
  for (const auto& t : selected) {
    const auto& seg = segment_of(g, t.segment);
    append_path(seg.start(t.travel));
    route.traversals.push_back(t);
    at = seg.end(t.travel);
  }
  append_path(destination);
  for (const auto& t : route.traversals) route.total_distance += traversal_length(g, t);
  route.selected = std::move(selected);
  route.scenic_score = route_score(route.traversals, g.network());
  return route;
}

void require_segment(const RoadGraph& g, SegmentId segment) {
  if (!g.contains_segment(segment)) {
    throw Error(ErrorCode::InvalidArgument, "segment " + id_str(segment) + " is not part of the routing graph");
  }
}

}  // namespace

TravelRoute initial_route(NodeId origin, NodeId destination, const DistanceTable& table) {
  return materialize(origin, destination, {}, table);
}

TravelRoute insert_segment(const TravelRoute& route, SegmentId segment, const DistanceTable& table) {
  const RoadGraph& g = table.graph();
  require_segment(g, segment);
  for (const auto& t : route.selected) {
    if (t.segment == segment) {
      throw Error(ErrorCode::InvalidArgument, "segment " + id_str(segment) + " is already selected");
    }
  }
  const Layout layout = layout_of(route.origin_node, route.destination_node, route.selected, table);
  const auto ins = best_insertion(layout, segment, table);
  if (!ins) {
    throw Error(ErrorCode::Unreachable, "segment " + id_str(segment) + " cannot be joined to the route");
  }
  auto selected = route.selected;
  selected.insert(selected.begin() + static_cast<std::ptrdiff_t>(ins->position), Traversal{segment, ins->travel});
  return materialize(route.origin_node, route.destination_node, std::move(selected), table);
}

TravelRoute insert_segment(const TravelRoute& route, SegmentId segment,
                           const ScoredRoadNetwork& network) {
  const RoadGraph graph(network);
  const DistanceTable table(graph);
  return insert_segment(route, segment, table);
}

double route_score(std::span<const Traversal> traversals, const ScoredRoadNetwork& network) {
  std::set<SegmentId> distinct;
  for (const auto& t : traversals) distinct.insert(t.segment);
  double total = 0.0;
  for (const auto id : distinct) total += network.score(id).si;
  return total;
}

double route_score(const TravelRoute& route, const ScoredRoadNetwork& network) {
  return route_score(route.traversals, network);
}

namespace {

// Strict-weak "a is a better final answer than b".
bool better_route(const TravelRoute& a, const TravelRoute& b) {
  if (a.scenic_score != b.scenic_score) return a.scenic_score > b.scenic_score;
  if (a.total_distance != b.total_distance) return a.total_distance < b.total_distance;
  return std::lexicographical_compare(
      a.traversals.begin(), a.traversals.end(), b.traversals.begin(), b.traversals.end(),
      [](const Traversal& x, const Traversal& y) {
        if (x.segment != y.segment) return x.segment < y.segment;
        return x.travel == Travel::Forward && y.travel == Travel::Backward;
      });
}

void drop_traversed(std::vector<Candidate>& candidates, const TravelRoute& route) {
  std::unordered_set<SegmentId> on_route;
  for (const auto& t : route.traversals) on_route.insert(t.segment);
  std::erase_if(candidates, [&](const Candidate& c) { return on_route.contains(c.id); });
}

TravelRoute run_trial(const TravelRoute& start, const std::vector<Candidate>& ranked, double distmax,
                      Strategy strategy, Rng& rng, const DistanceTable& table) {
  TravelRoute route = start;
  std::vector<Candidate> candidates = ranked;
  drop_traversed(candidates, route);
  Layout layout = layout_of(route.origin_node, route.destination_node, route.selected, table);
  while (!candidates.empty()) {
    const std::size_t pick = select_index(candidates, strategy, rng);
    const SegmentId segment = candidates[pick].id;
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));

    const auto ins = best_insertion(layout, segment, table);
    if (!ins || ins->total > distmax) continue;
    auto selected = route.selected;
    selected.insert(selected.begin() + static_cast<std::ptrdiff_t>(ins->position), Traversal{segment, ins->travel});
    TravelRoute next = materialize(route.origin_node, route.destination_node, std::move(selected), table);
    if (next.total_distance > distmax) continue;
    // Rerouted connectors may drop scenic segments; never trade score away.
    if (next.scenic_score < route.scenic_score) continue;
    route = std::move(next);
    layout = layout_of(route.origin_node, route.destination_node, route.selected, table);
    drop_traversed(candidates, route);
  }
  return route;
}

}  // namespace

TravelRoute plan_route(const RouteQuery& query, const ScoredRoadNetwork& network) {
  if (!(query.distmax > 0.0)) throw Error(ErrorCode::InvalidArgument, "distmax must be positive");
  if (query.trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");

  const InterestedArea area = interested_area(network, query.origin, query.destination, query.area_margin);
  const RoadGraph graph(network, area.segments);
  const auto origin = graph.nearest_node(query.origin, query.snap_radius);
  const auto destination = graph.nearest_node(query.destination, query.snap_radius);
  if (!origin || !destination) {
    throw Error(ErrorCode::NoNearbyNode, "origin or destination is farther than " +
                                             std::to_string(query.snap_radius) +
                                             " m from every node of the interested area");
  }
  const DistanceTable table(graph, query.threads);
  if (!std::isfinite(table.distance(*origin, *destination))) {
    throw Error(ErrorCode::Unreachable, "destination is unreachable from origin inside the interested area");
  }
  const TravelRoute start = initial_route(*origin, *destination, table);
  if (start.total_distance > query.distmax) {
    throw Error(ErrorCode::InfeasibleBudget,
                "shortest path (" + std::to_string(start.total_distance) + " m) exceeds distmax (" +
                    std::to_string(query.distmax) + " m)");
  }

  std::vector<Candidate> ranked;
  ranked.reserve(area.segments.size());
  for (const auto id : area.segments) ranked.push_back({id, network.score(id).si});
  std::stable_sort(ranked.begin(), ranked.end(), [](const Candidate& a, const Candidate& b) {
    if (a.si != b.si) return a.si > b.si;
    return a.id < b.id;
  });

  const std::size_t trials = query.strategy == Strategy::HfS ? 1 : static_cast<std::size_t>(query.trials);
  std::vector<TravelRoute> results(trials);
  auto run = [&](std::size_t trial) {
    Rng rng = make_rng(query.seed, trial);
    results[trial] = run_trial(start, ranked, query.distmax, query.strategy, rng, table);
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(query.threads, static_cast<unsigned>(trials)));
  if (workers == 1) {
    for (std::size_t t = 0; t < trials; ++t) run(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (auto t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) run(t);
      });
    }
  }

  std::size_t best = 0;
  for (std::size_t t = 1; t < trials; ++t) {
    if (better_route(results[t], results[best])) best = t;
  }
  return std::move(results[best]);
}

std::optional<std::string> check_route(const TravelRoute& route, const ScoredRoadNetwork& network,
                                       double distmax) {
  const auto& net = network.network;
  NodeId at = route.origin_node;
  double total = 0.0;
  for (std::size_t i = 0; i < route.traversals.size(); ++i) {
    const auto& t = route.traversals[i];
    if (!net.find(t.segment)) return "traversal " + std::to_string(i) + " names unknown segment " + id_str(t.segment);
    const auto& seg = net.segment(t.segment);
    if (seg.start(t.travel) != at) return "traversal " + std::to_string(i) + " is not connected to its predecessor";
    if (!permits(network.score(t.segment).direction, t.travel)) {
      return "traversal " + std::to_string(i) + " violates the allowed direction of segment " + id_str(t.segment);
    }
    total += seg.length;
    at = seg.end(t.travel);
  }
  if (at != route.destination_node) return std::string("route does not end at the destination node");
  if (std::abs(total - route.total_distance) > 1e-6 * std::max(1.0, total)) {
    return "total_distance " + std::to_string(route.total_distance) + " != traversed length " + std::to_string(total);
  }
  if (route.total_distance > distmax) {
    return "total_distance " + std::to_string(route.total_distance) + " exceeds distmax " + std::to_string(distmax);
  }
  return std::nullopt;
}

}  // namespace crowdsense::route

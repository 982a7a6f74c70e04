#include "oracles.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace crowdsense::oracle {

using direction::Traversal;

PairCounts brute_pair_counting(const std::vector<std::size_t>& s_labels,
                               const std::vector<std::size_t>& g_labels) {
  std::size_t in_s = 0, in_g = 0, both = 0;
  for (std::size_t i = 0; i < s_labels.size(); ++i) {
    for (std::size_t j = i + 1; j < s_labels.size(); ++j) {
      const bool s = s_labels[i] == s_labels[j];
      const bool g = g_labels[i] == g_labels[j];
      in_s += s;
      in_g += g;
      both += s && g;
    }
  }
  PairCounts out;
  out.precision = in_s == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(in_s);
  out.recall = in_g == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(in_g);
  const double sum = out.precision + out.recall;
  out.f1 = sum == 0.0 ? 0.0 : 2.0 * out.precision * out.recall / sum;
  return out;
}

segment::Segmentation random_partition(std::size_t length, Rng& rng) {
  std::vector<std::size_t> cuts;
  std::bernoulli_distribution cut(std::uniform_real_distribution<double>(0.05, 0.95)(rng));
  for (std::size_t i = 1; i < length; ++i) {
    if (cut(rng)) cuts.push_back(i);
  }
  return segment::Segmentation(length, std::move(cuts));
}

ScoredRoadNetwork random_small_network(int nodes, int extra_edges, bool one_way, Rng& rng) {
  std::uniform_real_distribution<double> coord(0.0, 1000.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ScoredRoadNetwork out;
  for (int i = 0; i < nodes; ++i) out.network.add_node(i, {coord(rng), coord(rng)});

  std::set<std::pair<int, int>> used;
  SegmentId next_id = 0;
  auto connect = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    if (a == b || used.contains({key.first, key.second})) return;
    used.insert({key.first, key.second});
    // alternate orientation so both Forward and Backward arcs get exercised
    if (unit(rng) < 0.5) std::swap(a, b);
    out.network.add_segment(next_id++, a, b);
  };
  for (int i = 1; i < nodes; ++i) {
    connect(i, std::uniform_int_distribution<int>(0, i - 1)(rng));
  }
  std::uniform_int_distribution<int> pick(0, nodes - 1);
  for (int e = 0; e < extra_edges; ++e) connect(pick(rng), pick(rng));

  for (std::size_t i = 0; i < out.network.segment_count(); ++i) {
    SegmentScore s;
    s.si = unit(rng);
    s.sp = s.si;
    s.sc = 1.0;
    if (one_way) {
      const double r = unit(rng);
      if (r < 0.15) s.direction = AllowedDirection::Forward;
      else if (r < 0.3) s.direction = AllowedDirection::Backward;
    }
    out.scores.push_back(s);
  }
  return out;
}

std::optional<BrutePath> brute_shortest_path(const ScoredRoadNetwork& network, NodeId from, NodeId to,
                                             const std::vector<SegmentId>& allowed) {
  const auto& net = network.network;
  std::vector<const RoadSegment*> usable;
  for (const auto& seg : net.segments()) {
    if (allowed.empty() || std::find(allowed.begin(), allowed.end(), seg.id) != allowed.end()) {
      usable.push_back(&seg);
    }
  }

  std::optional<BrutePath> best;
  BrutePath current;
  std::set<NodeId> visited{from};
  auto dfs = [&](auto&& self, NodeId at) -> void {
    if (at == to) {
      if (!best || current.distance < best->distance) best = current;
      return;
    }
    for (const RoadSegment* seg : usable) {
      for (const Travel t : {Travel::Forward, Travel::Backward}) {
        if (seg->start(t) != at || !permits(network.score(seg->id).direction, t)) continue;
        const NodeId next = seg->end(t);
        if (visited.contains(next)) continue;
        visited.insert(next);
        current.traversals.push_back({seg->id, t});
        const double before = current.distance;
        current.distance += seg->length;
        self(self, next);
        current.distance = before;
        current.traversals.pop_back();
        visited.erase(next);
      }
    }
  };
  dfs(dfs, from);
  return best;
}

double brute_route_score(const ScoredRoadNetwork& network, const std::vector<Traversal>& traversals) {
  std::set<SegmentId> seen;
  double total = 0.0;
  for (const auto& t : traversals) {
    if (seen.insert(t.segment).second) total += network.score(t.segment).si;
  }
  return total;
}

namespace {

struct Built {
  std::vector<Traversal> traversals;
  double distance = std::numeric_limits<double>::infinity();
};

Built build(const ScoredRoadNetwork& network, const std::vector<SegmentId>& area, NodeId origin,
            NodeId destination, const std::vector<Traversal>& selected) {
  const auto& net = network.network;
  Built out;
  out.distance = 0.0;
  NodeId at = origin;
  auto join = [&](NodeId to) {
    const auto p = brute_shortest_path(network, at, to, area);
    if (!p) {
      out.distance = std::numeric_limits<double>::infinity();
      return false;
    }
    out.traversals.insert(out.traversals.end(), p->traversals.begin(), p->traversals.end());
    out.distance += p->distance;
    return true;
  };
  for (const auto& t : selected) {
    const auto& seg = net.segment(t.segment);
    if (!join(seg.start(t.travel))) return out;
    out.traversals.push_back(t);
    out.distance += seg.length;
    at = seg.end(t.travel);
  }
  join(destination);
  return out;
}

}  // namespace

route::TravelRoute brute_greedy_route(const ScoredRoadNetwork& network, const std::vector<SegmentId>& area,
                                      NodeId origin, NodeId destination, double distmax) {
  std::vector<SegmentId> candidates = area;
  std::sort(candidates.begin(), candidates.end(), [&](SegmentId a, SegmentId b) {
    const double sa = network.score(a).si, sb = network.score(b).si;
    return sa != sb ? sa > sb : a < b;
  });

  std::vector<Traversal> selected;
  Built route = build(network, area, origin, destination, selected);
  double score = brute_route_score(network, route.traversals);
  auto drop_on_route = [&] {
    std::erase_if(candidates, [&](SegmentId id) {
      return std::any_of(route.traversals.begin(), route.traversals.end(),
                         [&](const Traversal& t) { return t.segment == id; });
    });
  };
  drop_on_route();

  while (!candidates.empty()) {
    const SegmentId id = candidates.front();
    candidates.erase(candidates.begin());

    std::optional<std::vector<Traversal>> best_sel;
    double best_total = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k <= selected.size(); ++k) {
      for (const Travel t : {Travel::Forward, Travel::Backward}) {
        if (!permits(network.score(id).direction, t)) continue;
        auto trial = selected;
        trial.insert(trial.begin() + static_cast<std::ptrdiff_t>(k), Traversal{id, t});
        const Built b = build(network, area, origin, destination, trial);
        if (b.distance < best_total) {
          best_total = b.distance;
          best_sel = trial;
        }
      }
    }
    if (!best_sel || best_total > distmax) continue;
    const Built next = build(network, area, origin, destination, *best_sel);
    const double next_score = brute_route_score(network, next.traversals);
    if (next_score < score) continue;
    selected = *best_sel;
    route = next;
    score = next_score;
    drop_on_route();
  }

  route::TravelRoute out;
  out.origin_node = origin;
  out.destination_node = destination;
  out.traversals = route.traversals;
  out.total_distance = route.distance;
  out.scenic_score = score;
  out.selected = selected;
  return out;
}

}  // namespace crowdsense::oracle

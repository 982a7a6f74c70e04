#include "crowdsense/event_localizer.hpp"

#include <algorithm>
#include <cmath>

#include "crowdsense/error.hpp"

namespace crowdsense::event {

void TrapezoidConfig::validate() const {
  if (!(eta > 0.0 && eta < geo::kPi / 2.0)) {
    throw Error(ErrorCode::InvalidArgument, "eta must lie in (0, pi/2)");
  }
  if (!(er >= 0.0 && er < mvd_min && mvd_min <= mvd_max)) {
    throw Error(ErrorCode::InvalidArgument, "require 0 <= er < mvd_min <= mvd_max");
  }
  if (mvd_mode == MvdMode::Static && !(static_mvd > er)) {
    throw Error(ErrorCode::InvalidArgument, "static mvd must exceed er");
  }
}

void GridConfig::validate() const {
  if (!(glen > 0.0) || !std::isfinite(glen)) {
    throw Error(ErrorCode::InvalidArgument, "glen must be positive");
  }
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
  if (!(loc_th > 0.0 && loc_th <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "loc_th must lie in (0, 1]");
  }
}

bool AttentionTrapezoid::contains(PlanarPoint p) const {
  return geo::convex_polygon_contains(vertices, p);
}

geo::BoundingBox AttentionTrapezoid::bounds() const { return geo::BoundingBox::of(vertices); }

PlanarPoint AttentionGrid::cell_centroid(CellIndex c) const {
  return {(static_cast<double>(c.ix) + 0.5) * glen, (static_cast<double>(c.iy) + 0.5) * glen};
}

double AttentionGrid::alc(CellIndex c) const {
  const auto it = cells.find(c);
  return it == cells.end() ? 0.0 : it->second;
}

double compute_dmvd(std::span<const PhotoObservation> observations, const TrapezoidConfig& cfg) {
  if (observations.size() < 2) {
    throw Error(ErrorCode::FewerThanTwoObservations, "dynamic mvd needs at least two observations");
  }
  // Strict > keeps the lexicographically smallest (i, j) among tied pairs.
  double max_d = -1.0;
  std::size_t best_i = 0;
  std::size_t best_j = 1;
  for (std::size_t i = 0; i < observations.size(); ++i) {
    for (std::size_t j = i + 1; j < observations.size(); ++j) {
      const double d = geo::distance(observations[i].location, observations[j].location);
      if (d > max_d) {
        max_d = d;
        best_i = i;
        best_j = j;
      }
    }
  }
  const double dtheta =
      geo::angular_difference(observations[best_i].heading, observations[best_j].heading);
  const double s = std::sin(dtheta / 2.0);
  const double mvd = s > 0.0 ? 0.5 * max_d / s : cfg.mvd_max;
  return std::clamp(mvd, cfg.mvd_min, cfg.mvd_max);
}

AttentionTrapezoid build_trapezoid(const PhotoObservation& obs, double mvd,
                                   const TrapezoidConfig& cfg) {
  if (!(mvd > cfg.er)) {
    throw Error(ErrorCode::InvalidGeometry, "mvd must exceed the location error er");
  }
  const PlanarPoint u = obs.heading.unit();
  const PlanarPoint left{-u.y, u.x};
  const double tan_eta = std::tan(cfg.eta);
  const PlanarPoint apex = obs.location;
  const PlanarPoint near_c = apex + cfg.er * u;
  const PlanarPoint far_c = apex + mvd * u;
  const double near_half = cfg.er * tan_eta;
  const double far_half = mvd * tan_eta;

  AttentionTrapezoid t;
  t.vertices = {near_c + near_half * left, near_c - near_half * left, far_c - far_half * left,
                far_c + far_half * left};
  t.axis_mid = apex + (0.5 * (cfg.er + mvd)) * u;
  t.apex = apex;
  return t;
}

double loc_weight(PlanarPoint grid_centroid, const AttentionTrapezoid& trap, double sigma) {
  const double x = geo::distance(grid_centroid, trap.axis_mid) / geo::distance(trap.apex, trap.axis_mid);
  return std::exp(-(x * x) / (2.0 * sigma * sigma)) / (std::sqrt(2.0 * geo::kPi) * sigma);
}

LocalizationResult localize(std::span<const PhotoObservation> observations,
                            const TrapezoidConfig& tcfg, const GridConfig& gcfg) {
  tcfg.validate();
  gcfg.validate();
  if (observations.empty()) {
    throw Error(ErrorCode::FewerThanTwoObservations, "no observations");
  }

  const double mvd =
      tcfg.mvd_mode == MvdMode::Dynamic ? compute_dmvd(observations, tcfg) : tcfg.static_mvd;

  std::vector<AttentionTrapezoid> traps;
  traps.reserve(observations.size());
  geo::BoundingBox box = geo::BoundingBox::of({});
  for (const auto& obs : observations) {
    traps.push_back(build_trapezoid(obs, mvd, tcfg));
    box.extend(traps.back().bounds());
  }

  const double glen = gcfg.glen;
  const auto cell_floor = [glen](double v) { return static_cast<std::int64_t>(std::floor(v / glen)); };

  LocalizationResult result;
  result.mvd = mvd;
  AttentionGrid& grid = result.grid;
  grid.glen = glen;
  const std::int64_t ix0 = cell_floor(box.min_x);
  const std::int64_t iy0 = cell_floor(box.min_y);
  grid.origin = {static_cast<double>(ix0) * glen, static_cast<double>(iy0) * glen};
  grid.columns = cell_floor(box.max_x) - ix0 + 1;
  grid.rows = cell_floor(box.max_y) - iy0 + 1;

  // Accumulate in trapezoid order so every cell's sum has a fixed order.
  for (const auto& trap : traps) {
    const geo::BoundingBox tb = trap.bounds();
    for (std::int64_t iy = cell_floor(tb.min_y); iy <= cell_floor(tb.max_y); ++iy) {
      for (std::int64_t ix = cell_floor(tb.min_x); ix <= cell_floor(tb.max_x); ++ix) {
        const CellIndex c{ix, iy};
        const PlanarPoint centroid = grid.cell_centroid(c);
        if (!trap.contains(centroid)) continue;
        const double w =
            gcfg.weighting == Weighting::Gaussian ? loc_weight(centroid, trap, gcfg.sigma) : 1.0;
        grid.cells[c] += w;
      }
    }
  }

  if (grid.cells.empty()) {
    throw Error(ErrorCode::NoCoverage, "no grid centroid falls inside any attention trapezoid");
  }

  double max_sum = 0.0;
  for (const auto& [c, sum] : grid.cells) max_sum = std::max(max_sum, sum);
  for (auto& [c, sum] : grid.cells) sum /= max_sum;

  auto& region = result.location.region;
  for (const auto& [c, alc] : grid.cells) {
    if (alc > gcfg.loc_th) region.push_back(c);
  }
  // Only reachable with loc_th == 1: keep the maximal cells.
  if (region.empty()) {
    for (const auto& [c, alc] : grid.cells) {
      if (alc >= 1.0) region.push_back(c);
    }
  }

  PlanarPoint sum{0.0, 0.0};
  for (const auto& c : region) sum = sum + grid.cell_centroid(c);
  result.location.centroid = (1.0 / static_cast<double>(region.size())) * sum;
  return result;
}

double localization_error(PlanarPoint estimate, PlanarPoint truth) {
  return geo::distance(estimate, truth);
}

}  // namespace crowdsense::event

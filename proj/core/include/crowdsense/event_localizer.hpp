#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "crowdsense/geomath.hpp"

namespace crowdsense::event {

using geo::Heading;
using geo::PlanarPoint;

/// Context of one crowd picture: where it was shot from, which way, when, by whom.
struct PhotoObservation {
  PlanarPoint location;
  Heading heading;
  double timestamp = 0.0;
  std::string contributor;
};

enum class MvdMode { Static, Dynamic };

struct TrapezoidConfig {
  double er = 5.0;                   // location error, meters
  double eta = geo::kPi / 6.0;       // half view angle
  MvdMode mvd_mode = MvdMode::Dynamic;
  double static_mvd = 45.0;          // used when mvd_mode == Static
  double mvd_min = 10.0;
  double mvd_max = 100.0;

  /// Throws InvalidArgument when the invariants 0 < eta < π/2 and
  /// 0 <= er < mvd_min <= mvd_max do not hold.
  void validate() const;
};

/// Quadrilateral region a photographer plausibly attends to.
///
/// The apex is the camera position. The near edge sits `er` ahead of the
/// apex and the far edge `mvd` ahead, both perpendicular to the heading and
/// spanning the view angle. `axis_mid` is the midpoint of the axis between
/// the two edges; the location weight peaks there.
struct AttentionTrapezoid {
  std::array<PlanarPoint, 4> vertices;  // near-left, near-right, far-right, far-left
  PlanarPoint axis_mid;
  PlanarPoint apex;

  bool contains(PlanarPoint p) const;
  geo::BoundingBox bounds() const;
};

enum class Weighting { Gaussian, Uniform };

struct GridConfig {
  double glen = 5.0;
  double sigma = 0.5;
  double loc_th = 0.8;
  Weighting weighting = Weighting::Gaussian;

  void validate() const;
};

struct CellIndex {
  std::int64_t ix = 0;
  std::int64_t iy = 0;

  friend auto operator<=>(const CellIndex&, const CellIndex&) = default;
};

/// Grid cells are aligned to multiples of glen in the planar frame: cell
/// (ix, iy) spans [ix*glen, (ix+1)*glen) x [iy*glen, (iy+1)*glen).
struct AttentionGrid {
  PlanarPoint origin;  // lower-left corner of the covered window, snapped to glen
  double glen = 5.0;
  std::int64_t columns = 0;
  std::int64_t rows = 0;
  std::map<CellIndex, double> cells;  // only covered cells; alc in [0, 1]

  PlanarPoint cell_centroid(CellIndex c) const;
  double alc(CellIndex c) const;
};

struct EventLocation {
  std::vector<CellIndex> region;  // sorted
  PlanarPoint centroid;
};

struct LocalizationResult {
  AttentionGrid grid;
  EventLocation location;
  double mvd = 0.0;
};

/// Maximum visual distance derived from the two most distant observers and
/// their heading difference, clamped to [mvd_min, mvd_max].
double compute_dmvd(std::span<const PhotoObservation> observations, const TrapezoidConfig& cfg);

AttentionTrapezoid build_trapezoid(const PhotoObservation& obs, double mvd,
                                   const TrapezoidConfig& cfg);

/// Normal density of x = |RS| / |US|, where R is the cell centroid.
double loc_weight(PlanarPoint grid_centroid, const AttentionTrapezoid& trap, double sigma);

LocalizationResult localize(std::span<const PhotoObservation> observations,
                            const TrapezoidConfig& tcfg, const GridConfig& gcfg);

double localization_error(PlanarPoint estimate, PlanarPoint truth);

}  // namespace crowdsense::event

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "crowdsense/event_localizer.hpp"
#include "crowdsense/scenic_scorer.hpp"

namespace crowdsense::cli {

/// Bad flags, config keys or values; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every tunable of a run. Values come from the built-in defaults, then a
/// JSON config file, then command-line flags, later sources winning.
struct RunConfig {
  // event localization
  double er = 5.0;
  double eta_deg = 30.0;
  double static_mvd = 45.0;
  double mvd_min = 10.0;
  double mvd_max = 100.0;
  double glen = 5.0;
  double sigma = 0.5;
  double loc_th = 0.8;
  // stream segmentation
  double r = 0.4;
  // scenic scoring
  double delta = 100.0;
  std::array<double, 3> weights{0.65, 0.30, 0.05};
  // direction mining
  double angle_tol_deg = 45.0;
  double snap_gate = 30.0;
  // route planning
  int trials = 50;
  double area_margin = 0.0;
  double snap_radius = 250.0;

  std::uint64_t seed = 0;
  unsigned threads = 1;  // never echoed: outputs must not depend on it

  /// Overlays the keys present in `j`; unknown keys and wrong types throw UsageError.
  void merge(const nlohmann::ordered_json& j);
  void merge_file(const std::filesystem::path& file);
  /// Range checks; throws UsageError naming the offending key.
  void validate() const;
  /// Effective configuration as echoed into outputs (all keys but threads).
  nlohmann::ordered_json to_json() const;

  event::TrapezoidConfig trapezoid(event::MvdMode mode) const;
  event::GridConfig grid(event::Weighting weighting) const;
  scenic::ScoringConfig scoring() const;
  double angle_tol() const;
};

}  // namespace crowdsense::cli

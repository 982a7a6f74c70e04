#include "crowdsense/cli/run_config.hpp"

#include <cmath>
#include <fstream>
#include <string_view>

namespace crowdsense::cli {

using json = nlohmann::ordered_json;

namespace {

template <typename T>
void take(const json& j, std::string_view key, T& out) {
  try {
    out = j.get<T>();
  } catch (const json::exception&) {
    throw UsageError("config key '" + std::string(key) + "' has the wrong type");
  }
}

void require(bool ok, std::string_view key, std::string_view what) {
  if (!ok) throw UsageError(std::string(key) + " " + std::string(what));
}

}  // namespace

void RunConfig::merge(const json& j) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "er") take(value, key, er);
    else if (key == "eta_deg") take(value, key, eta_deg);
    else if (key == "static_mvd") take(value, key, static_mvd);
    else if (key == "mvd_min") take(value, key, mvd_min);
    else if (key == "mvd_max") take(value, key, mvd_max);
    else if (key == "glen") take(value, key, glen);
    else if (key == "sigma") take(value, key, sigma);
    else if (key == "loc_th") take(value, key, loc_th);
    else if (key == "r") take(value, key, r);
    else if (key == "delta") take(value, key, delta);
    else if (key == "weights") take(value, key, weights);
    else if (key == "angle_tol_deg") take(value, key, angle_tol_deg);
    else if (key == "snap_gate") take(value, key, snap_gate);
    else if (key == "trials") take(value, key, trials);
    else if (key == "area_margin") take(value, key, area_margin);
    else if (key == "snap_radius") take(value, key, snap_radius);
    else if (key == "seed") take(value, key, seed);
    else if (key == "threads") take(value, key, threads);
    else throw UsageError("unknown config key '" + key + "'");
  }
}

void RunConfig::merge_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw UsageError("cannot open config file " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config file " + file.string() + ": " + e.what());
  }
  merge(j);
}

void RunConfig::validate() const {
  require(er >= 0.0, "er", "must be >= 0");
  require(eta_deg > 0.0 && eta_deg < 90.0, "eta_deg", "must lie in (0, 90)");
  require(mvd_min > er && mvd_max >= mvd_min, "mvd_min/mvd_max", "must satisfy er < mvd_min <= mvd_max");
  require(static_mvd > er, "static_mvd", "must exceed er");
  require(glen > 0.0 && std::isfinite(glen), "glen", "must be positive");
  require(sigma > 0.0, "sigma", "must be positive");
  require(loc_th > 0.0 && loc_th <= 1.0, "loc_th", "must lie in (0, 1]");
  require(r > 0.0 && r <= 1.0, "r", "must lie in (0, 1]");
  require(delta > 0.0, "delta", "must be positive");
  for (const double w : weights) require(w >= 0.0, "weights", "must be non-negative");
  require(angle_tol_deg >= 0.0 && angle_tol_deg <= 180.0, "angle_tol_deg", "must lie in [0, 180]");
  require(snap_gate > 0.0, "snap_gate", "must be positive");
  require(trials >= 1, "trials", "must be >= 1");
  require(area_margin >= 0.0, "area_margin", "must be >= 0");
  require(snap_radius > 0.0, "snap_radius", "must be positive");
  require(threads >= 1, "threads", "must be >= 1");
}

json RunConfig::to_json() const {
  json j;
  j["er"] = er;
  j["eta_deg"] = eta_deg;
  j["static_mvd"] = static_mvd;
  j["mvd_min"] = mvd_min;
  j["mvd_max"] = mvd_max;
  j["glen"] = glen;
  j["sigma"] = sigma;
  j["loc_th"] = loc_th;
  j["r"] = r;
  j["delta"] = delta;
  j["weights"] = weights;
  j["angle_tol_deg"] = angle_tol_deg;
  j["snap_gate"] = snap_gate;
  j["trials"] = trials;
  j["area_margin"] = area_margin;
  j["snap_radius"] = snap_radius;
  j["seed"] = seed;
  return j;
}

event::TrapezoidConfig RunConfig::trapezoid(event::MvdMode mode) const {
  event::TrapezoidConfig t;
  t.er = er;
  t.eta = eta_deg * geo::kPi / 180.0;
  t.mvd_mode = mode;
  t.static_mvd = static_mvd;
  t.mvd_min = mvd_min;
  t.mvd_max = mvd_max;
  return t;
}

event::GridConfig RunConfig::grid(event::Weighting weighting) const {
  event::GridConfig g;
  g.glen = glen;
  g.sigma = sigma;
  g.loc_th = loc_th;
  g.weighting = weighting;
  return g;
}

scenic::ScoringConfig RunConfig::scoring() const {
  scenic::ScoringConfig s;
  s.delta = delta;
  s.weights = weights;
  return s;
}

double RunConfig::angle_tol() const { return angle_tol_deg * geo::kPi / 180.0; }

}  // namespace crowdsense::cli

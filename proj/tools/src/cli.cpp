#include "crowdsense/cli/cli.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "crowdsense/cli/run_config.hpp"
#include "crowdsense/data_io.hpp"
#include "crowdsense/direction_miner.hpp"
#include "crowdsense/event_localizer.hpp"
#include "crowdsense/generators.hpp"
#include "crowdsense/route_planner.hpp"
#include "crowdsense/scenic_scorer.hpp"
#include "crowdsense/stream_segmenter.hpp"

namespace crowdsense::cli {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidK:
      return kExitUsage;
    case ErrorCode::InfeasibleBudget:
    case ErrorCode::Unreachable:
      return kExitInfeasible;
    default:
      return kExitDataError;
  }
}

namespace {

// ------------------------------------------------------------------ plumbing

/// Config flags of one subcommand; applied on top of the config file.
class ConfigFlags {
 public:
  explicit ConfigFlags(CLI::App& app) : app_(app) {
    app_.add_option("--config", config_file_, "JSON config file (flags override it)");
    bind("--seed", &RunConfig::seed, "random seed");
    bind("--threads", &RunConfig::threads, "worker threads (does not change results)");
  }

  template <typename T>
  ConfigFlags& bind(const std::string& flag, T RunConfig::*field, const std::string& help) {
    auto holder = std::make_shared<T>();
    CLI::Option* opt = app_.add_option(flag, *holder, help);
    setters_.push_back([opt, holder, field](RunConfig& c) {
      if (opt->count() > 0) c.*field = *holder;
    });
    return *this;
  }

  ConfigFlags& bind_weights() {
    auto holder = std::make_shared<std::vector<double>>();
    CLI::Option* opt = app_.add_option("--weights", *holder, "natural,tourist,others check-in weights")
                           ->delimiter(',')
                           ->expected(3);
    setters_.push_back([opt, holder](RunConfig& c) {
      if (opt->count() > 0) std::copy(holder->begin(), holder->end(), c.weights.begin());
    });
    return *this;
  }

  RunConfig resolve() const {
    RunConfig cfg;
    if (!config_file_.empty()) cfg.merge_file(config_file_);
    for (const auto& set : setters_) set(cfg);
    cfg.validate();
    return cfg;
  }

 private:
  CLI::App& app_;
  std::string config_file_;
  std::vector<std::function<void(RunConfig&)>> setters_;
};

struct OutputFlags {
  std::string report;
  bool json_stdout = false;

  void add(CLI::App& app) {
    app.add_option("--report", report, "write the JSON report to this file");
    app.add_flag("--json", json_stdout, "print the JSON report instead of the table");
  }

  void emit(const json& report_doc, const std::string& table, std::ostream& out) const {
    const std::string text = report_doc.dump(2) + "\n";
    if (!report.empty()) io::write_text(report, text);
    if (json_stdout) {
      out << text;
    } else {
      out << table;
    }
  }
};

json header(std::string_view command, const RunConfig& cfg) {
  json j;
  j["command"] = command;
  j["config"] = cfg.to_json();
  return j;
}

json geo_json(geo::GeoPoint p) { return json{{"lat", p.lat}, {"lon", p.lon}}; }

/// Adds the run's provenance to a GeoJSON document as a foreign member.
std::string with_provenance(const std::string& geojson, std::string_view command, const RunConfig& cfg) {
  json doc = json::parse(geojson);
  doc["crowdsense"] = header(command, cfg);
  return doc.dump(1) + "\n";
}

geo::GeoPoint parse_lat_lon(const std::string& text, std::string_view flag) {
  const auto comma = text.find(',');
  const auto bad = [&] { return UsageError(std::string(flag) + " expects LAT,LON, got '" + text + "'"); };
  if (comma == std::string::npos) throw bad();
  geo::GeoPoint p;
  const auto parse = [&](std::string_view s, double& v) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw bad();
  };
  parse(std::string_view(text).substr(0, comma), p.lat);
  parse(std::string_view(text).substr(comma + 1), p.lon);
  if (!p.valid()) throw bad();
  return p;
}

std::string fixed(double v, int precision) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << v;
  return s.str();
}

// ------------------------------------------------------------------ localize

struct LocalizeArgs {
  std::string observations;
  std::string truth;
  std::string grid_geojson;
  OutputFlags output;
};

int cmd_localize(const LocalizeArgs& a, const RunConfig& cfg, std::ostream& out) {
  const auto positions = io::load_positions(a.observations);
  const auto proj = io::Projection::centroid_of(positions);
  const auto observations = io::load_observations(a.observations, proj);
  std::optional<geo::PlanarPoint> truth;
  if (!a.truth.empty()) truth = proj.to_planar(io::load_point(a.truth));

  struct Method {
    std::string name;
    event::MvdMode mode;
    event::Weighting weighting;
  };
  const Method methods[] = {{"dynamic_gaussian", event::MvdMode::Dynamic, event::Weighting::Gaussian},
                            {"static_uniform", event::MvdMode::Static, event::Weighting::Uniform}};

  json report = header("localize", cfg);
  report["observations"] = observations.size();
  report["projection_origin"] = geo_json(proj.origin);
  json results = json::array();
  std::ostringstream table;
  table << std::left << std::setw(18) << "method" << std::right << std::setw(9) << "mvd_m" << std::setw(8)
        << "cells" << std::setw(14) << "lat" << std::setw(15) << "lon" << std::setw(10) << "error_m" << "\n";
  for (const auto& m : methods) {
    const auto res = event::localize(observations, cfg.trapezoid(m.mode), cfg.grid(m.weighting));
    const auto centroid = proj.to_geo(res.location.centroid);
    json r;
    r["method"] = m.name;
    r["mvd"] = res.mvd;
    r["covered_cells"] = res.grid.cells.size();
    r["region_cells"] = res.location.region.size();
    r["centroid"] = geo_json(centroid);
    r["centroid_xy"] = json::array({res.location.centroid.x, res.location.centroid.y});
    std::string error_text = "-";
    if (truth) {
      const double e = event::localization_error(res.location.centroid, *truth);
      r["error_m"] = e;
      error_text = fixed(e, 2);
    }
    results.push_back(std::move(r));
    table << std::left << std::setw(18) << m.name << std::right << std::setw(9) << fixed(res.mvd, 2)
          << std::setw(8) << res.location.region.size() << std::setw(14) << fixed(centroid.lat, 7)
          << std::setw(15) << fixed(centroid.lon, 7) << std::setw(10) << error_text << "\n";
    if (m.mode == event::MvdMode::Dynamic && !a.grid_geojson.empty()) {
      io::write_text(a.grid_geojson,
                     with_provenance(io::grid_geojson(res.grid, res.location, proj), "localize", cfg));
    }
  }
  report["methods"] = std::move(results);
  a.output.emit(report, table.str(), out);
  return kExitOk;
}

// ------------------------------------------------------------------ segment

struct SegmentArgs {
  std::string stream;
  std::string truth;
  int viewers = 0;
  std::size_t k = 0;
  OutputFlags output;
};

int cmd_segment(const SegmentArgs& a, const RunConfig& cfg, std::ostream& out) {
  std::optional<int> viewers;
  if (a.viewers != 0) {
    if (a.viewers < 1) throw UsageError("--viewers must be >= 1");
    viewers = a.viewers;
  }
  const auto stream = io::load_stream(a.stream, viewers);
  if (stream.events.empty()) throw Error(ErrorCode::InvalidArgument, "the picture stream is empty");
  std::optional<segment::Segmentation> truth;
  if (!a.truth.empty()) truth = io::load_segmentation(a.truth);

  const auto cs = segment::segment_cs(stream, cfg.r);
  const auto cis = segment::segment_cis(stream, cfg.r);
  const std::size_t k = a.k != 0 ? a.k : cis.segment_count();
  const auto mean = segment::segment_mean(stream, k);

  json report = header("segment", cfg);
  report["events"] = stream.events.size();
  report["viewer_count"] = stream.effective_viewer_count();
  report["mean_k"] = k;
  std::ostringstream table;
  table << std::left << std::setw(8) << "method" << std::right << std::setw(10) << "segments" << std::setw(11)
        << "precision" << std::setw(9) << "recall" << std::setw(9) << "f1" << "\n";
  json methods = json::array();
  const std::pair<const char*, const segment::Segmentation*> runs[] = {{"CS", &cs}, {"CIS", &cis}, {"MEAN", &mean}};
  for (const auto& [name, seg] : runs) {
    json m;
    m["method"] = name;
    m["segments"] = seg->segment_count();
    m["boundaries"] = seg->boundaries();
    table << std::left << std::setw(8) << name << std::right << std::setw(10) << seg->segment_count();
    if (truth) {
      const auto pc = segment::pair_counting_eval(*seg, *truth);
      m["precision"] = pc.precision;
      m["recall"] = pc.recall;
      m["f1"] = pc.f1;
      table << std::setw(11) << fixed(pc.precision, 4) << std::setw(9) << fixed(pc.recall, 4) << std::setw(9)
            << fixed(pc.f1, 4);
    }
    table << "\n";
    methods.push_back(std::move(m));
  }
  report["methods"] = std::move(methods);
  if (truth) {
    const auto red = segment::redundancy_metrics(stream, *truth);
    report["truth"] = json{{"segments", truth->segment_count()}, {"redr", red.redr}, {"rrc", red.rrc}};
    table << "truth: " << truth->segment_count() << " sub-events, RedR " << fixed(red.redr, 4) << ", RRc "
          << fixed(red.rrc, 4) << "\n";
  }
  a.output.emit(report, table.str(), out);
  return kExitOk;
}

// ------------------------------------------------------------------ score

struct ScoreArgs {
  std::string nodes;
  std::string edges;
  std::string photos;
  std::string checkins;
  std::string out;
  std::string network_geojson;
  std::size_t top = 10;
  OutputFlags output;
};

int cmd_score(const ScoreArgs& a, const RunConfig& cfg, std::ostream& out) {
  const auto data = io::load_network(a.nodes, a.edges);
  const auto photos = io::load_photos(a.photos, data.projection);
  const auto checkins = io::load_checkins(a.checkins, data.projection);
  const auto scored = scenic::score_network(data.network, photos, checkins, cfg.scoring(), cfg.threads);
  io::save_scores(scored, a.out);
  if (!a.network_geojson.empty()) {
    io::write_text(a.network_geojson, with_provenance(io::network_geojson(scored, data.projection), "score", cfg));
  }

  const auto segs = scored.network.segments();
  std::vector<std::size_t> order(segs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (scored.scores[x].si != scored.scores[y].si) return scored.scores[x].si > scored.scores[y].si;
    return segs[x].id < segs[y].id;
  });

  std::size_t groups[3] = {0, 0, 0};
  for (const auto& c : checkins) ++groups[static_cast<int>(c.category) - 1];

  json report = header("score", cfg);
  report["segments"] = segs.size();
  report["photos"] = photos.size();
  report["checkins"] = json{{"total", checkins.size()},
                            {"natural_scenery", groups[0]},
                            {"tourist_attraction", groups[1]},
                            {"others", groups[2]}};
  report["scores_file"] = fs::path(a.out).filename().string();
  std::ostringstream table;
  table << std::setw(5) << "rank" << std::setw(12) << "segment" << std::setw(10) << "sp" << std::setw(10) << "sc"
        << std::setw(10) << "si" << "\n";
  json top = json::array();
  for (std::size_t rank = 0; rank < std::min(a.top, order.size()); ++rank) {
    const auto i = order[rank];
    const auto& s = scored.scores[i];
    top.push_back(json{{"rank", rank + 1}, {"segment_id", segs[i].id}, {"sp", s.sp}, {"sc", s.sc}, {"si", s.si}});
    table << std::setw(5) << rank + 1 << std::setw(12) << segs[i].id << std::setw(10) << fixed(s.sp, 4)
          << std::setw(10) << fixed(s.sc, 4) << std::setw(10) << fixed(s.si, 4) << "\n";
  }
  report["top"] = std::move(top);
  a.output.emit(report, table.str(), out);
  return kExitOk;
}

// ------------------------------------------------------------------ plan

struct PlanArgs {
  std::string nodes;
  std::string edges;
  std::string scores;
  std::string trajectories;
  std::string from;
  std::string to;
  double distmax = 0.0;
  std::string strategy = "all";
  std::string route_geojson;
  OutputFlags output;
};

int cmd_plan(const PlanArgs& a, const RunConfig& cfg, std::ostream& out) {
  if (!(a.distmax > 0.0)) throw UsageError("--distmax must be positive");
  const auto from = parse_lat_lon(a.from, "--from");
  const auto to = parse_lat_lon(a.to, "--to");
  auto data = io::load_network(a.nodes, a.edges);
  const auto proj = data.projection;
  auto scored = io::load_scores(std::move(data.network), a.scores);
  const auto origin = proj.to_planar(from);
  const auto destination = proj.to_planar(to);

  json report = header("plan", cfg);
  report["query"] = json{{"from", geo_json(from)}, {"to", geo_json(to)}, {"distmax", a.distmax}};

  const auto area = route::interested_area(scored, origin, destination, cfg.area_margin);
  if (!a.trajectories.empty()) {
    const auto trajectories = io::load_trajectories(a.trajectories, proj);
    const SegmentIndex index(scored.network, cfg.snap_gate);
    std::vector<direction::MatchedTrajectory> matched;
    for (const auto& t : trajectories) {
      if (t.points.size() < 2) continue;
      try {
        matched.push_back(direction::match_trajectory(t, scored.network, index, cfg.snap_gate));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoMatch) throw;
      }
    }
    direction::mine_directions(scored, area.segments, matched, origin, destination, cfg.angle_tol());
    std::size_t counts[3] = {0, 0, 0};
    for (const auto id : area.segments) ++counts[static_cast<int>(scored.score(id).direction)];
    report["direction_mining"] = json{{"trajectories", trajectories.size()},
                                      {"matched", matched.size()},
                                      {"forward", counts[0]},
                                      {"backward", counts[1]},
                                      {"both", counts[2]}};
  }

  std::vector<route::Strategy> strategies;
  if (a.strategy == "all") {
    strategies = {route::Strategy::HfS, route::Strategy::PbS, route::Strategy::RbS};
  } else {
    strategies = {route::parse_strategy(a.strategy)};
  }

  json routes = json::array();
  json features = json::array();
  std::optional<double> shortest;
  std::ostringstream table;
  table << std::left << std::setw(10) << "strategy" << std::right << std::setw(14) << "scenic_score" << std::setw(14)
        << "distance_m" << std::setw(10) << "selected" << "\n";
  for (const auto s : strategies) {
    route::RouteQuery q;
    q.origin = origin;
    q.destination = destination;
    q.distmax = a.distmax;
    q.strategy = s;
    q.trials = cfg.trials;
    q.seed = cfg.seed;
    q.area_margin = cfg.area_margin;
    q.snap_radius = cfg.snap_radius;
    q.threads = cfg.threads;
    const auto r = route::plan_route(q, scored);
    if (!shortest) {
      const route::RoadGraph graph(scored, area.segments);
      shortest = graph.shortest_path(r.origin_node, r.destination_node).distance;
      report["origin_node"] = r.origin_node;
      report["destination_node"] = r.destination_node;
      report["shortest_path_m"] = *shortest;
    }
    json traversals = json::array();
    for (const auto& t : r.traversals) {
      traversals.push_back(json::array({t.segment, t.travel == Travel::Forward ? "forward" : "backward"}));
    }
    routes.push_back(json{{"strategy", route::to_string(s)},
                          {"trials", s == route::Strategy::HfS ? 1 : cfg.trials},
                          {"scenic_score", r.scenic_score},
                          {"total_distance", r.total_distance},
                          {"selected", r.selected_segments()},
                          {"traversals", std::move(traversals)}});
    table << std::left << std::setw(10) << route::to_string(s) << std::right << std::setw(14)
          << fixed(r.scenic_score, 4) << std::setw(14) << fixed(r.total_distance, 1) << std::setw(10)
          << r.selected.size() << "\n";
    if (!a.route_geojson.empty()) {
      const auto doc = json::parse(
          io::route_geojson(r, scored, {std::string(route::to_string(s)), cfg.seed}, proj));
      for (const auto& f : doc["features"]) features.push_back(f);
    }
  }
  report["routes"] = std::move(routes);
  if (!a.route_geojson.empty()) {
    json doc;
    doc["type"] = "FeatureCollection";
    doc["features"] = std::move(features);
    io::write_text(a.route_geojson, with_provenance(doc.dump(), "plan", cfg));
  }
  a.output.emit(report, table.str(), out);
  return kExitOk;
}

// ------------------------------------------------------------------ synth

struct SynthArgs {
  std::string kind;
  std::string out_dir;
  double origin_lat = 37.7749;
  double origin_lon = -122.4194;
  // event
  int viewers = 8;
  double radius = 30.0;
  double gps_sigma = 3.0;
  double heading_sigma = 5.0;
  // stream
  int subevents = 10;
  int stream_viewers = 20;
  double coverage = 0.4;
  double bias = 2.0;
  // grid / fleet
  int columns = 20;
  int rows = 20;
  double cell = 100.0;
  double corridor_si = 10.0;
  double background_si = 0.1;
  int trips = 40;
};

RoadNetwork translated(const RoadNetwork& net, geo::PlanarPoint shift) {
  RoadNetwork out;
  for (const auto& [id, p] : net.nodes()) out.add_node(id, p + shift);
  for (const auto& seg : net.segments()) {
    std::vector<geo::PlanarPoint> line;
    for (const auto& p : seg.polyline) line.push_back(p + shift);
    out.add_segment(seg.id, seg.u, seg.v, std::move(line));
  }
  return out;
}

int cmd_synth(const SynthArgs& a, const RunConfig& cfg, std::ostream& out) {
  const geo::GeoPoint origin{a.origin_lat, a.origin_lon};
  if (!origin.valid()) throw UsageError("--origin-lat/--origin-lon out of range");
  const io::Projection proj{origin};
  const fs::path dir(a.out_dir);
  json manifest = header("synth", cfg);
  manifest["kind"] = a.kind;
  manifest["origin"] = geo_json(origin);
  json files = json::array();
  const auto file = [&](const std::string& name) {
    files.push_back(name);
    return dir / name;
  };

  if (a.kind == "event") {
    const auto scene = synth::gen_event_scene({0.0, 0.0}, a.viewers, a.radius, a.gps_sigma, a.heading_sigma, cfg.seed);
    io::save_observations(scene.observations, proj, file("observations.csv"));
    io::save_point(proj.to_geo(scene.truth), file("truth.csv"));
    manifest["params"] = json{{"viewers", a.viewers},
                              {"radius", a.radius},
                              {"gps_sigma", a.gps_sigma},
                              {"heading_sigma_deg", a.heading_sigma}};
  } else if (a.kind == "stream") {
    const auto s = synth::gen_picture_stream(a.subevents, a.stream_viewers, a.coverage, a.bias, cfg.seed);
    io::save_stream(s.stream, file("stream.csv"));
    io::save_segmentation(s.truth, file("truth.csv"));
    manifest["params"] = json{{"subevents", a.subevents},
                              {"viewers", a.stream_viewers},
                              {"coverage", a.coverage},
                              {"bias", a.bias}};
  } else {
    auto grid = synth::gen_grid_network(a.columns, a.rows, a.cell, a.corridor_si, a.background_si, cfg.seed);
    const geo::PlanarPoint shift{-(a.columns - 1) * a.cell / 2.0, -(a.rows - 1) * a.cell / 2.0};
    const auto net = translated(grid.scored.network, shift);
    io::save_network(net, proj, file("nodes.csv"), file("edges.csv"));
    io::save_scores({net, grid.scored.scores}, file("scores.csv"));
    json params{{"columns", a.columns}, {"rows", a.rows}, {"cell", a.cell}, {"corridor_si", a.corridor_si},
                {"background_si", a.background_si}};
    if (a.kind == "grid") {
      auto ev = synth::gen_scenic_evidence(grid, cfg.seed);
      for (auto& p : ev.photos) p.loc = p.loc + shift;
      for (auto& c : ev.checkins) c.loc = c.loc + shift;
      io::save_photos(ev.photos, proj, file("photos.csv"));
      io::save_checkins(ev.checkins, ev.labels, proj, file("checkins.csv"));
      manifest["corridor"] = grid.corridor;
      manifest["planted_segment"] = ev.planted;
      const auto corner = [&](int c, int r) {
        return geo_json(proj.to_geo(net.node(grid.node_at(c, r))));
      };
      manifest["corners"] = json{{"south_west", corner(0, 0)}, {"north_east", corner(a.columns - 1, a.rows - 1)}};
    } else {
      synth::FleetConfig fc;
      fc.trips = a.trips;
      auto fleet = synth::gen_taxi_fleet(grid.scored, fc, cfg.seed);
      for (auto& t : fleet.trajectories) {
        for (auto& p : t.points) p = p + shift;
      }
      io::save_trajectories(fleet.trajectories, proj, file("trajectories.csv"));
      params["trips"] = a.trips;
      manifest["query"] = json{{"start", geo_json(proj.to_geo(fleet.start + shift))},
                               {"end", geo_json(proj.to_geo(fleet.end + shift))}};
      manifest["target_segment"] = fleet.target;
      manifest["planted_direction"] = fleet.planted == Travel::Forward ? "forward" : "backward";
    }
    manifest["params"] = std::move(params);
  }
  manifest["files"] = std::move(files);
  io::write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  out << "wrote " << manifest["files"].size() + 1 << " files to " << dir.string() << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Crowd-sensing toolkit: event localization, stream segmentation, scenic routing"};
  app.name("crowdsense");
  app.require_subcommand(1);

  LocalizeArgs loc;
  auto* localize = app.add_subcommand("localize", "locate an event from photo observations");
  localize->add_option("--observations", loc.observations, "observations CSV")->required();
  localize->add_option("--truth", loc.truth, "ground-truth point CSV (lat,lon)");
  localize->add_option("--grid-geojson", loc.grid_geojson, "write the attention grid as GeoJSON");
  loc.output.add(*localize);
  ConfigFlags loc_flags(*localize);
  loc_flags.bind("--er", &RunConfig::er, "location error, m")
      .bind("--eta", &RunConfig::eta_deg, "half view angle, degrees")
      .bind("--static-mvd", &RunConfig::static_mvd, "baseline mvd, m")
      .bind("--mvd-min", &RunConfig::mvd_min, "lower mvd clamp, m")
      .bind("--mvd-max", &RunConfig::mvd_max, "upper mvd clamp, m")
      .bind("--glen", &RunConfig::glen, "grid cell length, m")
      .bind("--sigma", &RunConfig::sigma, "location weight spread")
      .bind("--loc-th", &RunConfig::loc_th, "event region threshold");

  SegmentArgs seg;
  auto* segment = app.add_subcommand("segment", "split a picture stream into sub-events");
  segment->add_option("--stream", seg.stream, "stream CSV")->required();
  segment->add_option("--truth", seg.truth, "ground-truth segmentation CSV");
  segment->add_option("--viewers", seg.viewers, "nearby viewer count N (default: distinct contributors)");
  segment->add_option("--k", seg.k, "segments for MEAN (default: as many as CIS finds)");
  seg.output.add(*segment);
  ConfigFlags seg_flags(*segment);
  seg_flags.bind("--r", &RunConfig::r, "coverage threshold");

  ScoreArgs sc;
  auto* score = app.add_subcommand("score", "score road segments from photos and check-ins");
  score->add_option("--nodes", sc.nodes, "nodes CSV")->required();
  score->add_option("--edges", sc.edges, "edges CSV")->required();
  score->add_option("--photos", sc.photos, "photos CSV")->required();
  score->add_option("--checkins", sc.checkins, "check-ins CSV")->required();
  score->add_option("--out", sc.out, "scores CSV to write")->required();
  score->add_option("--network-geojson", sc.network_geojson, "write the scored network as GeoJSON");
  score->add_option("--top", sc.top, "rows in the ranking");
  sc.output.add(*score);
  ConfigFlags sc_flags(*score);
  sc_flags.bind("--delta", &RunConfig::delta, "visibility radius, m").bind_weights();

  PlanArgs pl;
  auto* plan = app.add_subcommand("plan", "plan a scenic route under a distance budget");
  plan->add_option("--nodes", pl.nodes, "nodes CSV")->required();
  plan->add_option("--edges", pl.edges, "edges CSV")->required();
  plan->add_option("--scores", pl.scores, "scores CSV")->required();
  plan->add_option("--from", pl.from, "origin LAT,LON")->required();
  plan->add_option("--to", pl.to, "destination LAT,LON")->required();
  plan->add_option("--distmax", pl.distmax, "distance budget, m")->required();
  plan->add_option("--strategy", pl.strategy, "hfs, pbs, rbs or all")
      ->transform(CLI::IsMember({"hfs", "pbs", "rbs", "all"}, CLI::ignore_case));
  plan->add_option("--trajectories", pl.trajectories, "taxi trajectories CSV for direction mining");
  plan->add_option("--route-geojson", pl.route_geojson, "write the routes as GeoJSON");
  pl.output.add(*plan);
  ConfigFlags pl_flags(*plan);
  pl_flags.bind("--trials", &RunConfig::trials, "PbS/RbS repetitions")
      .bind("--area-margin", &RunConfig::area_margin, "interested area margin, m")
      .bind("--snap-radius", &RunConfig::snap_radius, "max distance from query point to a node, m")
      .bind("--snap-gate", &RunConfig::snap_gate, "GPS snapping gate, m")
      .bind("--angle-tol", &RunConfig::angle_tol_deg, "direction mining angle tolerance, degrees");

  SynthArgs sy;
  auto* synth_cmd = app.add_subcommand("synth", "write a seeded synthetic fixture");
  synth_cmd->add_option("kind", sy.kind, "event, stream, grid or fleet")
      ->required()
      ->check(CLI::IsMember({"event", "stream", "grid", "fleet"}));
  synth_cmd->add_option("--out-dir", sy.out_dir, "output directory")->required();
  synth_cmd->add_option("--origin-lat", sy.origin_lat, "latitude of the local origin");
  synth_cmd->add_option("--origin-lon", sy.origin_lon, "longitude of the local origin");
  synth_cmd->add_option("--viewers", sy.viewers, "event: viewers on the circle");
  synth_cmd->add_option("--radius", sy.radius, "event: circle radius, m");
  synth_cmd->add_option("--gps-sigma", sy.gps_sigma, "event: position noise, m");
  synth_cmd->add_option("--heading-sigma", sy.heading_sigma, "event: heading noise, degrees");
  synth_cmd->add_option("--subevents", sy.subevents, "stream: sub-events");
  synth_cmd->add_option("--stream-viewers", sy.stream_viewers, "stream: nearby viewers N");
  synth_cmd->add_option("--coverage", sy.coverage, "stream: share of viewers posting per sub-event");
  synth_cmd->add_option("--bias", sy.bias, "stream: expected extra pictures per sub-event");
  synth_cmd->add_option("--columns", sy.columns, "grid/fleet: nodes per row");
  synth_cmd->add_option("--rows", sy.rows, "grid/fleet: nodes per column");
  synth_cmd->add_option("--cell", sy.cell, "grid/fleet: block length, m");
  synth_cmd->add_option("--corridor-si", sy.corridor_si, "grid/fleet: si of the planted corridor");
  synth_cmd->add_option("--background-si", sy.background_si, "grid/fleet: si elsewhere");
  synth_cmd->add_option("--trips", sy.trips, "fleet: trajectories");
  ConfigFlags sy_flags(*synth_cmd);

  std::vector<std::string> reversed_args(args.rbegin(), args.rend());
  try {
    app.parse(reversed_args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "crowdsense: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (localize->parsed()) return cmd_localize(loc, loc_flags.resolve(), out);
    if (segment->parsed()) return cmd_segment(seg, seg_flags.resolve(), out);
    if (score->parsed()) return cmd_score(sc, sc_flags.resolve(), out);
    if (plan->parsed()) return cmd_plan(pl, pl_flags.resolve(), out);
    if (synth_cmd->parsed()) return cmd_synth(sy, sy_flags.resolve(), out);
  } catch (const UsageError& e) {
    err << "crowdsense: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    if (code == kExitInfeasible) {
      err << "crowdsense: infeasible query: " << e.what() << "\n";
    } else {
      err << "crowdsense: " << e.what() << "\n";
    }
    return code;
  } catch (const std::exception& e) {
    err << "crowdsense: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitUsage;
}

}  // namespace crowdsense::cli

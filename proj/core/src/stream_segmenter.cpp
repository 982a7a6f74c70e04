#include "crowdsense/stream_segmenter.hpp"

#include <cstdint>
#include <map>
#include <string_view>
#include <unordered_set>

#include "crowdsense/error.hpp"

namespace crowdsense::segment {

namespace {

// Tolerates r*N landing a hair above an integer count (e.g. 0.4 * 5).
constexpr double kCoverageEps = 1e-9;

void check_r(double r) {
  if (!(r > 0.0 && r <= 1.0)) throw Error(ErrorCode::InvalidArgument, "r must lie in (0, 1]");
}

bool coverage_reached(std::size_t distinct, int n, double r) {
  return static_cast<double>(distinct) / static_cast<double>(n) >= r - kCoverageEps;
}

template <typename SplitRule>
Segmentation scan(const PictureStream& stream, SplitRule&& split_before) {
  const int n = stream.effective_viewer_count();
  if (!stream.events.empty() && n < 1) {
    throw Error(ErrorCode::InvalidArgument, "viewer count must be >= 1");
  }
  std::vector<std::size_t> boundaries;
  std::unordered_set<std::string_view> current;
  for (std::size_t i = 0; i < stream.events.size(); ++i) {
    const std::string_view who = stream.events[i].contributor;
    if (i > 0 && split_before(current, who, n)) {
      boundaries.push_back(i);
      current.clear();
    }
    current.insert(who);
  }
  return Segmentation(stream.events.size(), std::move(boundaries));
}

std::uint64_t pairs(std::uint64_t k) { return k * (k - 1) / 2; }

}  // namespace

int PictureStream::effective_viewer_count() const {
  if (viewer_count) return *viewer_count;
  std::unordered_set<std::string_view> distinct;
  for (const auto& e : events) distinct.insert(e.contributor);
  return static_cast<int>(distinct.size());
}

Segmentation::Segmentation(std::size_t length, std::vector<std::size_t> boundaries)
    : length_(length), boundaries_(std::move(boundaries)) {
  std::size_t prev = 0;
  for (const auto b : boundaries_) {
    if (b <= prev || b >= length_) {
      throw Error(ErrorCode::InvalidArgument, "segment boundaries must be strictly increasing in (0, length)");
    }
    prev = b;
  }
}

Segmentation Segmentation::from_sizes(std::span<const std::size_t> sizes) {
  std::vector<std::size_t> boundaries;
  std::size_t at = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) throw Error(ErrorCode::InvalidArgument, "segments must be nonempty");
    if (i > 0) boundaries.push_back(at);
    at += sizes[i];
  }
  return Segmentation(at, std::move(boundaries));
}

Segmentation Segmentation::from_labels(std::span<const int> labels) {
  std::vector<std::size_t> boundaries;
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (labels[i] < labels[i - 1]) {
      throw Error(ErrorCode::InvalidArgument, "segment labels must be non-decreasing");
    }
    if (labels[i] != labels[i - 1]) boundaries.push_back(i);
  }
  return Segmentation(labels.size(), std::move(boundaries));
}

std::vector<std::pair<std::size_t, std::size_t>> Segmentation::segments() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (length_ == 0) return out;
  std::size_t begin = 0;
  for (const auto b : boundaries_) {
    out.emplace_back(begin, b);
    begin = b;
  }
  out.emplace_back(begin, length_);
  return out;
}

std::vector<std::size_t> Segmentation::sizes() const {
  std::vector<std::size_t> out;
  for (const auto& [b, e] : segments()) out.push_back(e - b);
  return out;
}

std::vector<std::size_t> Segmentation::labels() const {
  std::vector<std::size_t> out(length_);
  std::size_t seg = 0;
  for (const auto& [b, e] : segments()) {
    for (std::size_t i = b; i < e; ++i) out[i] = seg;
    ++seg;
  }
  return out;
}

double coverage_ratio(std::span<const PictureEvent> segment, int viewer_count) {
  if (viewer_count < 1) throw Error(ErrorCode::InvalidArgument, "viewer count must be >= 1");
  std::unordered_set<std::string_view> distinct;
  for (const auto& e : segment) distinct.insert(e.contributor);
  return static_cast<double>(distinct.size()) / static_cast<double>(viewer_count);
}

Segmentation segment_cs(const PictureStream& stream, double r) {
  check_r(r);
  return scan(stream, [r](const auto& current, std::string_view, int n) {
    return coverage_reached(current.size(), n, r);
  });
}

Segmentation segment_cis(const PictureStream& stream, double r) {
  check_r(r);
  return scan(stream, [r](const auto& current, std::string_view who, int n) {
    return current.contains(who) && coverage_reached(current.size(), n, r);
  });
}

Segmentation segment_mean(std::size_t length, std::size_t k) {
  if (k < 1 || k > length) throw Error(ErrorCode::InvalidK, "K must lie in [1, stream length]");
  std::vector<std::size_t> sizes(k, length / k);
  for (std::size_t i = 0; i < length % k; ++i) ++sizes[i];
  return Segmentation::from_sizes(sizes);
}

Segmentation segment_mean(const PictureStream& stream, std::size_t k) {
  return segment_mean(stream.events.size(), k);
}

PairCountResult pair_counting_eval(const Segmentation& s, const Segmentation& g) {
  if (s.length() != g.length()) {
    throw Error(ErrorCode::MismatchedLength, "segmentations cover different stream lengths");
  }
  std::uint64_t pairs_s = 0;
  std::uint64_t pairs_g = 0;
  for (const auto size : s.sizes()) pairs_s += pairs(size);
  for (const auto size : g.sizes()) pairs_g += pairs(size);

  // Co-segmented in both <=> same cell of the S x G contingency table.
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> table;
  const auto ls = s.labels();
  const auto lg = g.labels();
  for (std::size_t i = 0; i < ls.size(); ++i) ++table[{ls[i], lg[i]}];
  std::uint64_t both = 0;
  for (const auto& [cell, count] : table) both += pairs(count);

  PairCountResult out;
  out.precision = pairs_s == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(pairs_s);
  out.recall = pairs_g == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(pairs_g);
  const double denom = out.precision + out.recall;
  out.f1 = denom == 0.0 ? 0.0 : 2.0 * out.precision * out.recall / denom;
  return out;
}

RedundancyMetrics redundancy_metrics(const PictureStream& stream, const Segmentation& g) {
  if (g.length() != stream.events.size()) {
    throw Error(ErrorCode::MismatchedLength, "segmentation does not cover the stream");
  }
  RedundancyMetrics out;
  if (g.length() == 0) return out;
  std::size_t redundant_segments = 0;
  std::size_t repeated_pictures = 0;
  for (const auto& [b, e] : g.segments()) {
    std::unordered_set<std::string_view> seen;
    std::size_t repeats = 0;
    for (std::size_t i = b; i < e; ++i) {
      if (!seen.insert(stream.events[i].contributor).second) ++repeats;
    }
    if (repeats > 0) ++redundant_segments;
    repeated_pictures += repeats;
  }
  out.redr = static_cast<double>(redundant_segments) / static_cast<double>(g.segment_count());
  out.rrc = static_cast<double>(repeated_pictures) / static_cast<double>(g.length());
  return out;
}

}  // namespace crowdsense::segment

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace crowdsense::segment {

struct PictureEvent {
  double timestamp = 0.0;
  std::string contributor;
};

struct PictureStream {
  std::vector<PictureEvent> events;  // non-decreasing timestamps
  std::optional<int> viewer_count;   // N; distinct contributors when unset

  int effective_viewer_count() const;
};

/// Partition of a stream of `length` items into contiguous, nonempty segments.
/// `boundaries` holds the index at which each segment after the first begins.
class Segmentation {
 public:
  Segmentation() = default;
  Segmentation(std::size_t length, std::vector<std::size_t> boundaries);

  static Segmentation from_sizes(std::span<const std::size_t> sizes);
  /// Labels must be non-decreasing runs; every change of label opens a segment.
  static Segmentation from_labels(std::span<const int> labels);

  std::size_t length() const noexcept { return length_; }
  const std::vector<std::size_t>& boundaries() const noexcept { return boundaries_; }
  std::size_t segment_count() const noexcept { return length_ == 0 ? 0 : boundaries_.size() + 1; }

  /// Half-open [begin, end) index ranges.
  std::vector<std::pair<std::size_t, std::size_t>> segments() const;
  std::vector<std::size_t> sizes() const;
  /// Segment number of every item.
  std::vector<std::size_t> labels() const;

  friend bool operator==(const Segmentation&, const Segmentation&) = default;

 private:
  std::size_t length_ = 0;
  std::vector<std::size_t> boundaries_;
};

struct PairCountResult {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct RedundancyMetrics {
  double redr = 0.0;  // share of sub-events with a repeat contributor
  double rrc = 0.0;   // share of pictures repeating a contributor within their sub-event
};

/// Distinct contributors in the segment divided by N.
double coverage_ratio(std::span<const PictureEvent> segment, int viewer_count);

/// Crowd-behavior rule: a picture opens a new segment once the current one
/// has reached coverage r.
Segmentation segment_cs(const PictureStream& stream, double r);

/// Crowd-individual rule: as segment_cs, but the split additionally needs the
/// incoming picture's contributor to have already posted in the current segment.
Segmentation segment_cis(const PictureStream& stream, double r);

/// K equal-size contiguous segments; earlier segments absorb the remainder.
Segmentation segment_mean(const PictureStream& stream, std::size_t k);
Segmentation segment_mean(std::size_t length, std::size_t k);

/// Pair-counting precision/recall of S against ground truth G. An empty pair
/// set yields 1 for the corresponding ratio.
PairCountResult pair_counting_eval(const Segmentation& s, const Segmentation& g);

RedundancyMetrics redundancy_metrics(const PictureStream& stream, const Segmentation& g);

}  // namespace crowdsense::segment

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dualdi/frameseq.hpp"
#include "dualdi/manifest.hpp"
#include "dualdi/raster.hpp"

namespace dualdi {

/// Integer temporal pooling coefficients, one per frame. Always sums to 0.
struct WeightVector {
  std::vector<std::int64_t> values;

  std::size_t size() const noexcept { return values.size(); }
  bool operator==(const WeightVector&) const = default;
};

/// Approximate rank pooling weights 2t - T - 1, t = 1..T (increasing).
WeightVector arp_weights(std::size_t length);
/// Reversed weights T + 1 - 2t (decreasing); emphasizes the first frame.
WeightVector reversed_arp_weights(std::size_t length);

enum class Phase { Full, Onset, Offset };
std::string_view phase_name(Phase phase) noexcept;

struct DynamicImage {
  Frame raw;
  Phase phase = Phase::Full;
  std::string sequence_id;
  std::string label;
};

/// Weighted per-sample sum of frames.
///
/// Terms are accumulated in mirrored pairs (t, T-1-t) from the outside in.
/// Because IEEE addition is commutative, pooling a reversed clip with
/// forward weights is then bitwise identical to pooling the clip with
/// reversed weights, and a constant clip cancels to exactly zero.
Frame rank_pool(std::span<const Frame> frames, const WeightVector& weights);

/// Joint min-max stretch of all channels to [0, 255], rounding half away
/// from zero. A constant raster maps to 128.
ByteImage normalize_minmax(const Frame& raw);

/// Inclusive 1-based frame range.
struct FrameRange {
  int first = 1;
  int last = 1;

  int length() const noexcept { return last - first + 1; }
  bool operator==(const FrameRange&) const = default;
};

std::span<const Frame> frames_in(const FrameSequence& seq, FrameRange range);

/// Pools frames[onset..offset] with arp_weights(offset - onset + 1).
DynamicImage encode_full(const FrameSequence& seq, const ExpressionAnnotation& ann);

}  // namespace dualdi

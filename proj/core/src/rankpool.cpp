#include "dualdi/rankpool.hpp"

#include <algorithm>
#include <cmath>

#include "dualdi/error.hpp"

namespace dualdi {

WeightVector arp_weights(std::size_t length) {
  if (length == 0) throw Error(Errc::ZeroLength, "weight vector length must be >= 1");
  const auto T = static_cast<std::int64_t>(length);
  WeightVector w;
  w.values.resize(length);
  for (std::int64_t t = 1; t <= T; ++t) w.values[t - 1] = 2 * t - T - 1;
  return w;
}

WeightVector reversed_arp_weights(std::size_t length) {
  if (length == 0) throw Error(Errc::ZeroLength, "weight vector length must be >= 1");
  const auto T = static_cast<std::int64_t>(length);
  WeightVector w;
  w.values.resize(length);
  for (std::int64_t t = 1; t <= T; ++t) w.values[t - 1] = T + 1 - 2 * t;
  return w;
}

std::string_view phase_name(Phase phase) noexcept {
  switch (phase) {
    case Phase::Full: return "full";
    case Phase::Onset: return "onset";
    case Phase::Offset: return "offset";
  }
  return "unknown";
}

Frame rank_pool(std::span<const Frame> frames, const WeightVector& weights) {
  if (frames.empty()) throw Error(Errc::EmptyInput, "no frames to pool");
  if (frames.size() != weights.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(frames.size()) + " frames, " +
                                          std::to_string(weights.size()) + " weights");
  }
  const Frame& first = frames.front();
  for (const auto& f : frames) {
    if (!f.same_shape(first)) throw Error(Errc::InconsistentDimensions, "frames differ in shape");
  }

  Frame out(first.width, first.height, first.channels, 0.0);
  const std::size_t n = out.sample_count();
  const std::size_t T = frames.size();
  for (std::size_t lo = 0, hi = T - 1; lo < hi; ++lo, --hi) {
    const double wl = static_cast<double>(weights.values[lo]);
    const double wh = static_cast<double>(weights.values[hi]);
    const double* fl = frames[lo].data.data();
    const double* fh = frames[hi].data.data();
    for (std::size_t p = 0; p < n; ++p) out.data[p] += wl * fl[p] + wh * fh[p];
  }
  if (T % 2 == 1) {
    const std::size_t mid = T / 2;
    const double wm = static_cast<double>(weights.values[mid]);
    if (wm != 0.0) {
      const double* fm = frames[mid].data.data();
      for (std::size_t p = 0; p < n; ++p) out.data[p] += wm * fm[p];
    }
  }
  return out;
}

ByteImage normalize_minmax(const Frame& raw) {
  ByteImage out(raw.width, raw.height, raw.channels, 128);
  if (raw.data.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(raw.data.begin(), raw.data.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) return out;
  const double span = hi - lo;
  for (std::size_t i = 0; i < raw.data.size(); ++i) {
    out.data[i] = to_byte(255.0 * (raw.data[i] - lo) / span);
  }
  return out;
}

std::span<const Frame> frames_in(const FrameSequence& seq, FrameRange range) {
  if (range.first < 1 || range.last < range.first || range.last > seq.frame_count()) {
    throw Error(Errc::AnnotationOutOfRange, "frame range [" + std::to_string(range.first) + ".." +
                                                std::to_string(range.last) + "] outside 1.." +
                                                std::to_string(seq.frame_count()));
  }
  return std::span<const Frame>(seq.frames).subspan(static_cast<std::size_t>(range.first - 1),
                                                   static_cast<std::size_t>(range.length()));
}

DynamicImage encode_full(const FrameSequence& seq, const ExpressionAnnotation& ann) {
  validate_annotation(ann, seq.frame_count());
  const FrameRange range{ann.onset, ann.offset};
  DynamicImage di;
  di.raw = rank_pool(frames_in(seq, range), arp_weights(static_cast<std::size_t>(range.length())));
  di.phase = Phase::Full;
  di.sequence_id = ann.sequence_id;
  di.label = ann.label;
  return di;
}

}  // namespace dualdi

#include "dualdi/augment.hpp"

#include <cmath>
#include <iostream>
#include <numbers>

#include "dualdi/error.hpp"
#include "dualdi/parallel.hpp"
#include "dualdi/rng.hpp"

namespace dualdi {

std::pair<FrameRange, FrameRange> split_phases(const ExpressionAnnotation& ann) {
  return {FrameRange{ann.onset, ann.apex}, FrameRange{ann.apex, ann.offset}};
}

namespace {

std::optional<DynamicImage> encode_phase(const FrameSequence& seq, const ExpressionAnnotation& ann,
                                         Phase phase) {
  validate_annotation(ann, seq.frame_count());
  const auto [rise, fall] = split_phases(ann);
  const FrameRange range = phase == Phase::Onset ? rise : fall;
  if (range.length() < 2) return std::nullopt;
  const auto len = static_cast<std::size_t>(range.length());
  DynamicImage di;
  di.raw = rank_pool(frames_in(seq, range),
                     phase == Phase::Onset ? arp_weights(len) : reversed_arp_weights(len));
  di.phase = phase;
  di.sequence_id = ann.sequence_id;
  di.label = ann.label;
  return di;
}

}  // namespace

std::optional<DynamicImage> encode_onset_phase(const FrameSequence& seq,
                                               const ExpressionAnnotation& ann) {
  return encode_phase(seq, ann, Phase::Onset);
}

std::optional<DynamicImage> encode_offset_phase(const FrameSequence& seq,
                                                const ExpressionAnnotation& ann) {
  return encode_phase(seq, ann, Phase::Offset);
}

Frame rotate(const Frame& img, double angle_deg, double fill) {
  if (!(std::abs(angle_deg) <= kMaxRotationDegrees)) {
    throw Error(Errc::AngleOutOfRange, "rotation angle " + std::to_string(angle_deg) +
                                           " exceeds +/-45 degrees");
  }
  if (angle_deg == 0.0) return img;
  const double rad = angle_deg * std::numbers::pi / 180.0;
  const double cs = std::cos(rad);
  const double sn = std::sin(rad);
  const double cx = (img.width - 1) / 2.0;
  const double cy = (img.height - 1) / 2.0;
  const double max_x = img.width - 1;
  const double max_y = img.height - 1;
  constexpr double kEdge = 1e-9;
  Frame out(img.width, img.height, img.channels, fill);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      // Inverse map with y pointing down.
      const double dx = x - cx;
      const double dy = y - cy;
      const double sx = cs * dx - sn * dy + cx;
      const double sy = sn * dx + cs * dy + cy;
      if (sx < -kEdge || sy < -kEdge || sx > max_x + kEdge || sy > max_y + kEdge) continue;
      for (int c = 0; c < img.channels; ++c) out.at(x, y, c) = sample_bilinear_clamped(img, sx, sy, c);
    }
  }
  return out;
}

ByteImage rotate(const ByteImage& img, double angle_deg, std::uint8_t fill) {
  return quantize(rotate(to_frame(img), angle_deg, static_cast<double>(fill)));
}

std::string_view split_role_name(SplitRole role) noexcept {
  return role == SplitRole::Eval ? "eval" : "train_only";
}

void AugmentConfig::validate() const {
  if (enable_rotation && !(rotation_limit > 0.0 && rotation_limit <= kMaxRotationDegrees)) {
    throw Error(Errc::InvalidParams, "rotation limit must be in (0, 45]");
  }
  if (output_side < 1) throw Error(Errc::InvalidParams, "output side must be >= 1");
}

std::string AugmentConfig::name() const {
  const bool spatial = enable_flip || enable_rotation;
  if (enable_dual_di) return spatial ? "dual_flip_rotate" : "dual";
  return spatial ? "flip_rotate" : "none";
}

AugmentConfig AugmentConfig::from_name(std::string_view name) {
  AugmentConfig cfg;
  if (name == "none") return cfg;
  if (name == "flip_rotate") {
    cfg.enable_flip = cfg.enable_rotation = true;
  } else if (name == "dual") {
    cfg.enable_dual_di = true;
  } else if (name == "dual_flip_rotate") {
    cfg.enable_dual_di = cfg.enable_flip = cfg.enable_rotation = true;
  } else {
    throw Error(Errc::InvalidArgument, "unknown augmentation '" + std::string(name) + "'");
  }
  return cfg;
}

std::string AugmentedSample::file_stem() const {
  std::string stem = origin;
  for (const auto& tag : transform_tags) stem += "__" + tag;
  return stem;
}

double draw_rotation_angle(std::uint64_t seed, std::string_view sequence_id,
                           std::string_view tag, double limit) {
  Rng rng(derive_seed(seed, sequence_id, tag));
  const double angle = rng.uniform(-limit, limit);
  return std::round(angle * 100.0) / 100.0;
}

namespace {

constexpr std::uint8_t kRotationFill = 128;

std::string rotation_tag(double angle) {
  return "rot" + std::to_string(static_cast<long long>(std::llround(angle * 100.0)));
}

}  // namespace

std::vector<AugmentedSample> expand_sequence(const FrameSequence& seq,
                                             const ExpressionAnnotation& ann,
                                             const AugmentConfig& cfg, const WarningSink& warn) {
  cfg.validate();
  std::vector<DynamicImage> pooled;
  pooled.push_back(encode_full(seq, ann));
  if (cfg.enable_dual_di) {
    for (Phase phase : {Phase::Onset, Phase::Offset}) {
      auto di = phase == Phase::Onset ? encode_onset_phase(seq, ann) : encode_offset_phase(seq, ann);
      if (di) {
        pooled.push_back(std::move(*di));
      } else {
        const std::string msg = "warning: sequence '" + ann.sequence_id + "' has a single-frame " +
                                std::string(phase_name(phase)) + " segment; skipped";
        if (warn) {
          warn(msg);
        } else {
          std::cerr << msg << '\n';
        }
      }
    }
  }

  std::vector<AugmentedSample> out;
  for (const auto& di : pooled) {
    const std::string phase_tag(phase_name(di.phase));
    AugmentedSample base;
    base.image = normalize_minmax(resize_bilinear(di.raw, cfg.output_side, cfg.output_side));
    base.origin = ann.sequence_id;
    base.phase = di.phase;
    base.transform_tags = {phase_tag};
    base.label = ann.label;
    base.split_role = di.phase == Phase::Full ? SplitRole::Eval : SplitRole::TrainOnly;

    std::optional<AugmentedSample> flipped;
    std::optional<AugmentedSample> rotated;
    if (cfg.enable_flip) {
      flipped = base;
      flipped->image = flip_horizontal(base.image);
      flipped->transform_tags.push_back("flip");
      flipped->split_role = SplitRole::TrainOnly;
    }
    if (cfg.enable_rotation) {
      const double angle = draw_rotation_angle(cfg.seed, ann.sequence_id, phase_tag, cfg.rotation_limit);
      rotated = base;
      rotated->image = rotate(base.image, angle, kRotationFill);
      rotated->transform_tags.push_back(rotation_tag(angle));
      rotated->split_role = SplitRole::TrainOnly;
    }
    out.push_back(std::move(base));
    if (flipped) out.push_back(std::move(*flipped));
    if (rotated) out.push_back(std::move(*rotated));
  }
  return out;
}

std::vector<AugmentedSample> expand_training_set(const DatasetManifest& manifest,
                                                 const std::vector<FrameSequence>& sequences,
                                                 const AugmentConfig& cfg, unsigned jobs,
                                                 const WarningSink& warn) {
  if (sequences.size() != manifest.entries.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(sequences.size()) + " sequences for " +
                                          std::to_string(manifest.entries.size()) + " entries");
  }
  cfg.validate();
  const std::size_t n = sequences.size();
  std::vector<std::vector<AugmentedSample>> per_seq(n);
  std::vector<std::vector<std::string>> warnings(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    per_seq[i] = expand_sequence(sequences[i], manifest.entries[i].annotation, cfg,
                                 [&warnings, i](const std::string& m) { warnings[i].push_back(m); });
  });
  std::vector<AugmentedSample> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& m : warnings[i]) {
      if (warn) {
        warn(m);
      } else {
        std::cerr << m << '\n';
      }
    }
    for (auto& s : per_seq[i]) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace dualdi

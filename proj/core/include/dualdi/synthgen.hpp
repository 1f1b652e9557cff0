#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "dualdi/frameseq.hpp"
#include "dualdi/manifest.hpp"

namespace dualdi {

/// Procedural face-proxy motion patterns. Each is a rigid translation of
/// one facial feature group, so every class produces a balanced pair of
/// brightening and darkening edges in the pooled image.
enum class MotionClass {
  BrowRaise,
  MouthRaise,
  JawDrop,
  BrowLower,
  GazeShift,
  MouthShift,
};
inline constexpr int kMotionClassCount = 6;
std::string_view motion_class_name(MotionClass mc) noexcept;

/// Per-subject layout perturbation, in fractions of the frame size (offsets)
/// and intensity units (brightness).
struct FaceLayout {
  double eye_dx = 0.0;
  double eye_dy = 0.0;
  double mouth_dy = 0.0;
  double face_scale = 1.0;
  double brightness = 0.0;
};

struct SynthParams {
  int width = 64;
  int height = 64;
  int n_frames = 24;
  int onset = 3;
  int apex = 11;
  int offset = 17;
  MotionClass motion_class = MotionClass::BrowRaise;
  double peak_amplitude = 2.5;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  FaceLayout face;
  std::string sequence_id = "s0001";
  std::string subject_id = "sub01";

  /// Throws InvalidParams unless 1 <= onset < apex < offset <= n_frames,
  /// peak_amplitude > 0 (or exactly 0 for a static clip) and noise_sigma >= 0.
  void validate() const;
};

/// Normalized motion intensity at 1-based frame t: 0 outside [onset, offset],
/// smoothstep rise to 1 at apex, smoothstep fall back to 0 at offset.
/// The falling branch is evaluated as smoothstep((offset - t) / (offset - apex))
/// so that a symmetric annotation yields bitwise-mirrored values.
double intensity_curve(const SynthParams& params, int t);

double smoothstep(double u) noexcept;

struct SynthSequence {
  FrameSequence sequence;
  ExpressionAnnotation annotation;
};

/// Renders the clip. Samples are rounded to integers in [0, 255] so the
/// in-memory frames equal what a PNG round trip would load.
SynthSequence synth_sequence(const SynthParams& params);

/// Per-sequence randomization ranges for synth_dataset.
struct SynthJitter {
  int width = 64;
  int height = 64;
  int onset_min = 2;
  int onset_max = 6;
  int rise_min = 6;
  int rise_max = 12;
  /// Fall length = round(rise * U[fall_ratio_min, fall_ratio_max]), >= 1.
  double fall_ratio_min = 0.5;
  double fall_ratio_max = 1.0;
  int tail_min = 1;
  int tail_max = 4;
  double amplitude_min = 1.5;
  double amplitude_max = 3.0;
  double noise_sigma = 3.0;
  int n_subjects = 10;
  double layout_jitter = 0.03;
  double brightness_jitter = 12.0;
};

struct SynthDataset {
  DatasetManifest manifest;
  std::vector<FrameSequence> sequences;
};

/// Class of sequence i is i mod n_classes (balanced to within one).
/// Throws TooManyClasses when n_classes exceeds kMotionClassCount.
SynthDataset synth_dataset(int n_sequences, int n_classes, std::uint64_t base_seed,
                           const SynthJitter& jitter = {});

/// Writes <dir>/<sequence_id>/frame###.png and <dir>/manifest.csv (relative
/// frame_dir paths). Returns the manifest path.
std::filesystem::path write_synth_dataset(const std::filesystem::path& dir,
                                          const SynthDataset& dataset, unsigned jobs = 1);

}  // namespace dualdi

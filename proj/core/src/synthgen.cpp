#include "dualdi/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dualdi/error.hpp"
#include "dualdi/image_io.hpp"
#include "dualdi/parallel.hpp"
#include "dualdi/rng.hpp"

namespace fs = std::filesystem;

namespace dualdi {

std::string_view motion_class_name(MotionClass mc) noexcept {
  switch (mc) {
    case MotionClass::BrowRaise: return "brow_raise";
    case MotionClass::MouthRaise: return "mouth_raise";
    case MotionClass::JawDrop: return "jaw_drop";
    case MotionClass::BrowLower: return "brow_lower";
    case MotionClass::GazeShift: return "gaze_shift";
    case MotionClass::MouthShift: return "mouth_shift";
  }
  return "unknown";
}

void SynthParams::validate() const {
  if (width < 4 || height < 4) throw Error(Errc::InvalidParams, "frame size must be at least 4x4");
  if (!(1 <= onset && onset < apex && apex < offset && offset <= n_frames)) {
    throw Error(Errc::InvalidParams, "need 1 <= onset < apex < offset <= n_frames");
  }
  if (!(peak_amplitude >= 0.0) || !(noise_sigma >= 0.0)) {
    throw Error(Errc::InvalidParams, "amplitude and noise must be non-negative");
  }
}

double smoothstep(double u) noexcept {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * (3.0 - 2.0 * u);
}

double intensity_curve(const SynthParams& p, int t) {
  if (t < 1 || t > p.n_frames) {
    throw Error(Errc::IndexOutOfRange, "frame " + std::to_string(t) + " outside 1.." +
                                           std::to_string(p.n_frames));
  }
  if (t <= p.onset || t >= p.offset) return 0.0;
  if (t <= p.apex) {
    return smoothstep(static_cast<double>(t - p.onset) / (p.apex - p.onset));
  }
  return smoothstep(static_cast<double>(p.offset - t) / (p.offset - p.apex));
}

namespace {

// Soft-edged ellipse coverage in [0, 1]; the 1-pixel ramp makes sub-pixel
// displacements change the raster continuously.
double ellipse_coverage(double x, double y, double cx, double cy, double rx, double ry) {
  const double dx = (x - cx) / rx;
  const double dy = (y - cy) / ry;
  const double r = std::sqrt(dx * dx + dy * dy);
  // Approximate distance to the boundary in pixels.
  const double edge_px = (r - 1.0) * std::min(rx, ry);
  return 1.0 - smoothstep(edge_px + 0.5);
}

double box_coverage(double x, double y, double cx, double cy, double hw, double hh) {
  const double ex = std::abs(x - cx) - hw;
  const double ey = std::abs(y - cy) - hh;
  return (1.0 - smoothstep(ex + 0.5)) * (1.0 - smoothstep(ey + 0.5));
}

struct Feature {
  double cx, cy, rx, ry;  // pixels
  double depth;           // darkening at full coverage
  bool ellipse;
};

struct FaceGeometry {
  Feature brow_l, brow_r, eye_l, eye_r, mouth;
  double face_cx, face_cy, face_rx, face_ry;
};

FaceGeometry layout(const SynthParams& p) {
  const double w = p.width;
  const double h = p.height;
  const double s = p.face.face_scale;
  FaceGeometry g{};
  g.face_cx = 0.5 * w;
  g.face_cy = 0.5 * h;
  g.face_rx = 0.40 * w * s;
  g.face_ry = 0.46 * h * s;
  const double eye_off = (0.15 + p.face.eye_dx) * w * s;
  const double eye_y = (0.40 + p.face.eye_dy) * h;
  g.eye_l = {0.5 * w - eye_off, eye_y, 0.075 * w * s, 0.040 * h * s, 95.0, true};
  g.eye_r = {0.5 * w + eye_off, eye_y, 0.075 * w * s, 0.040 * h * s, 95.0, true};
  const double brow_y = eye_y - 0.10 * h * s;
  g.brow_l = {g.eye_l.cx, brow_y, 0.085 * w * s, 0.018 * h * s, 70.0, false};
  g.brow_r = {g.eye_r.cx, brow_y, 0.085 * w * s, 0.018 * h * s, 70.0, false};
  g.mouth = {0.5 * w, (0.72 + p.face.mouth_dy) * h, 0.15 * w * s, 0.025 * h * s, 85.0, false};
  return g;
}

// Translates the class's feature group by d pixels.
void apply_motion(FaceGeometry& g, MotionClass mc, double d) {
  switch (mc) {
    case MotionClass::BrowRaise:
      g.brow_l.cy -= d;
      g.brow_r.cy -= d;
      break;
    case MotionClass::MouthRaise:
      g.mouth.cy -= d;
      break;
    case MotionClass::JawDrop:
      g.mouth.cy += d;
      break;
    case MotionClass::BrowLower:
      g.brow_l.cy += d;
      g.brow_r.cy += d;
      break;
    case MotionClass::GazeShift:
      g.eye_l.cx -= d;
      g.eye_r.cx -= d;
      break;
    case MotionClass::MouthShift:
      g.mouth.cx += d;
      break;
  }
}

double coverage(const Feature& f, double x, double y) {
  return f.ellipse ? ellipse_coverage(x, y, f.cx, f.cy, f.rx, f.ry)
                   : box_coverage(x, y, f.cx, f.cy, f.rx, f.ry);
}

Frame render(const SynthParams& p, const FaceGeometry& g) {
  Frame f(p.width, p.height, 1);
  const Feature* features[] = {&g.brow_l, &g.brow_r, &g.eye_l, &g.eye_r, &g.mouth};
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      // Smooth vertical background gradient plus a brighter face disc.
      double v = 70.0 + 30.0 * y / p.height + p.face.brightness;
      v += 90.0 * ellipse_coverage(x, y, g.face_cx, g.face_cy, g.face_rx, g.face_ry);
      for (const Feature* feat : features) v -= feat->depth * coverage(*feat, x, y);
      f.at(x, y) = v;
    }
  }
  return f;
}

}  // namespace

SynthSequence synth_sequence(const SynthParams& params) {
  params.validate();
  const FaceGeometry base = layout(params);
  Rng noise(derive_seed(params.seed, params.sequence_id, "noise"));

  SynthSequence out;
  out.sequence.frames.reserve(static_cast<std::size_t>(params.n_frames));
  for (int t = 1; t <= params.n_frames; ++t) {
    FaceGeometry g = base;
    apply_motion(g, params.motion_class, params.peak_amplitude * intensity_curve(params, t));
    Frame f = render(params, g);
    for (double& v : f.data) {
      if (params.noise_sigma > 0.0) v += params.noise_sigma * noise.normal();
      v = std::clamp(std::round(v), 0.0, 255.0);
    }
    out.sequence.frames.push_back(std::move(f));
  }
  out.sequence.source_dir = params.sequence_id;
  out.annotation = {params.sequence_id, params.subject_id, params.onset, params.apex,
                    params.offset, std::string(motion_class_name(params.motion_class))};
  return out;
}

namespace {

std::string padded(const char* prefix, int value, int digits) {
  std::string num = std::to_string(value);
  if (static_cast<int>(num.size()) < digits) num.insert(0, digits - num.size(), '0');
  return prefix + num;
}

}  // namespace

SynthDataset synth_dataset(int n_sequences, int n_classes, std::uint64_t base_seed,
                           const SynthJitter& j) {
  if (n_classes > kMotionClassCount) {
    throw Error(Errc::TooManyClasses, std::to_string(n_classes) + " classes requested, " +
                                          std::to_string(kMotionClassCount) + " available");
  }
  if (n_classes < 1 || n_sequences < 1) {
    throw Error(Errc::InvalidParams, "need at least one sequence and one class");
  }
  if (j.n_subjects < 1 || j.onset_min < 1 || j.onset_max < j.onset_min || j.rise_min < 1 ||
      j.rise_max < j.rise_min || j.tail_min < 0 || j.tail_max < j.tail_min ||
      !(j.fall_ratio_min > 0.0) || j.fall_ratio_max < j.fall_ratio_min) {
    throw Error(Errc::InvalidParams, "inconsistent jitter ranges");
  }

  const int id_digits = std::max(3, static_cast<int>(std::to_string(n_sequences).size()));
  const int subj_digits = std::max(2, static_cast<int>(std::to_string(j.n_subjects).size()));

  std::vector<FaceLayout> faces(static_cast<std::size_t>(j.n_subjects));
  for (int s = 0; s < j.n_subjects; ++s) {
    Rng rng(derive_seed(base_seed, padded("sub", s + 1, subj_digits), "layout"));
    faces[s].eye_dx = rng.uniform(-j.layout_jitter, j.layout_jitter);
    faces[s].eye_dy = rng.uniform(-j.layout_jitter, j.layout_jitter);
    faces[s].mouth_dy = rng.uniform(-j.layout_jitter, j.layout_jitter);
    faces[s].face_scale = 1.0 + rng.uniform(-j.layout_jitter, j.layout_jitter);
    faces[s].brightness = rng.uniform(-j.brightness_jitter, j.brightness_jitter);
  }

  std::vector<SynthParams> params(static_cast<std::size_t>(n_sequences));
  for (int i = 0; i < n_sequences; ++i) {
    SynthParams& p = params[i];
    p.sequence_id = padded("s", i + 1, id_digits);
    Rng rng(derive_seed(base_seed, p.sequence_id, "timing"));
    const int subject = static_cast<int>(rng.below(static_cast<std::uint64_t>(j.n_subjects)));
    p.subject_id = padded("sub", subject + 1, subj_digits);
    p.face = faces[subject];
    p.width = j.width;
    p.height = j.height;
    p.motion_class = static_cast<MotionClass>(i % n_classes);
    p.onset = static_cast<int>(rng.between(j.onset_min, j.onset_max));
    const int rise = static_cast<int>(rng.between(j.rise_min, j.rise_max));
    const int fall = std::max(
        1, static_cast<int>(std::lround(rise * rng.uniform(j.fall_ratio_min, j.fall_ratio_max))));
    p.apex = p.onset + rise;
    p.offset = p.apex + fall;
    p.n_frames = p.offset + static_cast<int>(rng.between(j.tail_min, j.tail_max));
    p.peak_amplitude = rng.uniform(j.amplitude_min, j.amplitude_max);
    p.noise_sigma = j.noise_sigma;
    p.seed = base_seed;
  }

  SynthDataset ds;
  ds.sequences.resize(params.size());
  std::vector<ManifestEntry> entries(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    SynthSequence s = synth_sequence(params[i]);
    ds.sequences[i] = std::move(s.sequence);
    entries[i] = {std::move(s.annotation), fs::path(params[i].sequence_id)};
  }
  ds.manifest = make_manifest(std::move(entries));
  return ds;
}

fs::path write_synth_dataset(const fs::path& dir, const SynthDataset& dataset, unsigned jobs) {
  fs::create_directories(dir);
  const auto& entries = dataset.manifest.entries;
  parallel_for(entries.size(), jobs, [&](std::size_t i) {
    const fs::path seq_dir = dir / entries[i].frame_dir;
    fs::create_directories(seq_dir);
    const auto& frames = dataset.sequences[i].frames;
    const int digits = std::max(3, static_cast<int>(std::to_string(frames.size()).size()));
    for (std::size_t t = 0; t < frames.size(); ++t) {
      write_png(seq_dir / (padded("frame", static_cast<int>(t + 1), digits) + ".png"),
                quantize(frames[t]));
    }
  });
  DatasetManifest m = dataset.manifest;
  m.base_dir = dir;
  const fs::path manifest_path = dir / "manifest.csv";
  write_manifest(manifest_path, m);
  return manifest_path;
}

}  // namespace dualdi

#include "dualdi/frameseq.hpp"

#include <algorithm>
#include <cctype>

#include "dualdi/error.hpp"
#include "dualdi/image_io.hpp"

namespace fs = std::filesystem;

namespace dualdi {

void FrameSequence::validate() const {
  if (frames.empty()) throw Error(Errc::EmptyInput, "sequence has no frames");
  for (const auto& f : frames) {
    if (!f.same_shape(frames.front())) {
      throw Error(Errc::InconsistentDimensions,
                  source_dir.string() + ": frame " + std::to_string(f.width) + "x" +
                      std::to_string(f.height) + "x" + std::to_string(f.channels) + " vs " +
                      std::to_string(frames.front().width) + "x" +
                      std::to_string(frames.front().height) + "x" +
                      std::to_string(frames.front().channels));
    }
  }
}

namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// -1, 0, 1 comparison of digit runs by numeric value.
int compare_numeric(std::string_view a, std::string_view b) {
  const auto strip = [](std::string_view s) {
    const auto nz = s.find_first_not_of('0');
    return nz == std::string_view::npos ? std::string_view{} : s.substr(nz);
  };
  const auto sa = strip(a);
  const auto sb = strip(b);
  if (sa.size() != sb.size()) return sa.size() < sb.size() ? -1 : 1;
  const int c = sa.compare(sb);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

}  // namespace

bool natural_less(std::string_view a, std::string_view b) noexcept {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (is_digit(a[i]) && is_digit(b[j])) {
      std::size_t ie = i;
      while (ie < a.size() && is_digit(a[ie])) ++ie;
      std::size_t je = j;
      while (je < b.size() && is_digit(b[je])) ++je;
      const int c = compare_numeric(a.substr(i, ie - i), b.substr(j, je - j));
      if (c != 0) return c < 0;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return static_cast<unsigned char>(a[i]) < static_cast<unsigned char>(b[j]);
      ++i;
      ++j;
    }
  }
  const bool a_done = i == a.size();
  const bool b_done = j == b.size();
  if (a_done != b_done) return a_done;
  return a < b;
}

std::vector<fs::path> list_frame_files(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(Errc::MissingDirectory, dir.string() + ": frame directory does not exist");
  }
  std::vector<fs::path> files;
  for (const auto& de : fs::directory_iterator(dir)) {
    if (de.is_regular_file() && has_image_extension(de.path())) files.push_back(de.path());
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return natural_less(a.filename().string(), b.filename().string());
  });
  return files;
}

FrameSequence load_frames(const fs::path& dir, bool grayscale) {
  const auto files = list_frame_files(dir);
  if (files.empty()) throw Error(Errc::EmptyDirectory, dir.string() + ": no image files");
  FrameSequence seq;
  seq.source_dir = dir;
  seq.frames.reserve(files.size());
  for (const auto& file : files) {
    Frame f = to_frame(read_image(file));
    if (grayscale && f.channels == 3) f = to_grayscale(f);
    if (!seq.frames.empty() && !f.same_shape(seq.frames.front())) {
      throw Error(Errc::InconsistentDimensions,
                  file.string() + " is " + std::to_string(f.width) + "x" + std::to_string(f.height) +
                      "x" + std::to_string(f.channels) + ", expected " +
                      std::to_string(seq.frames.front().width) + "x" +
                      std::to_string(seq.frames.front().height) + "x" +
                      std::to_string(seq.frames.front().channels));
    }
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

FrameSequence load_sequence(const DatasetManifest& manifest, const ManifestEntry& entry,
                            bool grayscale) {
  FrameSequence seq = load_frames(manifest.resolve(entry), grayscale);
  validate_annotation(entry.annotation, seq.frame_count());
  return seq;
}

}  // namespace dualdi

#include "dualdi/manifest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>
#include <unordered_set>

#include "dualdi/error.hpp"
#include "dualdi/image_io.hpp"

namespace fs = std::filesystem;

namespace dualdi {

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

int parse_index(std::string_view field, const char* name, int line_no) {
  int value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end || value < 1) {
    throw Error(Errc::NonIntegerIndex, "line " + std::to_string(line_no) + ": " + name +
                                           " '" + std::string(field) +
                                           "' is not a positive integer");
  }
  return value;
}

void check_ordering(const ExpressionAnnotation& a, const std::string& where) {
  if (!(a.onset <= a.apex && a.apex <= a.offset)) {
    throw Error(Errc::OrderingViolation,
                where + "sequence '" + a.sequence_id + "' has onset=" + std::to_string(a.onset) +
                    ", apex=" + std::to_string(a.apex) + ", offset=" + std::to_string(a.offset));
  }
}

}  // namespace

fs::path DatasetManifest::resolve(const ManifestEntry& entry) const {
  if (entry.frame_dir.is_absolute() || base_dir.empty()) return entry.frame_dir;
  return base_dir / entry.frame_dir;
}

int DatasetManifest::label_index(const std::string& label) const {
  const auto it = std::lower_bound(label_vocabulary.begin(), label_vocabulary.end(), label);
  if (it == label_vocabulary.end() || *it != label) {
    throw Error(Errc::InvalidArgument, "label '" + label + "' not in vocabulary");
  }
  return static_cast<int>(it - label_vocabulary.begin());
}

DatasetManifest make_manifest(std::vector<ManifestEntry> entries, fs::path base_dir) {
  DatasetManifest m;
  std::unordered_set<std::string> ids;
  std::set<std::string> labels;
  for (const auto& e : entries) {
    check_ordering(e.annotation, "");
    if (!ids.insert(e.annotation.sequence_id).second) {
      throw Error(Errc::DuplicateSequenceId, "sequence_id '" + e.annotation.sequence_id +
                                                 "' appears more than once");
    }
    labels.insert(e.annotation.label);
  }
  m.entries = std::move(entries);
  m.label_vocabulary.assign(labels.begin(), labels.end());
  m.base_dir = std::move(base_dir);
  return m;
}

DatasetManifest parse_manifest_text(const std::string& text, const fs::path& base_dir) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::MissingColumn, "manifest is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kManifestHeader) {
    throw Error(Errc::MissingColumn,
                "header must be '" + std::string(kManifestHeader) + "', got '" + line + "'");
  }
  std::vector<ManifestEntry> entries;
  int line_no = 1;
  std::unordered_set<std::string> ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_commas(line);
    if (f.size() != 7) {
      throw Error(Errc::MissingColumn, "line " + std::to_string(line_no) + ": expected 7 fields, got " +
                                           std::to_string(f.size()));
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f[i].empty()) {
        throw Error(Errc::MissingColumn,
                    "line " + std::to_string(line_no) + ": field " + std::to_string(i + 1) + " is empty");
      }
    }
    ManifestEntry e;
    e.annotation.sequence_id = std::string(f[0]);
    e.annotation.subject_id = std::string(f[1]);
    e.frame_dir = fs::path(std::string(f[2]));
    e.annotation.onset = parse_index(f[3], "onset", line_no);
    e.annotation.apex = parse_index(f[4], "apex", line_no);
    e.annotation.offset = parse_index(f[5], "offset", line_no);
    e.annotation.label = std::string(f[6]);
    check_ordering(e.annotation, "line " + std::to_string(line_no) + ": ");
    if (!ids.insert(e.annotation.sequence_id).second) {
      throw Error(Errc::DuplicateSequenceId, "line " + std::to_string(line_no) + ": sequence_id '" +
                                                 e.annotation.sequence_id + "' already used");
    }
    entries.push_back(std::move(e));
  }
  return make_manifest(std::move(entries), base_dir);
}

DatasetManifest parse_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, path.string() + ": cannot open manifest");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_manifest_text(buf.str(), path.parent_path());
}

std::string format_manifest(const DatasetManifest& manifest) {
  std::string out = std::string(kManifestHeader) + "\n";
  for (const auto& e : manifest.entries) {
    const auto& a = e.annotation;
    out += a.sequence_id + "," + a.subject_id + "," + e.frame_dir.generic_string() + "," +
           std::to_string(a.onset) + "," + std::to_string(a.apex) + "," +
           std::to_string(a.offset) + "," + a.label + "\n";
  }
  return out;
}

void write_manifest(const fs::path& path, const DatasetManifest& manifest) {
  write_file_atomic(path, format_manifest(manifest));
}

void validate_annotation(const ExpressionAnnotation& a, int frame_count) {
  check_ordering(a, "");
  if (a.onset < 1 || a.offset > frame_count) {
    throw Error(Errc::AnnotationOutOfRange,
                "sequence '" + a.sequence_id + "' annotation [" + std::to_string(a.onset) + ".." +
                    std::to_string(a.offset) + "] exceeds " + std::to_string(frame_count) + " frames");
  }
}

}  // namespace dualdi

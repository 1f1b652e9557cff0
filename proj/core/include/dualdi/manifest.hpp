#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace dualdi {

/// Onset/apex/offset are 1-based positions into the naturally sorted frame
/// list of the sequence directory.
struct ExpressionAnnotation {
  std::string sequence_id;
  std::string subject_id;
  int onset = 1;
  int apex = 1;
  int offset = 1;
  std::string label;

  bool operator==(const ExpressionAnnotation&) const = default;
};

struct ManifestEntry {
  ExpressionAnnotation annotation;
  /// As written in the manifest; relative paths resolve against base_dir.
  std::filesystem::path frame_dir;

  bool operator==(const ManifestEntry&) const = default;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  /// Sorted, distinct.
  std::vector<std::string> label_vocabulary;
  /// Directory of the manifest file; empty for in-memory manifests.
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const ManifestEntry& entry) const;
  /// Index of `label` in label_vocabulary; throws InvalidArgument if absent.
  int label_index(const std::string& label) const;
};

inline constexpr const char* kManifestHeader =
    "sequence_id,subject_id,frame_dir,onset,apex,offset,label";

DatasetManifest parse_manifest(const std::filesystem::path& path);
DatasetManifest parse_manifest_text(const std::string& text,
                                    const std::filesystem::path& base_dir = {});
std::string format_manifest(const DatasetManifest& manifest);
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

/// Builds the vocabulary from the entries and validates id uniqueness and
/// index ordering.
DatasetManifest make_manifest(std::vector<ManifestEntry> entries,
                              std::filesystem::path base_dir = {});

/// Checks 1 <= onset <= apex <= offset <= frame_count.
void validate_annotation(const ExpressionAnnotation& ann, int frame_count);

}  // namespace dualdi

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "dualdi/raster.hpp"

namespace dualdi::testing {

/// Unique scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "dualdi");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

std::string read_text(const std::filesystem::path& p);
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& p);

Frame constant_frame(int w, int h, int c, double v);
/// Integer-valued samples in [0, 255].
Frame random_pixel_frame(std::mt19937_64& gen, int w, int h, int c);
/// Arbitrary real samples in [-1000, 1000].
Frame random_real_frame(std::mt19937_64& gen, int w, int h, int c);
/// Low-frequency raster (sum of a few sinusoids) in [0, 255].
Frame smooth_frame(std::mt19937_64& gen, int w, int h, int c);

double max_abs_diff(const Frame& a, const Frame& b);

// ---- independent oracles -------------------------------------------------

/// Per-class metrics recomputed by replaying every sample of the matrix
/// and counting outcomes one at a time.
struct MetricOracle {
  double accuracy;
  double uf1;
  double uar;
};
MetricOracle brute_force_metrics(const std::vector<std::vector<std::int64_t>>& counts);

/// Direct evaluation of the closed-form pooling weights.
std::vector<std::int64_t> closed_form_forward(int T);
std::vector<std::int64_t> closed_form_reversed(int T);

}  // namespace dualdi::testing

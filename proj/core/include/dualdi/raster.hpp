#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace dualdi {

/// Row-major, channel-interleaved image buffer.
template <typename T>
struct Raster {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<T> data;

  Raster() = default;
  Raster(int w, int h, int c, T fill = T{})
      : width(w), height(h), channels(c),
        data(static_cast<std::size_t>(w) * h * c, fill) {}

  std::size_t sample_count() const noexcept { return data.size(); }
  bool same_shape(const Raster& other) const noexcept {
    return width == other.width && height == other.height && channels == other.channels;
  }
  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * width + x) * channels + c;
  }
  T& at(int x, int y, int c = 0) noexcept { return data[index(x, y, c)]; }
  const T& at(int x, int y, int c = 0) const noexcept { return data[index(x, y, c)]; }

  bool operator==(const Raster&) const = default;
};

/// Floating-point samples, nominally in [0, 255] for decoded frames; pooled
/// dynamic images are signed and unbounded.
using Frame = Raster<double>;
using ByteImage = Raster<std::uint8_t>;

/// Rounds half away from zero and clamps to [0, 255].
std::uint8_t to_byte(double v) noexcept;

ByteImage quantize(const Frame& frame);
Frame to_frame(const ByteImage& image);

/// Luma conversion with ITU-R 601 weights. Throws AlreadyGrayscale unless
/// channels == 3.
Frame to_grayscale(const Frame& frame);

/// Bilinear resampling with pixel-center alignment:
/// src = (dst + 0.5) * (in / out) - 0.5, clamped to the border.
Frame resize_bilinear(const Frame& frame, int out_w, int out_h);
ByteImage resize_bilinear(const ByteImage& image, int out_w, int out_h);

/// Bilinear sample at a continuous source position; positions are clamped
/// to the valid pixel-center range.
double sample_bilinear_clamped(const Frame& frame, double x, double y, int c) noexcept;

}  // namespace dualdi

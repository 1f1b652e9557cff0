#include "dualdi/raster.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dualdi/error.hpp"

namespace dualdi {

std::uint8_t to_byte(double v) noexcept {
  const double r = std::round(v);
  if (!(r > 0.0)) return 0;
  if (r >= 255.0) return 255;
  return static_cast<std::uint8_t>(r);
}

ByteImage quantize(const Frame& frame) {
  ByteImage out(frame.width, frame.height, frame.channels);
  std::transform(frame.data.begin(), frame.data.end(), out.data.begin(), to_byte);
  return out;
}

Frame to_frame(const ByteImage& image) {
  Frame out(image.width, image.height, image.channels);
  std::copy(image.data.begin(), image.data.end(), out.data.begin());
  return out;
}

Frame to_grayscale(const Frame& frame) {
  if (frame.channels != 3) {
    throw Error(Errc::AlreadyGrayscale,
                "expected 3 channels, got " + std::to_string(frame.channels));
  }
  Frame out(frame.width, frame.height, 1);
  const std::size_t n = static_cast<std::size_t>(frame.width) * frame.height;
  for (std::size_t i = 0; i < n; ++i) {
    const double* px = &frame.data[3 * i];
    out.data[i] = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
  }
  return out;
}

namespace {

struct Tap {
  int lo;
  int hi;
  double frac;
};

// Source taps for every destination coordinate along one axis.
std::vector<Tap> axis_taps(int in, int out) {
  std::vector<Tap> taps(static_cast<std::size_t>(out));
  const double scale = static_cast<double>(in) / out;
  for (int d = 0; d < out; ++d) {
    double s = (d + 0.5) * scale - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(in - 1));
    const int lo = static_cast<int>(std::floor(s));
    const int hi = std::min(lo + 1, in - 1);
    taps[d] = {lo, hi, s - lo};
  }
  return taps;
}

}  // namespace

Frame resize_bilinear(const Frame& frame, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1) {
    throw Error(Errc::ZeroDimension, "target size " + std::to_string(out_w) + "x" +
                                         std::to_string(out_h));
  }
  if (frame.width < 1 || frame.height < 1) {
    throw Error(Errc::ZeroDimension, "empty source frame");
  }
  if (out_w == frame.width && out_h == frame.height) return frame;

  const auto xs = axis_taps(frame.width, out_w);
  const auto ys = axis_taps(frame.height, out_h);
  const int ch = frame.channels;
  Frame out(out_w, out_h, ch);
  for (int y = 0; y < out_h; ++y) {
    const Tap& ty = ys[y];
    for (int x = 0; x < out_w; ++x) {
      const Tap& tx = xs[x];
      for (int c = 0; c < ch; ++c) {
        const double p00 = frame.at(tx.lo, ty.lo, c);
        const double p10 = frame.at(tx.hi, ty.lo, c);
        const double p01 = frame.at(tx.lo, ty.hi, c);
        const double p11 = frame.at(tx.hi, ty.hi, c);
        const double top = p00 + tx.frac * (p10 - p00);
        const double bot = p01 + tx.frac * (p11 - p01);
        // Convex combinations can drift one ulp outside [min, max]; clamp.
        const double v = top + ty.frac * (bot - top);
        out.at(x, y, c) = std::clamp(v, std::min({p00, p10, p01, p11}),
                                     std::max({p00, p10, p01, p11}));
      }
    }
  }
  return out;
}

ByteImage resize_bilinear(const ByteImage& image, int out_w, int out_h) {
  return quantize(resize_bilinear(to_frame(image), out_w, out_h));
}

double sample_bilinear_clamped(const Frame& frame, double x, double y, int c) noexcept {
  x = std::clamp(x, 0.0, static_cast<double>(frame.width - 1));
  y = std::clamp(y, 0.0, static_cast<double>(frame.height - 1));
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, frame.width - 1);
  const int y1 = std::min(y0 + 1, frame.height - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = frame.at(x0, y0, c) + fx * (frame.at(x1, y0, c) - frame.at(x0, y0, c));
  const double bot = frame.at(x0, y1, c) + fx * (frame.at(x1, y1, c) - frame.at(x0, y1, c));
  return top + fy * (bot - top);
}

}  // namespace dualdi

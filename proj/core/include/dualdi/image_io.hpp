#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "dualdi/raster.hpp"

namespace dualdi {

/// Decodes an 8-bit PNG or JPEG file into a 1- or 3-channel image. Alpha is
/// composited away; palette and 16-bit PNGs are reduced to 8 bits per sample.
/// Throws UndecodableImage on any decode failure.
ByteImage read_image(const std::filesystem::path& path);

bool has_image_extension(const std::filesystem::path& path);

/// PNG encoding is deterministic for a given libpng/zlib build: no
/// timestamps, no text chunks.
std::vector<std::uint8_t> encode_png(const ByteImage& image);
void write_png(const std::filesystem::path& path, const ByteImage& image);

void write_jpeg(const std::filesystem::path& path, const ByteImage& image, int quality = 95);

/// Writes bytes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, std::string_view text);

}  // namespace dualdi

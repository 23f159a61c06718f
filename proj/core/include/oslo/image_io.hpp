#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>

#include "oslo/grid.hpp"
#include "oslo/image.hpp"

namespace oslo {

using LoadedImage = std::variant<CombinedImage, IntensityImage>;

/// Reads PNG (8/16-bit gray, 8/16-bit RGB, palette; alpha ignored) or TIFF
/// (8/16-bit gray, single plane). Grayscale sources yield IntensityImage, color
/// sources CombinedImage. Samples are scaled by the source full-scale value.
/// Throws IoError on unreadable, unsupported or zero-area files.
LoadedImage load_image(const std::filesystem::path& path);

/// Loads a single channel. Color files are reduced with max(r, g, b), which
/// recovers the intensity of a single pseudo-colored fluorophore.
IntensityImage load_channel(const std::filesystem::path& path);

/// Loads a 16-bit (or 8-bit) grayscale PNG as raw integer labels.
LabelMap load_label_png(const std::filesystem::path& path);

// Writers. Each writes to a sibling temporary file and renames it into place.
void save_png_gray8(const std::filesystem::path& path, const Grid<std::uint8_t>& img);
void save_png_gray16(const std::filesystem::path& path, const Grid<std::uint16_t>& img);
void save_png_rgb8(const std::filesystem::path& path, const Grid<Rgb>& img);

/// Quantizes to 8 or 16 bits with round-to-nearest.
void save_intensity_png(const std::filesystem::path& path, const IntensityImage& img,
                        int bit_depth = 8);
void save_label_png16(const std::filesystem::path& path, const LabelMap& labels);

/// Writes text content atomically (temp file + rename).
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace oslo

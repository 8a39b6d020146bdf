#pragma once

#include "speclearn/core.hpp"

#include <array>

namespace speclearn {

inline constexpr int kImageSide = 28;
inline constexpr int kImagePixels = kImageSide * kImageSide;
inline constexpr int kGridSide = 5;
inline constexpr int kGridCells = kGridSide * kGridSide;

// Block-mean binarization cutoff. The downsampled cells are sparse (digit
// strokes cover a small fraction of each 5x5 block), so the cutoff sits low.
inline constexpr double kDefaultThreshold = 0.15;

struct RawImage {
    std::array<float, kImagePixels> pixels{};  // row-major, scaled into [0,1]
    int label = 0;                             // digit 0-9
};

/// Reads a whole file, transparently gunzipping when it starts with the
/// gzip magic bytes.
std::vector<std::uint8_t> read_file(const std::string& path);

/// Parses an IDX image/label byte-stream pair (big-endian headers, magics
/// 2051/2049). Pixels are scaled from 0-255 into [0,1]; file order is kept.
std::vector<RawImage> parse_idx(std::span<const std::uint8_t> image_bytes,
                                std::span<const std::uint8_t> label_bytes);

/// 5x5 block means at offsets {0, 6, 12, 17, 23} along each axis.
std::array<double, kGridCells> downsample(std::span<const float> pixels);

/// entry > threshold -> +1, else -1; row-major flattening to {+-1}^25.
Point binarize(const std::array<double, kGridCells>& block_means, double threshold);

/// 0 -> -1, 1 -> +1; any other digit is rejected.
std::int8_t label_map(int digit);

/// Full ingestion pipeline: parse, keep digits {0,1}, downsample, binarize,
/// map labels. Deterministic byte-for-byte in the file contents.
SampleSet load_binary_pool(const std::string& images_path, const std::string& labels_path,
                           double threshold = kDefaultThreshold);

// Little-endian cache of a preprocessed pool: magic "SBP1", u32 version,
// u32 n, u64 count, then per item u64 packed point bits and an i8 label.
void write_pool_cache(const std::string& path, const SampleSet& pool);
SampleSet read_pool_cache(const std::string& path);

}  // namespace speclearn

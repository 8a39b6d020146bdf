#include "speclearn/mnist.hpp"

#include <cstring>
#include <fstream>

#include <zlib.h>

namespace speclearn {

namespace {

constexpr std::uint32_t kImageMagic = 2051;
constexpr std::uint32_t kLabelMagic = 2049;
constexpr int kBlockOffsets[kGridSide] = {0, 6, 12, 17, 23};
constexpr char kCacheMagic[4] = {'S', 'B', 'P', '1'};
constexpr std::uint32_t kCacheVersion = 1;

std::uint32_t read_u32be(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

std::vector<std::uint8_t> gunzip(std::span<const std::uint8_t> in) {
    z_stream strm{};
    if (inflateInit2(&strm, 16 + MAX_WBITS) != Z_OK)
        throw data_error("gzip: inflate init failed");
    std::vector<std::uint8_t> out;
    out.reserve(in.size() * 4);
    std::vector<std::uint8_t> buf(1 << 16);
    strm.next_in = const_cast<Bytef*>(in.data());
    strm.avail_in = static_cast<uInt>(in.size());
    int ret = Z_OK;
    while (ret != Z_STREAM_END) {
        strm.next_out = buf.data();
        strm.avail_out = static_cast<uInt>(buf.size());
        ret = inflate(&strm, Z_NO_FLUSH);
        if (ret != Z_OK && ret != Z_STREAM_END) {
            inflateEnd(&strm);
            throw data_error("gzip: corrupt stream");
        }
        out.insert(out.end(), buf.data(), buf.data() + (buf.size() - strm.avail_out));
    }
    inflateEnd(&strm);
    return out;
}

// Validates both headers and walks the image/label records in file order.
template <typename Visitor>
void visit_idx(std::span<const std::uint8_t> image_bytes,
               std::span<const std::uint8_t> label_bytes, Visitor&& visit) {
    if (image_bytes.size() < 16) throw data_error("idx: truncated image header");
    if (label_bytes.size() < 8) throw data_error("idx: truncated label header");
    const std::uint32_t image_magic = read_u32be(&image_bytes[0]);
    if (image_magic != kImageMagic)
        throw data_error("idx: bad image magic " + std::to_string(image_magic));
    const std::uint32_t label_magic = read_u32be(&label_bytes[0]);
    if (label_magic != kLabelMagic)
        throw data_error("idx: bad label magic " + std::to_string(label_magic));
    const std::uint64_t image_count = read_u32be(&image_bytes[4]);
    const std::uint64_t label_count = read_u32be(&label_bytes[4]);
    if (image_count != label_count)
        throw data_error("idx: image/label count mismatch (" + std::to_string(image_count) +
                         " vs " + std::to_string(label_count) + ")");
    const std::uint32_t rows = read_u32be(&image_bytes[8]);
    const std::uint32_t cols = read_u32be(&image_bytes[12]);
    if (rows != kImageSide || cols != kImageSide)
        throw data_error("idx: expected 28x28 images, got " + std::to_string(rows) + "x" +
                         std::to_string(cols));
    if (image_bytes.size() < 16 + image_count * std::uint64_t(kImagePixels))
        throw data_error("idx: truncated image data");
    if (label_bytes.size() < 8 + label_count)
        throw data_error("idx: truncated label data");

    const std::uint8_t* pixels = image_bytes.data() + 16;
    const std::uint8_t* labels = label_bytes.data() + 8;
    for (std::uint64_t i = 0; i < image_count; ++i) {
        if (labels[i] > 9)
            throw data_error("idx: label byte out of range at item " + std::to_string(i));
        visit(pixels + i * kImagePixels, static_cast<int>(labels[i]));
    }
}

void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

void put_u64le(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int s = 0; s < 64; s += 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

std::uint32_t get_u32le(const std::uint8_t* p) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

std::uint64_t get_u64le(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

}  // namespace

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (bytes.size() >= 2 && bytes[0] == 0x1f && bytes[1] == 0x8b)
        return gunzip(bytes);
    return bytes;
}

std::vector<RawImage> parse_idx(std::span<const std::uint8_t> image_bytes,
                                std::span<const std::uint8_t> label_bytes) {
    std::vector<RawImage> images;
    visit_idx(image_bytes, label_bytes, [&](const std::uint8_t* pixels, int label) {
        RawImage img;
        img.label = label;
        for (int j = 0; j < kImagePixels; ++j)
            img.pixels[j] = static_cast<float>(pixels[j]) * (1.0f / 255.0f);
        images.push_back(img);
    });
    return images;
}

std::array<double, kGridCells> downsample(std::span<const float> pixels) {
    if (pixels.size() != kImagePixels)
        throw std::invalid_argument("downsample: expected a 28x28 image");
    std::array<double, kGridCells> means{};
    for (int r = 0; r < kGridSide; ++r) {
        for (int c = 0; c < kGridSide; ++c) {
            double sum = 0.0;
            for (int dr = 0; dr < kGridSide; ++dr)
                for (int dc = 0; dc < kGridSide; ++dc)
                    sum += pixels[(kBlockOffsets[r] + dr) * kImageSide + kBlockOffsets[c] + dc];
            means[r * kGridSide + c] = sum / (kGridSide * kGridSide);
        }
    }
    return means;
}

Point binarize(const std::array<double, kGridCells>& block_means, double threshold) {
    std::uint64_t neg = 0;
    for (int j = 0; j < kGridCells; ++j)
        if (!(block_means[j] > threshold)) neg |= 1ull << j;
    return {neg, kGridCells};
}

std::int8_t label_map(int digit) {
    if (digit == 0) return -1;
    if (digit == 1) return +1;
    throw std::invalid_argument("label_map: digit " + std::to_string(digit) +
                                " outside {0, 1}");
}

SampleSet load_binary_pool(const std::string& images_path, const std::string& labels_path,
                           double threshold) {
    const auto image_bytes = read_file(images_path);
    const auto label_bytes = read_file(labels_path);
    std::vector<Point> points;
    std::vector<std::int8_t> labels;
    std::array<float, kImagePixels> scaled;
    visit_idx(image_bytes, label_bytes, [&](const std::uint8_t* pixels, int label) {
        if (label > 1) return;  // pipeline covers the zero-vs-one task only
        for (int j = 0; j < kImagePixels; ++j)
            scaled[j] = static_cast<float>(pixels[j]) * (1.0f / 255.0f);
        points.push_back(binarize(downsample(scaled), threshold));
        labels.push_back(label_map(label));
    });
    if (points.empty())
        throw data_error("no digit-0/1 items found in " + images_path);
    return make_sample_set(std::move(points), std::move(labels));
}

void write_pool_cache(const std::string& path, const SampleSet& pool) {
    std::vector<std::uint8_t> out;
    out.reserve(20 + pool.size() * 9);
    out.insert(out.end(), kCacheMagic, kCacheMagic + 4);
    put_u32le(out, kCacheVersion);
    put_u32le(out, static_cast<std::uint32_t>(pool.n));
    put_u64le(out, pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        put_u64le(out, pool.points[i].neg);
        out.push_back(static_cast<std::uint8_t>(pool.labels[i]));
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw data_error("cannot open for writing: " + path);
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!f) throw data_error("cache write failed: " + path);
}

SampleSet read_pool_cache(const std::string& path) {
    const auto bytes = read_file(path);
    if (bytes.size() < 20 || std::memcmp(bytes.data(), kCacheMagic, 4) != 0)
        throw data_error("pool cache: bad magic in " + path);
    if (get_u32le(&bytes[4]) != kCacheVersion)
        throw data_error("pool cache: unsupported version");
    const std::uint32_t n = get_u32le(&bytes[8]);
    const std::uint64_t count = get_u64le(&bytes[12]);
    if (n == 0 || n > static_cast<std::uint32_t>(kMaxDimension))
        throw data_error("pool cache: bad dimension");
    if (bytes.size() < 20 + count * 9)
        throw data_error("pool cache: truncated");
    std::vector<Point> points;
    std::vector<std::int8_t> labels;
    points.reserve(count);
    labels.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint8_t* rec = bytes.data() + 20 + i * 9;
        const std::uint64_t neg = get_u64le(rec);
        const std::int8_t label = static_cast<std::int8_t>(rec[8]);
        if (neg & ~dimension_mask(static_cast<int>(n)))
            throw data_error("pool cache: point bits exceed dimension");
        if (label != 1 && label != -1)
            throw data_error("pool cache: bad label byte");
        points.push_back({neg, static_cast<int>(n)});
        labels.push_back(label);
    }
    if (points.empty()) throw data_error("pool cache: empty pool");
    return make_sample_set(std::move(points), std::move(labels));
}

}  // namespace speclearn

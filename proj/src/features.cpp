#include "speclearn/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <unordered_set>

namespace speclearn {

namespace {

// Packs one sample column as a bitset (bit i set <=> entry i is -1),
// canonicalized so the first entry is +1. Two columns are equal up to a
// global sign iff their canonical forms coincide.
std::string canonical_column(std::uint64_t mask_bits, const Point* points, std::size_t rows) {
    const std::size_t words = (rows + 63) / 64;
    std::vector<std::uint64_t> col(words, 0);
    for (std::size_t i = 0; i < rows; ++i)
        if (detail::parity_sign(mask_bits, points[i].neg) < 0)
            col[i >> 6] |= 1ull << (i & 63);
    if (col[0] & 1) {
        for (std::uint64_t& w : col) w = ~w;
        const std::size_t tail = rows & 63;
        if (tail) col[words - 1] &= (1ull << tail) - 1;
    }
    return std::string(reinterpret_cast<const char*>(col.data()), words * sizeof(std::uint64_t));
}

}  // namespace

SelectedFeatures select_features(const SampleSet& sample, int d, int k, int jobs) {
    if (k < 1)
        throw std::invalid_argument("select_features: k must be >= 1");

    const auto masks = enumerate_low_degree(sample.n, d);
    const auto corr = correlate(sample, masks, jobs);

    std::vector<std::uint32_t> order(masks.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const double fa = std::fabs(corr[a]);
        const double fb = std::fabs(corr[b]);
        if (fa != fb) return fa > fb;
        return a < b;  // enumeration order: ascending weight, then mask value
    });

    const std::size_t rows = sample.size();
    const Point* points = sample.points.data();
    std::unordered_set<std::string> seen;
    std::vector<std::uint32_t> admitted;
    admitted.reserve(k);
    for (std::uint32_t idx : order) {
        if (seen.insert(canonical_column(masks[idx].bits, points, rows)).second) {
            admitted.push_back(idx);
            if (admitted.size() == static_cast<std::size_t>(k)) break;
        }
    }
    if (admitted.size() < static_cast<std::size_t>(k))
        throw selection_exhausted("select_features: only " + std::to_string(admitted.size()) +
                                  " sign-distinct columns over this sample, need " +
                                  std::to_string(k));

    SelectedFeatures out;
    out.rows = rows;
    out.masks.reserve(k);
    for (std::uint32_t idx : admitted) out.masks.push_back(masks[idx]);
    out.design = build_design(sample.points, out.masks);
    return out;
}

std::vector<std::int8_t> build_design(std::span<const Point> points,
                                      std::span<const ParityMask> masks) {
    for (const ParityMask& m : masks)
        if (!points.empty() && m.n != points.front().n)
            throw std::invalid_argument("build_design: dimension mismatch");
    std::vector<std::int8_t> design(points.size() * masks.size());
    std::size_t pos = 0;
    for (const Point& p : points)
        for (const ParityMask& m : masks)
            design[pos++] = static_cast<std::int8_t>(detail::parity_sign(m.bits, p.neg));
    return design;
}

}  // namespace speclearn

#include "speclearn/wht.hpp"

#include <algorithm>
#include <functional>
#include <thread>

namespace speclearn {

namespace {

constexpr std::size_t kMaxTransformLength = 1ull << 26;

// Smallest-to-largest masks of one Hamming weight (Gosper's hack).
std::uint64_t next_same_weight(std::uint64_t v) {
    const std::uint64_t c = v & (~v + 1);
    const std::uint64_t r = v + c;
    return (((v ^ r) >> 2) / c) | r;
}

void for_ranges(std::size_t count, int jobs, const std::function<void(std::size_t, std::size_t)>& fn) {
    if (jobs <= 1 || count < 2) {
        fn(0, count);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(jobs, count);
    const std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(fn, lo, hi);
    }
    for (auto& t : pool) t.join();
}

}  // namespace

void fwht(std::span<double> values) {
    const std::size_t len = values.size();
    if (len == 0 || (len & (len - 1)) != 0)
        throw std::invalid_argument("fwht: length must be a nonzero power of two");
    if (len > kMaxTransformLength)
        throw std::invalid_argument("fwht: length exceeds 2^26");
    for (std::size_t h = 1; h < len; h <<= 1) {
        for (std::size_t i = 0; i < len; i += h << 1) {
            for (std::size_t j = i; j < i + h; ++j) {
                const double a = values[j];
                const double b = values[j + h];
                values[j] = a + b;
                values[j + h] = a - b;
            }
        }
    }
}

DenseSpectrum fwht_copy(DenseSpectrum values) {
    fwht(values);
    return values;
}

int parity_eval(const ParityMask& mask, const Point& x) {
    if (mask.n != x.n)
        throw std::invalid_argument("parity_eval: dimension mismatch");
    return detail::parity_sign(mask.bits, x.neg);
}

std::vector<ParityMask> enumerate_low_degree(int n, int d) {
    if (n < 1 || n > kMaxDimension)
        throw std::invalid_argument("enumerate_low_degree: bad dimension " + std::to_string(n));
    if (d < 0 || d > n)
        throw std::invalid_argument("enumerate_low_degree: need 0 <= d <= n");

    long double total = 0.0L, binom = 1.0L;
    for (int w = 0; w <= d; ++w) {
        total += binom;
        binom = binom * (n - w) / (w + 1);
    }
    if (total > static_cast<long double>(1ull << 27))
        throw std::invalid_argument("enumerate_low_degree: too many masks to materialize");

    std::vector<ParityMask> masks;
    masks.reserve(static_cast<std::size_t>(total));
    masks.push_back({0, n});
    for (int w = 1; w <= d; ++w) {
        std::uint64_t v = dimension_mask(w);
        const std::uint64_t top = dimension_mask(w) << (n - w);
        while (true) {
            masks.push_back({v, n});
            if (v == top) break;
            v = next_same_weight(v);
        }
    }
    return masks;
}

std::vector<double> correlate(const SampleSet& sample, std::span<const ParityMask> masks,
                              int jobs) {
    if (sample.size() == 0)
        throw std::invalid_argument("correlate: empty sample");
    for (const ParityMask& m : masks)
        if (m.n != sample.n)
            throw std::invalid_argument("correlate: mask dimension mismatch");

    std::vector<double> out(masks.size());
    const Point* points = sample.points.data();
    const std::int8_t* labels = sample.labels.data();
    const std::size_t rows = sample.size();
    for_ranges(masks.size(), jobs, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t t = lo; t < hi; ++t) {
            const std::uint64_t bits = masks[t].bits;
            long long acc = 0;
            for (std::size_t i = 0; i < rows; ++i) {
                const int sign = detail::parity_sign(bits, points[i].neg);
                acc += sign * labels[i];
            }
            out[t] = static_cast<double>(acc);
        }
    });
    return out;
}

}  // namespace speclearn

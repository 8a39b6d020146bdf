#pragma once

#include <bit>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace speclearn {

/// Unusable input files or datasets (bad magic, truncation, exhausted pools).
struct data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Non-finite values or an empty radicand where a number was required.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Feature selection ran out of sign-distinct columns before reaching k.
struct selection_exhausted : data_error {
    using data_error::data_error;
};

// Masks and points are packed into one machine word, so n <= 64.
inline constexpr int kMaxDimension = 64;

inline std::uint64_t dimension_mask(int n) {
    return n >= 64 ? ~0ull : (1ull << n) - 1;
}

// SplitMix64 finalizer; used wherever seeds are derived from other seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ splitmix64(b + 0x632be59bd9b4e019ull));
}

/// Index subset S of [n] naming one Fourier character: bit j set <=> j in S.
struct ParityMask {
    std::uint64_t bits = 0;
    int n = 0;

    int weight() const { return std::popcount(bits); }
    bool operator==(const ParityMask&) const = default;
};

ParityMask make_mask(std::uint64_t bits, int n);

/// Vertex of {+-1}^n; bit j of `neg` is set iff coordinate j equals -1.
struct Point {
    std::uint64_t neg = 0;
    int n = 0;

    int coord(int j) const { return (neg >> j) & 1u ? -1 : +1; }
    bool operator==(const Point&) const = default;
};

Point make_point(std::uint64_t neg_bits, int n);
Point point_from_signs(std::span<const int> signs);

struct SampleSet {
    std::vector<Point> points;
    std::vector<std::int8_t> labels;  // +-1, one per point
    int n = 0;

    std::size_t size() const { return points.size(); }
};

SampleSet make_sample_set(std::vector<Point> points, std::vector<std::int8_t> labels);

struct Term {
    ParityMask mask;
    double coeff = 0.0;
};

/// k-term multilinear +-1 polynomial; the classifier is its sign.
struct SparseClassifier {
    std::vector<Term> terms;
    int n = 0;
};

/// Validates: k >= 1, masks pairwise distinct and within dimension, finite coefficients.
SparseClassifier make_classifier(std::vector<Term> terms, int n);

/// sign(sum_i a_i prod_{j in S_i} x_j), with sign(0) := +1.
int evaluate(const SparseClassifier& f, const Point& x);

/// Fraction of disagreeing entries between two +-1 label lists.
double empirical_risk(std::span<const std::int8_t> predicted, std::span<const std::int8_t> actual);

// Text format: header "n k", then k lines "mask_hex coefficient".
// Coefficients are printed with 17 significant digits so the round trip is exact.
void write_classifier(std::ostream& out, const SparseClassifier& f);
SparseClassifier read_classifier(std::istream& in);
void save_classifier(const std::string& path, const SparseClassifier& f);
SparseClassifier load_classifier(const std::string& path);

}  // namespace speclearn

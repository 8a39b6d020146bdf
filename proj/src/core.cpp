#include "speclearn/core.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace speclearn {

namespace {

void check_dimension(int n) {
    if (n < 1 || n > kMaxDimension)
        throw std::invalid_argument("dimension must be in [1, " + std::to_string(kMaxDimension) +
                                    "], got " + std::to_string(n));
}

}  // namespace

ParityMask make_mask(std::uint64_t bits, int n) {
    check_dimension(n);
    if (bits & ~dimension_mask(n))
        throw std::invalid_argument("mask bits exceed dimension " + std::to_string(n));
    return {bits, n};
}

Point make_point(std::uint64_t neg_bits, int n) {
    check_dimension(n);
    if (neg_bits & ~dimension_mask(n))
        throw std::invalid_argument("point bits exceed dimension " + std::to_string(n));
    return {neg_bits, n};
}

Point point_from_signs(std::span<const int> signs) {
    check_dimension(static_cast<int>(signs.size()));
    std::uint64_t neg = 0;
    for (std::size_t j = 0; j < signs.size(); ++j) {
        if (signs[j] == -1)
            neg |= 1ull << j;
        else if (signs[j] != 1)
            throw std::invalid_argument("point coordinates must be +1 or -1");
    }
    return {neg, static_cast<int>(signs.size())};
}

SampleSet make_sample_set(std::vector<Point> points, std::vector<std::int8_t> labels) {
    if (points.empty())
        throw std::invalid_argument("sample set must contain at least one point");
    if (points.size() != labels.size())
        throw std::invalid_argument("points and labels differ in length");
    const int n = points.front().n;
    for (const Point& p : points)
        if (p.n != n) throw std::invalid_argument("sample points have mixed dimensions");
    for (std::int8_t y : labels)
        if (y != 1 && y != -1) throw std::invalid_argument("labels must be +1 or -1");
    return {std::move(points), std::move(labels), n};
}

SparseClassifier make_classifier(std::vector<Term> terms, int n) {
    check_dimension(n);
    if (terms.empty())
        throw std::invalid_argument("classifier needs at least one term");
    std::unordered_set<std::uint64_t> seen;
    for (const Term& t : terms) {
        if (t.mask.n != n)
            throw std::invalid_argument("term mask dimension mismatch");
        if (t.mask.bits & ~dimension_mask(n))
            throw std::invalid_argument("term mask bits exceed dimension");
        if (!std::isfinite(t.coeff))
            throw std::invalid_argument("term coefficient must be finite");
        if (!seen.insert(t.mask.bits).second)
            throw std::invalid_argument("classifier masks must be pairwise distinct");
    }
    return {std::move(terms), n};
}

int evaluate(const SparseClassifier& f, const Point& x) {
    if (x.n != f.n)
        throw std::invalid_argument("evaluate: point dimension " + std::to_string(x.n) +
                                    " does not match classifier dimension " + std::to_string(f.n));
    double sum = 0.0;
    for (const Term& t : f.terms)
        sum += (std::popcount(t.mask.bits & x.neg) & 1) ? -t.coeff : t.coeff;
    return sum < 0.0 ? -1 : +1;  // sign(0) := +1
}

double empirical_risk(std::span<const std::int8_t> predicted, std::span<const std::int8_t> actual) {
    if (predicted.size() != actual.size())
        throw std::invalid_argument("empirical_risk: length mismatch");
    if (predicted.empty())
        throw std::invalid_argument("empirical_risk: empty lists");
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] != actual[i]) ++mismatches;
    return static_cast<double>(mismatches) / static_cast<double>(predicted.size());
}

void write_classifier(std::ostream& out, const SparseClassifier& f) {
    out << f.n << ' ' << f.terms.size() << '\n';
    char line[80];
    for (const Term& t : f.terms) {
        std::snprintf(line, sizeof line, "%llx %.17g",
                      static_cast<unsigned long long>(t.mask.bits), t.coeff);
        out << line << '\n';
    }
    if (!out) throw data_error("classifier write failed");
}

SparseClassifier read_classifier(std::istream& in) {
    int n = 0;
    std::size_t k = 0;
    if (!(in >> n >> k))
        throw data_error("classifier header: expected \"n k\"");
    if (k == 0)
        throw data_error("classifier header: k must be >= 1");
    std::vector<Term> terms;
    terms.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::string mask_hex, coeff_text;
        if (!(in >> mask_hex >> coeff_text))
            throw data_error("classifier body: truncated at term " + std::to_string(i));
        char* end = nullptr;
        errno = 0;
        const std::uint64_t bits = std::strtoull(mask_hex.c_str(), &end, 16);
        if (errno != 0 || end == mask_hex.c_str() || *end != '\0')
            throw data_error("classifier body: bad mask \"" + mask_hex + "\"");
        errno = 0;
        const double coeff = std::strtod(coeff_text.c_str(), &end);
        if (end == coeff_text.c_str() || *end != '\0')
            throw data_error("classifier body: bad coefficient \"" + coeff_text + "\"");
        try {
            terms.push_back({make_mask(bits, n), coeff});
        } catch (const std::invalid_argument& e) {
            throw data_error(std::string("classifier body: ") + e.what());
        }
    }
    try {
        return make_classifier(std::move(terms), n);
    } catch (const std::invalid_argument& e) {
        throw data_error(std::string("classifier invariants violated: ") + e.what());
    }
}

void save_classifier(const std::string& path, const SparseClassifier& f) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot open for writing: " + path);
    write_classifier(out, f);
}

SparseClassifier load_classifier(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open: " + path);
    return read_classifier(in);
}

}  // namespace speclearn

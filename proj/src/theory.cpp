#include "speclearn/theory.hpp"

#include "speclearn/wht.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <unordered_set>

namespace speclearn {

namespace {

void validate(const BoundParams& p) {
    if (!(p.h > 0.0)) throw std::invalid_argument("vc_bound_term: h must be positive");
    if (p.ell < 1) throw std::invalid_argument("vc_bound_term: ell must be >= 1");
    if (!(p.eta > 0.0 && p.eta < 1.0))
        throw std::invalid_argument("vc_bound_term: eta must be in (0, 1)");
}

}  // namespace

bool bound_params_recommended(const BoundParams& p) {
    validate(p);
    return static_cast<double>(p.ell) >= p.h;
}

double vc_bound_term(const BoundParams& p) {
    validate(p);
    const double ell = static_cast<double>(p.ell);
    const double radicand = (p.h * (std::log(2.0 * ell / p.h) + 1.0) - std::log(p.eta / 4.0)) / ell;
    if (!(radicand > 0.0))
        throw numeric_error("vc_bound_term: nonpositive radicand for h=" + std::to_string(p.h) +
                            " ell=" + std::to_string(p.ell));
    return std::sqrt(radicand);
}

bool verify_shattering_construction(int n) {
    if (n < 1 || n > 20)
        throw std::invalid_argument("verify_shattering_construction: n must be in [1, 20]");
    std::vector<Point> points;
    points.reserve(n);
    for (int i = 0; i < n; ++i)
        points.push_back(make_point(1ull << i, n));  // +1 everywhere except coordinate i

    const std::uint64_t patterns = 1ull << n;
    std::unordered_set<std::uint64_t> realized;
    realized.reserve(patterns);
    for (std::uint64_t u = 0; u < patterns; ++u) {
        const ParityMask mask = make_mask(u, n);
        std::uint64_t labeling = 0;
        for (int i = 0; i < n; ++i)
            if (parity_eval(mask, points[i]) < 0) labeling |= 1ull << i;
        realized.insert(labeling);
    }
    return realized.size() == patterns;
}

std::size_t sample_class_size(int n, int k, int trials, std::uint64_t seed) {
    if (n < 1 || n > 6)
        throw std::invalid_argument("sample_class_size: n must be in [1, 6]");
    const std::size_t dim = std::size_t(1) << n;
    if (k < 1 || static_cast<std::size_t>(k) > dim)
        throw std::invalid_argument("sample_class_size: k out of range");
    if (trials < 1)
        throw std::invalid_argument("sample_class_size: trials must be >= 1");

    std::unordered_set<std::uint64_t> patterns;
    std::vector<std::uint32_t> support(dim);
    std::vector<double> spectrum(dim);
    for (int trial = 0; trial < trials; ++trial) {
        std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(trial)));
        std::iota(support.begin(), support.end(), 0u);
        for (int i = 0; i < k; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, dim - 1);
            std::swap(support[i], support[pick(rng)]);
        }
        std::fill(spectrum.begin(), spectrum.end(), 0.0);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int i = 0; i < k; ++i) spectrum[support[i]] = gauss(rng);
        fwht(spectrum);
        std::uint64_t pattern = 0;
        for (std::size_t v = 0; v < dim; ++v)
            if (spectrum[v] < 0.0) pattern |= 1ull << v;  // sign(0) := +1
        patterns.insert(pattern);
    }
    return patterns.size();
}

}  // namespace speclearn

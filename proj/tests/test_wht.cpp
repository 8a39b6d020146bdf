#include "doctest.h"

#include "speclearn/wht.hpp"

#include "oracles.hpp"

#include <cmath>
#include <random>
#include <set>

using namespace speclearn;

namespace {

SampleSet random_sample(std::mt19937_64& rng, int n, std::size_t ell) {
    std::vector<Point> points;
    std::vector<std::int8_t> labels;
    for (std::size_t i = 0; i < ell; ++i) {
        points.push_back(make_point(rng() & dimension_mask(n), n));
        labels.push_back(rng() & 1 ? 1 : -1);
    }
    return make_sample_set(std::move(points), std::move(labels));
}

// Pascal-triangle binomial sums, independent of the enumeration code.
std::size_t count_low_degree(int n, int d) {
    std::vector<std::vector<std::size_t>> binom(n + 1, std::vector<std::size_t>(n + 1, 0));
    for (int i = 0; i <= n; ++i) {
        binom[i][0] = 1;
        for (int j = 1; j <= i; ++j)
            binom[i][j] = binom[i - 1][j - 1] + (j <= i - 1 ? binom[i - 1][j] : 0);
    }
    std::size_t total = 0;
    for (int i = 0; i <= d; ++i) total += binom[n][i];
    return total;
}

}  // namespace

TEST_SUITE("wht") {

TEST_CASE("fwht: n=1 butterfly formula") {
    DenseSpectrum v{3.0, 5.0};
    fwht(v);
    CHECK(v[0] == 8.0);
    CHECK(v[1] == -2.0);
}

TEST_CASE("fwht: delta at index 0 spreads to all ones") {
    DenseSpectrum v(8, 0.0);
    v[0] = 1.0;
    fwht(v);
    for (double x : v) CHECK(x == 1.0);
}

TEST_CASE("fwht: involution up to 2^n") {
    std::mt19937_64 rng(5);
    DenseSpectrum v(8);
    for (double& x : v) x = std::uniform_real_distribution<double>(-1, 1)(rng);
    DenseSpectrum twice = fwht_copy(fwht_copy(v));
    for (std::size_t i = 0; i < v.size(); ++i)
        CHECK(twice[i] == doctest::Approx(8.0 * v[i]).epsilon(1e-12));
}

TEST_CASE("fwht: matches the dense matrix oracle") {
    std::mt19937_64 rng(17);
    for (int n = 1; n <= 6; ++n) {
        const auto w = oracles::dense_w_matrix(n);
        const std::size_t dim = std::size_t(1) << n;
        DenseSpectrum z(dim);
        for (double& x : z) x = std::uniform_real_distribution<double>(-2, 2)(rng);
        const DenseSpectrum transformed = fwht_copy(z);
        for (std::size_t v = 0; v < dim; ++v) {
            double expected = 0.0;
            for (std::size_t u = 0; u < dim; ++u) expected += w[v][u] * z[u];
            CHECK(transformed[v] == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("fwht: linearity and Parseval") {
    std::mt19937_64 rng(23);
    for (int round = 0; round < 20; ++round) {
        const int n = 1 + static_cast<int>(rng() % 8);
        const std::size_t dim = std::size_t(1) << n;
        DenseSpectrum u(dim), v(dim), combo(dim);
        std::uniform_real_distribution<double> unit(-1, 1);
        const double a = unit(rng), b = unit(rng);
        for (std::size_t i = 0; i < dim; ++i) {
            u[i] = unit(rng);
            v[i] = unit(rng);
            combo[i] = a * u[i] + b * v[i];
        }
        const DenseSpectrum fu = fwht_copy(u), fv = fwht_copy(v), fc = fwht_copy(combo);
        double in_energy = 0.0, out_energy = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            CHECK(fc[i] == doctest::Approx(a * fu[i] + b * fv[i]).epsilon(1e-9));
            in_energy += u[i] * u[i];
            out_energy += fu[i] * fu[i];
        }
        CHECK(out_energy == doctest::Approx(dim * in_energy).epsilon(1e-9));
    }
}

TEST_CASE("fwht: rejects non-power-of-two lengths") {
    DenseSpectrum v(6, 1.0);
    CHECK_THROWS_AS(fwht(v), std::invalid_argument);
    DenseSpectrum empty;
    CHECK_THROWS_AS(fwht(empty), std::invalid_argument);
}

TEST_CASE("parity_eval: empty set, full set, explicit pair") {
    const Point x = point_from_signs(std::vector<int>{-1, 1, -1});
    CHECK(parity_eval(make_mask(0, 3), x) == 1);
    CHECK(parity_eval(make_mask(0b11, 2), point_from_signs(std::vector<int>{-1, -1})) == 1);
    CHECK(parity_eval(make_mask(0b101, 3), x) == 1);  // (-1)*(-1)
    CHECK_THROWS_AS(parity_eval(make_mask(1, 4), x), std::invalid_argument);
}

TEST_CASE("parity_eval: agrees with the coordinate-product oracle") {
    std::mt19937_64 rng(29);
    for (int round = 0; round < 200; ++round) {
        const int n = 1 + static_cast<int>(rng() % 16);
        const Point x = make_point(rng() & dimension_mask(n), n);
        const ParityMask m = make_mask(rng() & dimension_mask(n), n);
        CHECK(parity_eval(m, x) == oracles::column_entry(m.bits, x));
    }
}

TEST_CASE("enumerate_low_degree: counts") {
    CHECK(enumerate_low_degree(3, 0).size() == 1);
    CHECK(enumerate_low_degree(3, 1).size() == 4);
    CHECK(enumerate_low_degree(25, 3).size() == 2626);  // 1 + 25 + 300 + 2300
    CHECK(enumerate_low_degree(25, 3).size() == count_low_degree(25, 3));
    CHECK_THROWS_AS(enumerate_low_degree(3, 4), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_low_degree(3, -1), std::invalid_argument);
}

TEST_CASE("enumerate_low_degree: order and uniqueness") {
    std::mt19937_64 rng(31);
    for (int round = 0; round < 10; ++round) {
        const int n = 2 + static_cast<int>(rng() % 12);
        const int d = static_cast<int>(rng() % (n + 1));
        const auto masks = enumerate_low_degree(n, d);
        CHECK(masks.size() == count_low_degree(n, d));
        std::set<std::uint64_t> unique;
        for (std::size_t i = 0; i < masks.size(); ++i) {
            CHECK(masks[i].weight() <= d);
            unique.insert(masks[i].bits);
            if (i > 0) {
                const bool ordered =
                    masks[i - 1].weight() < masks[i].weight() ||
                    (masks[i - 1].weight() == masks[i].weight() && masks[i - 1].bits < masks[i].bits);
                CHECK(ordered);
            }
        }
        CHECK(unique.size() == masks.size());
    }
}

TEST_CASE("correlate: perfect correlation and constant column") {
    std::mt19937_64 rng(37);
    const int n = 6;
    const ParityMask target = make_mask(0b101, n);
    std::vector<Point> points;
    std::vector<std::int8_t> labels;
    for (int i = 0; i < 40; ++i) {
        const Point x = make_point(rng() & dimension_mask(n), n);
        points.push_back(x);
        labels.push_back(static_cast<std::int8_t>(parity_eval(target, x)));
    }
    const auto sample = make_sample_set(points, labels);
    const std::vector<ParityMask> masks{target, make_mask(0, n)};
    const auto corr = correlate(sample, masks);
    CHECK(corr[0] == 40.0);
    long long label_sum = 0;
    for (std::int8_t y : labels) label_sum += y;
    CHECK(corr[1] == static_cast<double>(label_sum));
}

TEST_CASE("correlate: equals the dense-oracle product, integer-valued") {
    std::mt19937_64 rng(41);
    const auto sample = random_sample(rng, 8, 40);
    const auto masks = enumerate_low_degree(8, 2);
    const auto corr = correlate(sample, masks);
    REQUIRE(corr.size() == masks.size());
    for (std::size_t t = 0; t < masks.size(); ++t) {
        CHECK(corr[t] == static_cast<double>(oracles::correlate_entry(masks[t].bits, sample)));
        CHECK(std::fabs(corr[t]) <= static_cast<double>(sample.size()));
        CHECK(corr[t] == std::floor(corr[t]));
    }
}

TEST_CASE("correlate: bitwise identical across worker counts") {
    std::mt19937_64 rng(43);
    const auto sample = random_sample(rng, 10, 77);
    const auto masks = enumerate_low_degree(10, 3);
    const auto sequential = correlate(sample, masks, 1);
    for (int jobs : {2, 3, 8}) {
        const auto parallel = correlate(sample, masks, jobs);
        CHECK(parallel == sequential);
    }
}

TEST_CASE("correlate: empty sample is rejected") {
    const auto masks = enumerate_low_degree(4, 1);
    SampleSet empty;
    empty.n = 4;
    CHECK_THROWS_AS(correlate(empty, masks), std::invalid_argument);
}

}  // TEST_SUITE

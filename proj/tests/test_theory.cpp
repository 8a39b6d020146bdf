#include "doctest.h"

#include "speclearn/theory.hpp"

#include "oracles.hpp"

#include <cmath>

using namespace speclearn;

namespace {

// Binomial via Pascal's triangle in double (small arguments only).
double binom(int a, int b) {
    if (b < 0 || b > a) return 0.0;
    double value = 1.0;
    for (int i = 0; i < b; ++i) value = value * (a - i) / (i + 1);
    return value;
}

}  // namespace

TEST_SUITE("theory") {

TEST_CASE("vc_bound_term: frozen hand evaluation") {
    // h=1, ell=2, eta=1 is outside (0,1); push eta toward 1 and compare with
    // the independently evaluated closed form.
    const double expected = std::sqrt((std::log(4.0) + 1.0 + std::log(4.0)) / 2.0);
    CHECK(expected == doctest::Approx(1.3734243).epsilon(1e-6));
    const double got = vc_bound_term({1.0, 2, 0.9999999999});
    CHECK(got == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("vc_bound_term: quadrupling ell strictly shrinks the term") {
    const BoundParams base{25.0, 400, 0.05};
    const BoundParams bigger{25.0, 1600, 0.05};
    CHECK(vc_bound_term(bigger) < vc_bound_term(base));
}

TEST_CASE("vc_bound_term: monotone on a 20x20 recommended-regime grid") {
    const double eta = 0.05;
    std::vector<double> hs, ells;
    for (int i = 1; i <= 20; ++i) hs.push_back(10.0 * i);
    for (int j = 1; j <= 20; ++j) ells.push_back(200.0 * j);
    for (double h : hs) {
        for (std::size_t j = 0; j + 1 < ells.size(); ++j) {
            const double a = vc_bound_term({h, static_cast<long long>(ells[j]), eta});
            const double b = vc_bound_term({h, static_cast<long long>(ells[j + 1]), eta});
            CHECK(b <= a + 1e-12);  // nonincreasing in ell
        }
    }
    for (double ell : ells) {
        for (std::size_t i = 0; i + 1 < hs.size(); ++i) {
            const double a = vc_bound_term({hs[i], static_cast<long long>(ell), eta});
            const double b = vc_bound_term({hs[i + 1], static_cast<long long>(ell), eta});
            CHECK(b >= a - 1e-12);  // nondecreasing in h
        }
    }
}

TEST_CASE("vc_bound_term: validation and recommendation flag") {
    CHECK_THROWS_AS(vc_bound_term({0.0, 10, 0.05}), std::invalid_argument);
    CHECK_THROWS_AS(vc_bound_term({1.0, 0, 0.05}), std::invalid_argument);
    CHECK_THROWS_AS(vc_bound_term({1.0, 10, 1.5}), std::invalid_argument);
    // degenerate h >> ell drives the radicand nonpositive
    CHECK_THROWS_AS(vc_bound_term({1e6, 10, 0.05}), numeric_error);
    CHECK(bound_params_recommended({10.0, 100, 0.05}));
    CHECK(!bound_params_recommended({200.0, 100, 0.05}));
}

TEST_CASE("shattering construction holds for n = 2, 3, 4") {
    CHECK(verify_shattering_construction(2));
    CHECK(verify_shattering_construction(3));
    CHECK(verify_shattering_construction(4));
}

TEST_CASE("sample_class_size: 1-sparse patterns at n=2 are the signed columns") {
    // only +-columns of W are reachable, so the count can never exceed 8 and
    // a long run finds all of them
    CHECK(sample_class_size(2, 1, 2000, 12345) == 8);
    CHECK(sample_class_size(2, 1, 3, 1) <= 8);
}

TEST_CASE("sample_class_size: full support at n=2 reaches 14..16 patterns") {
    const int feasible = oracles::orthant_feasible_count_n2_full_support();
    CHECK(feasible == 16);
    const std::size_t sampled = sample_class_size(2, 4, 4000, 99);
    CHECK(sampled >= 14);
    CHECK(sampled <= static_cast<std::size_t>(feasible));
}

TEST_CASE("sample_class_size: counting consistency bounds") {
    for (int n : {2, 3}) {
        for (int k : {1, 2}) {
            const std::size_t count = sample_class_size(n, k, 1500, 7);
            const double upper = binom(1 << (n + 1), k) * binom(1 << (n + 1), k);
            CHECK(static_cast<double>(count) <= upper);
            CHECK(std::log2(static_cast<double>(count)) <= 2.0 * n * k);
        }
    }
}

TEST_CASE("sample_class_size: deterministic in the seed") {
    CHECK(sample_class_size(3, 2, 500, 42) == sample_class_size(3, 2, 500, 42));
    CHECK_THROWS_AS(sample_class_size(9, 1, 10, 0), std::invalid_argument);
    CHECK_THROWS_AS(sample_class_size(2, 0, 10, 0), std::invalid_argument);
}

}  // TEST_SUITE

#pragma once

#include "speclearn/core.hpp"

namespace speclearn {

struct BoundParams {
    double h = 1.0;      // VC dimension estimate, > 0
    long long ell = 1;   // sample size, >= 1
    double eta = 0.05;   // confidence parameter in (0, 1)
};

/// True when ell >= h, the regime the bound is meant for; callers may warn
/// otherwise.
bool bound_params_recommended(const BoundParams& p);

/// sqrt((h (ln(2 ell / h) + 1) - ln(eta / 4)) / ell), natural logarithm.
double vc_bound_term(const BoundParams& p);

/// Builds the n canonical points (all coordinates +1 except one flipped) and
/// checks that the 1-sparse classifiers sign(W e_u), u in Z_2^n, realize all
/// 2^n labelings on them.
bool verify_shattering_construction(int n);

/// Draws `trials` random k-sparse spectra (support uniform, coefficients
/// standard normal) and counts distinct sign(Wz) patterns: a Monte Carlo
/// lower bound on |C_{n,k}|. Per-trial seeds derive from `seed` by counter.
std::size_t sample_class_size(int n, int k, int trials, std::uint64_t seed);

}  // namespace speclearn

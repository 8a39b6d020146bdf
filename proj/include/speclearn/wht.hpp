#pragma once

#include "speclearn/core.hpp"

namespace speclearn {

/// Length-2^n real vector indexed by mask integer u.
using DenseSpectrum = std::vector<double>;

namespace detail {
// Unchecked character evaluation on packed bits.
inline int parity_sign(std::uint64_t mask_bits, std::uint64_t neg_bits) {
    return (std::popcount(mask_bits & neg_bits) & 1) ? -1 : +1;
}
}  // namespace detail

// In-place unnormalized Walsh-Hadamard butterfly, O(n 2^n). W W = 2^n I,
// so callers divide by 2^n to invert. Exact for integer inputs within 53 bits.
void fwht(std::span<double> values);
DenseSpectrum fwht_copy(DenseSpectrum values);

/// prod_{j in S_u} x_j; the empty product is +1.
int parity_eval(const ParityMask& mask, const Point& x);

/// All masks of Hamming weight <= d, ordered by ascending weight then
/// ascending numeric value. The order is fixed so downstream tie-breaking
/// is deterministic.
std::vector<ParityMask> enumerate_low_degree(int n, int d);

/// Entry t = sum_i label_i * parity_eval(masks[t], x_i): the mask-t entry of
/// W_{x,d}^T f_x computed without materializing the matrix. Integer-valued,
/// |entry| <= sample size. `jobs` partitions masks across threads; every
/// entry is an independent integer sum, so output is identical for any jobs.
std::vector<double> correlate(const SampleSet& sample, std::span<const ParityMask> masks,
                              int jobs = 1);

}  // namespace speclearn

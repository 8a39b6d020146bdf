#pragma once

#include "speclearn/wht.hpp"

namespace speclearn {

/// Masks admitted by correlation screening plus their +-1 columns over the
/// training sample. Columns are pairwise distinct up to a global sign flip
/// over the sample (not over the whole cube).
struct SelectedFeatures {
    std::vector<ParityMask> masks;
    std::vector<std::int8_t> design;  // row-major, rows x masks.size()
    std::size_t rows = 0;

    std::size_t count() const { return masks.size(); }
    std::int8_t at(std::size_t row, std::size_t col) const {
        return design[row * masks.size() + col];
    }
};

/// Screens all weight-<=d masks by |correlation| with the labels (descending,
/// ties broken by enumeration order) and greedily admits masks whose sample
/// column is not +- any previously admitted column. Throws selection_exhausted
/// when fewer than k sign-distinct columns exist over this sample.
SelectedFeatures select_features(const SampleSet& sample, int d, int k, int jobs = 1);

/// Row-major +-1 design columns of `masks` over arbitrary points.
std::vector<std::int8_t> build_design(std::span<const Point> points,
                                      std::span<const ParityMask> masks);

}  // namespace speclearn

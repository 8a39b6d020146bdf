#pragma once

#include "speclearn/svm.hpp"

namespace speclearn {

/// Pool points split by label. Each point remembers its index in the
/// ingested dataset order so misclassified items can be identified later.
struct ClassPools {
    std::vector<Point> neg, pos;
    std::vector<std::uint32_t> neg_index, pos_index;
    int n = 0;
};

ClassPools split_by_class(const SampleSet& pool);

struct SweepConfig {
    std::vector<int> k_values;  // defaults to 10, 20, ..., 280
    int trials_per_k = 10;
    int train_per_class = 1500;
    int test_per_class = 2500;
    int d = 3;
    double tau = 1000.0;
    std::uint64_t root_seed = 0;
    int jobs = 1;
    bool record_timing = true;

    SweepConfig();
};

struct SweepRecord {
    int k = 0;
    int trial = 0;
    double train_error = 0.0;
    double test_error = 0.0;
    double wall_seconds = 0.0;
};

struct SweepSummary {
    int k = 0;
    double mean_test = 0.0;
    double std_test = 0.0;   // sample standard deviation (one error bar)
    double mean_train = 0.0;
    double mean_gap = 0.0;   // mean(test - train), the generalization-gap proxy
    double bound_term = 0.0; // vc_bound_term at h = 2 n k, eta = 0.05
};

struct SweepResult {
    std::vector<SweepRecord> records;   // sorted by (k, trial)
    std::vector<SweepSummary> summary;  // one row per k
};

/// Per-(k, trial) seed so trials are independent and reorderable.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t k, std::uint64_t trial);

/// One seeded experiment: draw disjoint train/test splits without
/// replacement, select k features at degree d, train, evaluate both sets.
SweepRecord run_trial(const ClassPools& pools, int k, int trial, const SweepConfig& cfg);

SweepResult run_sweep(const ClassPools& pools, const SweepConfig& cfg);

struct FinalConfig {
    int k = 150;
    int d = 3;
    double tau = 1000.0;
    int train_per_class = 4000;
    int test_per_class = 1900;
    std::uint64_t seed = 0;
    int jobs = 1;
};

struct Misclassified {
    std::uint32_t dataset_index = 0;
    std::int8_t true_label = 0;
};

struct FinalReport {
    FinalConfig config;
    std::size_t train_size = 0, test_size = 0;
    double train_error = 0.0, test_error = 0.0;
    double objective = 0.0;
    int epochs_used = 0;
    bool converged = false;
    double wall_seconds = 0.0;
    std::vector<Misclassified> misclassified;  // test items the classifier got wrong
    SparseClassifier classifier;
};

FinalReport run_final(const ClassPools& pools, const FinalConfig& cfg);

struct PlantedInstance {
    SampleSet sample;
    SparseClassifier truth;
};

/// k distinct masks of weight <= d, coefficients uniform in +-[0.5, 1.5],
/// points uniform on {+-1}^n, labels by evaluate. Coefficient vectors that
/// produce an exact zero sum on any sampled point are redrawn.
PlantedInstance generate_planted(int n, int k, int d, std::size_t ell, std::uint64_t seed);

/// Empirical risk of evaluate() over a labeled sample.
double evaluate_error(const SparseClassifier& f, const SampleSet& sample);

// CSV / report emission; every real is printed with 6 decimal places.
void write_sweep_csv(const std::string& path, std::span<const SweepRecord> records);
void write_summary_csv(const std::string& path, std::span<const SweepSummary> summary);
void write_final_report(const std::string& path, const FinalReport& report);

}  // namespace speclearn

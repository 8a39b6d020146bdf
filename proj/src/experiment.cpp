#include "speclearn/experiment.hpp"

#include "speclearn/theory.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

namespace speclearn {

namespace {

constexpr double kBoundEta = 0.05;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// First `need` entries of a partial Fisher-Yates shuffle of [0, size).
std::vector<std::uint32_t> draw_without_replacement(std::mt19937_64& rng, std::size_t size,
                                                    std::size_t need) {
    std::vector<std::uint32_t> idx(size);
    std::iota(idx.begin(), idx.end(), 0u);
    for (std::size_t i = 0; i < need; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, size - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(need);
    // train indices are the first train_per_class entries and test indices the
    // rest, so pairwise-distinct draws make the two sets disjoint; verified
    // here once per draw
    std::vector<bool> seen(size, false);
    for (std::uint32_t i : idx) {
        if (seen[i]) throw std::logic_error("draw_without_replacement produced a duplicate");
        seen[i] = true;
    }
    return idx;
}

struct Split {
    SampleSet train;
    SampleSet test;
    std::vector<std::uint32_t> test_dataset_index;  // ingest-order identity per test row
};

Split draw_split(const ClassPools& pools, int train_per_class, int test_per_class,
                 std::mt19937_64& rng) {
    if (train_per_class < 1) throw data_error("split: train_per_class must be >= 1");
    if (test_per_class < 1) throw data_error("split: test_per_class must be >= 1");
    const std::size_t need = std::size_t(train_per_class) + std::size_t(test_per_class);
    if (pools.neg.size() < need || pools.pos.size() < need)
        throw data_error("split: insufficient pool (need " + std::to_string(need) +
                         " per class, have " + std::to_string(pools.neg.size()) + " / " +
                         std::to_string(pools.pos.size()) + ")");

    const auto neg_idx = draw_without_replacement(rng, pools.neg.size(), need);
    const auto pos_idx = draw_without_replacement(rng, pools.pos.size(), need);

    Split out;
    std::vector<Point> train_points, test_points;
    std::vector<std::int8_t> train_labels, test_labels;
    train_points.reserve(2 * train_per_class);
    test_points.reserve(2 * test_per_class);
    for (int i = 0; i < train_per_class; ++i) {
        train_points.push_back(pools.neg[neg_idx[i]]);
        train_labels.push_back(-1);
    }
    for (int i = 0; i < train_per_class; ++i) {
        train_points.push_back(pools.pos[pos_idx[i]]);
        train_labels.push_back(+1);
    }
    for (int i = train_per_class; i < static_cast<int>(need); ++i) {
        test_points.push_back(pools.neg[neg_idx[i]]);
        test_labels.push_back(-1);
        out.test_dataset_index.push_back(pools.neg_index[neg_idx[i]]);
    }
    for (int i = train_per_class; i < static_cast<int>(need); ++i) {
        test_points.push_back(pools.pos[pos_idx[i]]);
        test_labels.push_back(+1);
        out.test_dataset_index.push_back(pools.pos_index[pos_idx[i]]);
    }
    out.train = make_sample_set(std::move(train_points), std::move(train_labels));
    out.test = make_sample_set(std::move(test_points), std::move(test_labels));
    return out;
}

SparseClassifier classifier_from(const SelectedFeatures& features,
                                 std::span<const double> weights, int n) {
    std::vector<Term> terms;
    terms.reserve(features.count());
    for (std::size_t t = 0; t < features.count(); ++t)
        terms.push_back({features.masks[t], weights[t]});
    return make_classifier(std::move(terms), n);
}

double sample_stddev(std::span<const double> values, double mean) {
    if (values.size() < 2) return 0.0;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot open for writing: " + path);
    out << body;
    if (!out) throw data_error("write failed: " + path);
}

}  // namespace

ClassPools split_by_class(const SampleSet& pool) {
    ClassPools pools;
    pools.n = pool.n;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (pool.labels[i] < 0) {
            pools.neg.push_back(pool.points[i]);
            pools.neg_index.push_back(static_cast<std::uint32_t>(i));
        } else {
            pools.pos.push_back(pool.points[i]);
            pools.pos_index.push_back(static_cast<std::uint32_t>(i));
        }
    }
    return pools;
}

SweepConfig::SweepConfig() {
    for (int k = 10; k <= 280; k += 10) k_values.push_back(k);
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t k, std::uint64_t trial) {
    return mix_seed(mix_seed(root, k), trial);
}

SweepRecord run_trial(const ClassPools& pools, int k, int trial, const SweepConfig& cfg) {
    const auto start = Clock::now();
    std::mt19937_64 rng(derive_seed(cfg.root_seed, static_cast<std::uint64_t>(k),
                                    static_cast<std::uint64_t>(trial)));
    Split split = draw_split(pools, cfg.train_per_class, cfg.test_per_class, rng);

    const SelectedFeatures features = select_features(split.train, cfg.d, k, cfg.jobs);
    TrainConfig train_cfg;
    train_cfg.tau = cfg.tau;
    train_cfg.seed = derive_seed(cfg.root_seed, static_cast<std::uint64_t>(k),
                                 static_cast<std::uint64_t>(trial));
    const TrainResult result = train(features, split.train.labels, train_cfg);
    const SparseClassifier f = classifier_from(features, result.weights, pools.n);

    SweepRecord record;
    record.k = k;
    record.trial = trial;
    record.train_error = evaluate_error(f, split.train);
    record.test_error = evaluate_error(f, split.test);
    record.wall_seconds = cfg.record_timing ? seconds_since(start) : 0.0;
    return record;
}

SweepResult run_sweep(const ClassPools& pools, const SweepConfig& cfg) {
    if (cfg.k_values.empty())
        throw std::invalid_argument("run_sweep: no k values");
    if (cfg.trials_per_k < 1)
        throw std::invalid_argument("run_sweep: trials_per_k must be >= 1");

    struct Task {
        int k;
        int trial;
    };
    std::vector<Task> tasks;
    for (int k : cfg.k_values)
        for (int trial = 0; trial < cfg.trials_per_k; ++trial) tasks.push_back({k, trial});

    std::vector<SweepRecord> records(tasks.size());
    const int workers = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(tasks.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i)
            records[i] = run_trial(pools, tasks[i].k, tasks[i].trial, cfg);
    } else {
        // Trials are independent; each worker fills preassigned slots so the
        // gathered output is identical to the sequential order.
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto body = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= tasks.size()) return;
                try {
                    records[i] = run_trial(pools, tasks[i].k, tasks[i].trial, cfg);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }
    std::sort(records.begin(), records.end(), [](const SweepRecord& a, const SweepRecord& b) {
        return a.k != b.k ? a.k < b.k : a.trial < b.trial;
    });

    SweepResult out;
    out.records = std::move(records);
    std::vector<int> ks = cfg.k_values;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    for (int k : ks) {
        std::vector<double> test_errs, train_errs, gaps;
        for (const SweepRecord& r : out.records) {
            if (r.k != k) continue;
            test_errs.push_back(r.test_error);
            train_errs.push_back(r.train_error);
            gaps.push_back(r.test_error - r.train_error);
        }
        SweepSummary s;
        s.k = k;
        const double trials = static_cast<double>(test_errs.size());
        for (double v : test_errs) s.mean_test += v;
        s.mean_test /= trials;
        for (double v : train_errs) s.mean_train += v;
        s.mean_train /= trials;
        for (double v : gaps) s.mean_gap += v;
        s.mean_gap /= trials;
        s.std_test = sample_stddev(test_errs, s.mean_test);
        s.bound_term = vc_bound_term({2.0 * pools.n * k, 2ll * cfg.train_per_class, kBoundEta});
        out.summary.push_back(s);
    }
    return out;
}

FinalReport run_final(const ClassPools& pools, const FinalConfig& cfg) {
    const auto start = Clock::now();
    std::mt19937_64 rng(splitmix64(cfg.seed));
    Split split = draw_split(pools, cfg.train_per_class, cfg.test_per_class, rng);

    const SelectedFeatures features = select_features(split.train, cfg.d, cfg.k, cfg.jobs);
    TrainConfig train_cfg;
    train_cfg.tau = cfg.tau;
    train_cfg.seed = cfg.seed;
    const TrainResult result = train(features, split.train.labels, train_cfg);

    FinalReport report;
    report.config = cfg;
    report.classifier = classifier_from(features, result.weights, pools.n);
    report.train_size = split.train.size();
    report.test_size = split.test.size();
    report.train_error = evaluate_error(report.classifier, split.train);
    report.objective = result.objective;
    report.epochs_used = result.epochs_used;
    report.converged = result.converged;

    std::size_t wrong = 0;
    for (std::size_t i = 0; i < split.test.size(); ++i) {
        if (evaluate(report.classifier, split.test.points[i]) != split.test.labels[i]) {
            report.misclassified.push_back(
                {split.test_dataset_index[i], split.test.labels[i]});
            ++wrong;
        }
    }
    report.test_error = static_cast<double>(wrong) / static_cast<double>(split.test.size());
    report.wall_seconds = seconds_since(start);
    return report;
}

PlantedInstance generate_planted(int n, int k, int d, std::size_t ell, std::uint64_t seed) {
    if (ell == 0) throw std::invalid_argument("generate_planted: ell must be >= 1");
    const auto candidates = enumerate_low_degree(n, d);
    if (k < 1 || static_cast<std::size_t>(k) > candidates.size())
        throw std::invalid_argument("generate_planted: k exceeds the number of weight-<=d masks");

    std::mt19937_64 rng(splitmix64(seed));
    const auto mask_idx = draw_without_replacement(rng, candidates.size(), k);

    std::vector<Point> points;
    points.reserve(ell);
    const std::uint64_t mask = dimension_mask(n);
    for (std::size_t i = 0; i < ell; ++i) points.push_back({rng() & mask, n});

    std::uniform_real_distribution<double> magnitude(0.5, 1.5);
    std::vector<Term> terms(k);
    std::vector<std::int8_t> labels(ell);
    for (int attempt = 0;; ++attempt) {
        if (attempt >= 1000)
            throw numeric_error("generate_planted: could not avoid zero sums");
        for (int t = 0; t < k; ++t) {
            const double a = magnitude(rng);
            terms[t] = {candidates[mask_idx[t]], (rng() & 1) ? a : -a};
        }
        bool zero_sum = false;
        for (std::size_t i = 0; i < ell; ++i) {
            double sum = 0.0;
            for (const Term& t : terms)
                sum += (std::popcount(t.mask.bits & points[i].neg) & 1) ? -t.coeff : t.coeff;
            if (sum == 0.0) {
                zero_sum = true;
                break;
            }
            labels[i] = sum < 0.0 ? -1 : +1;
        }
        if (!zero_sum) break;
    }

    PlantedInstance instance;
    instance.truth = make_classifier(std::move(terms), n);
    instance.sample = make_sample_set(std::move(points), std::move(labels));
    return instance;
}

double evaluate_error(const SparseClassifier& f, const SampleSet& sample) {
    std::vector<std::int8_t> predicted(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i)
        predicted[i] = static_cast<std::int8_t>(evaluate(f, sample.points[i]));
    return empirical_risk(predicted, sample.labels);
}

void write_sweep_csv(const std::string& path, std::span<const SweepRecord> records) {
    std::string body = "k,trial,train_error,test_error,wall_seconds\n";
    char line[160];
    for (const SweepRecord& r : records) {
        std::snprintf(line, sizeof line, "%d,%d,%.6f,%.6f,%.6f\n", r.k, r.trial, r.train_error,
                      r.test_error, r.wall_seconds);
        body += line;
    }
    write_text_file(path, body);
}

void write_summary_csv(const std::string& path, std::span<const SweepSummary> summary) {
    std::string body = "k,mean_test,std_test,mean_train,mean_gap,bound_term\n";
    char line[200];
    for (const SweepSummary& s : summary) {
        std::snprintf(line, sizeof line, "%d,%.6f,%.6f,%.6f,%.6f,%.6f\n", s.k, s.mean_test,
                      s.std_test, s.mean_train, s.mean_gap, s.bound_term);
        body += line;
    }
    write_text_file(path, body);
}

void write_final_report(const std::string& path, const FinalReport& r) {
    char buf[256];
    std::string body;
    std::snprintf(buf, sizeof buf,
                  "k %d\nd %d\ntau %.6f\nseed %llu\ntrain_size %zu\ntest_size %zu\n",
                  r.config.k, r.config.d, r.config.tau,
                  static_cast<unsigned long long>(r.config.seed), r.train_size, r.test_size);
    body += buf;
    std::snprintf(buf, sizeof buf,
                  "train_error %.6f\ntest_error %.6f\nobjective %.6f\nepochs_used %d\n"
                  "converged %d\nwall_seconds %.6f\nmisclassified_count %zu\n",
                  r.train_error, r.test_error, r.objective, r.epochs_used,
                  r.converged ? 1 : 0, r.wall_seconds, r.misclassified.size());
    body += buf;
    body += "misclassified dataset_index true_label\n";
    for (const Misclassified& m : r.misclassified) {
        std::snprintf(buf, sizeof buf, "%u %d\n", m.dataset_index, static_cast<int>(m.true_label));
        body += buf;
    }
    write_text_file(path, body);
}

}  // namespace speclearn

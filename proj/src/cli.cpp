#include "speclearn/cli.hpp"

#include "speclearn/experiment.hpp"
#include "speclearn/mnist.hpp"
#include "speclearn/theory.hpp"

#include <cstdio>
#include <iostream>
#include <random>
#include <thread>

#include "CLI11.hpp"

namespace speclearn {

namespace {

int default_jobs() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

struct DataFlags {
    std::string images, labels, cache;
    double threshold = kDefaultThreshold;
};

void add_data_flags(CLI::App* cmd, DataFlags& flags, bool cache_only_output = false) {
    cmd->add_option("--images", flags.images, "IDX image file (optionally .gz)");
    cmd->add_option("--labels", flags.labels, "IDX label file (optionally .gz)");
    if (!cache_only_output)
        cmd->add_option("--cache", flags.cache, "preprocessed pool cache written by `ingest`");
    cmd->add_option("--threshold", flags.threshold,
                    "binarization threshold on 5x5 block means")
        ->capture_default_str();
}

SampleSet load_pool(const DataFlags& flags) {
    if (!flags.cache.empty()) return read_pool_cache(flags.cache);
    if (flags.images.empty() || flags.labels.empty())
        throw CLI::ValidationError("data", "need --cache or both --images and --labels");
    return load_binary_pool(flags.images, flags.labels, flags.threshold);
}

void print_errors(const char* tag, double train_error, double test_error) {
    std::printf("%s train_error %.6f test_error %.6f\n", tag, train_error, test_error);
}

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"speclearn: learn Boolean classifiers with k-sparse Walsh-Hadamard spectra"};
    app.require_subcommand(1);

    // ingest ----------------------------------------------------------------
    auto* ingest = app.add_subcommand("ingest", "parse IDX files into a cached +-1 pool");
    DataFlags ingest_flags;
    add_data_flags(ingest, ingest_flags, /*cache_only_output=*/true);
    std::string ingest_out = "pool.bin";
    ingest->add_option("--out", ingest_out, "cache file to write")->capture_default_str();

    // train -----------------------------------------------------------------
    auto* train_cmd = app.add_subcommand("train", "train one classifier on a seeded split");
    DataFlags train_flags;
    add_data_flags(train_cmd, train_flags);
    FinalConfig train_cfg;
    std::string model_out;
    train_cmd->add_option("--k", train_cfg.k, "number of selected features")->capture_default_str();
    train_cmd->add_option("--d", train_cfg.d, "maximum mask weight")->capture_default_str();
    train_cmd->add_option("--tau", train_cfg.tau, "l1 budget")->capture_default_str();
    train_cmd->add_option("--train-per-class", train_cfg.train_per_class, "training items per class")
        ->capture_default_str();
    train_cmd->add_option("--test-per-class", train_cfg.test_per_class, "test items per class")
        ->capture_default_str();
    train_cmd->add_option("--seed", train_cfg.seed, "root seed")->capture_default_str();
    train_cmd->add_option("--jobs", train_cfg.jobs, "worker threads")->default_val(default_jobs());
    train_cmd->add_option("--model-out", model_out, "write the classifier in text form");

    // sweep -----------------------------------------------------------------
    auto* sweep_cmd = app.add_subcommand("sweep", "k-sweep with repeated random splits");
    DataFlags sweep_flags;
    add_data_flags(sweep_cmd, sweep_flags);
    SweepConfig sweep_cfg;
    std::string out_dir = ".";
    bool no_timing = false;
    sweep_cmd->add_option("--k-values", sweep_cfg.k_values, "k values to sweep")
        ->delimiter(',')
        ->capture_default_str();
    sweep_cmd->add_option("--trials", sweep_cfg.trials_per_k, "trials per k")->capture_default_str();
    sweep_cmd->add_option("--train-per-class", sweep_cfg.train_per_class, "training items per class")
        ->capture_default_str();
    sweep_cmd->add_option("--test-per-class", sweep_cfg.test_per_class, "test items per class")
        ->capture_default_str();
    sweep_cmd->add_option("--d", sweep_cfg.d, "maximum mask weight")->capture_default_str();
    sweep_cmd->add_option("--tau", sweep_cfg.tau, "l1 budget")->capture_default_str();
    sweep_cmd->add_option("--seed", sweep_cfg.root_seed, "root seed")->capture_default_str();
    sweep_cmd->add_option("--jobs", sweep_cfg.jobs, "worker threads")->default_val(default_jobs());
    sweep_cmd->add_option("--out-dir", out_dir, "directory for sweep.csv / summary.csv")
        ->capture_default_str();
    sweep_cmd->add_flag("--no-timing", no_timing,
                        "write 0 in wall_seconds columns so reruns are byte-identical");

    // final -----------------------------------------------------------------
    auto* final_cmd = app.add_subcommand("final", "large-training-set run and report");
    DataFlags final_flags;
    add_data_flags(final_cmd, final_flags);
    FinalConfig final_cfg;
    std::string final_out = "final_report.txt";
    std::string final_model_out;
    final_cmd->add_option("--k", final_cfg.k, "number of selected features")->capture_default_str();
    final_cmd->add_option("--d", final_cfg.d, "maximum mask weight")->capture_default_str();
    final_cmd->add_option("--tau", final_cfg.tau, "l1 budget")->capture_default_str();
    final_cmd->add_option("--train-per-class", final_cfg.train_per_class, "training items per class")
        ->capture_default_str();
    final_cmd->add_option("--test-per-class", final_cfg.test_per_class, "test items per class")
        ->capture_default_str();
    final_cmd->add_option("--seed", final_cfg.seed, "root seed")->capture_default_str();
    final_cmd->add_option("--jobs", final_cfg.jobs, "worker threads")->default_val(default_jobs());
    final_cmd->add_option("--out", final_out, "report file to write")->capture_default_str();
    final_cmd->add_option("--model-out", final_model_out, "write the classifier in text form");

    // planted ---------------------------------------------------------------
    auto* planted_cmd = app.add_subcommand("planted", "synthetic planted-model validation");
    int planted_n = 25, planted_k = 10, planted_d = 3, planted_select_k = 150;
    std::size_t planted_ell = 4000, planted_test_ell = 4000;
    double planted_tau = 1000.0;
    std::uint64_t planted_seed = 0;
    int planted_jobs = default_jobs();
    planted_cmd->add_option("--n", planted_n, "dimension")->capture_default_str();
    planted_cmd->add_option("--k", planted_k, "planted terms")->capture_default_str();
    planted_cmd->add_option("--d", planted_d, "maximum mask weight")->capture_default_str();
    planted_cmd->add_option("--ell", planted_ell, "training samples")->capture_default_str();
    planted_cmd->add_option("--test-ell", planted_test_ell, "fresh test samples")
        ->capture_default_str();
    planted_cmd->add_option("--select-k", planted_select_k, "features the pipeline selects")
        ->capture_default_str();
    planted_cmd->add_option("--tau", planted_tau, "l1 budget")->capture_default_str();
    planted_cmd->add_option("--seed", planted_seed, "root seed")->capture_default_str();
    planted_cmd->add_option("--jobs", planted_jobs, "worker threads")->default_val(default_jobs());

    // theory ----------------------------------------------------------------
    auto* theory_cmd = app.add_subcommand("theory", "desk-scale checks of the VC-bound theory");
    int shatter_n = 0;
    double bound_h = 0.0, bound_eta = 0.05;
    long long bound_ell = 0;
    int class_n = 0, class_k = 1, class_trials = 2000;
    std::uint64_t theory_seed = 0;
    auto* shatter_opt =
        theory_cmd->add_option("--shatter-n", shatter_n, "verify the shattering construction");
    auto* bound_h_opt = theory_cmd->add_option("--bound-h", bound_h, "VC dimension estimate");
    theory_cmd->add_option("--bound-ell", bound_ell, "sample size");
    theory_cmd->add_option("--bound-eta", bound_eta, "confidence parameter")->capture_default_str();
    auto* class_n_opt =
        theory_cmd->add_option("--class-n", class_n, "dimension for class-size sampling");
    theory_cmd->add_option("--class-k", class_k, "sparsity for class-size sampling")
        ->capture_default_str();
    theory_cmd->add_option("--class-trials", class_trials, "Monte Carlo trials")
        ->capture_default_str();
    theory_cmd->add_option("--seed", theory_seed, "root seed")->capture_default_str();

    try {
        std::vector<const char*> argv;
        argv.push_back("speclearn");
        for (const std::string& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help text or the usage error
        return code == 0 ? 0 : 1;
    }

    if (*ingest) {
        if (ingest_flags.images.empty() || ingest_flags.labels.empty())
            throw CLI::ValidationError("data", "ingest needs both --images and --labels");
        const SampleSet pool =
            load_binary_pool(ingest_flags.images, ingest_flags.labels, ingest_flags.threshold);
        write_pool_cache(ingest_out, pool);
        std::size_t zeros = 0;
        for (std::int8_t y : pool.labels)
            if (y < 0) ++zeros;
        std::printf("ingested %zu items (zeros %zu, ones %zu) n=%d threshold=%.6f -> %s\n",
                    pool.size(), zeros, pool.size() - zeros, pool.n, ingest_flags.threshold,
                    ingest_out.c_str());
        return 0;
    }

    if (*train_cmd) {
        const ClassPools pools = split_by_class(load_pool(train_flags));
        const FinalReport report = run_final(pools, train_cfg);
        print_errors("train", report.train_error, report.test_error);
        std::printf("objective %.6f epochs %d converged %d wall_seconds %.6f\n", report.objective,
                    report.epochs_used, report.converged ? 1 : 0, report.wall_seconds);
        if (!model_out.empty()) save_classifier(model_out, report.classifier);
        return 0;
    }

    if (*sweep_cmd) {
        sweep_cfg.record_timing = !no_timing;
        const ClassPools pools = split_by_class(load_pool(sweep_flags));
        const SweepResult result = run_sweep(pools, sweep_cfg);
        write_sweep_csv(out_dir + "/sweep.csv", result.records);
        write_summary_csv(out_dir + "/summary.csv", result.summary);
        for (const SweepSummary& s : result.summary)
            std::printf("k %d mean_test %.6f std_test %.6f mean_train %.6f mean_gap %.6f "
                        "bound_term %.6f\n",
                        s.k, s.mean_test, s.std_test, s.mean_train, s.mean_gap, s.bound_term);
        return 0;
    }

    if (*final_cmd) {
        const ClassPools pools = split_by_class(load_pool(final_flags));
        const FinalReport report = run_final(pools, final_cfg);
        write_final_report(final_out, report);
        print_errors("final", report.train_error, report.test_error);
        std::printf("misclassified %zu of %zu wall_seconds %.6f -> %s\n",
                    report.misclassified.size(), report.test_size, report.wall_seconds,
                    final_out.c_str());
        if (!final_model_out.empty()) save_classifier(final_model_out, report.classifier);
        return 0;
    }

    if (*planted_cmd) {
        const PlantedInstance train_instance =
            generate_planted(planted_n, planted_k, planted_d, planted_ell, planted_seed);
        const SelectedFeatures features =
            select_features(train_instance.sample, planted_d, planted_select_k, planted_jobs);
        TrainConfig cfg;
        cfg.tau = planted_tau;
        cfg.seed = planted_seed;
        const TrainResult result = train(features, train_instance.sample.labels, cfg);
        std::vector<Term> terms;
        for (std::size_t t = 0; t < features.count(); ++t)
            terms.push_back({features.masks[t], result.weights[t]});
        const SparseClassifier learned = make_classifier(std::move(terms), planted_n);

        // score on fresh points labeled by the planted truth
        std::mt19937_64 rng(mix_seed(splitmix64(planted_seed), 0x7e57ull));
        std::vector<Point> test_points;
        std::vector<std::int8_t> test_labels;
        for (std::size_t i = 0; i < planted_test_ell; ++i) {
            const Point p{rng() & dimension_mask(planted_n), planted_n};
            test_points.push_back(p);
            test_labels.push_back(static_cast<std::int8_t>(evaluate(train_instance.truth, p)));
        }
        const SampleSet test = make_sample_set(std::move(test_points), std::move(test_labels));

        std::size_t recovered = 0;
        for (const Term& t : train_instance.truth.terms)
            for (const ParityMask& m : features.masks)
                if (m == t.mask) {
                    ++recovered;
                    break;
                }
        print_errors("planted", evaluate_error(learned, train_instance.sample),
                     evaluate_error(learned, test));
        std::printf("recovered %zu of %d planted masks among %zu selected\n", recovered, planted_k,
                    features.count());
        return 0;
    }

    if (*theory_cmd) {
        bool did_something = false;
        if (shatter_opt->count() > 0) {
            did_something = true;
            const bool ok = verify_shattering_construction(shatter_n);
            const unsigned long long total = 1ull << shatter_n;
            std::printf("shattering: %s %llu/%llu\n", ok ? "OK" : "FAIL", ok ? total : 0ull, total);
            if (!ok) return 3;
        }
        if (bound_h_opt->count() > 0) {
            did_something = true;
            const BoundParams params{bound_h, bound_ell, bound_eta};
            if (!bound_params_recommended(params))
                std::fprintf(stderr, "warning: ell < h, the bound is outside its recommended regime\n");
            std::printf("vc_bound_term %.6f\n", vc_bound_term(params));
        }
        if (class_n_opt->count() > 0) {
            did_something = true;
            const std::size_t count =
                sample_class_size(class_n, class_k, class_trials, theory_seed);
            std::printf("class_size_lower_bound %zu\n", count);
        }
        if (!did_something)
            throw CLI::ValidationError("theory",
                                       "nothing to do: pass --shatter-n, --bound-h, or --class-n");
        return 0;
    }

    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    try {
        return dispatch(args);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const numeric_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const data_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace speclearn

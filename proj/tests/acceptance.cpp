// Acceptance gate: one pass/fail line per release criterion, nonzero exit if
// any fail.  Runs the slow end-to-end checks the unit suites deliberately
// avoid, so expect a few minutes of wall clock.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <sys/wait.h>

#include "sdd/corpus.hpp"
#include "sdd/errors.hpp"
#include "sdd/evaluate.hpp"
#include "sdd/experiment.hpp"
#include "sdd/models.hpp"
#include "sdd/resample.hpp"
#include "sdd/synthetic.hpp"
#include "sdd/text.hpp"
#include "sdd/tfidf.hpp"
#include "support/oracles.hpp"
#include "support/util.hpp"

#ifndef SDD_CLI_PATH
#error "SDD_CLI_PATH must name the sdd executable"
#endif

namespace {

using Clock = std::chrono::steady_clock;

struct CriterionFailure {
    std::string detail;
};

void need(bool ok, const std::string& detail) {
    if (!ok) throw CriterionFailure{detail};
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> softmax_of(const std::vector<double>& scores) {
    double top = -std::numeric_limits<double>::infinity();
    for (double s : scores) {
        if (std::isfinite(s)) top = std::max(top, s);
    }
    std::vector<double> p(scores.size(), 0.0);
    double z = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (std::isfinite(scores[i])) {
            p[i] = std::exp(scores[i] - top);
            z += p[i];
        }
    }
    for (double& v : p) v /= z;
    return p;
}

// ---------------------------------------------------------------------------

std::string check_size_identities() {
    sdd::SyntheticSpec spec;
    spec.class_counts = {363, 369, 179};
    const sdd::LabeledCorpus corpus = sdd::generate_synthetic_corpus(spec);

    const auto start = Clock::now();
    const struct {
        const char* name;
        std::size_t working;
    } expected[] = {{"exp1", 732}, {"exp2", 911}, {"exp3", 537}, {"exp4", 1107}};
    for (const auto& row : expected) {
        const sdd::ExperimentSpec preset =
            sdd::experiment_preset(row.name, 42, /*paper_compat=*/true);
        const sdd::SizeReport sizes = sdd::plan_experiment_sizes(preset, corpus);
        need(sizes.n_working == row.working,
             std::string(row.name) + " working-set size " + std::to_string(sizes.n_working) +
                 ", expected " + std::to_string(row.working));
    }
    const double elapsed = seconds_since(start);
    need(elapsed < 1.0, "size planning took " + std::to_string(elapsed) + "s");
    return "";
}

std::string check_tfidf_oracle() {
    std::mt19937_64 rng(7);
    double worst = 0.0;
    for (int round = 0; round < 200; ++round) {
        std::vector<sdd::TokenSequence> docs = oracle::random_docs(rng, 20, 30, 12);
        bool any = false;
        for (const auto& doc : docs) any = any || !doc.empty();
        if (!any) docs[0].push_back("t0");

        std::uint32_t min_df = 1 + static_cast<std::uint32_t>(round % 2);
        oracle::DenseTfidf dense = oracle::dense_tfidf(docs, min_df);
        if (dense.terms.empty()) {
            min_df = 1;
            dense = oracle::dense_tfidf(docs, min_df);
        }

        const auto [vocab, x] = sdd::tfidf_fit_transform(docs, min_df);
        need(vocab.size() == dense.terms.size(), "vocabulary size mismatch");
        for (std::uint32_t t = 0; t < vocab.size(); ++t) {
            need(vocab.index_to_term[t] == dense.terms[t], "term order mismatch");
        }
        for (std::size_t i = 0; i < docs.size(); ++i) {
            const std::vector<double> got = oracle::to_dense(x.rows[i], dense.terms.size());
            for (std::size_t t = 0; t < dense.terms.size(); ++t) {
                worst = std::max(worst, std::fabs(got[t] - dense.rows[i][t]));
            }
        }
    }
    need(worst < 1e-12, "max abs diff " + std::to_string(worst));
    return "";
}

std::string check_mnb_oracle() {
    std::mt19937_64 rng(11);
    double worst = 0.0;
    for (int round = 0; round < 200; ++round) {
        const oracle::DenseInstance inst = oracle::random_dense_instance(rng, 12, 8, 4);
        const double alpha = 0.1 + static_cast<double>(rng() % 20) * 0.1;
        const sdd::MnbModel model =
            sdd::train_mnb(inst.x, inst.y, inst.n_classes, {alpha});
        for (std::size_t i = 0; i < inst.x.rows.size(); ++i) {
            const std::vector<double> got =
                softmax_of(sdd::mnb_log_scores(model, inst.x.rows[i]));
            const std::vector<double> want = oracle::mnb_posterior(
                inst.dense, inst.y, inst.n_classes, alpha, inst.dense[i]);
            for (int c = 0; c < inst.n_classes; ++c) {
                worst = std::max(worst, std::fabs(got[c] - want[c]));
            }
        }
    }
    need(worst < 1e-9, "max posterior diff " + std::to_string(worst));
    return "";
}

std::string check_logreg_gradient() {
    std::mt19937_64 rng(13);
    double worst = 0.0;
    for (int round = 0; round < 50; ++round) {
        const oracle::DenseInstance inst = oracle::random_dense_instance(rng, 10, 6, 4);

        sdd::LogRegModel model;
        model.n_classes = inst.n_classes;
        model.vocab_size = inst.x.n_cols;
        model.l2_lambda = 0.05;
        model.weights.assign(inst.n_classes, std::vector<double>(inst.x.n_cols, 0.0));
        model.bias.assign(inst.n_classes, 0.0);
        for (auto& row : model.weights) {
            for (double& w : row) w = static_cast<double>(rng() % 2001) / 1000.0 - 1.0;
        }
        for (double& b : model.bias) b = static_cast<double>(rng() % 2001) / 1000.0 - 1.0;

        std::vector<std::vector<double>> grad_w, fd_w;
        std::vector<double> grad_b, fd_b;
        sdd::logreg_gradient(model, inst.x, inst.y, grad_w, grad_b);
        oracle::logreg_fd_gradient(model, inst.x, inst.y, 1e-5, fd_w, fd_b);

        for (int c = 0; c < inst.n_classes; ++c) {
            for (std::uint32_t t = 0; t < inst.x.n_cols; ++t) {
                worst = std::max(worst, oracle::rel_err(grad_w[c][t], fd_w[c][t]));
            }
            worst = std::max(worst, oracle::rel_err(grad_b[c], fd_b[c]));
        }
    }
    need(worst < 1e-4, "max gradient rel err " + std::to_string(worst));

    // objective trace of a real fit never increases
    for (int round = 0; round < 5; ++round) {
        const oracle::DenseInstance inst = oracle::random_dense_instance(rng, 16, 8, 4);
        sdd::LrParams params;
        params.max_iters = 200;
        params.tol = 1e-9;
        const sdd::LogRegModel fit =
            sdd::train_logreg(inst.x, inst.y, inst.n_classes, params);
        const auto& h = fit.trace.objective_history;
        need(!h.empty(), "empty objective history");
        for (std::size_t i = 1; i < h.size(); ++i) {
            need(h[i] <= h[i - 1] + 1e-12, "objective increased at step " + std::to_string(i));
        }
    }
    return "";
}

std::string check_capacity() {
    const auto start = Clock::now();

    sdd::FeatureMatrix x;
    x.n_cols = 4;
    std::vector<int> y;
    for (std::uint32_t i = 0; i < 4; ++i) {
        sdd::SparseVector row;
        row.entries.push_back({i, 1.0});
        x.rows.push_back(row);
        y.push_back(static_cast<int>(i));
    }

    const auto expect_perfect = [&](sdd::TrainedModel model, const char* label) {
        const std::vector<int> got = sdd::predict_labels(model, x);
        need(got == y, std::string(label) + " did not reach training accuracy 1.0");
    };
    const std::string tag{sdd::kTfidfVariantTag};

    expect_perfect({sdd::ModelFamily::Mnb, 4, tag, {}, sdd::train_mnb(x, y, 4, {})}, "mnb");
    expect_perfect({sdd::ModelFamily::LogReg, 4, tag, {}, sdd::train_logreg(x, y, 4, {})},
                   "lr");
    sdd::SvmParams svm_params;
    svm_params.l2_lambda = 0.01;
    svm_params.epochs = 200;
    expect_perfect(
        {sdd::ModelFamily::LinearSvm, 4, tag, {}, sdd::train_linear_svm(x, y, 4, svm_params, 7)},
        "svm");
    sdd::RfParams rf_params;
    rf_params.n_trees = 25;
    rf_params.bootstrap = false;
    expect_perfect({sdd::ModelFamily::RandomForest, 4, tag, {},
                    sdd::train_random_forest(x, y, 4, rf_params, 7)},
                   "rf");

    const double elapsed = seconds_since(start);
    need(elapsed < 5.0, "capacity check took " + std::to_string(elapsed) + "s");
    return "";
}

std::string check_metrics_oracle() {
    std::mt19937_64 rng(17);
    double worst = 0.0;
    for (int round = 0; round < 500; ++round) {
        const int n_classes = 2 + static_cast<int>(rng() % 4);
        const std::size_t n = 1 + rng() % 40;
        std::vector<int> y_true(n), y_pred(n);
        for (std::size_t i = 0; i < n; ++i) {
            y_true[i] = static_cast<int>(rng() % static_cast<std::uint64_t>(n_classes));
            y_pred[i] = static_cast<int>(rng() % static_cast<std::uint64_t>(n_classes));
        }
        const sdd::MetricsReport got =
            sdd::metrics_from_confusion(sdd::confusion_matrix(y_true, y_pred, n_classes));
        const oracle::CountedMetrics want = oracle::count_metrics(y_true, y_pred, n_classes);

        const auto diff = [&](double a, double b) { worst = std::max(worst, std::fabs(a - b)); };
        diff(got.accuracy, want.accuracy);
        diff(got.macro_precision, want.macro_precision);
        diff(got.macro_recall, want.macro_recall);
        diff(got.macro_f1, want.macro_f1);
        diff(got.weighted_precision, want.weighted_precision);
        diff(got.weighted_recall, want.weighted_recall);
        diff(got.weighted_f1, want.weighted_f1);
        for (int c = 0; c < n_classes; ++c) {
            diff(got.precision[c], want.precision[c]);
            diff(got.recall[c], want.recall[c]);
            diff(got.f1[c], want.f1[c]);
            need(got.support[c] == want.support[c], "support mismatch");
        }
    }
    need(worst < 1e-12, "max metric diff " + std::to_string(worst));
    return "";
}

std::string check_resampling() {
    std::mt19937_64 rng(19);
    for (int round = 0; round < 100; ++round) {
        const int n_classes = 2 + round % 3;
        std::vector<int> y;
        std::vector<std::size_t> counts(n_classes, 0);
        for (int c = 0; c < n_classes; ++c) {
            counts[c] = 1 + rng() % 30;
            y.insert(y.end(), counts[c], c);
        }
        std::shuffle(y.begin(), y.end(), rng);
        const std::uint64_t seed = 500 + static_cast<std::uint64_t>(round);
        const std::size_t n_min = *std::min_element(counts.begin(), counts.end());
        const std::size_t n_max = *std::max_element(counts.begin(), counts.end());

        const auto class_counts_of = [&](const std::vector<std::size_t>& idx) {
            std::vector<std::size_t> got(n_classes, 0);
            for (std::size_t i : idx) ++got[static_cast<std::size_t>(y[i])];
            return got;
        };

        std::vector<std::size_t> under = sdd::undersample_indices(y, seed);
        need(under.size() == n_min * static_cast<std::size_t>(n_classes),
             "undersample size");
        for (std::size_t c : class_counts_of(under)) need(c == n_min, "undersample balance");
        std::vector<std::size_t> sorted_under = under;
        std::sort(sorted_under.begin(), sorted_under.end());
        need(std::adjacent_find(sorted_under.begin(), sorted_under.end()) ==
                 sorted_under.end(),
             "undersample duplicated a sample");
        need(sorted_under.back() < y.size(), "undersample index range");
        need(under == sdd::undersample_indices(y, seed), "undersample nondeterministic");

        std::vector<std::size_t> over = sdd::oversample_indices(y, seed);
        need(over.size() == n_max * static_cast<std::size_t>(n_classes), "oversample size");
        for (std::size_t c : class_counts_of(over)) need(c == n_max, "oversample balance");
        const std::set<std::size_t> present(over.begin(), over.end());
        need(present.size() == y.size(), "oversample dropped a sample");
        need(over == sdd::oversample_indices(y, seed), "oversample nondeterministic");
    }
    return "";
}

std::string check_stratification() {
    std::mt19937_64 rng(23);
    const double fractions[] = {0.1, 0.2, 0.3};
    for (int round = 0; round < 100; ++round) {
        const int n_classes = 2 + round % 3;
        std::vector<int> y;
        for (int c = 0; c < n_classes; ++c) {
            y.insert(y.end(), 1 + rng() % 12, c);
        }
        while (y.size() < 12) y.push_back(0);
        std::shuffle(y.begin(), y.end(), rng);
        std::vector<std::size_t> counts(n_classes, 0);
        for (int label : y) ++counts[static_cast<std::size_t>(label)];

        const double fraction = fractions[round % 3];
        const sdd::SplitResult split =
            sdd::stratified_holdout_split(y, fraction, 900 + static_cast<std::uint64_t>(round));
        std::vector<std::size_t> all = split.train;
        all.insert(all.end(), split.test.begin(), split.test.end());
        std::sort(all.begin(), all.end());
        for (std::size_t i = 0; i < all.size(); ++i) need(all[i] == i, "holdout not a partition");
        need(all.size() == y.size(), "holdout dropped samples");
        std::vector<std::size_t> test_counts(n_classes, 0);
        for (std::size_t i : split.test) ++test_counts[static_cast<std::size_t>(y[i])];
        for (int c = 0; c < n_classes; ++c) {
            const double target = static_cast<double>(counts[c]) * fraction;
            need(test_counts[c] >= 1, "class missing from test side");
            need(std::fabs(static_cast<double>(test_counts[c]) - target) <= 1.0 + 1e-9,
                 "holdout class deviation > 1");
        }

        for (int k : {2, 5, 10}) {
            const sdd::FoldPlan plan =
                sdd::stratified_kfold_plan(y, k, 1700 + static_cast<std::uint64_t>(round));
            std::vector<std::size_t> pooled;
            for (const auto& fold : plan.validation) {
                pooled.insert(pooled.end(), fold.begin(), fold.end());
            }
            std::sort(pooled.begin(), pooled.end());
            need(pooled.size() == y.size(), "folds dropped samples");
            for (std::size_t i = 0; i < pooled.size(); ++i) {
                need(pooled[i] == i, "folds not a partition");
            }
            for (int c = 0; c < n_classes; ++c) {
                std::size_t lo = y.size(), hi = 0;
                for (const auto& fold : plan.validation) {
                    std::size_t in_class = 0;
                    for (std::size_t i : fold) {
                        if (y[i] == c) ++in_class;
                    }
                    lo = std::min(lo, in_class);
                    hi = std::max(hi, in_class);
                }
                need(hi - lo <= 1, "per-class fold deviation > 1");
            }
        }
    }
    return "";
}

std::string check_synthetic_suite() {
    const sdd::LabeledCorpus corpus = sdd::generate_synthetic_corpus({});

    const auto start = Clock::now();
    const std::vector<sdd::ExperimentReport> reports = sdd::run_paper_suite(corpus, 42);
    const double suite_s = seconds_since(start);
    need(suite_s < 300.0, "suite took " + std::to_string(suite_s) + "s");

    const sdd::ExperimentReport* exp4 = nullptr;
    for (const auto& report : reports) {
        if (report.spec.name == "exp4") exp4 = &report;
    }
    need(exp4 != nullptr, "exp4 report missing");
    for (const auto& result : exp4->models) {
        need(result.holdout.macro_f1 >= 0.90,
             std::string(sdd::model_family_name(result.family)) + " exp4 macro F1 " +
                 std::to_string(result.holdout.macro_f1));
    }

    // oversampling should help (or at least not hurt) the forest on most seeds
    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto rf_f1 = [&](const char* name) {
            sdd::ExperimentSpec spec = sdd::experiment_preset(name, seed);
            spec.models = {sdd::ModelFamily::RandomForest};
            spec.run_cv = false;
            return sdd::run_experiment(spec, corpus).models.at(0).holdout.macro_f1;
        };
        if (rf_f1("exp4") >= rf_f1("exp2")) ++wins;
    }
    need(wins >= 8, "rf exp4 >= exp2 on only " + std::to_string(wins) + "/10 seeds");

    return " (suite " + std::to_string(static_cast<int>(suite_s)) + "s, rf improvement " +
           std::to_string(wins) + "/10 seeds)";
}

std::string check_suite_determinism() {
    const testutil::TempDir dir("accept");
    const auto run_suite = [&](const std::string& out_dir, int index) {
        const auto log = dir.file("log." + std::to_string(index));
        const std::string cmd =
            std::string("'") + SDD_CLI_PATH +
            "' run-suite --set synth.counts=20,20,6 --set synth.vocab_size=150"
            " --set synth.markers_per_class=10 --set rf.n_trees=25 --out '" +
            out_dir + "' > '" + log.string() + "' 2>&1";
        const int rc = std::system(cmd.c_str());
        need(WIFEXITED(rc) && WEXITSTATUS(rc) == 0,
             "run-suite exited " + std::to_string(WIFEXITED(rc) ? WEXITSTATUS(rc) : -1));
    };
    const auto out1 = dir.file("suite1");
    const auto out2 = dir.file("suite2");
    run_suite(out1.string(), 1);
    run_suite(out2.string(), 2);

    std::vector<std::filesystem::path> artifacts = {"accuracy.md", "f1.md", "plotdata.csv"};
    for (std::string_view experiment : sdd::kExperimentNames) {
        for (const char* model : {"svm", "mnb", "lr", "rf"}) {
            const auto base = std::filesystem::path(experiment) / model;
            artifacts.push_back(base / "metrics.csv");
            artifacts.push_back(base / "confusion.csv");
        }
    }
    for (const auto& artifact : artifacts) {
        need(std::filesystem::exists(out1 / artifact),
             artifact.string() + " missing from first run");
        need(testutil::read_file(out1 / artifact) == testutil::read_file(out2 / artifact),
             artifact.string() + " differs between identical runs");
    }
    return " (" + std::to_string(artifacts.size()) + " artifacts compared)";
}

std::string check_normalization() {
    need(sdd::normalize_script("\xd9\x83") == "\xda\xa9", "arabic kaf not mapped");
    need(sdd::normalize_script("\xd9\x8a") == "\xdb\x8c", "arabic yeh not mapped");
    need(sdd::normalize_script("\xd9\x80").empty(), "tatweel survived");
    need(sdd::normalize_script("\xd8\xa8\xd9\x8e\xd8\xa8") == "\xd8\xa8\xd8\xa8",
         "diacritic survived");

    const std::vector<std::string> pool = {
        "\xd8\xa7", "\xd8\xa8", "\xd9\x83", "\xda\xa9", "\xd9\x8a", "\xdb\x8c",
        "\xd9\x89", "\xd9\x87", "\xdb\x95", "\xd9\x80", "\xd9\x8b", "\xd9\x8e",
        "\xd9\x91", "\xe2\x80\x8c", " ", "  ", "\t", "\n", "a", "Z", "7", ".",
        "\xd9\xa3", "\xdb\xb5", "\xf0\x9f\x98\x80", "\xd8\x9f", "\xd8\x8c"};
    std::mt19937_64 rng(29);
    for (int round = 0; round < 1000; ++round) {
        std::string text;
        const std::size_t pieces = rng() % 41;
        for (std::size_t i = 0; i < pieces; ++i) {
            text += pool[rng() % pool.size()];
        }
        const std::string once = sdd::normalize_script(text);
        need(sdd::normalize_script(once) == once, "normalization not idempotent");
    }
    return "";
}

std::string check_reference_diff() {
    const auto& ref = sdd::reference_results();
    need(ref.accuracy_pct[0] == std::array<int, 4>{67, 52, 36, 77}, "svm accuracy row");
    need(ref.accuracy_pct[3] == std::array<int, 4>{66, 48, 39, 80}, "rf accuracy row");
    need(ref.f1_pct[3] == std::array<int, 4>{66, 44, 38, 80}, "rf f1 row");

    sdd::SyntheticSpec spec;
    spec.class_counts = {20, 20, 6};
    spec.vocab_size = 150;
    spec.markers_per_class = 10;
    const sdd::LabeledCorpus corpus = sdd::generate_synthetic_corpus(spec);
    sdd::ModelHyperparams hyperparams;
    hyperparams.rf.n_trees = 25;
    const std::vector<sdd::ExperimentReport> reports =
        sdd::run_paper_suite(corpus, 42, false, hyperparams, /*run_cv=*/false);

    const std::string diff = sdd::render_reference_diff(reports);
    need(diff.find("## Accuracy: measured vs reference (delta)") != std::string::npos,
         "accuracy section missing");
    need(diff.find("## Macro F1: measured vs reference (delta)") != std::string::npos,
         "f1 section missing");
    for (const char* name : {"Linear SVM", "Multinomial NB", "Logistic Regression",
                             "Random Forest"}) {
        need(diff.find("| " + std::string(name) + " |") != std::string::npos,
             std::string(name) + " row missing");
    }
    std::size_t cells = 0;
    for (std::size_t pos = diff.find("% vs "); pos != std::string::npos;
         pos = diff.find("% vs ", pos + 1)) {
        ++cells;
    }
    need(cells == 32, "expected 32 filled cells, found " + std::to_string(cells));
    return "";
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<std::string()>> criteria[] = {
        {"dataset size identities", check_size_identities},
        {"tfidf dense oracle", check_tfidf_oracle},
        {"naive bayes posterior oracle", check_mnb_oracle},
        {"logistic regression gradient check", check_logreg_gradient},
        {"model capacity on separable data", check_capacity},
        {"metrics counting oracle", check_metrics_oracle},
        {"resampling identities", check_resampling},
        {"stratified split and fold structure", check_stratification},
        {"synthetic suite quality", check_synthetic_suite},
        {"suite determinism", check_suite_determinism},
        {"script normalization", check_normalization},
        {"reference diff rendering", check_reference_diff},
    };

    int failures = 0;
    for (const auto& [name, run] : criteria) {
        try {
            const std::string note = run();
            std::cout << "[PASS] " << name << note << std::endl;
        } catch (const CriterionFailure& failure) {
            std::cout << "[FAIL] " << name << ": " << failure.detail << std::endl;
            ++failures;
        } catch (const std::exception& e) {
            std::cout << "[FAIL] " << name << ": unexpected exception: " << e.what()
                      << std::endl;
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sdd/resample.hpp"
#include "sdd/tfidf.hpp"

namespace sdd {

// Row = true class, column = predicted class.
struct ConfusionMatrix {
    int n_classes = 0;
    std::vector<std::uint64_t> counts;  // row-major, n_classes * n_classes

    ConfusionMatrix() = default;
    explicit ConfusionMatrix(int n) : n_classes(n), counts(static_cast<std::size_t>(n) * n, 0) {}

    std::uint64_t& at(int true_class, int pred_class) {
        return counts[static_cast<std::size_t>(true_class) * n_classes + pred_class];
    }
    std::uint64_t at(int true_class, int pred_class) const {
        return counts[static_cast<std::size_t>(true_class) * n_classes + pred_class];
    }
    std::uint64_t total() const;
    ConfusionMatrix& operator+=(const ConfusionMatrix& other);
};

ConfusionMatrix confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred,
                                 int n_classes);

struct MetricsReport {
    double accuracy = 0.0;
    std::vector<double> precision;  // per class
    std::vector<double> recall;
    std::vector<double> f1;
    std::vector<std::uint64_t> support;  // true-class counts
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    double weighted_precision = 0.0;
    double weighted_recall = 0.0;
    double weighted_f1 = 0.0;
};

// Zero-denominator metrics are defined as 0 so aggregation stays total.
MetricsReport metrics_from_confusion(const ConfusionMatrix& m);

struct SplitResult {
    std::vector<std::size_t> train;  // sorted ascending
    std::vector<std::size_t> test;   // sorted ascending
};

// Per class, round-half-up(count * test_fraction), at least 1, goes to test
// via a seeded shuffle.
SplitResult stratified_holdout_split(std::span<const int> y, double test_fraction,
                                     std::uint64_t seed);

struct FoldPlan {
    int k = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<std::size_t>> validation;  // per fold, sorted ascending
};

// Folds partition all indices; per-class fold sizes differ by at most one.
FoldPlan stratified_kfold_plan(std::span<const int> y, int k, std::uint64_t seed);

// Fits on the training rows, predicts the validation rows.  Tests may swap in
// trivial trainers (e.g. constant prediction).
using TrainPredictFn = std::function<std::vector<int>(
    const FeatureMatrix& x_train, const std::vector<int>& y_train,
    const FeatureMatrix& x_val)>;

struct CvFold {
    ConfusionMatrix confusion;
    MetricsReport metrics;
    std::size_t train_size = 0;  // after fold-level resampling
    std::size_t val_size = 0;
    std::uint64_t vocab_docs = 0;  // n_docs of the fold's fitted vocabulary
};

struct Aggregate {
    double mean = 0.0;
    double stdev = 0.0;  // sample standard deviation over folds
};

struct CvSummary {
    Aggregate accuracy;
    Aggregate macro_precision;
    Aggregate macro_recall;
    Aggregate macro_f1;
};

struct CvResult {
    std::vector<CvFold> folds;
    // Aggregate over the summed fold confusions; every sample validates once,
    // so pooled accuracy equals overall hit rate.
    ConfusionMatrix pooled_confusion;
    MetricsReport pooled;
    CvSummary summary;
};

// For each fold: resample the training indices (TrainOnly semantics), refit
// the vocabulary and TF-IDF on them alone, train, evaluate on the fold.
CvResult cross_validate(const TrainPredictFn& trainer,
                        std::span<const TokenSequence> docs, std::span<const int> y,
                        int n_classes, const FoldPlan& plan, const ResamplePlan& resample,
                        std::uint32_t min_df = 1);

}  // namespace sdd

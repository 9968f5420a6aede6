#include "sdd/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sdd/errors.hpp"
#include "sdd/rng.hpp"

namespace sdd {

namespace {

std::vector<std::vector<std::size_t>> group_by_class(std::span<const int> y,
                                                     bool require_all) {
    if (y.empty()) raise(ErrorCode::EmptyClass, "empty label vector");
    int max_label = 0;
    for (int label : y) {
        if (label < 0) raise(ErrorCode::LabelOutOfRange, "negative label");
        max_label = std::max(max_label, label);
    }
    std::vector<std::vector<std::size_t>> groups(static_cast<std::size_t>(max_label) + 1);
    for (std::size_t i = 0; i < y.size(); ++i) {
        groups[static_cast<std::size_t>(y[i])].push_back(i);
    }
    if (require_all) {
        for (std::size_t c = 0; c < groups.size(); ++c) {
            if (groups[c].empty()) {
                raise(ErrorCode::EmptyClass,
                      "class " + std::to_string(c) + " has no samples");
            }
        }
    }
    return groups;
}

Aggregate aggregate_of(const std::vector<double>& values) {
    Aggregate agg;
    if (values.empty()) return agg;
    double sum = 0.0;
    for (double v : values) sum += v;
    agg.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double sq = 0.0;
        for (double v : values) sq += (v - agg.mean) * (v - agg.mean);
        agg.stdev = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    return agg;
}

}  // namespace

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t sum = 0;
    for (std::uint64_t c : counts) sum += c;
    return sum;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
    if (counts.empty()) {
        *this = other;
        return *this;
    }
    if (n_classes != other.n_classes) {
        raise(ErrorCode::DimensionMismatch, "cannot add confusion matrices of different size");
    }
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    return *this;
}

ConfusionMatrix confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred,
                                 int n_classes) {
    if (y_true.size() != y_pred.size()) {
        raise(ErrorCode::LengthMismatch,
              "y_true (" + std::to_string(y_true.size()) + ") vs y_pred (" +
                  std::to_string(y_pred.size()) + ")");
    }
    if (n_classes < 1) raise(ErrorCode::InvalidArgument, "n_classes must be positive");
    ConfusionMatrix m(n_classes);
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] < 0 || y_true[i] >= n_classes || y_pred[i] < 0 ||
            y_pred[i] >= n_classes) {
            raise(ErrorCode::LabelOutOfRange, "label out of range at position " +
                                                  std::to_string(i));
        }
        ++m.at(y_true[i], y_pred[i]);
    }
    return m;
}

MetricsReport metrics_from_confusion(const ConfusionMatrix& m) {
    const std::uint64_t total = m.total();
    if (total == 0) raise(ErrorCode::EmptyMatrix, "confusion matrix has no samples");

    const auto c_count = static_cast<std::size_t>(m.n_classes);
    MetricsReport report;
    report.precision.resize(c_count);
    report.recall.resize(c_count);
    report.f1.resize(c_count);
    report.support.resize(c_count);

    std::uint64_t trace = 0;
    for (std::size_t c = 0; c < c_count; ++c) {
        const std::uint64_t tp = m.at(static_cast<int>(c), static_cast<int>(c));
        trace += tp;
        std::uint64_t row_sum = 0;
        std::uint64_t col_sum = 0;
        for (std::size_t j = 0; j < c_count; ++j) {
            row_sum += m.at(static_cast<int>(c), static_cast<int>(j));
            col_sum += m.at(static_cast<int>(j), static_cast<int>(c));
        }
        report.support[c] = row_sum;
        const double p =
            col_sum == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(col_sum);
        const double r =
            row_sum == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(row_sum);
        report.precision[c] = p;
        report.recall[c] = r;
        report.f1[c] = (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
    }
    report.accuracy = static_cast<double>(trace) / static_cast<double>(total);

    double wp = 0.0;
    double wr = 0.0;
    double wf = 0.0;
    for (std::size_t c = 0; c < c_count; ++c) {
        report.macro_precision += report.precision[c];
        report.macro_recall += report.recall[c];
        report.macro_f1 += report.f1[c];
        const double w = static_cast<double>(report.support[c]);
        wp += w * report.precision[c];
        wr += w * report.recall[c];
        wf += w * report.f1[c];
    }
    report.macro_precision /= static_cast<double>(c_count);
    report.macro_recall /= static_cast<double>(c_count);
    report.macro_f1 /= static_cast<double>(c_count);
    report.weighted_precision = wp / static_cast<double>(total);
    report.weighted_recall = wr / static_cast<double>(total);
    report.weighted_f1 = wf / static_cast<double>(total);
    return report;
}

SplitResult stratified_holdout_split(std::span<const int> y, double test_fraction,
                                     std::uint64_t seed) {
    if (!(test_fraction > 0.0) || !(test_fraction < 1.0)) {
        raise(ErrorCode::FractionOutOfRange,
              "test_fraction must be in (0,1), got " + std::to_string(test_fraction));
    }
    auto groups = group_by_class(y, /*require_all=*/true);

    Rng rng(seed);
    SplitResult result;
    for (auto& g : groups) {
        const auto count = static_cast<double>(g.size());
        // round half up, at least one test sample, never more than the class has
        auto n_test = static_cast<std::size_t>(
            std::floor(count * test_fraction + 0.5 + 1e-9));
        n_test = std::clamp<std::size_t>(n_test, 1, g.size());
        shuffle_in_place(g, rng);
        result.test.insert(result.test.end(), g.begin(),
                           g.begin() + static_cast<std::ptrdiff_t>(n_test));
        result.train.insert(result.train.end(),
                            g.begin() + static_cast<std::ptrdiff_t>(n_test), g.end());
    }
    std::sort(result.train.begin(), result.train.end());
    std::sort(result.test.begin(), result.test.end());
    return result;
}

FoldPlan stratified_kfold_plan(std::span<const int> y, int k, std::uint64_t seed) {
    if (k < 2) raise(ErrorCode::InvalidArgument, "k must be >= 2");
    if (static_cast<std::size_t>(k) > y.size()) {
        raise(ErrorCode::KTooLarge, "k=" + std::to_string(k) + " exceeds " +
                                        std::to_string(y.size()) + " samples");
    }
    auto groups = group_by_class(y, /*require_all=*/false);

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.validation.resize(static_cast<std::size_t>(k));

    Rng rng(seed);
    // One round-robin pointer carried across classes keeps both per-class and
    // total fold sizes within one of each other.
    std::size_t pointer = 0;
    for (auto& g : groups) {
        shuffle_in_place(g, rng);
        for (std::size_t idx : g) {
            plan.validation[pointer % static_cast<std::size_t>(k)].push_back(idx);
            ++pointer;
        }
    }
    for (auto& fold : plan.validation) std::sort(fold.begin(), fold.end());
    return plan;
}

CvResult cross_validate(const TrainPredictFn& trainer, std::span<const TokenSequence> docs,
                        std::span<const int> y, int n_classes, const FoldPlan& plan,
                        const ResamplePlan& resample, std::uint32_t min_df) {
    if (docs.size() != y.size()) {
        raise(ErrorCode::LengthMismatch,
              "docs (" + std::to_string(docs.size()) + ") vs labels (" +
                  std::to_string(y.size()) + ")");
    }

    CvResult result;
    std::vector<char> in_val(docs.size());

    for (std::size_t f = 0; f < plan.validation.size(); ++f) {
        const auto& val = plan.validation[f];
        std::fill(in_val.begin(), in_val.end(), 0);
        for (std::size_t i : val) in_val[i] = 1;

        std::vector<std::size_t> train;
        train.reserve(docs.size() - val.size());
        for (std::size_t i = 0; i < docs.size(); ++i) {
            if (!in_val[i]) train.push_back(i);
        }
        if (resample.active()) {
            train = resample_subset(resample.strategy, y, train,
                                    derive_seed(resample.seed, "cv.resample", f));
        }

        std::vector<TokenSequence> train_docs;
        std::vector<int> train_y;
        train_docs.reserve(train.size());
        train_y.reserve(train.size());
        for (std::size_t i : train) {
            train_docs.push_back(docs[i]);
            train_y.push_back(y[i]);
        }

        // vectorizer refit on the fold's training rows only
        const Vocabulary vocab = fit_vocabulary(train_docs, min_df);
        const FeatureMatrix x_train = tfidf_transform_matrix(train_docs, vocab);

        std::vector<TokenSequence> val_docs;
        std::vector<int> val_y;
        val_docs.reserve(val.size());
        val_y.reserve(val.size());
        for (std::size_t i : val) {
            val_docs.push_back(docs[i]);
            val_y.push_back(y[i]);
        }
        const FeatureMatrix x_val = tfidf_transform_matrix(val_docs, vocab);

        const std::vector<int> preds = trainer(x_train, train_y, x_val);
        if (preds.size() != val.size()) {
            raise(ErrorCode::LengthMismatch, "trainer returned wrong prediction count");
        }

        CvFold fold;
        fold.confusion = confusion_matrix(val_y, preds, n_classes);
        fold.metrics = metrics_from_confusion(fold.confusion);
        fold.train_size = train.size();
        fold.val_size = val.size();
        fold.vocab_docs = vocab.n_docs;
        result.pooled_confusion += fold.confusion;
        result.folds.push_back(std::move(fold));
    }

    result.pooled = metrics_from_confusion(result.pooled_confusion);

    std::vector<double> acc;
    std::vector<double> mp;
    std::vector<double> mr;
    std::vector<double> mf;
    for (const auto& fold : result.folds) {
        acc.push_back(fold.metrics.accuracy);
        mp.push_back(fold.metrics.macro_precision);
        mr.push_back(fold.metrics.macro_recall);
        mf.push_back(fold.metrics.macro_f1);
    }
    result.summary.accuracy = aggregate_of(acc);
    result.summary.macro_precision = aggregate_of(mp);
    result.summary.macro_recall = aggregate_of(mr);
    result.summary.macro_f1 = aggregate_of(mf);
    return result;
}

}  // namespace sdd

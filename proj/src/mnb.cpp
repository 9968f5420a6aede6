#include <cmath>
#include <limits>
#include <string>

#include "sdd/errors.hpp"
#include "sdd/models.hpp"

namespace sdd {

namespace {

void check_training_input(const FeatureMatrix& x, std::span<const int> y, int n_classes) {
    if (x.rows.empty()) raise(ErrorCode::EmptyTrainingSet, "no training rows");
    if (x.rows.size() != y.size()) {
        raise(ErrorCode::LengthMismatch,
              "feature rows (" + std::to_string(x.rows.size()) + ") vs labels (" +
                  std::to_string(y.size()) + ")");
    }
    if (n_classes < 1) raise(ErrorCode::InvalidArgument, "n_classes must be positive");
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] < 0 || y[i] >= n_classes) {
            raise(ErrorCode::LabelOutOfRange,
                  "label " + std::to_string(y[i]) + " at row " + std::to_string(i));
        }
    }
}

}  // namespace

MnbModel train_mnb(const FeatureMatrix& x, std::span<const int> y, int n_classes,
                   const MnbParams& params) {
    check_training_input(x, y, n_classes);
    if (!(params.alpha > 0.0)) {
        raise(ErrorCode::InvalidArgument, "smoothing alpha must be positive");
    }
    const std::size_t vocab_size = x.n_cols;
    const auto c_count = static_cast<std::size_t>(n_classes);

    std::vector<std::size_t> class_counts(c_count, 0);
    std::vector<std::vector<double>> class_weight(c_count,
                                                  std::vector<double>(vocab_size, 0.0));
    std::vector<double> class_total(c_count, 0.0);

    for (std::size_t i = 0; i < x.rows.size(); ++i) {
        const auto c = static_cast<std::size_t>(y[i]);
        ++class_counts[c];
        for (const auto& [idx, value] : x.rows[i].entries) {
            if (value < 0.0) {
                raise(ErrorCode::NegativeFeature,
                      "negative feature at row " + std::to_string(i) + ", column " +
                          std::to_string(idx));
            }
            class_weight[c][idx] += value;
            class_total[c] += value;
        }
    }

    MnbModel model;
    model.n_classes = n_classes;
    model.vocab_size = static_cast<std::uint32_t>(vocab_size);
    model.alpha = params.alpha;
    model.log_prior.resize(c_count);
    model.log_likelihood.assign(c_count, std::vector<double>(vocab_size));

    const double n = static_cast<double>(x.rows.size());
    const double alpha_v = params.alpha * static_cast<double>(vocab_size);
    for (std::size_t c = 0; c < c_count; ++c) {
        model.log_prior[c] = class_counts[c] == 0
                                 ? -std::numeric_limits<double>::infinity()
                                 : std::log(static_cast<double>(class_counts[c]) / n);
        const double denom = std::log(class_total[c] + alpha_v);
        for (std::size_t t = 0; t < vocab_size; ++t) {
            model.log_likelihood[c][t] = std::log(class_weight[c][t] + params.alpha) - denom;
        }
    }
    return model;
}

std::vector<double> mnb_log_scores(const MnbModel& model, const SparseVector& row) {
    std::vector<double> scores(static_cast<std::size_t>(model.n_classes));
    for (std::size_t c = 0; c < scores.size(); ++c) {
        double s = model.log_prior[c];
        const auto& ll = model.log_likelihood[c];
        for (const auto& [idx, value] : row.entries) {
            if (idx >= model.vocab_size) {
                raise(ErrorCode::DimensionMismatch,
                      "feature index " + std::to_string(idx) + " outside vocabulary of " +
                          std::to_string(model.vocab_size));
            }
            s += value * ll[idx];
        }
        scores[c] = s;
    }
    return scores;
}

}  // namespace sdd

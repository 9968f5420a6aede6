#include <algorithm>
#include <cmath>
#include <string>

#include "sdd/errors.hpp"
#include "sdd/models.hpp"

namespace sdd {

namespace {

void check_matrix_width(const TrainedModel& model, const FeatureMatrix& x) {
    const std::uint32_t width = std::visit([](const auto& m) { return m.vocab_size; },
                                           model.model);
    if (x.n_cols != width) {
        raise(ErrorCode::DimensionMismatch,
              "feature width " + std::to_string(x.n_cols) + " vs model vocabulary " +
                  std::to_string(width));
    }
}

// Stable softmax; -inf scores map to probability zero.
std::vector<double> softmax(std::vector<double> scores) {
    const double m = *std::max_element(scores.begin(), scores.end());
    double sum = 0.0;
    for (double& s : scores) {
        s = std::exp(s - m);
        sum += s;
    }
    for (double& s : scores) s /= sum;
    return scores;
}

std::vector<double> raw_scores(const TrainedModel& model, const SparseVector& row) {
    switch (model.family) {
        case ModelFamily::Mnb:
            return mnb_log_scores(std::get<MnbModel>(model.model), row);
        case ModelFamily::LogReg:
            return logreg_scores(std::get<LogRegModel>(model.model), row);
        case ModelFamily::LinearSvm:
            return svm_scores(std::get<SvmOvrModel>(model.model), row);
        case ModelFamily::RandomForest:
            return rf_vote_fractions(std::get<RfModel>(model.model), row);
    }
    raise(ErrorCode::InvalidArgument, "unknown model family");
}

}  // namespace

ModelFamily model_family_from_name(std::string_view name) {
    if (name == "mnb") return ModelFamily::Mnb;
    if (name == "lr") return ModelFamily::LogReg;
    if (name == "svm") return ModelFamily::LinearSvm;
    if (name == "rf") return ModelFamily::RandomForest;
    raise(ErrorCode::InvalidArgument,
          "unknown model family '" + std::string(name) + "' (expected mnb|lr|svm|rf)");
}

std::string_view model_family_name(ModelFamily family) {
    switch (family) {
        case ModelFamily::Mnb: return "mnb";
        case ModelFamily::LogReg: return "lr";
        case ModelFamily::LinearSvm: return "svm";
        case ModelFamily::RandomForest: return "rf";
    }
    return "?";
}

std::string_view model_family_display_name(ModelFamily family) {
    switch (family) {
        case ModelFamily::Mnb: return "Multinomial NB";
        case ModelFamily::LogReg: return "Logistic Regression";
        case ModelFamily::LinearSvm: return "Linear SVM";
        case ModelFamily::RandomForest: return "Random Forest";
    }
    return "?";
}

int argmax_lowest_tie(std::span<const double> scores) {
    int best = 0;
    for (int c = 1; c < static_cast<int>(scores.size()); ++c) {
        if (scores[static_cast<std::size_t>(c)] > scores[static_cast<std::size_t>(best)]) {
            best = c;
        }
    }
    return best;
}

std::vector<int> predict_labels(const TrainedModel& model, const FeatureMatrix& x) {
    check_matrix_width(model, x);
    std::vector<int> labels;
    labels.reserve(x.rows.size());
    for (const auto& row : x.rows) {
        labels.push_back(argmax_lowest_tie(raw_scores(model, row)));
    }
    return labels;
}

std::vector<std::vector<double>> predict_scores(const TrainedModel& model,
                                                const FeatureMatrix& x) {
    check_matrix_width(model, x);
    std::vector<std::vector<double>> out;
    out.reserve(x.rows.size());
    for (const auto& row : x.rows) {
        std::vector<double> scores = raw_scores(model, row);
        if (model.family == ModelFamily::Mnb || model.family == ModelFamily::LogReg) {
            scores = softmax(std::move(scores));
        }
        out.push_back(std::move(scores));
    }
    return out;
}

}  // namespace sdd

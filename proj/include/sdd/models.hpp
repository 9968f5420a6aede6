#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sdd/tfidf.hpp"

namespace sdd {

enum class ModelFamily { Mnb, LogReg, LinearSvm, RandomForest };

ModelFamily model_family_from_name(std::string_view name);  // mnb|lr|svm|rf
std::string_view model_family_name(ModelFamily family);
std::string_view model_family_display_name(ModelFamily family);

// ---------------------------------------------------------------------------
// Multinomial naive Bayes over nonnegative (fractional) feature weights.

struct MnbParams {
    double alpha = 1.0;
};

struct MnbModel {
    int n_classes = 0;
    std::uint32_t vocab_size = 0;
    double alpha = 1.0;
    std::vector<double> log_prior;                    // per class; -inf for absent classes
    std::vector<std::vector<double>> log_likelihood;  // [class][term]
};

MnbModel train_mnb(const FeatureMatrix& x, std::span<const int> y, int n_classes,
                   const MnbParams& params = {});

// Unnormalized per-class log scores for one row.
std::vector<double> mnb_log_scores(const MnbModel& model, const SparseVector& row);

// ---------------------------------------------------------------------------
// Multinomial logistic regression, full-batch gradient descent with
// backtracking step halving.

struct LrParams {
    double l2_lambda = 1e-4;
    double learning_rate = 0.5;
    std::size_t max_iters = 1000;
    double tol = 1e-7;
};

struct LrTrace {
    std::size_t iterations = 0;
    double final_objective = 0.0;
    std::vector<double> objective_history;  // objective after each accepted step
};

struct LogRegModel {
    int n_classes = 0;
    std::uint32_t vocab_size = 0;
    double l2_lambda = 0.0;
    std::vector<std::vector<double>> weights;  // [class][term]
    std::vector<double> bias;                  // per class, unregularized
    LrTrace trace;
};

LogRegModel train_logreg(const FeatureMatrix& x, std::span<const int> y, int n_classes,
                         const LrParams& params = {});

std::vector<double> logreg_scores(const LogRegModel& model, const SparseVector& row);

// Mean cross-entropy plus (lambda/2)*||W||^2, bias excluded.  Exposed for
// gradient checking.
double logreg_objective(const LogRegModel& model, const FeatureMatrix& x,
                        std::span<const int> y);

// Analytic gradient of logreg_objective at the model's current parameters;
// this is the same gradient the trainer descends.
void logreg_gradient(const LogRegModel& model, const FeatureMatrix& x,
                     std::span<const int> y,
                     std::vector<std::vector<double>>& grad_w,
                     std::vector<double>& grad_b);

// ---------------------------------------------------------------------------
// One-vs-rest linear SVM trained by primal subgradient descent on the hinge
// loss with step 1/(lambda*t).

struct SvmParams {
    double l2_lambda = 1e-4;
    std::size_t epochs = 50;
};

struct SvmOvrModel {
    int n_classes = 0;
    std::uint32_t vocab_size = 0;
    double l2_lambda = 0.0;
    std::size_t epochs = 0;
    std::vector<std::vector<double>> weights;  // [class][term]
    std::vector<double> bias;                  // per class
    std::vector<std::uint8_t> class_present;   // absent classes score -inf
    std::vector<std::vector<double>> epoch_objective;  // [class][epoch], not persisted
};

SvmOvrModel train_linear_svm(const FeatureMatrix& x, std::span<const int> y,
                             int n_classes, const SvmParams& params,
                             std::uint64_t seed);

std::vector<double> svm_scores(const SvmOvrModel& model, const SparseVector& row);

// Regularized hinge objective for one binary subproblem; the training trace
// records this at every epoch end.
double svm_binary_objective(std::span<const double> w, double bias, double l2_lambda,
                            const FeatureMatrix& x, std::span<const int> y,
                            int positive_class);

// ---------------------------------------------------------------------------
// Random forest of Gini-impurity decision trees on bootstrap samples.

struct RfParams {
    std::size_t n_trees = 200;
    std::size_t max_depth = 0;        // 0 = unlimited
    std::size_t m_features = 0;       // 0 = ceil(sqrt(V))
    std::size_t min_leaf = 1;
    bool bootstrap = true;            // debug flag; off trains each tree on all rows
};

struct TreeNode {
    std::int32_t feature = -1;        // -1 marks a leaf
    double threshold = 0.0;           // go left iff x[feature] <= threshold
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::vector<std::uint32_t> histogram;  // class counts of training samples at node
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    int predict(const SparseVector& row) const;
};

struct RfModel {
    int n_classes = 0;
    std::uint32_t vocab_size = 0;
    RfParams params;
    std::uint64_t seed = 0;
    std::vector<DecisionTree> trees;
};

RfModel train_random_forest(const FeatureMatrix& x, std::span<const int> y,
                            int n_classes, const RfParams& params, std::uint64_t seed);

// Per-class vote fractions (sums to 1).
std::vector<double> rf_vote_fractions(const RfModel& model, const SparseVector& row);

// Gini impurity 1 - sum p_c^2 of a class-count histogram.
double gini_impurity(std::span<const std::uint32_t> counts);

// ---------------------------------------------------------------------------
// Tagged union over the four families plus the vocabulary used at fit time.

struct TrainedModel {
    ModelFamily family = ModelFamily::Mnb;
    int n_classes = 0;
    std::string tfidf_variant{kTfidfVariantTag};
    Vocabulary vocab;
    std::variant<MnbModel, LogRegModel, SvmOvrModel, RfModel> model;
};

// Argmax prediction per family; ties broken by lowest class code.
std::vector<int> predict_labels(const TrainedModel& model, const FeatureMatrix& x);

// NB posterior probabilities, LR softmax probabilities, RF vote fractions
// (each row sums to 1), SVM raw margins (non-probabilistic).
std::vector<std::vector<double>> predict_scores(const TrainedModel& model,
                                                const FeatureMatrix& x);

int argmax_lowest_tie(std::span<const double> scores);

// Versioned binary container; roundtrip reproduces bit-identical predictions.
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace sdd

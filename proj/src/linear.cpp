#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sdd/errors.hpp"
#include "sdd/models.hpp"
#include "sdd/rng.hpp"

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

double sparse_dense_dot(const SparseVector& row, const std::vector<double>& dense) {
    double sum = 0.0;
    for (const auto& [idx, value] : row.entries) sum += value * dense[idx];
    return sum;
}

void check_width(const SparseVector& row, std::uint32_t vocab_size) {
    if (!row.entries.empty() && row.entries.back().first >= vocab_size) {
        raise(ErrorCode::DimensionMismatch,
              "feature index " + std::to_string(row.entries.back().first) +
                  " outside vocabulary of " + std::to_string(vocab_size));
    }
}

double objective_at(const std::vector<std::vector<double>>& weights,
                    const std::vector<double>& bias, double l2_lambda,
                    const FeatureMatrix& x, std::span<const int> y) {
    const std::size_t c_count = weights.size();
    double ce = 0.0;
    std::vector<double> scores(c_count);
    for (std::size_t i = 0; i < x.rows.size(); ++i) {
        for (std::size_t c = 0; c < c_count; ++c) {
            scores[c] = bias[c] + sparse_dense_dot(x.rows[i], weights[c]);
        }
        const double m = *std::max_element(scores.begin(), scores.end());
        double sum = 0.0;
        for (double s : scores) sum += std::exp(s - m);
        ce += m + std::log(sum) - scores[static_cast<std::size_t>(y[i])];
    }
    ce /= static_cast<double>(x.rows.size());

    double reg = 0.0;
    for (const auto& w : weights) {
        for (double v : w) reg += v * v;
    }
    return ce + 0.5 * l2_lambda * reg;
}

void gradient_at(const std::vector<std::vector<double>>& weights,
                 const std::vector<double>& bias, double l2_lambda,
                 const FeatureMatrix& x, std::span<const int> y,
                 std::vector<std::vector<double>>& grad_w, std::vector<double>& grad_b) {
    const std::size_t c_count = weights.size();
    const std::size_t v_count = weights.empty() ? 0 : weights[0].size();
    grad_w.assign(c_count, std::vector<double>(v_count, 0.0));
    grad_b.assign(c_count, 0.0);

    std::vector<double> scores(c_count);
    for (std::size_t i = 0; i < x.rows.size(); ++i) {
        for (std::size_t c = 0; c < c_count; ++c) {
            scores[c] = bias[c] + sparse_dense_dot(x.rows[i], weights[c]);
        }
        const double m = *std::max_element(scores.begin(), scores.end());
        double sum = 0.0;
        for (double& s : scores) {
            s = std::exp(s - m);
            sum += s;
        }
        for (std::size_t c = 0; c < c_count; ++c) {
            const double coef = scores[c] / sum - (static_cast<std::size_t>(y[i]) == c);
            grad_b[c] += coef;
            for (const auto& [idx, value] : x.rows[i].entries) {
                grad_w[c][idx] += coef * value;
            }
        }
    }

    const double inv_n = 1.0 / static_cast<double>(x.rows.size());
    for (std::size_t c = 0; c < c_count; ++c) {
        grad_b[c] *= inv_n;
        for (std::size_t t = 0; t < v_count; ++t) {
            grad_w[c][t] = grad_w[c][t] * inv_n + l2_lambda * weights[c][t];
        }
    }
}

}  // namespace

double logreg_objective(const LogRegModel& model, const FeatureMatrix& x,
                        std::span<const int> y) {
    return objective_at(model.weights, model.bias, model.l2_lambda, x, y);
}

void logreg_gradient(const LogRegModel& model, const FeatureMatrix& x,
                     std::span<const int> y, std::vector<std::vector<double>>& grad_w,
                     std::vector<double>& grad_b) {
    gradient_at(model.weights, model.bias, model.l2_lambda, x, y, grad_w, grad_b);
}

LogRegModel train_logreg(const FeatureMatrix& x, std::span<const int> y, int n_classes,
                         const LrParams& params) {
    check_training_input(x, y, n_classes);
    if (params.l2_lambda < 0.0) raise(ErrorCode::InvalidArgument, "l2_lambda must be >= 0");
    if (!(params.learning_rate > 0.0)) {
        raise(ErrorCode::InvalidArgument, "learning_rate must be positive");
    }
    if (params.tol < 0.0) raise(ErrorCode::InvalidArgument, "tol must be >= 0");
    for (const auto& row : x.rows) check_width(row, static_cast<std::uint32_t>(x.n_cols));

    LogRegModel model;
    model.n_classes = n_classes;
    model.vocab_size = static_cast<std::uint32_t>(x.n_cols);
    model.l2_lambda = params.l2_lambda;
    model.weights.assign(static_cast<std::size_t>(n_classes),
                         std::vector<double>(x.n_cols, 0.0));
    model.bias.assign(static_cast<std::size_t>(n_classes), 0.0);

    double objective = objective_at(model.weights, model.bias, model.l2_lambda, x, y);
    if (!std::isfinite(objective)) {
        raise(ErrorCode::NonFiniteObjective, "initial objective is not finite");
    }
    model.trace.objective_history.push_back(objective);

    std::vector<std::vector<double>> grad_w;
    std::vector<double> grad_b;
    std::vector<std::vector<double>> cand_w;
    std::vector<double> cand_b;

    for (std::size_t iter = 0; iter < params.max_iters; ++iter) {
        gradient_at(model.weights, model.bias, model.l2_lambda, x, y, grad_w, grad_b);
        for (const auto& g : grad_w) {
            for (double v : g) {
                if (!std::isfinite(v)) {
                    raise(ErrorCode::NonFiniteObjective, "gradient is not finite");
                }
            }
        }

        double step = params.learning_rate;
        bool accepted = false;
        double candidate_objective = objective;
        for (int halving = 0; halving < 60; ++halving) {
            cand_w = model.weights;
            cand_b = model.bias;
            for (std::size_t c = 0; c < cand_w.size(); ++c) {
                cand_b[c] -= step * grad_b[c];
                for (std::size_t t = 0; t < cand_w[c].size(); ++t) {
                    cand_w[c][t] -= step * grad_w[c][t];
                }
            }
            candidate_objective = objective_at(cand_w, cand_b, model.l2_lambda, x, y);
            if (std::isfinite(candidate_objective) && candidate_objective <= objective) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (!std::isfinite(candidate_objective)) {
                raise(ErrorCode::NonFiniteObjective,
                      "objective is not finite even at the smallest step");
            }
            break;  // no descent direction at machine precision; treat as converged
        }

        const double improvement = objective - candidate_objective;
        model.weights.swap(cand_w);
        model.bias.swap(cand_b);
        objective = candidate_objective;
        ++model.trace.iterations;
        model.trace.objective_history.push_back(objective);
        if (improvement < params.tol) break;
    }

    model.trace.final_objective = objective;
    return model;
}

std::vector<double> logreg_scores(const LogRegModel& model, const SparseVector& row) {
    check_width(row, model.vocab_size);
    std::vector<double> scores(static_cast<std::size_t>(model.n_classes));
    for (std::size_t c = 0; c < scores.size(); ++c) {
        scores[c] = model.bias[c] + sparse_dense_dot(row, model.weights[c]);
    }
    return scores;
}

double svm_binary_objective(std::span<const double> w, double bias, double l2_lambda,
                            const FeatureMatrix& x, std::span<const int> y,
                            int positive_class) {
    double reg = 0.0;
    for (double v : w) reg += v * v;
    double hinge = 0.0;
    for (std::size_t i = 0; i < x.rows.size(); ++i) {
        const double sign = y[i] == positive_class ? 1.0 : -1.0;
        double score = bias;
        for (const auto& [idx, value] : x.rows[i].entries) score += value * w[idx];
        hinge += std::max(0.0, 1.0 - sign * score);
    }
    return 0.5 * l2_lambda * reg + hinge / static_cast<double>(x.rows.size());
}

SvmOvrModel train_linear_svm(const FeatureMatrix& x, std::span<const int> y,
                             int n_classes, const SvmParams& params, std::uint64_t seed) {
    check_training_input(x, y, n_classes);
    if (!(params.l2_lambda > 0.0)) raise(ErrorCode::InvalidArgument, "l2_lambda must be positive");
    if (params.epochs < 1) raise(ErrorCode::InvalidArgument, "epochs must be >= 1");
    for (const auto& row : x.rows) check_width(row, static_cast<std::uint32_t>(x.n_cols));

    SvmOvrModel model;
    model.n_classes = n_classes;
    model.vocab_size = static_cast<std::uint32_t>(x.n_cols);
    model.l2_lambda = params.l2_lambda;
    model.epochs = params.epochs;
    model.weights.assign(static_cast<std::size_t>(n_classes),
                         std::vector<double>(x.n_cols, 0.0));
    model.bias.assign(static_cast<std::size_t>(n_classes), 0.0);
    model.class_present.assign(static_cast<std::size_t>(n_classes), 0);
    model.epoch_objective.resize(static_cast<std::size_t>(n_classes));

    for (int value : y) model.class_present[static_cast<std::size_t>(value)] = 1;

    const std::size_t n = x.rows.size();
    std::vector<std::size_t> order(n);
    std::vector<double> v(x.n_cols);
    std::vector<double> snapshot(x.n_cols);

    for (int c = 0; c < n_classes; ++c) {
        const auto ci = static_cast<std::size_t>(c);
        if (!model.class_present[ci]) continue;

        std::fill(v.begin(), v.end(), 0.0);
        double scale = 1.0;
        std::uint64_t t = 0;
        Rng rng(derive_seed(seed, "svm.class", static_cast<std::uint64_t>(c)));
        std::iota(order.begin(), order.end(), std::size_t{0});

        for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
            shuffle_in_place(order, rng);
            for (std::size_t i : order) {
                ++t;
                const double sign = y[i] == c ? 1.0 : -1.0;
                const double margin =
                    sign * scale * sparse_dense_dot(x.rows[i], v);
                const double eta = 1.0 / (params.l2_lambda * static_cast<double>(t));
                // decay factor (1 - eta*lambda) = (1 - 1/t); at t == 1 the
                // weight vector is still zero, so skipping the zeroing is exact
                if (t > 1) scale *= 1.0 - 1.0 / static_cast<double>(t);
                if (margin < 1.0) {
                    const double coef = eta * sign / scale;
                    for (const auto& [idx, value] : x.rows[i].entries) {
                        v[idx] += coef * value;
                    }
                }
            }
            for (std::size_t j = 0; j < v.size(); ++j) snapshot[j] = scale * v[j];
            model.epoch_objective[ci].push_back(
                svm_binary_objective(snapshot, 0.0, params.l2_lambda, x, y, c));
        }
        for (std::size_t j = 0; j < v.size(); ++j) model.weights[ci][j] = scale * v[j];
    }
    return model;
}

std::vector<double> svm_scores(const SvmOvrModel& model, const SparseVector& row) {
    check_width(row, model.vocab_size);
    std::vector<double> scores(static_cast<std::size_t>(model.n_classes));
    for (std::size_t c = 0; c < scores.size(); ++c) {
        scores[c] = model.class_present[c]
                        ? model.bias[c] + sparse_dense_dot(row, model.weights[c])
                        : -std::numeric_limits<double>::infinity();
    }
    return scores;
}

}  // namespace sdd

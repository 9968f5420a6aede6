// Independent brute-force implementations used to cross-check the library.
// Everything here is deliberately dense, slow and obvious.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sdd/evaluate.hpp"
#include "sdd/models.hpp"
#include "sdd/text.hpp"
#include "sdd/tfidf.hpp"

namespace oracle {

// ---------------------------------------------------------------------------
// Dense TF-IDF: raw counts, idf = ln((1+N)/(1+df)) + 1, then L2 rows.

struct DenseTfidf {
    std::vector<std::string> terms;               // first-appearance order
    std::vector<std::vector<double>> rows;        // docs x terms
};

inline DenseTfidf dense_tfidf(const std::vector<sdd::TokenSequence>& docs,
                              std::uint32_t min_df) {
    // Term order: first appearance across the corpus.
    std::vector<std::string> order;
    for (const auto& doc : docs) {
        for (const auto& token : doc) {
            bool seen = false;
            for (const auto& known : order) {
                if (known == token) {
                    seen = true;
                    break;
                }
            }
            if (!seen) order.push_back(token);
        }
    }
    // Document frequencies.
    std::vector<std::size_t> df(order.size(), 0);
    for (std::size_t t = 0; t < order.size(); ++t) {
        for (const auto& doc : docs) {
            for (const auto& token : doc) {
                if (token == order[t]) {
                    ++df[t];
                    break;
                }
            }
        }
    }
    DenseTfidf out;
    std::vector<std::size_t> kept_df;
    for (std::size_t t = 0; t < order.size(); ++t) {
        if (df[t] >= min_df) {
            out.terms.push_back(order[t]);
            kept_df.push_back(df[t]);
        }
    }
    const double n = static_cast<double>(docs.size());
    for (const auto& doc : docs) {
        std::vector<double> row(out.terms.size(), 0.0);
        for (std::size_t t = 0; t < out.terms.size(); ++t) {
            double tf = 0.0;
            for (const auto& token : doc) {
                if (token == out.terms[t]) tf += 1.0;
            }
            const double idf =
                std::log((1.0 + n) / (1.0 + static_cast<double>(kept_df[t]))) + 1.0;
            row[t] = tf * idf;
        }
        double norm = 0.0;
        for (double v : row) norm += v * v;
        norm = std::sqrt(norm);
        if (norm > 0.0) {
            for (double& v : row) v /= norm;
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

inline std::vector<double> to_dense(const sdd::SparseVector& row, std::size_t width) {
    std::vector<double> out(width, 0.0);
    for (const auto& [idx, value] : row.entries) out[idx] = value;
    return out;
}

// ---------------------------------------------------------------------------
// Naive Bayes by direct enumeration on a dense matrix.

// Posterior P(c | row) via a literal transcription of Bayes' rule with
// Lidstone smoothing, normalized over present classes.
inline std::vector<double> mnb_posterior(const std::vector<std::vector<double>>& x,
                                         const std::vector<int>& y, int n_classes,
                                         double alpha,
                                         const std::vector<double>& row) {
    const std::size_t v = row.size();
    std::vector<double> log_post(n_classes, -std::numeric_limits<double>::infinity());
    for (int c = 0; c < n_classes; ++c) {
        std::size_t count = 0;
        std::vector<double> term_weight(v, 0.0);
        double total_weight = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (y[i] != c) continue;
            ++count;
            for (std::size_t t = 0; t < v; ++t) {
                term_weight[t] += x[i][t];
                total_weight += x[i][t];
            }
        }
        if (count == 0) continue;
        double lp = std::log(static_cast<double>(count) / static_cast<double>(x.size()));
        for (std::size_t t = 0; t < v; ++t) {
            const double p_t =
                (term_weight[t] + alpha) / (total_weight + alpha * static_cast<double>(v));
            lp += row[t] * std::log(p_t);
        }
        log_post[c] = lp;
    }
    double max_lp = -std::numeric_limits<double>::infinity();
    for (double lp : log_post) max_lp = std::max(max_lp, lp);
    std::vector<double> post(n_classes, 0.0);
    double z = 0.0;
    for (int c = 0; c < n_classes; ++c) {
        if (std::isfinite(log_post[c])) {
            post[c] = std::exp(log_post[c] - max_lp);
            z += post[c];
        }
    }
    for (double& p : post) p /= z;
    return post;
}

// ---------------------------------------------------------------------------
// Central finite differences of the logistic-regression objective.

inline void logreg_fd_gradient(sdd::LogRegModel model, const sdd::FeatureMatrix& x,
                               std::span<const int> y, double h,
                               std::vector<std::vector<double>>& grad_w,
                               std::vector<double>& grad_b) {
    grad_w.assign(model.weights.size(), {});
    for (std::size_t c = 0; c < model.weights.size(); ++c) {
        grad_w[c].assign(model.weights[c].size(), 0.0);
        for (std::size_t t = 0; t < model.weights[c].size(); ++t) {
            const double saved = model.weights[c][t];
            model.weights[c][t] = saved + h;
            const double up = sdd::logreg_objective(model, x, y);
            model.weights[c][t] = saved - h;
            const double down = sdd::logreg_objective(model, x, y);
            model.weights[c][t] = saved;
            grad_w[c][t] = (up - down) / (2.0 * h);
        }
    }
    grad_b.assign(model.bias.size(), 0.0);
    for (std::size_t c = 0; c < model.bias.size(); ++c) {
        const double saved = model.bias[c];
        model.bias[c] = saved + h;
        const double up = sdd::logreg_objective(model, x, y);
        model.bias[c] = saved - h;
        const double down = sdd::logreg_objective(model, x, y);
        model.bias[c] = saved;
        grad_b[c] = (up - down) / (2.0 * h);
    }
}

inline double rel_err(double a, double b) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1.0});
    return std::fabs(a - b) / scale;
}

// ---------------------------------------------------------------------------
// Metrics by per-sample counting.

struct CountedMetrics {
    double accuracy = 0.0;
    std::vector<double> precision, recall, f1;
    std::vector<std::uint64_t> support;
    double macro_precision = 0.0, macro_recall = 0.0, macro_f1 = 0.0;
    double weighted_precision = 0.0, weighted_recall = 0.0, weighted_f1 = 0.0;
};

inline CountedMetrics count_metrics(const std::vector<int>& y_true,
                                    const std::vector<int>& y_pred, int n_classes) {
    CountedMetrics m;
    m.precision.assign(n_classes, 0.0);
    m.recall.assign(n_classes, 0.0);
    m.f1.assign(n_classes, 0.0);
    m.support.assign(n_classes, 0);

    std::size_t hits = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == y_pred[i]) ++hits;
    }
    m.accuracy = static_cast<double>(hits) / static_cast<double>(y_true.size());

    for (int c = 0; c < n_classes; ++c) {
        std::uint64_t tp = 0, fp = 0, fn = 0, support = 0;
        for (std::size_t i = 0; i < y_true.size(); ++i) {
            if (y_true[i] == c) ++support;
            if (y_true[i] == c && y_pred[i] == c) ++tp;
            if (y_true[i] != c && y_pred[i] == c) ++fp;
            if (y_true[i] == c && y_pred[i] != c) ++fn;
        }
        m.support[c] = support;
        m.precision[c] = (tp + fp) ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
        m.recall[c] = (tp + fn) ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
        m.f1[c] = (m.precision[c] + m.recall[c] > 0.0)
                      ? 2.0 * m.precision[c] * m.recall[c] / (m.precision[c] + m.recall[c])
                      : 0.0;
        m.macro_precision += m.precision[c] / n_classes;
        m.macro_recall += m.recall[c] / n_classes;
        m.macro_f1 += m.f1[c] / n_classes;
        const double w = static_cast<double>(support) / static_cast<double>(y_true.size());
        m.weighted_precision += w * m.precision[c];
        m.weighted_recall += w * m.recall[c];
        m.weighted_f1 += w * m.f1[c];
    }
    return m;
}

// ---------------------------------------------------------------------------
// Random instance helpers.  Plain std::mt19937_64 with modular draws; these
// do not need cross-platform stability, only in-run determinism.

inline std::vector<sdd::TokenSequence> random_docs(std::mt19937_64& rng,
                                                   std::size_t max_docs,
                                                   std::size_t max_terms,
                                                   std::size_t max_len) {
    const std::size_t n_docs = 1 + rng() % max_docs;
    const std::size_t n_terms = 1 + rng() % max_terms;
    std::vector<sdd::TokenSequence> docs(n_docs);
    for (auto& doc : docs) {
        const std::size_t len = rng() % (max_len + 1);
        for (std::size_t i = 0; i < len; ++i) {
            doc.push_back("t" + std::to_string(rng() % n_terms));
        }
    }
    return docs;
}

// Random small dense nonnegative matrix plus labels covering class 0.
struct DenseInstance {
    std::vector<std::vector<double>> dense;
    sdd::FeatureMatrix x;
    std::vector<int> y;
    int n_classes = 2;
};

inline DenseInstance random_dense_instance(std::mt19937_64& rng, std::size_t max_rows,
                                           std::size_t max_cols, int max_classes) {
    DenseInstance inst;
    const std::size_t rows = 1 + rng() % max_rows;
    const std::size_t cols = 1 + rng() % max_cols;
    inst.n_classes = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_classes - 1));
    inst.x.n_cols = static_cast<std::uint32_t>(cols);
    for (std::size_t r = 0; r < rows; ++r) {
        std::vector<double> dense_row(cols, 0.0);
        sdd::SparseVector sparse;
        for (std::size_t c = 0; c < cols; ++c) {
            if (rng() % 3 == 0) continue;  // keep some sparsity
            const double v = static_cast<double>(rng() % 1000) / 250.0;
            if (v == 0.0) continue;
            dense_row[c] = v;
            sparse.entries.push_back({static_cast<std::uint32_t>(c), v});
        }
        inst.dense.push_back(std::move(dense_row));
        inst.x.rows.push_back(std::move(sparse));
        inst.y.push_back(static_cast<int>(rng() % static_cast<std::uint64_t>(inst.n_classes)));
    }
    inst.y[0] = 0;  // class 0 always present
    return inst;
}

}  // namespace oracle

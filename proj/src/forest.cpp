#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sdd/errors.hpp"
#include "sdd/models.hpp"
#include "sdd/rng.hpp"

namespace sdd {

namespace {

double row_value(const SparseVector& row, std::uint32_t feature) {
    const auto& e = row.entries;
    auto it = std::lower_bound(
        e.begin(), e.end(), feature,
        [](const auto& entry, std::uint32_t f) { return entry.first < f; });
    return it != e.end() && it->first == feature ? it->second : 0.0;
}

// Columns of the feature matrix in compressed form; entries stay ordered by
// row because rows are visited in order at build time.
struct CscMatrix {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> cols;

    explicit CscMatrix(const FeatureMatrix& x) : cols(x.n_cols) {
        for (std::uint32_t i = 0; i < x.rows.size(); ++i) {
            for (const auto& [idx, value] : x.rows[i].entries) {
                cols[idx].emplace_back(i, value);
            }
        }
    }
};

struct TreeBuilder {
    const CscMatrix& csc;
    const FeatureMatrix& x;
    std::span<const int> y;
    int n_classes;
    const RfParams& params;
    std::size_t m;
    Rng rng;
    std::vector<TreeNode> nodes;
    std::vector<std::uint32_t> feature_pool;   // permutation of all feature ids
    std::vector<std::uint32_t> row_multiplicity;  // per-row count within current node

    TreeBuilder(const CscMatrix& csc_in, const FeatureMatrix& x_in, std::span<const int> y_in,
                int n_classes_in, const RfParams& params_in, std::size_t m_in,
                std::uint64_t seed)
        : csc(csc_in),
          x(x_in),
          y(y_in),
          n_classes(n_classes_in),
          params(params_in),
          m(m_in),
          rng(seed),
          feature_pool(x_in.n_cols),
          row_multiplicity(x_in.rows.size(), 0) {
        std::iota(feature_pool.begin(), feature_pool.end(), 0u);
    }

    std::vector<std::uint32_t> histogram_of(const std::vector<std::uint32_t>& samples) const {
        std::vector<std::uint32_t> hist(static_cast<std::size_t>(n_classes), 0);
        for (std::uint32_t row : samples) ++hist[static_cast<std::size_t>(y[row])];
        return hist;
    }

    struct BestSplit {
        bool found = false;
        std::uint32_t feature = 0;
        double threshold = 0.0;
        double weighted_gini = 0.0;
    };

    // Scans one candidate feature; node rows are pre-marked in row_multiplicity.
    void scan_feature(std::uint32_t feature, const std::vector<std::uint32_t>& node_hist,
                      std::size_t node_size, BestSplit& best) const {
        // (value, class) observations with multiplicity, zeros kept implicit
        thread_local std::vector<std::pair<double, std::uint32_t>> observed;
        observed.clear();
        std::vector<std::uint32_t> zero_hist = node_hist;
        std::size_t nonzero = 0;
        for (const auto& [row, value] : csc.cols[feature]) {
            const std::uint32_t mult = row_multiplicity[row];
            if (mult == 0) continue;
            for (std::uint32_t k = 0; k < mult; ++k) {
                observed.emplace_back(value, static_cast<std::uint32_t>(y[row]));
            }
            zero_hist[static_cast<std::size_t>(y[row])] -= mult;
            nonzero += mult;
        }
        const std::size_t zeros = node_size - nonzero;
        if (nonzero == 0) return;  // constant zero column: no split possible

        std::sort(observed.begin(), observed.end());

        std::vector<std::uint32_t> left_hist(static_cast<std::size_t>(n_classes), 0);
        std::size_t left_n = 0;
        double prev_value = 0.0;
        if (zeros > 0) {
            left_hist = zero_hist;
            left_n = zeros;
        } else {
            prev_value = observed.front().first;
            std::size_t i = 0;
            while (i < observed.size() && observed[i].first == prev_value) {
                ++left_hist[observed[i].second];
                ++left_n;
                ++i;
            }
        }

        std::size_t i = left_n - (zeros > 0 ? zeros : 0);
        // i indexes the first observation not yet in the left block
        while (i < observed.size()) {
            const double value = observed[i].first;
            if (left_n > 0) {
                const std::size_t right_n = node_size - left_n;
                if (left_n >= params.min_leaf && right_n >= params.min_leaf) {
                    std::vector<std::uint32_t> right_hist(node_hist);
                    for (std::size_t c = 0; c < right_hist.size(); ++c) {
                        right_hist[c] -= left_hist[c];
                    }
                    const double weighted =
                        (static_cast<double>(left_n) * gini_impurity(left_hist) +
                         static_cast<double>(right_n) * gini_impurity(right_hist)) /
                        static_cast<double>(node_size);
                    if (!best.found || weighted < best.weighted_gini) {
                        best.found = true;
                        best.feature = feature;
                        best.threshold = (prev_value + value) / 2.0;
                        best.weighted_gini = weighted;
                    }
                }
            }
            prev_value = value;
            while (i < observed.size() && observed[i].first == value) {
                ++left_hist[observed[i].second];
                ++left_n;
                ++i;
            }
        }
    }

    std::int32_t build(std::vector<std::uint32_t>&& samples, std::size_t depth) {
        const auto node_index = static_cast<std::int32_t>(nodes.size());
        nodes.emplace_back();
        nodes[node_index].histogram = histogram_of(samples);

        const double node_gini = gini_impurity(nodes[node_index].histogram);
        const bool depth_reached = params.max_depth > 0 && depth >= params.max_depth;
        if (node_gini == 0.0 || depth_reached || samples.size() < 2 * params.min_leaf) {
            return node_index;
        }

        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t pick =
                j + uniform_below(rng, static_cast<std::uint64_t>(feature_pool.size() - j));
            std::swap(feature_pool[j], feature_pool[pick]);
        }

        for (std::uint32_t row : samples) ++row_multiplicity[row];
        BestSplit best;
        for (std::size_t j = 0; j < m; ++j) {
            scan_feature(feature_pool[j], nodes[node_index].histogram, samples.size(), best);
        }
        for (std::uint32_t row : samples) row_multiplicity[row] = 0;

        if (!best.found || best.weighted_gini >= node_gini) return node_index;

        std::vector<std::uint32_t> left_samples;
        std::vector<std::uint32_t> right_samples;
        for (std::uint32_t row : samples) {
            if (row_value(x.rows[row], best.feature) <= best.threshold) {
                left_samples.push_back(row);
            } else {
                right_samples.push_back(row);
            }
        }
        samples.clear();
        samples.shrink_to_fit();

        const std::int32_t left = build(std::move(left_samples), depth + 1);
        const std::int32_t right = build(std::move(right_samples), depth + 1);
        nodes[node_index].feature = static_cast<std::int32_t>(best.feature);
        nodes[node_index].threshold = best.threshold;
        nodes[node_index].left = left;
        nodes[node_index].right = right;
        return node_index;
    }
};

}  // namespace

double gini_impurity(std::span<const std::uint32_t> counts) {
    std::uint64_t total = 0;
    for (std::uint32_t c : counts) total += c;
    if (total == 0) return 0.0;
    double sum_sq = 0.0;
    for (std::uint32_t c : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(total);
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

int DecisionTree::predict(const SparseVector& row) const {
    std::int32_t index = 0;
    while (nodes[index].feature >= 0) {
        const double value = row_value(row, static_cast<std::uint32_t>(nodes[index].feature));
        index = value <= nodes[index].threshold ? nodes[index].left : nodes[index].right;
    }
    const auto& hist = nodes[index].histogram;
    int best = 0;
    for (int c = 1; c < static_cast<int>(hist.size()); ++c) {
        if (hist[c] > hist[best]) best = c;
    }
    return best;
}

RfModel train_random_forest(const FeatureMatrix& x, std::span<const int> y, int n_classes,
                            const RfParams& params, std::uint64_t seed) {
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
    if (params.n_trees < 1) raise(ErrorCode::InvalidArgument, "n_trees must be >= 1");
    if (params.m_features > x.n_cols) {
        raise(ErrorCode::InvalidArgument, "m_features exceeds vocabulary size");
    }
    if (params.min_leaf < 1) raise(ErrorCode::InvalidArgument, "min_leaf must be >= 1");
    if (x.n_cols == 0) raise(ErrorCode::EmptyVocabulary, "feature matrix has zero columns");

    const std::size_t m =
        params.m_features > 0
            ? params.m_features
            : static_cast<std::size_t>(
                  std::ceil(std::sqrt(static_cast<double>(x.n_cols))));

    RfModel model;
    model.n_classes = n_classes;
    model.vocab_size = static_cast<std::uint32_t>(x.n_cols);
    model.params = params;
    model.seed = seed;
    model.trees.reserve(params.n_trees);

    const CscMatrix csc(x);
    const std::size_t n = x.rows.size();

    for (std::size_t tree = 0; tree < params.n_trees; ++tree) {
        const std::uint64_t tree_seed = derive_seed(seed, "rf.tree", tree);
        TreeBuilder builder(csc, x, y, n_classes, params, m, tree_seed);

        std::vector<std::uint32_t> samples(n);
        if (params.bootstrap) {
            for (std::size_t i = 0; i < n; ++i) {
                samples[i] = static_cast<std::uint32_t>(
                    uniform_below(builder.rng, static_cast<std::uint64_t>(n)));
            }
        } else {
            std::iota(samples.begin(), samples.end(), 0u);
        }

        builder.build(std::move(samples), 0);
        model.trees.push_back(DecisionTree{std::move(builder.nodes)});
    }
    return model;
}

std::vector<double> rf_vote_fractions(const RfModel& model, const SparseVector& row) {
    if (!row.entries.empty() && row.entries.back().first >= model.vocab_size) {
        raise(ErrorCode::DimensionMismatch,
              "feature index " + std::to_string(row.entries.back().first) +
                  " outside vocabulary of " + std::to_string(model.vocab_size));
    }
    std::vector<double> votes(static_cast<std::size_t>(model.n_classes), 0.0);
    for (const auto& tree : model.trees) {
        ++votes[static_cast<std::size_t>(tree.predict(row))];
    }
    for (double& v : votes) v /= static_cast<double>(model.trees.size());
    return votes;
}

}  // namespace sdd

#include "sdd/experiment.hpp"

#include <chrono>
#include <string>
#include <utility>

#include "sdd/errors.hpp"
#include "sdd/rng.hpp"
#include "sdd/synthetic.hpp"

namespace sdd {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

LabeledCorpus apply_policy(const LabeledCorpus& corpus, ClassPolicy policy) {
    if (policy == ClassPolicy::ThreeClass) return corpus;
    LabeledCorpus out;
    out.provenance = corpus.provenance;
    for (const auto& post : corpus.posts) {
        if (!post.label) {
            raise(ErrorCode::UnlabeledPost, "post '" + post.id + "' has no label");
        }
        if (*post.label != Label::Suspicious) out.posts.push_back(post);
    }
    return out;
}

// Everything the dataset-shaping stages produce, shared between
// plan_experiment_sizes and run_experiment.
struct ShapedData {
    std::vector<TokenSequence> docs;  // working set after any whole-dataset resample
    std::vector<int> y;
    int n_classes = 0;
    SizeReport sizes;
    PreprocessStats prep_stats;
    std::vector<std::string> class_names;
    SplitResult split;
    std::vector<std::size_t> train_idx;  // after train-only resampling
    std::map<std::string, double> stage_ms;
};

ShapedData shape_dataset(const ExperimentSpec& spec, const LabeledCorpus& corpus) {
    ShapedData data;
    data.sizes.n_input = corpus.size();

    auto t = Clock::now();
    const LabeledCorpus* source = &corpus;
    LabeledCorpus keyword_filtered;
    if (spec.keyword_filter) {
        keyword_filtered = filter_by_keywords(corpus, KeywordSet::defaults());
        source = &keyword_filtered;
    }
    LabeledCorpus shaped = apply_policy(*source, spec.policy);
    data.sizes.n_after_policy = shaped.size();
    data.stage_ms["policy"] = ms_since(t);

    t = Clock::now();
    ProcessedCorpus processed = preprocess_corpus(shaped);
    data.prep_stats = processed.stats;
    data.sizes.n_after_preprocess = processed.docs.size();
    data.stage_ms["preprocess"] = ms_since(t);

    data.n_classes = spec.policy == ClassPolicy::BinaryDropSuspicious ? 2 : 3;
    for (int c = 0; c < data.n_classes; ++c) {
        data.class_names.emplace_back(label_token(static_cast<Label>(c)));
    }

    data.docs.reserve(processed.docs.size());
    data.y.reserve(processed.docs.size());
    for (auto& doc : processed.docs) {
        data.docs.push_back(std::move(doc.tokens));
        data.y.push_back(static_cast<int>(doc.label));
    }

    t = Clock::now();
    if (spec.resample.active() && spec.resample.scope == ResampleScope::WholeDataset) {
        const std::vector<std::size_t> picked =
            spec.resample.strategy == ResampleStrategy::Undersample
                ? undersample_indices(data.y, spec.resample.seed)
                : oversample_indices(data.y, spec.resample.seed);
        std::vector<TokenSequence> docs;
        std::vector<int> y;
        docs.reserve(picked.size());
        y.reserve(picked.size());
        for (std::size_t i : picked) {
            docs.push_back(data.docs[i]);
            y.push_back(data.y[i]);
        }
        data.docs = std::move(docs);
        data.y = std::move(y);
    }
    data.sizes.n_working = data.y.size();
    for (int label : data.y) {
        ++data.sizes.working_class_counts[static_cast<std::size_t>(label)];
    }

    data.split = stratified_holdout_split(data.y, spec.split.test_fraction, spec.split.seed);
    data.sizes.n_train = data.split.train.size();
    data.sizes.n_test = data.split.test.size();

    data.train_idx = data.split.train;
    if (spec.resample.active() && spec.resample.scope == ResampleScope::TrainOnly) {
        data.train_idx = resample_subset(spec.resample.strategy, data.y, data.split.train,
                                         spec.resample.seed);
    }
    data.sizes.n_train_resampled = data.train_idx.size();
    data.stage_ms["resample_split"] = ms_since(t);
    return data;
}

TrainedModel train_family(ModelFamily family, const FeatureMatrix& x,
                          const std::vector<int>& y, int n_classes,
                          const ModelHyperparams& hp, std::uint64_t seed_root) {
    TrainedModel model;
    model.family = family;
    model.n_classes = n_classes;
    switch (family) {
        case ModelFamily::Mnb:
            model.model = train_mnb(x, y, n_classes, hp.mnb);
            break;
        case ModelFamily::LogReg:
            model.model = train_logreg(x, y, n_classes, hp.lr);
            break;
        case ModelFamily::LinearSvm:
            model.model = train_linear_svm(x, y, n_classes, hp.svm,
                                           derive_seed(seed_root, "train.svm"));
            break;
        case ModelFamily::RandomForest:
            model.model = train_random_forest(x, y, n_classes, hp.rf,
                                              derive_seed(seed_root, "train.rf"));
            break;
    }
    return model;
}

[[noreturn]] void fail_stage(const ExperimentSpec& spec, ModelFamily family,
                             std::string_view stage, const Error& e) {
    raise(e.code(), spec.name + "/" + std::string(model_family_name(family)) + "/" +
                        std::string(stage) + ": " + e.message());
}

}  // namespace

std::string_view class_policy_name(ClassPolicy policy) {
    return policy == ClassPolicy::BinaryDropSuspicious ? "binary_drop_suspicious"
                                                       : "three_class";
}

ExperimentSpec experiment_preset(std::string_view name, std::uint64_t master_seed,
                                 bool paper_compat) {
    ExperimentSpec spec;
    spec.name = std::string(name);
    if (name == "exp1") {
        spec.policy = ClassPolicy::BinaryDropSuspicious;
    } else if (name == "exp2") {
        spec.policy = ClassPolicy::ThreeClass;
    } else if (name == "exp3") {
        spec.policy = ClassPolicy::ThreeClass;
        spec.resample.strategy = ResampleStrategy::Undersample;
    } else if (name == "exp4") {
        spec.policy = ClassPolicy::ThreeClass;
        spec.resample.strategy = ResampleStrategy::Oversample;
    } else {
        raise(ErrorCode::InvalidArgument,
              "unknown experiment '" + std::string(name) + "' (expected exp1|exp2|exp3|exp4)");
    }
    if (spec.resample.active()) {
        spec.resample.scope =
            paper_compat ? ResampleScope::WholeDataset : ResampleScope::TrainOnly;
    }
    spec.split.seed = derive_seed(master_seed, spec.name + ".split");
    spec.resample.seed = derive_seed(master_seed, spec.name + ".resample");
    return spec;
}

SizeReport plan_experiment_sizes(const ExperimentSpec& spec, const LabeledCorpus& corpus) {
    return shape_dataset(spec, corpus).sizes;
}

ExperimentReport run_experiment(const ExperimentSpec& spec, const LabeledCorpus& corpus) {
    const auto t_total = Clock::now();
    ExperimentReport report;
    report.spec = spec;

    ShapedData data = shape_dataset(spec, corpus);
    report.sizes = data.sizes;
    report.prep_stats = data.prep_stats;
    report.class_names = data.class_names;
    report.stage_ms = std::move(data.stage_ms);

    auto t = Clock::now();
    std::vector<TokenSequence> train_docs;
    std::vector<int> train_y;
    train_docs.reserve(data.train_idx.size());
    train_y.reserve(data.train_idx.size());
    for (std::size_t i : data.train_idx) {
        train_docs.push_back(data.docs[i]);
        train_y.push_back(data.y[i]);
    }
    std::vector<TokenSequence> test_docs;
    std::vector<int> test_y;
    test_docs.reserve(data.split.test.size());
    test_y.reserve(data.split.test.size());
    for (std::size_t i : data.split.test) {
        test_docs.push_back(data.docs[i]);
        test_y.push_back(data.y[i]);
    }

    const Vocabulary vocab = fit_vocabulary(train_docs, spec.features.min_df);
    const FeatureMatrix x_train = tfidf_transform_matrix(train_docs, vocab);
    const FeatureMatrix x_test = tfidf_transform_matrix(test_docs, vocab);
    report.stage_ms["features"] = ms_since(t);

    // CV runs on the un-resampled training portion; fold-level resampling
    // happens inside cross_validate so validation folds stay untouched.
    std::vector<TokenSequence> cv_docs;
    std::vector<int> cv_y;
    FoldPlan fold_plan;
    ResamplePlan cv_resample;
    if (spec.run_cv) {
        cv_docs.reserve(data.split.train.size());
        cv_y.reserve(data.split.train.size());
        for (std::size_t i : data.split.train) {
            cv_docs.push_back(data.docs[i]);
            cv_y.push_back(data.y[i]);
        }
        fold_plan = stratified_kfold_plan(cv_y, spec.split.k,
                                          derive_seed(spec.split.seed, "cv.folds"));
        if (spec.resample.active() && spec.resample.scope == ResampleScope::TrainOnly) {
            cv_resample = spec.resample;
        }
    }

    for (ModelFamily family : spec.models) {
        ModelResult result;
        result.family = family;

        t = Clock::now();
        TrainedModel model;
        try {
            model = train_family(family, x_train, train_y, data.n_classes,
                                 spec.hyperparams, spec.split.seed);
        } catch (const Error& e) {
            fail_stage(spec, family, "train", e);
        }
        result.train_ms = ms_since(t);

        try {
            const std::vector<int> preds = predict_labels(model, x_test);
            result.holdout_confusion = confusion_matrix(test_y, preds, data.n_classes);
            result.holdout = metrics_from_confusion(result.holdout_confusion);
        } catch (const Error& e) {
            fail_stage(spec, family, "holdout", e);
        }

        if (spec.run_cv) {
            t = Clock::now();
            const std::uint64_t cv_seed_root = derive_seed(spec.split.seed, "cv.train");
            const ModelHyperparams& hp = spec.hyperparams;
            const int n_classes = data.n_classes;
            const auto trainer = [family, n_classes, &hp, cv_seed_root](
                                     const FeatureMatrix& xt, const std::vector<int>& yt,
                                     const FeatureMatrix& xv) {
                return predict_labels(train_family(family, xt, yt, n_classes, hp, cv_seed_root),
                                      xv);
            };
            try {
                result.cv = cross_validate(trainer, cv_docs, cv_y, data.n_classes, fold_plan,
                                           cv_resample, spec.features.min_df);
                result.has_cv = true;
            } catch (const Error& e) {
                fail_stage(spec, family, "cv", e);
            }
            report.stage_ms["cv." + std::string(model_family_name(family))] = ms_since(t);
        }

        report.models.push_back(std::move(result));
    }

    report.stage_ms["total"] = ms_since(t_total);
    return report;
}

std::vector<ExperimentReport> run_paper_suite(const LabeledCorpus& corpus,
                                              std::uint64_t master_seed, bool paper_compat,
                                              const ModelHyperparams& hyperparams,
                                              bool run_cv) {
    std::vector<ExperimentReport> reports;
    reports.reserve(kExperimentNames.size());
    for (std::string_view name : kExperimentNames) {
        ExperimentSpec spec = experiment_preset(name, master_seed, paper_compat);
        spec.hyperparams = hyperparams;
        spec.run_cv = run_cv;
        reports.push_back(run_experiment(spec, corpus));
    }
    return reports;
}

}  // namespace sdd

#include "soranidd.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <new>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdd/config.hpp"
#include "sdd/corpus.hpp"
#include "sdd/errors.hpp"
#include "sdd/evaluate.hpp"
#include "sdd/experiment.hpp"
#include "sdd/models.hpp"
#include "sdd/rng.hpp"
#include "sdd/synthetic.hpp"
#include "sdd/text.hpp"
#include "sdd/tfidf.hpp"

struct sdd_config {
    sdd::RunConfig cfg;
};

struct sdd_corpus {
    sdd::LabeledCorpus corpus;
};

struct sdd_model {
    sdd::TrainedModel model;
};

namespace {

using sdd::Error;
using sdd::ErrorCode;

thread_local std::string g_last_error;

sdd_status to_status(ErrorCode code) {
    return static_cast<sdd_status>(static_cast<int>(code) + 1);
}

template <typename Fn>
sdd_status guarded(Fn&& fn) noexcept {
    try {
        fn();
        return SDD_OK;
    } catch (const Error& e) {
        g_last_error = e.message();
        return to_status(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SDD_E_INTERNAL;
    } catch (...) {
        g_last_error = "unknown failure";
        return SDD_E_INTERNAL;
    }
}

void require(const void* ptr, const char* name) {
    if (!ptr) sdd::raise(ErrorCode::InvalidArgument, std::string(name) + " is null");
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void copy_to_buffer(const std::string& value, char* buf, size_t buflen) {
    require(buf, "buf");
    if (value.size() + 1 > buflen) {
        sdd::raise(ErrorCode::InvalidArgument,
                   "buffer too small: need " + std::to_string(value.size() + 1) + " bytes");
    }
    std::memcpy(buf, value.c_str(), value.size() + 1);
}

std::string fmt_score(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

sdd::PreprocessOptions preprocess_options(const sdd::RunConfig& cfg,
                                          const sdd::NormalizationTable* table) {
    sdd::PreprocessOptions opts;
    opts.normalize = cfg.prep_normalize;
    opts.strip = cfg.prep_strip;
    opts.drop_empty = cfg.prep_drop_empty;
    opts.dedup = cfg.prep_dedup;
    opts.table = table;
    return opts;
}

// An experiment preset with the config's tuning applied on top.
sdd::ExperimentSpec spec_from_config(std::string_view name, const sdd::RunConfig& cfg) {
    sdd::ExperimentSpec spec = sdd::experiment_preset(name, cfg.seed, cfg.paper_compat);
    spec.hyperparams = cfg.hyperparams;
    spec.features.min_df = cfg.min_df;
    spec.split.test_fraction = cfg.test_fraction;
    spec.split.k = cfg.cv_folds;
    spec.models = cfg.models;
    spec.run_cv = cfg.run_cv;
    spec.keyword_filter = cfg.keyword_filter;
    if (cfg.split_seed) spec.split.seed = *cfg.split_seed;
    if (cfg.resample_seed) spec.resample.seed = *cfg.resample_seed;
    return spec;
}

sdd::LabeledCorpus corpus_or_synthetic(const sdd_corpus* corpus, const sdd::RunConfig& cfg) {
    if (corpus) return corpus->corpus;
    return sdd::generate_synthetic_corpus(cfg.synth);
}

// Inference-path features: normalize/strip/tokenize each post in place, one
// row per post (no dedup, no empty-drop).
sdd::FeatureMatrix featurize_posts(const sdd::LabeledCorpus& corpus,
                                   const sdd::Vocabulary& vocab) {
    sdd::FeatureMatrix x;
    x.n_cols = vocab.size();
    x.rows.reserve(corpus.size());
    for (const auto& post : corpus.posts) {
        const sdd::TokenSequence tokens =
            sdd::tokenize(sdd::strip_noise(sdd::normalize_script(post.text)));
        x.rows.push_back(sdd::tfidf_transform(tokens, vocab));
    }
    return x;
}

std::string class_display(int code, int n_classes) {
    if (code >= 0 && code < sdd::kNumLabels && n_classes <= sdd::kNumLabels) {
        return std::string(sdd::kLabelTokens[code]);
    }
    return "class" + std::to_string(code);
}

std::string run_suite_impl(const sdd::RunConfig& cfg, const sdd::LabeledCorpus& corpus,
                           const char* out_dir) {
    std::vector<sdd::ExperimentReport> reports;
    reports.reserve(sdd::kExperimentNames.size());
    for (std::string_view name : sdd::kExperimentNames) {
        reports.push_back(sdd::run_experiment(spec_from_config(name, cfg), corpus));
    }
    if (out_dir) sdd::render_reports(reports, out_dir, sdd::config_echo(cfg));

    std::string summary = sdd::render_metric_table(reports, sdd::TableMetric::Accuracy);
    summary += '\n';
    summary += sdd::render_metric_table(reports, sdd::TableMetric::MacroF1);
    if (cfg.real_data) {
        summary += '\n';
        summary += sdd::render_reference_diff(reports);
    }
    return summary;
}

}  // namespace

extern "C" {

const char* sdd_version(void) { return "1.0.0"; }

const char* sdd_last_error(void) { return g_last_error.c_str(); }

const char* sdd_status_name(sdd_status status) {
    if (status == SDD_OK) return "Ok";
    if (status == SDD_E_INTERNAL) return "Internal";
    const int code = static_cast<int>(status) - 1;
    if (code < 0 || status > SDD_E_INTERNAL) return "Unknown";
    return sdd::error_code_name(static_cast<ErrorCode>(code)).data();
}

/* ---- configuration ---------------------------------------------------- */

sdd_status sdd_config_create(sdd_config** out) {
    return guarded([&] {
        require(out, "out");
        *out = new sdd_config{};
    });
}

sdd_status sdd_config_load_file(sdd_config* config, const char* path) {
    return guarded([&] {
        require(config, "config");
        require(path, "path");
        sdd::config_load_file(config->cfg, path);
    });
}

sdd_status sdd_config_set(sdd_config* config, const char* key, const char* value) {
    return guarded([&] {
        require(config, "config");
        require(key, "key");
        require(value, "value");
        sdd::config_apply(config->cfg, key, value);
    });
}

sdd_status sdd_config_get(const sdd_config* config, const char* key, char* buf,
                          size_t buflen) {
    return guarded([&] {
        require(config, "config");
        require(key, "key");
        copy_to_buffer(sdd::config_get(config->cfg, key), buf, buflen);
    });
}

void sdd_config_free(sdd_config* config) { delete config; }

/* ---- corpus ----------------------------------------------------------- */

sdd_status sdd_corpus_load(const char* path, const char* format, sdd_corpus** out) {
    return guarded([&] {
        require(path, "path");
        require(format, "format");
        require(out, "out");
        auto loaded = sdd::load_corpus(path, sdd::corpus_format_from_name(format));
        *out = new sdd_corpus{std::move(loaded)};
    });
}

sdd_status sdd_corpus_write(const sdd_corpus* corpus, const char* path,
                            const char* format) {
    return guarded([&] {
        require(corpus, "corpus");
        require(path, "path");
        require(format, "format");
        sdd::write_corpus(corpus->corpus, path, sdd::corpus_format_from_name(format));
    });
}

sdd_status sdd_corpus_synthetic(const sdd_config* config, sdd_corpus** out) {
    return guarded([&] {
        require(config, "config");
        require(out, "out");
        *out = new sdd_corpus{sdd::generate_synthetic_corpus(config->cfg.synth)};
    });
}

sdd_status sdd_corpus_size(const sdd_corpus* corpus, size_t* out) {
    return guarded([&] {
        require(corpus, "corpus");
        require(out, "out");
        *out = corpus->corpus.size();
    });
}

sdd_status sdd_corpus_class_counts(const sdd_corpus* corpus, size_t out_counts[3]) {
    return guarded([&] {
        require(corpus, "corpus");
        require(out_counts, "out_counts");
        const auto counts = sdd::class_counts(corpus->corpus);
        for (int i = 0; i < sdd::kNumLabels; ++i) out_counts[i] = counts[i];
    });
}

sdd_status sdd_corpus_filter_keywords(const sdd_corpus* corpus,
                                      const char* keywords_path, sdd_corpus** out) {
    return guarded([&] {
        require(corpus, "corpus");
        require(out, "out");
        const sdd::KeywordSet keywords = keywords_path
                                             ? sdd::KeywordSet::from_file(keywords_path)
                                             : sdd::KeywordSet::defaults();
        *out = new sdd_corpus{sdd::filter_by_keywords(corpus->corpus, keywords)};
    });
}

sdd_status sdd_corpus_preprocess(const sdd_corpus* corpus, const sdd_config* config,
                                 sdd_corpus** out, char** stats_json) {
    return guarded([&] {
        require(corpus, "corpus");
        require(out, "out");
        const sdd::RunConfig defaults;
        const sdd::RunConfig& cfg = config ? config->cfg : defaults;

        sdd::NormalizationTable table;
        const sdd::NormalizationTable* table_ptr = nullptr;
        if (!cfg.norm_table_file.empty()) {
            table = sdd::NormalizationTable::from_file(cfg.norm_table_file);
            table_ptr = &table;
        }
        const sdd::ProcessedCorpus processed =
            sdd::preprocess_corpus(corpus->corpus, preprocess_options(cfg, table_ptr));

        sdd::LabeledCorpus cleaned;
        cleaned.provenance = corpus->corpus.provenance;
        cleaned.posts.reserve(processed.docs.size());
        for (const auto& doc : processed.docs) {
            std::string text;
            for (const auto& token : doc.tokens) {
                if (!text.empty()) text += ' ';
                text += token;
            }
            cleaned.posts.push_back({doc.id, std::move(text), doc.label});
        }

        if (stats_json) {
            const nlohmann::json stats{
                {"urls", processed.stats.noise.urls},
                {"mentions", processed.stats.noise.mentions},
                {"latin", processed.stats.noise.latin},
                {"emoji", processed.stats.noise.emoji},
                {"digits", processed.stats.noise.digits},
                {"punctuation", processed.stats.noise.punctuation},
                {"duplicates_dropped", processed.stats.duplicates},
                {"empty_dropped", processed.stats.empty},
            };
            *stats_json = dup_string(stats.dump(2));
        }
        *out = new sdd_corpus{std::move(cleaned)};
    });
}

void sdd_corpus_free(sdd_corpus* corpus) { delete corpus; }

/* ---- models ----------------------------------------------------------- */

sdd_status sdd_train(const sdd_config* config, const sdd_corpus* corpus,
                     const char* model, sdd_model** out) {
    return guarded([&] {
        require(config, "config");
        require(corpus, "corpus");
        require(model, "model");
        require(out, "out");
        const sdd::RunConfig& cfg = config->cfg;
        const sdd::ModelFamily family = sdd::model_family_from_name(model);

        sdd::LabeledCorpus working = corpus->corpus;
        if (cfg.keyword_filter) {
            const sdd::KeywordSet keywords = cfg.keywords_file.empty()
                                                 ? sdd::KeywordSet::defaults()
                                                 : sdd::KeywordSet::from_file(cfg.keywords_file);
            working = sdd::filter_by_keywords(working, keywords);
        }

        sdd::NormalizationTable table;
        const sdd::NormalizationTable* table_ptr = nullptr;
        if (!cfg.norm_table_file.empty()) {
            table = sdd::NormalizationTable::from_file(cfg.norm_table_file);
            table_ptr = &table;
        }
        const sdd::ProcessedCorpus processed =
            sdd::preprocess_corpus(working, preprocess_options(cfg, table_ptr));

        std::vector<sdd::TokenSequence> docs;
        std::vector<int> y;
        docs.reserve(processed.docs.size());
        y.reserve(processed.docs.size());
        for (const auto& doc : processed.docs) {
            docs.push_back(doc.tokens);
            y.push_back(static_cast<int>(doc.label));
        }

        if (cfg.resample_strategy != sdd::ResampleStrategy::None) {
            std::vector<std::size_t> all(y.size());
            for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
            const std::uint64_t seed =
                cfg.resample_seed ? *cfg.resample_seed
                                  : sdd::derive_seed(cfg.seed, "train.resample");
            const auto picked = sdd::resample_subset(cfg.resample_strategy, y, all, seed);
            std::vector<sdd::TokenSequence> r_docs;
            std::vector<int> r_y;
            r_docs.reserve(picked.size());
            r_y.reserve(picked.size());
            for (std::size_t idx : picked) {
                r_docs.push_back(docs[idx]);
                r_y.push_back(y[idx]);
            }
            docs = std::move(r_docs);
            y = std::move(r_y);
        }

        auto [vocab, x] = sdd::tfidf_fit_transform(docs, cfg.min_df);

        sdd::TrainedModel trained;
        trained.family = family;
        trained.n_classes = sdd::kNumLabels;
        trained.vocab = std::move(vocab);
        switch (family) {
            case sdd::ModelFamily::Mnb:
                trained.model = sdd::train_mnb(x, y, trained.n_classes, cfg.hyperparams.mnb);
                break;
            case sdd::ModelFamily::LogReg:
                trained.model = sdd::train_logreg(x, y, trained.n_classes, cfg.hyperparams.lr);
                break;
            case sdd::ModelFamily::LinearSvm:
                trained.model = sdd::train_linear_svm(x, y, trained.n_classes,
                                                      cfg.hyperparams.svm,
                                                      sdd::derive_seed(cfg.seed, "train.svm"));
                break;
            case sdd::ModelFamily::RandomForest:
                trained.model = sdd::train_random_forest(
                    x, y, trained.n_classes, cfg.hyperparams.rf,
                    sdd::derive_seed(cfg.seed, "train.rf"));
                break;
        }
        *out = new sdd_model{std::move(trained)};
    });
}

sdd_status sdd_model_save(const sdd_model* model, const char* path) {
    return guarded([&] {
        require(model, "model");
        require(path, "path");
        sdd::save_model(model->model, path);
    });
}

sdd_status sdd_model_load(const char* path, sdd_model** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new sdd_model{sdd::load_model(path)};
    });
}

sdd_status sdd_model_family(const sdd_model* model, char* buf, size_t buflen) {
    return guarded([&] {
        require(model, "model");
        copy_to_buffer(std::string(sdd::model_family_name(model->model.family)), buf, buflen);
    });
}

sdd_status sdd_model_predict_csv(const sdd_model* model, const sdd_corpus* corpus,
                                 const char* out_csv_path) {
    return guarded([&] {
        require(model, "model");
        require(corpus, "corpus");
        require(out_csv_path, "out_csv_path");
        const sdd::TrainedModel& trained = model->model;
        const sdd::FeatureMatrix x = featurize_posts(corpus->corpus, trained.vocab);
        const std::vector<int> preds = sdd::predict_labels(trained, x);
        const auto scores = sdd::predict_scores(trained, x);

        std::string out = "id,predicted";
        for (int c = 0; c < trained.n_classes; ++c) {
            out += ",score_" + class_display(c, trained.n_classes);
        }
        out += '\n';
        for (std::size_t i = 0; i < corpus->corpus.size(); ++i) {
            out += csv_quote(corpus->corpus.posts[i].id);
            out += ',';
            out += class_display(preds[i], trained.n_classes);
            for (double s : scores[i]) {
                out += ',';
                out += fmt_score(s);
            }
            out += '\n';
        }

        std::FILE* f = std::fopen(out_csv_path, "wb");
        if (!f) {
            sdd::raise(ErrorCode::IoFailure,
                       "cannot open '" + std::string(out_csv_path) + "' for writing");
        }
        const std::size_t written = std::fwrite(out.data(), 1, out.size(), f);
        const bool ok = written == out.size() && std::fclose(f) == 0;
        if (!ok) {
            sdd::raise(ErrorCode::IoFailure,
                       "short write to '" + std::string(out_csv_path) + "'");
        }
    });
}

sdd_status sdd_model_evaluate(const sdd_model* model, const sdd_corpus* corpus,
                              char** metrics_json) {
    return guarded([&] {
        require(model, "model");
        require(corpus, "corpus");
        require(metrics_json, "metrics_json");
        const sdd::TrainedModel& trained = model->model;

        std::vector<int> y_true;
        y_true.reserve(corpus->corpus.size());
        for (const auto& post : corpus->corpus.posts) {
            if (!post.label) {
                sdd::raise(ErrorCode::UnlabeledPost,
                           "post '" + post.id + "' has no label");
            }
            y_true.push_back(static_cast<int>(*post.label));
        }

        const sdd::FeatureMatrix x = featurize_posts(corpus->corpus, trained.vocab);
        const std::vector<int> preds = sdd::predict_labels(trained, x);
        const sdd::ConfusionMatrix cm =
            sdd::confusion_matrix(y_true, preds, trained.n_classes);
        const sdd::MetricsReport metrics = sdd::metrics_from_confusion(cm);

        nlohmann::json per_class = nlohmann::json::array();
        for (int c = 0; c < trained.n_classes; ++c) {
            per_class.push_back({
                {"label", class_display(c, trained.n_classes)},
                {"precision", metrics.precision[c]},
                {"recall", metrics.recall[c]},
                {"f1", metrics.f1[c]},
                {"support", metrics.support[c]},
            });
        }
        nlohmann::json confusion = nlohmann::json::array();
        for (int t = 0; t < cm.n_classes; ++t) {
            nlohmann::json row = nlohmann::json::array();
            for (int p = 0; p < cm.n_classes; ++p) row.push_back(cm.at(t, p));
            confusion.push_back(std::move(row));
        }
        const nlohmann::json doc{
            {"n", cm.total()},
            {"accuracy", metrics.accuracy},
            {"macro_precision", metrics.macro_precision},
            {"macro_recall", metrics.macro_recall},
            {"macro_f1", metrics.macro_f1},
            {"weighted_precision", metrics.weighted_precision},
            {"weighted_recall", metrics.weighted_recall},
            {"weighted_f1", metrics.weighted_f1},
            {"per_class", std::move(per_class)},
            {"confusion", std::move(confusion)},
        };
        *metrics_json = dup_string(doc.dump(2));
    });
}

void sdd_model_free(sdd_model* model) { delete model; }

/* ---- experiments ------------------------------------------------------ */

sdd_status sdd_run_experiment(const sdd_config* config, const sdd_corpus* corpus,
                              const char* experiment, const char* out_dir,
                              char** report_json) {
    return guarded([&] {
        require(config, "config");
        require(experiment, "experiment");
        const sdd::RunConfig& cfg = config->cfg;
        const sdd::ExperimentSpec spec = spec_from_config(experiment, cfg);
        const sdd::LabeledCorpus data = corpus_or_synthetic(corpus, cfg);
        const sdd::ExperimentReport report = sdd::run_experiment(spec, data);
        if (out_dir) {
            sdd::render_reports(std::span(&report, 1), out_dir, sdd::config_echo(cfg));
        }
        if (report_json) *report_json = dup_string(sdd::experiment_report_to_json(report));
    });
}

sdd_status sdd_run_suite(const sdd_config* config, const sdd_corpus* corpus,
                         const char* out_dir, char** summary_text) {
    return guarded([&] {
        require(config, "config");
        const sdd::RunConfig& cfg = config->cfg;
        const sdd::LabeledCorpus data = corpus_or_synthetic(corpus, cfg);
        const std::string summary = run_suite_impl(cfg, data, out_dir);
        if (summary_text) *summary_text = dup_string(summary);
    });
}

void sdd_string_free(char* s) { std::free(s); }

}  // extern "C"

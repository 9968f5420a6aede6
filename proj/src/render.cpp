#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sdd/errors.hpp"
#include "sdd/experiment.hpp"

namespace sdd {

namespace {

using nlohmann::json;

std::string fmt_full(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string pct(int value) { return std::to_string(value) + "%"; }

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::IoFailure, "cannot open for writing: " + path.string());
    return out;
}

void write_metrics_row(std::ostream& out, const std::string& experiment,
                       std::string_view model, const std::string& segment,
                       const MetricsReport& m, std::size_t n_classes) {
    out << experiment << ',' << model << ',' << segment << ',' << fmt_full(m.accuracy)
        << ',' << fmt_full(m.macro_precision) << ',' << fmt_full(m.macro_recall) << ','
        << fmt_full(m.macro_f1) << ',' << fmt_full(m.weighted_precision) << ','
        << fmt_full(m.weighted_recall) << ',' << fmt_full(m.weighted_f1);
    for (std::size_t c = 0; c < n_classes; ++c) {
        out << ',' << fmt_full(m.precision[c]) << ',' << fmt_full(m.recall[c]) << ','
            << fmt_full(m.f1[c]) << ',' << m.support[c];
    }
    out << '\n';
}

// cv_mean / cv_stdev rows carry only the aggregated columns
void write_summary_row(std::ostream& out, const std::string& experiment,
                       std::string_view model, const std::string& segment, double accuracy,
                       double macro_precision, double macro_recall, double macro_f1,
                       std::size_t n_classes) {
    out << experiment << ',' << model << ',' << segment << ',' << fmt_full(accuracy) << ','
        << fmt_full(macro_precision) << ',' << fmt_full(macro_recall) << ','
        << fmt_full(macro_f1) << ",,,";
    for (std::size_t c = 0; c < n_classes; ++c) out << ",,,,";
    out << '\n';
}

void write_metrics_csv(const std::filesystem::path& path, const ExperimentReport& report,
                       const ModelResult& result) {
    std::ofstream out = open_out(path);
    const std::size_t n_classes = report.class_names.size();
    out << "experiment,model,segment,accuracy,macro_precision,macro_recall,macro_f1,"
           "weighted_precision,weighted_recall,weighted_f1";
    for (const auto& name : report.class_names) {
        out << ",precision_" << name << ",recall_" << name << ",f1_" << name << ",support_"
            << name;
    }
    out << '\n';

    const auto model = model_family_name(result.family);
    write_metrics_row(out, report.spec.name, model, "holdout", result.holdout, n_classes);
    if (result.has_cv) {
        for (std::size_t f = 0; f < result.cv.folds.size(); ++f) {
            write_metrics_row(out, report.spec.name, model, "fold_" + std::to_string(f + 1),
                              result.cv.folds[f].metrics, n_classes);
        }
        write_metrics_row(out, report.spec.name, model, "cv_pooled", result.cv.pooled,
                          n_classes);
        const auto& s = result.cv.summary;
        write_summary_row(out, report.spec.name, model, "cv_mean", s.accuracy.mean,
                          s.macro_precision.mean, s.macro_recall.mean, s.macro_f1.mean,
                          n_classes);
        write_summary_row(out, report.spec.name, model, "cv_stdev", s.accuracy.stdev,
                          s.macro_precision.stdev, s.macro_recall.stdev, s.macro_f1.stdev,
                          n_classes);
    }
    if (!out) raise(ErrorCode::IoFailure, "write failed: " + path.string());
}

void write_confusion_block(std::ostream& out, std::string_view title,
                           const ConfusionMatrix& m,
                           const std::vector<std::string>& class_names) {
    out << "# " << title << " (rows=true, cols=predicted)\n";
    out << "true\\pred";
    for (const auto& name : class_names) out << ',' << name;
    out << '\n';
    for (int i = 0; i < m.n_classes; ++i) {
        out << class_names[static_cast<std::size_t>(i)];
        for (int j = 0; j < m.n_classes; ++j) out << ',' << m.at(i, j);
        out << '\n';
    }
}

void write_confusion_csv(const std::filesystem::path& path, const ExperimentReport& report,
                         const ModelResult& result) {
    std::ofstream out = open_out(path);
    write_confusion_block(out, "holdout", result.holdout_confusion, report.class_names);
    if (result.has_cv) {
        out << '\n';
        write_confusion_block(out, "cv_pooled", result.cv.pooled_confusion,
                              report.class_names);
    }
    if (!out) raise(ErrorCode::IoFailure, "write failed: " + path.string());
}

double metric_value(const MetricsReport& m, TableMetric metric) {
    return metric == TableMetric::Accuracy ? m.accuracy : m.macro_f1;
}

json hyperparams_json(const ModelHyperparams& hp) {
    return json{
        {"mnb", {{"alpha", hp.mnb.alpha}}},
        {"lr",
         {{"l2_lambda", hp.lr.l2_lambda},
          {"learning_rate", hp.lr.learning_rate},
          {"max_iters", hp.lr.max_iters},
          {"tol", hp.lr.tol}}},
        {"svm", {{"l2_lambda", hp.svm.l2_lambda}, {"epochs", hp.svm.epochs}}},
        {"rf",
         {{"n_trees", hp.rf.n_trees},
          {"max_depth", hp.rf.max_depth},
          {"m_features", hp.rf.m_features},
          {"min_leaf", hp.rf.min_leaf},
          {"bootstrap", hp.rf.bootstrap}}},
    };
}

json report_json(const ExperimentReport& report) {
    json models = json::array();
    for (const auto& result : report.models) {
        json entry{
            {"model", model_family_name(result.family)},
            {"holdout",
             {{"accuracy", result.holdout.accuracy},
              {"macro_f1", result.holdout.macro_f1},
              {"macro_precision", result.holdout.macro_precision},
              {"macro_recall", result.holdout.macro_recall}}},
        };
        if (result.has_cv) {
            entry["cv"] = {
                {"folds", result.cv.folds.size()},
                {"accuracy_mean", result.cv.summary.accuracy.mean},
                {"accuracy_stdev", result.cv.summary.accuracy.stdev},
                {"macro_f1_mean", result.cv.summary.macro_f1.mean},
                {"macro_f1_stdev", result.cv.summary.macro_f1.stdev},
                {"pooled_accuracy", result.cv.pooled.accuracy},
                {"pooled_macro_f1", result.cv.pooled.macro_f1},
            };
        }
        models.push_back(std::move(entry));
    }

    const auto& spec = report.spec;
    return json{
        {"name", spec.name},
        {"class_policy", class_policy_name(spec.policy)},
        {"class_names", report.class_names},
        {"resample",
         {{"strategy", resample_strategy_name(spec.resample.strategy)},
          {"scope", resample_scope_name(spec.resample.scope)},
          {"seed", spec.resample.seed},
          {"leak_prone", spec.resample.leak_prone()}}},
        {"split",
         {{"test_fraction", spec.split.test_fraction},
          {"k", spec.split.k},
          {"seed", spec.split.seed}}},
        {"features", {{"min_df", spec.features.min_df}, {"variant", spec.features.variant_tag}}},
        {"hyperparams", hyperparams_json(spec.hyperparams)},
        {"sizes",
         {{"input", report.sizes.n_input},
          {"after_policy", report.sizes.n_after_policy},
          {"after_preprocess", report.sizes.n_after_preprocess},
          {"working", report.sizes.n_working},
          {"working_class_counts", report.sizes.working_class_counts},
          {"train", report.sizes.n_train},
          {"train_resampled", report.sizes.n_train_resampled},
          {"test", report.sizes.n_test}}},
        {"preprocess_stats",
         {{"urls", report.prep_stats.noise.urls},
          {"mentions", report.prep_stats.noise.mentions},
          {"latin", report.prep_stats.noise.latin},
          {"emoji", report.prep_stats.noise.emoji},
          {"digits", report.prep_stats.noise.digits},
          {"punctuation", report.prep_stats.noise.punctuation},
          {"duplicates_dropped", report.prep_stats.duplicates},
          {"empty_dropped", report.prep_stats.empty}}},
        {"models", std::move(models)},
    };
}

}  // namespace

std::string experiment_report_to_json(const ExperimentReport& report) {
    return report_json(report).dump(2);
}

int percent_round_half_up(double value) {
    return static_cast<int>(std::floor(value * 100.0 + 0.5 + 1e-9));
}

std::string render_metric_table(std::span<const ExperimentReport> reports,
                                TableMetric metric) {
    if (reports.empty()) raise(ErrorCode::EmptyReportList, "no experiment reports to render");

    std::ostringstream out;
    out << "# " << (metric == TableMetric::Accuracy ? "Accuracy" : "Macro F1")
        << " (holdout)\n\n";
    out << "| Model |";
    for (const auto& report : reports) out << ' ' << report.spec.name << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < reports.size(); ++i) out << "---|";
    out << '\n';

    for (ModelFamily family : reports[0].spec.models) {
        out << "| " << model_family_display_name(family) << " |";
        for (const auto& report : reports) {
            const ModelResult* found = nullptr;
            for (const auto& result : report.models) {
                if (result.family == family) {
                    found = &result;
                    break;
                }
            }
            if (found) {
                out << ' ' << pct(percent_round_half_up(metric_value(found->holdout, metric)))
                    << " |";
            } else {
                out << " - |";
            }
        }
        out << '\n';
    }

    bool any_leaky = false;
    for (const auto& report : reports) any_leaky |= report.spec.resample.leak_prone();
    if (any_leaky) {
        out << '\n';
        for (const auto& report : reports) {
            if (report.spec.resample.leak_prone()) {
                out << "*" << report.spec.name
                    << " resamples the whole dataset before splitting; duplicates can leak "
                       "across the train/test boundary.*\n";
            }
        }
    }
    return out.str();
}

void render_reports(std::span<const ExperimentReport> reports,
                    const std::filesystem::path& out_dir,
                    const std::map<std::string, std::string>& config_echo) {
    if (reports.empty()) raise(ErrorCode::EmptyReportList, "no experiment reports to render");

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) raise(ErrorCode::IoFailure, "cannot create " + out_dir.string());

    for (const auto& report : reports) {
        for (const auto& result : report.models) {
            const std::filesystem::path model_dir =
                out_dir / report.spec.name / std::string(model_family_name(result.family));
            std::filesystem::create_directories(model_dir, ec);
            if (ec) raise(ErrorCode::IoFailure, "cannot create " + model_dir.string());
            write_metrics_csv(model_dir / "metrics.csv", report, result);
            write_confusion_csv(model_dir / "confusion.csv", report, result);
        }
    }

    {
        std::ofstream out = open_out(out_dir / "accuracy.md");
        out << render_metric_table(reports, TableMetric::Accuracy);
    }
    {
        std::ofstream out = open_out(out_dir / "f1.md");
        out << render_metric_table(reports, TableMetric::MacroF1);
    }
    {
        std::ofstream out = open_out(out_dir / "plotdata.csv");
        out << "experiment,model,accuracy,macro_f1\n";
        for (const auto& report : reports) {
            for (const auto& result : report.models) {
                out << report.spec.name << ',' << model_family_name(result.family) << ','
                    << fmt_full(result.holdout.accuracy) << ','
                    << fmt_full(result.holdout.macro_f1) << '\n';
            }
        }
    }
    {
        json manifest;
        manifest["tool"] = "sdd";
        manifest["tfidf_variant"] = std::string(kTfidfVariantTag);
        manifest["averaging"] = "macro (weighted also emitted in metrics.csv)";
        if (!config_echo.empty()) manifest["config"] = config_echo;
        json experiments = json::array();
        for (const auto& report : reports) experiments.push_back(report_json(report));
        manifest["experiments"] = std::move(experiments);

        json timings;
        for (const auto& report : reports) {
            timings[report.spec.name] = report.stage_ms;
        }
        manifest["nondeterministic"] = {
            {"note", "values below vary between runs"},
            {"generated_unix_ms",
             std::chrono::duration_cast<std::chrono::milliseconds>(
                 std::chrono::system_clock::now().time_since_epoch())
                 .count()},
            {"timings_ms", std::move(timings)},
        };

        std::ofstream out = open_out(out_dir / "manifest.json");
        out << manifest.dump(2) << '\n';
    }
}

const ReferenceResults& reference_results() {
    static const ReferenceResults instance = {
        // accuracy, rows SVM, MNB, LR, RF x exp1..exp4
        {{{{67, 52, 36, 77}}, {{66, 51, 36, 70}}, {{65, 50, 37, 78}}, {{66, 48, 39, 80}}}},
        // macro f1
        {{{{67, 48, 36, 77}}, {{66, 45, 35, 70}}, {{65, 46, 37, 78}}, {{66, 44, 38, 80}}}},
    };
    return instance;
}

std::string render_reference_diff(std::span<const ExperimentReport> reports) {
    if (reports.empty()) raise(ErrorCode::EmptyReportList, "no experiment reports to diff");

    constexpr std::array<ModelFamily, 4> kOrder = {ModelFamily::LinearSvm, ModelFamily::Mnb,
                                                   ModelFamily::LogReg,
                                                   ModelFamily::RandomForest};
    const auto& ref = reference_results();

    // measured[model][experiment], model rows in reference order
    std::array<std::array<const MetricsReport*, 4>, 4> measured{};
    for (const auto& report : reports) {
        int exp_index = -1;
        for (std::size_t e = 0; e < kExperimentNames.size(); ++e) {
            if (report.spec.name == kExperimentNames[e]) exp_index = static_cast<int>(e);
        }
        if (exp_index < 0) continue;
        for (const auto& result : report.models) {
            for (std::size_t m = 0; m < kOrder.size(); ++m) {
                if (result.family == kOrder[m]) {
                    measured[m][static_cast<std::size_t>(exp_index)] = &result.holdout;
                }
            }
        }
    }

    std::ostringstream out;
    const auto emit = [&](std::string_view title, TableMetric metric,
                          const std::array<std::array<int, 4>, 4>& ref_table) {
        out << "## " << title << ": measured vs reference (delta)\n\n";
        out << "| Model |";
        for (std::string_view name : kExperimentNames) out << ' ' << name << " |";
        out << "\n|---|---|---|---|---|\n";
        for (std::size_t m = 0; m < kOrder.size(); ++m) {
            out << "| " << model_family_display_name(kOrder[m]) << " |";
            for (std::size_t e = 0; e < 4; ++e) {
                if (!measured[m][e]) {
                    out << " - |";
                    continue;
                }
                const int got = percent_round_half_up(metric_value(*measured[m][e], metric));
                const int want = ref_table[m][e];
                const int delta = got - want;
                out << ' ' << pct(got) << " vs " << pct(want) << " ("
                    << (delta >= 0 ? "+" : "") << delta << ") |";
            }
            out << '\n';
        }
        out << '\n';
    };

    emit("Accuracy", TableMetric::Accuracy, ref.accuracy_pct);
    emit("Macro F1", TableMetric::MacroF1, ref.f1_pct);
    return out.str();
}

}  // namespace sdd

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sdd/corpus.hpp"
#include "sdd/evaluate.hpp"
#include "sdd/models.hpp"
#include "sdd/resample.hpp"
#include "sdd/text.hpp"

namespace sdd {

enum class ClassPolicy { BinaryDropSuspicious, ThreeClass };

std::string_view class_policy_name(ClassPolicy policy);

struct FeatureConfig {
    std::uint32_t min_df = 1;
    std::string variant_tag{kTfidfVariantTag};
};

struct ModelHyperparams {
    MnbParams mnb;
    LrParams lr;
    SvmParams svm;
    RfParams rf;
};

struct SplitConfig {
    double test_fraction = 0.1;
    int k = 10;
    std::uint64_t seed = 42;
};

// One declarative experiment scenario: class policy, resampling plan, split,
// model set and hyperparameters.
struct ExperimentSpec {
    std::string name;
    ClassPolicy policy = ClassPolicy::ThreeClass;
    ResamplePlan resample;
    SplitConfig split;
    std::vector<ModelFamily> models{ModelFamily::LinearSvm, ModelFamily::Mnb,
                                    ModelFamily::LogReg, ModelFamily::RandomForest};
    ModelHyperparams hyperparams;
    FeatureConfig features;
    bool run_cv = true;
    bool keyword_filter = false;
};

// The four canonical presets:
//   exp1  binary (suspicious dropped), no resampling
//   exp2  all three classes, no resampling
//   exp3  undersampled to the minority count
//   exp4  oversampled to the majority count
// paper_compat switches exp3/exp4 resampling from train_only to
// whole_dataset, reproducing the quoted working-set totals at the cost of
// duplicate leakage across the split.
ExperimentSpec experiment_preset(std::string_view name, std::uint64_t master_seed,
                                 bool paper_compat = false);

inline constexpr std::array<std::string_view, 4> kExperimentNames = {"exp1", "exp2",
                                                                     "exp3", "exp4"};

struct SizeReport {
    std::size_t n_input = 0;
    std::size_t n_after_policy = 0;
    std::size_t n_after_preprocess = 0;
    std::size_t n_working = 0;  // after whole-dataset resampling, if any
    std::array<std::size_t, kNumLabels> working_class_counts = {0, 0, 0};
    std::size_t n_train = 0;
    std::size_t n_train_resampled = 0;
    std::size_t n_test = 0;
};

struct ModelResult {
    ModelFamily family = ModelFamily::Mnb;
    MetricsReport holdout;
    ConfusionMatrix holdout_confusion;
    CvResult cv;
    bool has_cv = false;
    double train_ms = 0.0;
};

struct ExperimentReport {
    ExperimentSpec spec;
    SizeReport sizes;
    PreprocessStats prep_stats;
    std::vector<std::string> class_names;  // label tokens of the classes in play
    std::vector<ModelResult> models;
    std::map<std::string, double> stage_ms;  // wall clock per stage (nondeterministic)
};

// Runs the dataset-shaping stages only (policy, preprocess, resample, split)
// and reports the size arithmetic without training anything.
SizeReport plan_experiment_sizes(const ExperimentSpec& spec, const LabeledCorpus& corpus);

ExperimentReport run_experiment(const ExperimentSpec& spec, const LabeledCorpus& corpus);

std::vector<ExperimentReport> run_paper_suite(const LabeledCorpus& corpus,
                                              std::uint64_t master_seed,
                                              bool paper_compat = false,
                                              const ModelHyperparams& hyperparams = {},
                                              bool run_cv = true);

// ---------------------------------------------------------------------------
// Report rendering.

// out_dir/<experiment>/<model>/{metrics.csv, confusion.csv}
// out_dir/{accuracy.md, f1.md, plotdata.csv, manifest.json}
void render_reports(std::span<const ExperimentReport> reports,
                    const std::filesystem::path& out_dir,
                    const std::map<std::string, std::string>& config_echo = {});

// JSON object describing one experiment run (sizes, per-model metrics, CV
// summaries); the same shape render_reports embeds in manifest.json.
std::string experiment_report_to_json(const ExperimentReport& report);

// Markdown table, models as rows and experiments as columns, holdout values
// rendered as integer percentages (round half up).
enum class TableMetric { Accuracy, MacroF1 };
std::string render_metric_table(std::span<const ExperimentReport> reports,
                                TableMetric metric);

int percent_round_half_up(double value);

// Stored reference integer percentages for the four-model x four-experiment
// grid, used by the --real-data diff mode.
struct ReferenceResults {
    // Indexed [model][experiment] with models in SVM, MNB, LR, RF order.
    std::array<std::array<int, 4>, 4> accuracy_pct;
    std::array<std::array<int, 4>, 4> f1_pct;
};

const ReferenceResults& reference_results();

// Side-by-side table of measured integer percentages against the stored
// reference values, one delta per cell.  No tolerance is applied.
std::string render_reference_diff(std::span<const ExperimentReport> reports);

}  // namespace sdd

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sdd/corpus.hpp"
#include "sdd/experiment.hpp"
#include "sdd/synthetic.hpp"

namespace sdd {

// Every field has a default; a fully-defaulted config runs the synthetic
// demo end to end.
struct RunConfig {
    std::string input_path;  // empty = generate synthetic corpus
    CorpusFormat input_format = CorpusFormat::Csv;
    std::string keywords_file;  // empty = embedded defaults
    bool keyword_filter = false;

    bool prep_normalize = true;
    bool prep_strip = true;
    bool prep_dedup = true;
    bool prep_drop_empty = true;
    std::string norm_table_file;  // empty = embedded defaults

    std::uint32_t min_df = 1;
    ModelHyperparams hyperparams;
    std::vector<ModelFamily> models{ModelFamily::LinearSvm, ModelFamily::Mnb,
                                    ModelFamily::LogReg, ModelFamily::RandomForest};

    double test_fraction = 0.1;
    int cv_folds = 10;
    bool run_cv = true;

    ResampleStrategy resample_strategy = ResampleStrategy::None;
    ResampleScope resample_scope = ResampleScope::TrainOnly;
    std::optional<std::uint64_t> resample_seed;  // unset = derived from master seed
    std::optional<std::uint64_t> split_seed;

    std::uint64_t seed = 42;
    std::string out_dir = "reports/run";
    bool paper_compat = false;
    bool real_data = false;  // print the reference diff after a suite run

    SyntheticSpec synth;
};

// Applies `key = value` to the config; unknown keys and unparsable values
// are errors.
void config_apply(RunConfig& config, const std::string& key, const std::string& value);

// Simple key/value file: one `key = value` per line, '#' comments.
void config_load_file(RunConfig& config, const std::filesystem::path& path);

// File values override defaults; flag overrides (applied in order) override
// the file.
RunConfig parse_config(const std::optional<std::filesystem::path>& file,
                       const std::vector<std::pair<std::string, std::string>>& overrides);

// Current value of a key, stringified (used by config_get and the manifest).
std::string config_get(const RunConfig& config, const std::string& key);

// All recognized keys in declaration order.
const std::vector<std::string>& config_keys();

// Full key -> value snapshot, for report manifests.
std::map<std::string, std::string> config_echo(const RunConfig& config);

}  // namespace sdd

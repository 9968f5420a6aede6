#include "sdd/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "sdd/errors.hpp"

namespace sdd {

namespace {

std::string fmt_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    raise(ErrorCode::TypeMismatch, "expected a boolean, got '" + value + "'");
}

std::uint64_t parse_u64(const std::string& value) {
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        raise(ErrorCode::TypeMismatch, "expected an unsigned integer, got '" + value + "'");
    }
}

double parse_double(const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        raise(ErrorCode::TypeMismatch, "expected a number, got '" + value + "'");
    }
}

int parse_int(const std::string& value) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        raise(ErrorCode::TypeMismatch, "expected an integer, got '" + value + "'");
    }
}

std::string seed_to_string(const std::optional<std::uint64_t>& seed) {
    return seed ? std::to_string(*seed) : "auto";
}

std::optional<std::uint64_t> seed_from_string(const std::string& value) {
    if (value == "auto" || value.empty()) return std::nullopt;
    return parse_u64(value);
}

std::string models_to_string(const std::vector<ModelFamily>& models) {
    std::string out;
    for (ModelFamily family : models) {
        if (!out.empty()) out.push_back(',');
        out += model_family_name(family);
    }
    return out;
}

std::vector<ModelFamily> models_from_string(const std::string& value) {
    std::vector<ModelFamily> models;
    std::istringstream in(value);
    std::string piece;
    while (std::getline(in, piece, ',')) {
        piece = trim(piece);
        if (piece.empty()) continue;
        models.push_back(model_family_from_name(piece));
    }
    if (models.empty()) raise(ErrorCode::TypeMismatch, "model list is empty");
    return models;
}

std::string counts_to_string(const std::array<std::size_t, kNumLabels>& counts) {
    std::string out;
    for (std::size_t c : counts) {
        if (!out.empty()) out.push_back(',');
        out += std::to_string(c);
    }
    return out;
}

std::array<std::size_t, kNumLabels> counts_from_string(const std::string& value) {
    std::array<std::size_t, kNumLabels> counts{};
    std::istringstream in(value);
    std::string piece;
    std::size_t i = 0;
    while (std::getline(in, piece, ',')) {
        if (i >= counts.size()) {
            raise(ErrorCode::TypeMismatch, "expected exactly 3 class counts");
        }
        counts[i++] = parse_u64(trim(piece));
    }
    if (i != counts.size()) raise(ErrorCode::TypeMismatch, "expected exactly 3 class counts");
    return counts;
}

struct KeyEntry {
    const char* name;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

const std::vector<KeyEntry>& registry() {
    static const std::vector<KeyEntry> entries = {
        {"input.path", [](RunConfig& c, const std::string& v) { c.input_path = v; },
         [](const RunConfig& c) { return c.input_path; }},
        {"input.format",
         [](RunConfig& c, const std::string& v) { c.input_format = corpus_format_from_name(v); },
         [](const RunConfig& c) { return std::string(corpus_format_name(c.input_format)); }},
        {"keywords.file", [](RunConfig& c, const std::string& v) { c.keywords_file = v; },
         [](const RunConfig& c) { return c.keywords_file; }},
        {"keywords.filter",
         [](RunConfig& c, const std::string& v) { c.keyword_filter = parse_bool(v); },
         [](const RunConfig& c) { return c.keyword_filter ? "true" : "false"; }},
        {"prep.normalize",
         [](RunConfig& c, const std::string& v) { c.prep_normalize = parse_bool(v); },
         [](const RunConfig& c) { return c.prep_normalize ? "true" : "false"; }},
        {"prep.strip", [](RunConfig& c, const std::string& v) { c.prep_strip = parse_bool(v); },
         [](const RunConfig& c) { return c.prep_strip ? "true" : "false"; }},
        {"prep.dedup", [](RunConfig& c, const std::string& v) { c.prep_dedup = parse_bool(v); },
         [](const RunConfig& c) { return c.prep_dedup ? "true" : "false"; }},
        {"prep.drop_empty",
         [](RunConfig& c, const std::string& v) { c.prep_drop_empty = parse_bool(v); },
         [](const RunConfig& c) { return c.prep_drop_empty ? "true" : "false"; }},
        {"prep.norm_table", [](RunConfig& c, const std::string& v) { c.norm_table_file = v; },
         [](const RunConfig& c) { return c.norm_table_file; }},
        {"features.min_df",
         [](RunConfig& c, const std::string& v) {
             c.min_df = static_cast<std::uint32_t>(parse_u64(v));
         },
         [](const RunConfig& c) { return std::to_string(c.min_df); }},
        {"models", [](RunConfig& c, const std::string& v) { c.models = models_from_string(v); },
         [](const RunConfig& c) { return models_to_string(c.models); }},
        {"mnb.alpha",
         [](RunConfig& c, const std::string& v) { c.hyperparams.mnb.alpha = parse_double(v); },
         [](const RunConfig& c) { return fmt_double(c.hyperparams.mnb.alpha); }},
        {"lr.l2_lambda",
         [](RunConfig& c, const std::string& v) { c.hyperparams.lr.l2_lambda = parse_double(v); },
         [](const RunConfig& c) { return fmt_double(c.hyperparams.lr.l2_lambda); }},
        {"lr.learning_rate",
         [](RunConfig& c, const std::string& v) {
             c.hyperparams.lr.learning_rate = parse_double(v);
         },
         [](const RunConfig& c) { return fmt_double(c.hyperparams.lr.learning_rate); }},
        {"lr.max_iters",
         [](RunConfig& c, const std::string& v) { c.hyperparams.lr.max_iters = parse_u64(v); },
         [](const RunConfig& c) { return std::to_string(c.hyperparams.lr.max_iters); }},
        {"lr.tol",
         [](RunConfig& c, const std::string& v) { c.hyperparams.lr.tol = parse_double(v); },
         [](const RunConfig& c) { return fmt_double(c.hyperparams.lr.tol); }},
        {"svm.l2_lambda",
         [](RunConfig& c, const std::string& v) { c.hyperparams.svm.l2_lambda = parse_double(v); },
         [](const RunConfig& c) { return fmt_double(c.hyperparams.svm.l2_lambda); }},
        {"svm.epochs",
         [](RunConfig& c, const std::string& v) { c.hyperparams.svm.epochs = parse_u64(v); },
         [](const RunConfig& c) { return std::to_string(c.hyperparams.svm.epochs); }},
        {"rf.n_trees",
         [](RunConfig& c, const std::string& v) { c.hyperparams.rf.n_trees = parse_u64(v); },
         [](const RunConfig& c) { return std::to_string(c.hyperparams.rf.n_trees); }},
        {"rf.max_depth",
         [](RunConfig& c, const std::string& v) { c.hyperparams.rf.max_depth = parse_u64(v); },
         [](const RunConfig& c) { return std::to_string(c.hyperparams.rf.max_depth); }},
        {"rf.m_features",
         [](RunConfig& c, const std::string& v) { c.hyperparams.rf.m_features = parse_u64(v); },
         [](const RunConfig& c) { return std::to_string(c.hyperparams.rf.m_features); }},
        {"rf.min_leaf",
         [](RunConfig& c, const std::string& v) { c.hyperparams.rf.min_leaf = parse_u64(v); },
         [](const RunConfig& c) { return std::to_string(c.hyperparams.rf.min_leaf); }},
        {"rf.bootstrap",
         [](RunConfig& c, const std::string& v) { c.hyperparams.rf.bootstrap = parse_bool(v); },
         [](const RunConfig& c) { return c.hyperparams.rf.bootstrap ? "true" : "false"; }},
        {"split.test_fraction",
         [](RunConfig& c, const std::string& v) { c.test_fraction = parse_double(v); },
         [](const RunConfig& c) { return fmt_double(c.test_fraction); }},
        {"split.seed",
         [](RunConfig& c, const std::string& v) { c.split_seed = seed_from_string(v); },
         [](const RunConfig& c) { return seed_to_string(c.split_seed); }},
        {"cv.folds", [](RunConfig& c, const std::string& v) { c.cv_folds = parse_int(v); },
         [](const RunConfig& c) { return std::to_string(c.cv_folds); }},
        {"cv.run", [](RunConfig& c, const std::string& v) { c.run_cv = parse_bool(v); },
         [](const RunConfig& c) { return c.run_cv ? "true" : "false"; }},
        {"resample.strategy",
         [](RunConfig& c, const std::string& v) {
             c.resample_strategy = resample_strategy_from_name(v);
         },
         [](const RunConfig& c) {
             return std::string(resample_strategy_name(c.resample_strategy));
         }},
        {"resample.scope",
         [](RunConfig& c, const std::string& v) { c.resample_scope = resample_scope_from_name(v); },
         [](const RunConfig& c) { return std::string(resample_scope_name(c.resample_scope)); }},
        {"resample.seed",
         [](RunConfig& c, const std::string& v) { c.resample_seed = seed_from_string(v); },
         [](const RunConfig& c) { return seed_to_string(c.resample_seed); }},
        {"seed", [](RunConfig& c, const std::string& v) { c.seed = parse_u64(v); },
         [](const RunConfig& c) { return std::to_string(c.seed); }},
        {"out.dir", [](RunConfig& c, const std::string& v) { c.out_dir = v; },
         [](const RunConfig& c) { return c.out_dir; }},
        {"paper_compat",
         [](RunConfig& c, const std::string& v) { c.paper_compat = parse_bool(v); },
         [](const RunConfig& c) { return c.paper_compat ? "true" : "false"; }},
        {"real_data", [](RunConfig& c, const std::string& v) { c.real_data = parse_bool(v); },
         [](const RunConfig& c) { return c.real_data ? "true" : "false"; }},
        {"synth.counts",
         [](RunConfig& c, const std::string& v) { c.synth.class_counts = counts_from_string(v); },
         [](const RunConfig& c) { return counts_to_string(c.synth.class_counts); }},
        {"synth.vocab_size",
         [](RunConfig& c, const std::string& v) { c.synth.vocab_size = parse_u64(v); },
         [](const RunConfig& c) { return std::to_string(c.synth.vocab_size); }},
        {"synth.markers_per_class",
         [](RunConfig& c, const std::string& v) { c.synth.markers_per_class = parse_u64(v); },
         [](const RunConfig& c) { return std::to_string(c.synth.markers_per_class); }},
        {"synth.marker_weight",
         [](RunConfig& c, const std::string& v) { c.synth.marker_weight = parse_double(v); },
         [](const RunConfig& c) { return fmt_double(c.synth.marker_weight); }},
        {"synth.doc_len_min",
         [](RunConfig& c, const std::string& v) { c.synth.doc_len_min = parse_u64(v); },
         [](const RunConfig& c) { return std::to_string(c.synth.doc_len_min); }},
        {"synth.doc_len_max",
         [](RunConfig& c, const std::string& v) { c.synth.doc_len_max = parse_u64(v); },
         [](const RunConfig& c) { return std::to_string(c.synth.doc_len_max); }},
        {"synth.seed", [](RunConfig& c, const std::string& v) { c.synth.seed = parse_u64(v); },
         [](const RunConfig& c) { return std::to_string(c.synth.seed); }},
    };
    return entries;
}

const KeyEntry& find_key(const std::string& key) {
    for (const auto& entry : registry()) {
        if (key == entry.name) return entry;
    }
    raise(ErrorCode::UnknownKey, "unknown config key '" + key + "'");
}

}  // namespace

void config_apply(RunConfig& config, const std::string& key, const std::string& value) {
    const KeyEntry& entry = find_key(key);
    try {
        entry.set(config, value);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::TypeMismatch) throw;
        raise(ErrorCode::TypeMismatch, "key '" + key + "': " + e.message());
    }
}

void config_load_file(RunConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        if (!std::filesystem::exists(path)) {
            raise(ErrorCode::FileNotFound, "no such config file: " + path.string());
        }
        raise(ErrorCode::IoFailure, "cannot open " + path.string());
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            raise(ErrorCode::MalformedRecord,
                  path.string() + ": line " + std::to_string(line_no) + " is not 'key = value'");
        }
        config_apply(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

RunConfig parse_config(const std::optional<std::filesystem::path>& file,
                       const std::vector<std::pair<std::string, std::string>>& overrides) {
    RunConfig config;
    if (file) config_load_file(config, *file);
    for (const auto& [key, value] : overrides) config_apply(config, key, value);
    return config;
}

std::string config_get(const RunConfig& config, const std::string& key) {
    return find_key(key).get(config);
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> names;
        for (const auto& entry : registry()) names.emplace_back(entry.name);
        return names;
    }();
    return keys;
}

std::map<std::string, std::string> config_echo(const RunConfig& config) {
    std::map<std::string, std::string> echo;
    for (const auto& entry : registry()) echo[entry.name] = entry.get(config);
    return echo;
}

}  // namespace sdd

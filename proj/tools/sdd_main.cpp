// sdd — command-line front end for the soranidd library.  Thin driver: all
// pipeline work happens behind the C API.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "soranidd.h"

namespace {

struct Failure {
    sdd_status status;
    std::string message;
};

void check(sdd_status status) {
    if (status != SDD_OK) throw Failure{status, sdd_last_error()};
}

[[noreturn]] void usage_error(const std::string& message) {
    throw Failure{SDD_E_INVALID_ARGUMENT, message};
}

struct ConfigDeleter {
    void operator()(sdd_config* p) const { sdd_config_free(p); }
};
struct CorpusDeleter {
    void operator()(sdd_corpus* p) const { sdd_corpus_free(p); }
};
struct ModelDeleter {
    void operator()(sdd_model* p) const { sdd_model_free(p); }
};
struct StringDeleter {
    void operator()(char* p) const { sdd_string_free(p); }
};

using ConfigPtr = std::unique_ptr<sdd_config, ConfigDeleter>;
using CorpusPtr = std::unique_ptr<sdd_corpus, CorpusDeleter>;
using ModelPtr = std::unique_ptr<sdd_model, ModelDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

struct Options {
    std::string command;
    std::string config_file;
    std::vector<std::string> sets;  // key=value overrides, applied last
    std::string input;
    std::string format;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string model;  // family name for `train`
    std::string model_file;
    std::string experiment;
    bool paper_compat = false;
    std::string out;
    bool out_given = false;
};

std::string config_value(const sdd_config* config, const std::string& key) {
    char buf[4096];
    check(sdd_config_get(config, key.c_str(), buf, sizeof(buf)));
    return buf;
}

ConfigPtr build_config(const Options& opts) {
    sdd_config* raw = nullptr;
    check(sdd_config_create(&raw));
    ConfigPtr config(raw);

    if (!opts.config_file.empty()) {
        check(sdd_config_load_file(config.get(), opts.config_file.c_str()));
    }
    if (!opts.input.empty()) check(sdd_config_set(config.get(), "input.path", opts.input.c_str()));
    if (!opts.format.empty()) {
        check(sdd_config_set(config.get(), "input.format", opts.format.c_str()));
    }
    if (opts.seed_given) {
        check(sdd_config_set(config.get(), "seed", std::to_string(opts.seed).c_str()));
    }
    if (opts.paper_compat) check(sdd_config_set(config.get(), "paper_compat", "true"));
    if (opts.out_given) check(sdd_config_set(config.get(), "out.dir", opts.out.c_str()));

    for (const std::string& pair : opts.sets) {
        const std::size_t eq = pair.find('=');
        if (eq == std::string::npos) {
            usage_error("--set expects key=value, got '" + pair + "'");
        }
        const std::string key = pair.substr(0, eq);
        const std::string value = pair.substr(eq + 1);
        check(sdd_config_set(config.get(), key.c_str(), value.c_str()));
    }
    return config;
}

CorpusPtr load_input(const sdd_config* config, const std::string& command) {
    const std::string path = config_value(config, "input.path");
    if (path.empty()) {
        usage_error(command + " requires --input (or input.path in the config)");
    }
    const std::string format = config_value(config, "input.format");
    sdd_corpus* raw = nullptr;
    check(sdd_corpus_load(path.c_str(), format.c_str(), &raw));
    return CorpusPtr(raw);
}

// NULL corpus selects the seeded synthetic corpus inside the library.
CorpusPtr maybe_load_input(const sdd_config* config) {
    if (config_value(config, "input.path").empty()) return nullptr;
    return load_input(config, "");
}

void write_corpus_file(const sdd_config* config, const sdd_corpus* corpus,
                       const std::string& path) {
    const std::string format = config_value(config, "input.format");
    check(sdd_corpus_write(corpus, path.c_str(), format.c_str()));
}

int run_ingest(const Options& opts, const sdd_config* config) {
    CorpusPtr corpus = load_input(config, "ingest");
    size_t n = 0;
    check(sdd_corpus_size(corpus.get(), &n));
    std::cout << "posts: " << n << '\n';

    size_t counts[3] = {0, 0, 0};
    if (sdd_corpus_class_counts(corpus.get(), counts) == SDD_OK) {
        std::cout << "labels: show=" << counts[0] << " not_show=" << counts[1]
                  << " suspicious=" << counts[2] << '\n';
    } else {
        std::cout << "labels: incomplete (" << sdd_last_error() << ")\n";
    }
    if (!opts.out.empty()) {
        write_corpus_file(config, corpus.get(), opts.out);
        std::cout << "wrote: " << opts.out << '\n';
    }
    return 0;
}

int run_preprocess(const Options& opts, const sdd_config* config) {
    CorpusPtr corpus = load_input(config, "preprocess");
    sdd_corpus* cleaned_raw = nullptr;
    char* stats_raw = nullptr;
    check(sdd_corpus_preprocess(corpus.get(), config, &cleaned_raw, &stats_raw));
    CorpusPtr cleaned(cleaned_raw);
    StringPtr stats(stats_raw);

    std::cout << stats.get() << '\n';
    size_t n = 0;
    check(sdd_corpus_size(cleaned.get(), &n));
    std::cout << "kept: " << n << '\n';
    if (!opts.out.empty()) {
        write_corpus_file(config, cleaned.get(), opts.out);
        std::cout << "wrote: " << opts.out << '\n';
    }
    return 0;
}

int run_train(const Options& opts, const sdd_config* config) {
    if (opts.model.empty()) usage_error("train requires --model {mnb|lr|svm|rf}");
    if (opts.out.empty()) usage_error("train requires --out <model-file>");
    CorpusPtr corpus = load_input(config, "train");

    sdd_model* raw = nullptr;
    check(sdd_train(config, corpus.get(), opts.model.c_str(), &raw));
    ModelPtr model(raw);
    check(sdd_model_save(model.get(), opts.out.c_str()));

    size_t n = 0;
    check(sdd_corpus_size(corpus.get(), &n));
    std::cout << "trained " << opts.model << " on " << n << " posts -> " << opts.out
              << '\n';
    return 0;
}

ModelPtr load_model_file(const Options& opts, const std::string& command) {
    if (opts.model_file.empty()) usage_error(command + " requires --model-file <path>");
    sdd_model* raw = nullptr;
    check(sdd_model_load(opts.model_file.c_str(), &raw));
    return ModelPtr(raw);
}

int run_predict(const Options& opts, const sdd_config* config) {
    if (opts.out.empty()) usage_error("predict requires --out <csv-file>");
    ModelPtr model = load_model_file(opts, "predict");
    CorpusPtr corpus = load_input(config, "predict");
    check(sdd_model_predict_csv(model.get(), corpus.get(), opts.out.c_str()));

    size_t n = 0;
    check(sdd_corpus_size(corpus.get(), &n));
    std::cout << "wrote predictions for " << n << " posts -> " << opts.out << '\n';
    return 0;
}

int run_evaluate(const Options& opts, const sdd_config* config) {
    ModelPtr model = load_model_file(opts, "evaluate");
    CorpusPtr corpus = load_input(config, "evaluate");

    char* metrics_raw = nullptr;
    check(sdd_model_evaluate(model.get(), corpus.get(), &metrics_raw));
    StringPtr metrics(metrics_raw);
    std::cout << metrics.get() << '\n';

    if (!opts.out.empty()) {
        std::ofstream file(opts.out, std::ios::binary);
        file << metrics.get() << '\n';
        if (!file) throw Failure{SDD_E_IO_FAILURE, "cannot write '" + opts.out + "'"};
        std::cout << "wrote: " << opts.out << '\n';
    }
    return 0;
}

int run_experiment_cmd(const Options& opts, const sdd_config* config) {
    if (opts.experiment.empty()) {
        usage_error("run-experiment requires --experiment {exp1|exp2|exp3|exp4}");
    }
    CorpusPtr corpus = maybe_load_input(config);
    const std::string out_dir = config_value(config, "out.dir");

    char* report_raw = nullptr;
    check(sdd_run_experiment(config, corpus.get(), opts.experiment.c_str(),
                             out_dir.empty() ? nullptr : out_dir.c_str(), &report_raw));
    StringPtr report(report_raw);
    std::cout << report.get() << '\n';
    if (!out_dir.empty()) std::cout << "reports: " << out_dir << '\n';
    return 0;
}

int run_suite_cmd(const Options&, const sdd_config* config) {
    CorpusPtr corpus = maybe_load_input(config);
    const std::string out_dir = config_value(config, "out.dir");

    char* summary_raw = nullptr;
    check(sdd_run_suite(config, corpus.get(), out_dir.empty() ? nullptr : out_dir.c_str(),
                        &summary_raw));
    StringPtr summary(summary_raw);
    std::cout << summary.get();
    if (!out_dir.empty()) std::cout << "\nreports: " << out_dir << '\n';
    return 0;
}

int run_synth(const Options& opts, const sdd_config* config) {
    if (opts.out.empty()) usage_error("synth requires --out <corpus-file>");
    sdd_corpus* raw = nullptr;
    check(sdd_corpus_synthetic(config, &raw));
    CorpusPtr corpus(raw);
    write_corpus_file(config, corpus.get(), opts.out);

    size_t n = 0;
    check(sdd_corpus_size(corpus.get(), &n));
    std::cout << "wrote " << n << " synthetic posts -> " << opts.out << '\n';
    return 0;
}

int dispatch(const Options& opts) {
    ConfigPtr config = build_config(opts);
    if (opts.command == "ingest") return run_ingest(opts, config.get());
    if (opts.command == "preprocess") return run_preprocess(opts, config.get());
    if (opts.command == "train") return run_train(opts, config.get());
    if (opts.command == "predict") return run_predict(opts, config.get());
    if (opts.command == "evaluate") return run_evaluate(opts, config.get());
    if (opts.command == "run-experiment") return run_experiment_cmd(opts, config.get());
    if (opts.command == "run-suite") return run_suite_cmd(opts, config.get());
    if (opts.command == "synth") return run_synth(opts, config.get());
    usage_error("unknown command '" + opts.command + "'");
}

}  // namespace

int main(int argc, char** argv) {
    Options opts;

    CLI::App app{"Sorani Kurdish depression-detection pipeline"};
    app.set_version_flag("--version", sdd_version());
    app.require_subcommand(1);

    app.add_option("--config", opts.config_file, "key = value config file");
    app.add_option("--set", opts.sets, "config override key=value (repeatable)")
        ->allow_extra_args(false);
    app.add_option("--input", opts.input, "corpus file");
    app.add_option("--format", opts.format, "corpus format")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    auto* seed_opt = app.add_option("--seed", opts.seed, "master RNG seed");
    app.add_option("--model", opts.model, "model family for train")
        ->check(CLI::IsMember({"mnb", "lr", "svm", "rf"}));
    app.add_option("--model-file", opts.model_file, "saved model file");
    app.add_option("--experiment", opts.experiment, "experiment preset")
        ->check(CLI::IsMember({"exp1", "exp2", "exp3", "exp4"}));
    app.add_flag("--paper-compat", opts.paper_compat,
                 "resample before splitting in exp3/exp4 (reproduces quoted totals)");
    auto* out_opt = app.add_option(
        "--out", opts.out, "output path (reports dir, or file for train/predict/synth)");

    const char* const commands[] = {"ingest", "preprocess", "train",    "predict",
                                    "evaluate", "run-experiment", "run-suite", "synth"};
    const char* const briefs[] = {
        "load a corpus, validate it and print stats",
        "clean a corpus and report per-rule drop counts",
        "train one model and save it",
        "predict labels and scores for a corpus",
        "score a saved model against a labeled corpus",
        "run one experiment preset",
        "run all four experiment presets and render the comparison tables",
        "generate the seeded synthetic corpus"};
    for (std::size_t i = 0; i < std::size(commands); ++i) {
        app.add_subcommand(commands[i], briefs[i])->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: InvalidArgument: %s\n", e.what());
        return SDD_E_INVALID_ARGUMENT;
    }

    opts.seed_given = seed_opt->count() > 0;
    opts.out_given = out_opt->count() > 0;
    opts.command = app.get_subcommands().front()->get_name();

    try {
        return dispatch(opts);
    } catch (const Failure& f) {
        std::fprintf(stderr, "error: %s: %s\n", sdd_status_name(f.status),
                     f.message.c_str());
        return static_cast<int>(f.status);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: Internal: %s\n", e.what());
        return static_cast<int>(SDD_E_INTERNAL);
    }
}

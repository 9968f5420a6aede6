/*
 * soranidd — Sorani Kurdish depression-detection text pipeline.
 *
 * C API of the shared library.  All objects are opaque handles created and
 * destroyed by this API; every fallible call returns an sdd_status and leaves
 * a human-readable message in thread-local storage (sdd_last_error).
 * Out-parameter strings are allocated by the library and must be released
 * with sdd_string_free.
 */
#ifndef SORANIDD_H
#define SORANIDD_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sdd_status {
    SDD_OK = 0,
    SDD_E_IO_FAILURE,
    SDD_E_MISSING_COLUMN,
    SDD_E_DUPLICATE_ID,
    SDD_E_UNKNOWN_LABEL,
    SDD_E_MALFORMED_RECORD,
    SDD_E_UNLABELED_POST,
    SDD_E_EMPTY_KEYWORD_SET,
    SDD_E_EMPTY_CORPUS,
    SDD_E_EMPTY_VOCABULARY,
    SDD_E_EMPTY_TRAINING_SET,
    SDD_E_NEGATIVE_FEATURE,
    SDD_E_NON_FINITE_OBJECTIVE,
    SDD_E_EMPTY_CLASS,
    SDD_E_FRACTION_OUT_OF_RANGE,
    SDD_E_K_TOO_LARGE,
    SDD_E_LENGTH_MISMATCH,
    SDD_E_LABEL_OUT_OF_RANGE,
    SDD_E_EMPTY_MATRIX,
    SDD_E_DIMENSION_MISMATCH,
    SDD_E_VERSION_MISMATCH,
    SDD_E_CORRUPT_MODEL,
    SDD_E_UNKNOWN_KEY,
    SDD_E_TYPE_MISMATCH,
    SDD_E_FILE_NOT_FOUND,
    SDD_E_INVALID_SPEC,
    SDD_E_EMPTY_REPORT_LIST,
    SDD_E_INVALID_ARGUMENT,
    SDD_E_INTERNAL
} sdd_status;

typedef struct sdd_config sdd_config;
typedef struct sdd_corpus sdd_corpus;
typedef struct sdd_model sdd_model;

/* Library version string, e.g. "1.0.0". */
const char* sdd_version(void);

/* Message of the most recent failure on this thread; valid until the next
 * API call on the same thread. */
const char* sdd_last_error(void);

/* Stable category name of a status code, e.g. "UnknownLabel". */
const char* sdd_status_name(sdd_status status);

/* ---- configuration ---------------------------------------------------- */

sdd_status sdd_config_create(sdd_config** out);
sdd_status sdd_config_load_file(sdd_config* config, const char* path);
/* Dotted keys, e.g. "rf.n_trees"; unknown keys and bad value types fail. */
sdd_status sdd_config_set(sdd_config* config, const char* key, const char* value);
/* Writes the stringified value of `key` into buf (NUL-terminated). */
sdd_status sdd_config_get(const sdd_config* config, const char* key, char* buf,
                          size_t buflen);
void sdd_config_free(sdd_config* config);

/* ---- corpus ----------------------------------------------------------- */

/* format is "csv" or "jsonl". */
sdd_status sdd_corpus_load(const char* path, const char* format, sdd_corpus** out);
sdd_status sdd_corpus_write(const sdd_corpus* corpus, const char* path,
                            const char* format);
/* Seeded synthetic corpus from the config's synth.* keys. */
sdd_status sdd_corpus_synthetic(const sdd_config* config, sdd_corpus** out);
sdd_status sdd_corpus_size(const sdd_corpus* corpus, size_t* out);
/* Per-class counts in label-code order (show, not_show, suspicious);
 * requires a fully labeled corpus. */
sdd_status sdd_corpus_class_counts(const sdd_corpus* corpus, size_t out_counts[3]);
/* keywords_path NULL selects the embedded default keyword set. */
sdd_status sdd_corpus_filter_keywords(const sdd_corpus* corpus,
                                      const char* keywords_path, sdd_corpus** out);
/* Runs normalize/strip/tokenize/dedup per the config (NULL = defaults) and
 * returns the cleaned corpus.  stats_json, if non-NULL, receives a JSON
 * object with per-rule removal counts. */
sdd_status sdd_corpus_preprocess(const sdd_corpus* corpus, const sdd_config* config,
                                 sdd_corpus** out, char** stats_json);
void sdd_corpus_free(sdd_corpus* corpus);

/* ---- models ----------------------------------------------------------- */

/* model is one of "mnb", "lr", "svm", "rf".  Preprocesses and vectorizes the
 * corpus per the config, then trains. */
sdd_status sdd_train(const sdd_config* config, const sdd_corpus* corpus,
                     const char* model, sdd_model** out);
sdd_status sdd_model_save(const sdd_model* model, const char* path);
sdd_status sdd_model_load(const char* path, sdd_model** out);
sdd_status sdd_model_family(const sdd_model* model, char* buf, size_t buflen);
/* Writes id, predicted label and per-class scores, one row per post. */
sdd_status sdd_model_predict_csv(const sdd_model* model, const sdd_corpus* corpus,
                                 const char* out_csv_path);
/* Evaluates on a labeled corpus; metrics_json receives accuracy, per-class
 * and averaged precision/recall/F1 and the confusion matrix. */
sdd_status sdd_model_evaluate(const sdd_model* model, const sdd_corpus* corpus,
                              char** metrics_json);
void sdd_model_free(sdd_model* model);

/* ---- experiments ------------------------------------------------------ */

/* experiment is "exp1".."exp4".  corpus NULL generates the synthetic corpus
 * from the config.  Writes the report tree under out_dir; report_json, if
 * non-NULL, receives the experiment report. */
sdd_status sdd_run_experiment(const sdd_config* config, const sdd_corpus* corpus,
                              const char* experiment, const char* out_dir,
                              char** report_json);
/* Runs the four presets and renders comparison tables under out_dir.
 * summary_text, if non-NULL, receives the rendered accuracy/F1 tables (plus
 * the reference diff when config sets real_data). */
sdd_status sdd_run_suite(const sdd_config* config, const sdd_corpus* corpus,
                         const char* out_dir, char** summary_text);

void sdd_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* SORANIDD_H */

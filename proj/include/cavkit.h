/* cavkit — concept-sensitivity auditing and DoE-guided data augmentation
 * for binary text classifiers.
 *
 * C API of the shared library. All handles are opaque; every fallible call
 * returns a cavkit_status, and cavkit_last_error() carries the message for
 * the most recent failure on the calling thread.
 */
#ifndef CAVKIT_H
#define CAVKIT_H

#include <stddef.h>

#if defined(_WIN32)
#define CAVKIT_API __declspec(dllexport)
#else
#define CAVKIT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cavkit_status {
    CAVKIT_OK = 0,
    CAVKIT_ERROR_INTERNAL = 1,
    CAVKIT_ERROR_CONFIG = 2, /* bad keys, flags, degenerate-head refusal */
    CAVKIT_ERROR_DATA = 3,   /* missing/malformed files, label-map violations */
    CAVKIT_ERROR_NUMERIC = 4 /* divergence, non-finite values */
} cavkit_status;

CAVKIT_API const char* cavkit_version(void);

/* Message for the last failed call on this thread; empty string if none. */
CAVKIT_API const char* cavkit_last_error(void);

/* ------------------------------------------------------------------ */
/* Configuration: flat `section.key = value` pairs. A fresh config has
 * every known key at its default; unknown keys are rejected.          */

typedef struct cavkit_config cavkit_config;

CAVKIT_API cavkit_config* cavkit_config_new(void);
CAVKIT_API void cavkit_config_free(cavkit_config* cfg);
CAVKIT_API cavkit_status cavkit_config_load_file(cavkit_config* cfg, const char* path);
CAVKIT_API cavkit_status cavkit_config_set(cavkit_config* cfg, const char* key,
                                           const char* value);
/* Returns the current value (may be empty), or NULL for an unknown key. */
CAVKIT_API const char* cavkit_config_get(const cavkit_config* cfg, const char* key);

/* ------------------------------------------------------------------ */
/* Commands. Each writes its outputs plus the resolved config into a
 * content-addressed directory under <out.dir>/ and, on success, copies
 * that directory's path into run_dir (when non-NULL, cap > 0).        */

CAVKIT_API cavkit_status cavkit_cmd_gen(const cavkit_config* cfg, char* run_dir, size_t cap);
CAVKIT_API cavkit_status cavkit_cmd_train(const cavkit_config* cfg, char* run_dir, size_t cap);
CAVKIT_API cavkit_status cavkit_cmd_eval(const cavkit_config* cfg, char* run_dir, size_t cap);
CAVKIT_API cavkit_status cavkit_cmd_tcav(const cavkit_config* cfg, char* run_dir, size_t cap);
CAVKIT_API cavkit_status cavkit_cmd_doe(const cavkit_config* cfg, char* run_dir, size_t cap);
CAVKIT_API cavkit_status cavkit_cmd_augment(const cavkit_config* cfg, char* run_dir,
                                            size_t cap);
CAVKIT_API cavkit_status cavkit_cmd_vocab(const cavkit_config* cfg, char* run_dir, size_t cap);
CAVKIT_API cavkit_status cavkit_cmd_report(const cavkit_config* cfg, char* run_dir, size_t cap);

/* Dispatch by subcommand name ("gen", "train", "eval"/"evaluate", ...). */
CAVKIT_API cavkit_status cavkit_run_command(const char* command, const cavkit_config* cfg,
                                            char* run_dir, size_t cap);

/* ------------------------------------------------------------------ */
/* Datasets (JSONL corpus files).                                      */

typedef struct cavkit_dataset cavkit_dataset;

/* labelmap_path may be NULL for the identity map (raw labels "positive"
 * and "negative"); split is one of train/dev/test/pool.               */
CAVKIT_API cavkit_dataset* cavkit_dataset_open(const char* jsonl_path,
                                               const char* labelmap_path, const char* split);
CAVKIT_API void cavkit_dataset_free(cavkit_dataset* ds);
CAVKIT_API size_t cavkit_dataset_size(const cavkit_dataset* ds);
CAVKIT_API double cavkit_dataset_class_ratio(const cavkit_dataset* ds);

/* ------------------------------------------------------------------ */
/* Classifiers (CLF v1 model files).                                   */

typedef struct cavkit_classifier cavkit_classifier;

CAVKIT_API cavkit_classifier* cavkit_classifier_open(const char* model_path);
CAVKIT_API void cavkit_classifier_free(cavkit_classifier* clf);
CAVKIT_API int cavkit_classifier_dim(const cavkit_classifier* clf);
/* Any output pointer may be NULL. predicted_positive is 0 or 1. */
CAVKIT_API cavkit_status cavkit_classifier_predict(const cavkit_classifier* clf,
                                                   const char* text, double* logit,
                                                   double* probability, double* confidence,
                                                   int* predicted_positive);

#ifdef __cplusplus
}
#endif

#endif /* CAVKIT_H */

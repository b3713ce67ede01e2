#include "cavkit.h"

#include <cstring>
#include <string>

#include "core/classifier.hpp"
#include "core/config.hpp"
#include "core/data.hpp"
#include "core/error.hpp"
#include "core/runner.hpp"

namespace {

thread_local std::string g_last_error;

cavkit_status status_of(const cavkit::Error& e) {
    switch (e.kind()) {
        case cavkit::ErrorKind::config: return CAVKIT_ERROR_CONFIG;
        case cavkit::ErrorKind::data: return CAVKIT_ERROR_DATA;
        default: return CAVKIT_ERROR_NUMERIC;
    }
}

template <typename Fn>
cavkit_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return CAVKIT_OK;
    } catch (const cavkit::Error& e) {
        g_last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CAVKIT_ERROR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return CAVKIT_ERROR_INTERNAL;
    }
}

void copy_out(const std::string& value, char* out, size_t cap) {
    if (!out || cap == 0) return;
    const size_t n = value.size() < cap - 1 ? value.size() : cap - 1;
    std::memcpy(out, value.data(), n);
    out[n] = '\0';
}

cavkit::RunConfig& unwrap(cavkit_config* cfg) {
    return *reinterpret_cast<cavkit::RunConfig*>(cfg);
}

const cavkit::RunConfig& unwrap(const cavkit_config* cfg) {
    return *reinterpret_cast<const cavkit::RunConfig*>(cfg);
}

cavkit_status run(const char* command, const cavkit_config* cfg, char* run_dir, size_t cap) {
    if (!cfg) {
        g_last_error = "null config";
        return CAVKIT_ERROR_CONFIG;
    }
    return guarded([&] {
        const std::string dir = cavkit::run_command(command, unwrap(cfg));
        copy_out(dir, run_dir, cap);
    });
}

}  // namespace

extern "C" {

const char* cavkit_version(void) { return "0.3.0"; }

const char* cavkit_last_error(void) { return g_last_error.c_str(); }

cavkit_config* cavkit_config_new(void) {
    try {
        return reinterpret_cast<cavkit_config*>(new cavkit::RunConfig());
    } catch (...) {
        g_last_error = "out of memory";
        return nullptr;
    }
}

void cavkit_config_free(cavkit_config* cfg) {
    delete reinterpret_cast<cavkit::RunConfig*>(cfg);
}

cavkit_status cavkit_config_load_file(cavkit_config* cfg, const char* path) {
    if (!cfg || !path) {
        g_last_error = "null argument";
        return CAVKIT_ERROR_CONFIG;
    }
    return guarded([&] { unwrap(cfg).load_file(path); });
}

cavkit_status cavkit_config_set(cavkit_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) {
        g_last_error = "null argument";
        return CAVKIT_ERROR_CONFIG;
    }
    return guarded([&] { unwrap(cfg).set(key, value); });
}

const char* cavkit_config_get(const cavkit_config* cfg, const char* key) {
    if (!cfg || !key) return nullptr;
    try {
        return unwrap(cfg).get(key).c_str();
    } catch (...) {
        return nullptr;
    }
}

cavkit_status cavkit_cmd_gen(const cavkit_config* cfg, char* run_dir, size_t cap) {
    return run("gen", cfg, run_dir, cap);
}
cavkit_status cavkit_cmd_train(const cavkit_config* cfg, char* run_dir, size_t cap) {
    return run("train", cfg, run_dir, cap);
}
cavkit_status cavkit_cmd_eval(const cavkit_config* cfg, char* run_dir, size_t cap) {
    return run("eval", cfg, run_dir, cap);
}
cavkit_status cavkit_cmd_tcav(const cavkit_config* cfg, char* run_dir, size_t cap) {
    return run("tcav", cfg, run_dir, cap);
}
cavkit_status cavkit_cmd_doe(const cavkit_config* cfg, char* run_dir, size_t cap) {
    return run("doe", cfg, run_dir, cap);
}
cavkit_status cavkit_cmd_augment(const cavkit_config* cfg, char* run_dir, size_t cap) {
    return run("augment", cfg, run_dir, cap);
}
cavkit_status cavkit_cmd_vocab(const cavkit_config* cfg, char* run_dir, size_t cap) {
    return run("vocab", cfg, run_dir, cap);
}
cavkit_status cavkit_cmd_report(const cavkit_config* cfg, char* run_dir, size_t cap) {
    return run("report", cfg, run_dir, cap);
}

cavkit_status cavkit_run_command(const char* command, const cavkit_config* cfg, char* run_dir,
                                 size_t cap) {
    if (!command) {
        g_last_error = "null command";
        return CAVKIT_ERROR_CONFIG;
    }
    return run(command, cfg, run_dir, cap);
}

cavkit_dataset* cavkit_dataset_open(const char* jsonl_path, const char* labelmap_path,
                                    const char* split) {
    if (!jsonl_path || !split) {
        g_last_error = "null argument";
        return nullptr;
    }
    cavkit::Dataset* out = nullptr;
    const cavkit_status st = guarded([&] {
        const cavkit::LabelMap map = labelmap_path ? cavkit::LabelMap::load(labelmap_path)
                                                   : cavkit::LabelMap::identity();
        out = new cavkit::Dataset(
            cavkit::load_dataset(jsonl_path, map, cavkit::split_from_string(split)));
    });
    return st == CAVKIT_OK ? reinterpret_cast<cavkit_dataset*>(out) : nullptr;
}

void cavkit_dataset_free(cavkit_dataset* ds) {
    delete reinterpret_cast<cavkit::Dataset*>(ds);
}

size_t cavkit_dataset_size(const cavkit_dataset* ds) {
    return ds ? reinterpret_cast<const cavkit::Dataset*>(ds)->size() : 0;
}

double cavkit_dataset_class_ratio(const cavkit_dataset* ds) {
    return ds ? reinterpret_cast<const cavkit::Dataset*>(ds)->class_ratio() : 0.0;
}

cavkit_classifier* cavkit_classifier_open(const char* model_path) {
    if (!model_path) {
        g_last_error = "null argument";
        return nullptr;
    }
    cavkit::TrainedClassifier* out = nullptr;
    const cavkit_status st = guarded(
        [&] { out = new cavkit::TrainedClassifier(cavkit::TrainedClassifier::load(model_path)); });
    return st == CAVKIT_OK ? reinterpret_cast<cavkit_classifier*>(out) : nullptr;
}

void cavkit_classifier_free(cavkit_classifier* clf) {
    delete reinterpret_cast<cavkit::TrainedClassifier*>(clf);
}

int cavkit_classifier_dim(const cavkit_classifier* clf) {
    return clf ? static_cast<int>(reinterpret_cast<const cavkit::TrainedClassifier*>(clf)->dim())
               : 0;
}

cavkit_status cavkit_classifier_predict(const cavkit_classifier* clf, const char* text,
                                        double* logit, double* probability, double* confidence,
                                        int* predicted_positive) {
    if (!clf || !text) {
        g_last_error = "null argument";
        return CAVKIT_ERROR_CONFIG;
    }
    return guarded([&] {
        const cavkit::Prediction p =
            reinterpret_cast<const cavkit::TrainedClassifier*>(clf)->predict_text(text);
        if (logit) *logit = p.logit;
        if (probability) *probability = p.probability;
        if (confidence) *confidence = p.confidence;
        if (predicted_positive) *predicted_positive = p.predicted_positive ? 1 : 0;
    });
}

}  // extern "C"

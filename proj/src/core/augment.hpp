#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "classifier.hpp"
#include "data.hpp"
#include "doe.hpp"
#include "metrics.hpp"

namespace cavkit {

// Everything needed to train a classifier from scratch; the sweep retrains
// one per cell with fresh seeded initialization.
struct ModelRecipe {
    FeaturizerSpec featurizer;
    std::uint32_t dim = 64;
    bool normalize = true;
    float init_scale = 0.05f;
    std::uint64_t encoder_seed = 1;
    std::uint32_t hidden_dim = 32;
    Activation activation = Activation::tanh;
    TrainConfig train;

    TrainedClassifier fit(const Dataset& train_set, const Dataset& dev_set) const;
};

enum class Strategy : std::uint8_t { doe, confidence, random_pick };

Strategy strategy_from_string(const std::string& s);
const char* to_string(Strategy s);

struct AugmentationPlan {
    std::vector<Strategy> strategies;
    std::vector<std::size_t> n_values;  // strictly increasing, max <= |pool|
    const Dataset* base_train = nullptr;
    const Dataset* base_dev = nullptr;
    const Dataset* pool = nullptr;
    std::vector<std::pair<std::string, const Dataset*>> eval_sets;
    ModelRecipe recipe;
    // doe strategy inputs
    const ConceptSet* explicit_concept = nullptr;
    const std::vector<Utterance>* inputs = nullptr;
    DoeParams doe;
    std::uint64_t selection_seed = 0;  // random strategy

    void validate() const;
};

struct SweepCell {
    std::string strategy;  // doe | confidence | random | baseline | merge_all
    std::size_t n = 0;
    std::vector<std::string> selected_ids;  // ranking order
    std::map<std::string, MetricReport> eval;
    bool failed = false;
    std::string error;
};

struct SweepResult {
    std::vector<SweepCell> cells;
};

// Pool labels are hidden during scoring and revealed at training time. For a
// fixed strategy and seed, selections are nested prefixes of one ranking.
std::vector<Utterance> select(Strategy strategy, const TrainedClassifier& base_clf,
                              const Dataset& pool, std::size_t n, const AugmentationPlan& plan);

// Baseline (base train only), merge-all reference (base + full pool), and one
// cell per (strategy, N): retrain from scratch on base + selected and
// evaluate every eval set. Training failures mark the cell and the sweep
// continues.
SweepResult run_sweep(const AugmentationPlan& plan);

}  // namespace cavkit

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "classifier.hpp"
#include "data.hpp"
#include "tcav.hpp"

namespace cavkit {

struct DoeParams {
    std::size_t p_count = 100;
    std::size_t n_v = 3;
    std::uint64_t seed = 0;
};

struct DoeScore {
    std::string utterance_id;
    std::string concept_name;
    double score = 0.0;  // mean TCAV score over p_count perturbed CAVs, in [0,1]
    std::size_t p_used = 0;
};

struct BinRow {
    bool positive_class = false;
    std::size_t bin_index = 0;
    double doe_min = 0.0;
    double doe_max = 0.0;
    std::size_t count = 0;
    double recall = 0.0;  // fraction of the bin the classifier gets right
};

struct BinReport {
    std::size_t bin_size = 0;
    std::vector<BinRow> rows;  // negatives first, then positives, DoE-ascending
};

// Scores utterances against an explicit concept: each of p_count CAVs
// averages n_v - 1 sampled concept representations with the candidate's own,
// and the DoE is the mean TCAV score of those CAVs. Caches the concept
// representations and input gradients once so pool scoring is cheap, and
// derives one RNG stream per utterance id so rankings are input-order
// invariant.
class DoeScorer {
public:
    DoeScorer(const TrainedClassifier& clf, ConceptSet explicit_concept,
              const std::vector<Utterance>& inputs, DoeParams params);

    // Errors if x_new's text appears among the concept examples (concept
    // members never score themselves).
    DoeScore score(const Utterance& x_new) const;

    const DoeParams& params() const { return params_; }

private:
    const TrainedClassifier& clf_;
    ConceptSet concept_;
    DoeParams params_;
    // concept_dot_[x][j] = grad_x . r_j over the fixed input set
    std::vector<std::vector<double>> gradients_;
    std::vector<std::vector<double>> concept_dot_;
};

DoeScore doe_score(const TrainedClassifier& clf, const ConceptSet& explicit_concept,
                   const Utterance& x_new, const std::vector<Utterance>& inputs,
                   const DoeParams& params);

// Stable ascending by (score, utterance id).
std::vector<std::pair<Utterance, DoeScore>> doe_rank(const TrainedClassifier& clf,
                                                     const ConceptSet& explicit_concept,
                                                     const std::vector<Utterance>& pool,
                                                     const std::vector<Utterance>& inputs,
                                                     const DoeParams& params);

// Per class, DoE-ascending bins of bin_size with per-bin classification
// recall. Every utterance must be labeled.
BinReport bin_analysis(const TrainedClassifier& clf,
                       const std::vector<std::pair<Utterance, DoeScore>>& scored,
                       std::size_t bin_size);

}  // namespace cavkit

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "classifier.hpp"
#include "data.hpp"
#include "metrics.hpp"

namespace cavkit {

// One concept activation vector: the mean of the representations of N_v
// sampled concept examples, with the sampled ids kept for auditability.
struct Cav {
    std::vector<double> vector;
    std::vector<std::string> member_ids;
};

struct CavSet {
    std::string concept_name;
    std::vector<Cav> cavs;  // P entries
    std::uint64_t seed = 0;
};

// P scores in [0,1] for one (classifier, concept) pair; one score per CAV.
struct ScoreDistribution {
    std::string concept_name;
    std::vector<double> scores;
    double mean = 0.0;
    double stdev = 0.0;  // sample standard deviation over the P scores
    std::size_t n_inputs = 0;
};

enum class SensitivityMode : std::uint8_t { analytic, finite_diff };

// P CAVs, each the mean of n_v distinct concept-example representations
// sampled uniformly without replacement; draws across CAVs are independent.
CavSet build_cavs(const TrainedClassifier& clf, const ConceptSet& concept_set, std::size_t p_count,
                  std::size_t n_v, std::uint64_t seed);

// Directional derivative of the positive-class logit at x's representation in
// the CAV direction. Analytic is the default; finite_diff is the forward
// difference (h(r + eps*v) - h(r)) / eps kept for validation.
double sensitivity(const TrainedClassifier& clf, const Utterance& x, const Cav& cav,
                   SensitivityMode mode = SensitivityMode::analytic, double eps = 1e-3);

// For each CAV p: the fraction of inputs whose logit strictly increases along
// p. Exact zeros count as non-increasing.
ScoreDistribution tcav_scores(const TrainedClassifier& clf, const CavSet& cavs,
                              const std::vector<Utterance>& inputs);

// Same scores computed from precomputed logit gradients over the input set;
// the entry point the DoE scorer shares.
ScoreDistribution tcav_scores_from_gradients(const std::vector<std::vector<double>>& gradients,
                                             const CavSet& cavs);

// Validation path: the whole score grid evaluated with forward differences
// instead of the analytic gradient.
ScoreDistribution tcav_scores_finite_diff(const TrainedClassifier& clf, const CavSet& cavs,
                                          const std::vector<Utterance>& inputs, double eps);

// Welch test of the target score list against a non-coherent baseline.
TTestResult concept_significance(const ScoreDistribution& target,
                                 const ScoreDistribution& random_baseline, double alpha = 0.001);

// Linear heads make every sensitivity independent of x and every score
// collapse to 0 or 1; refuse unless explicitly allowed.
void require_sensitivity_capable(const TrainedClassifier& clf, bool allow_degenerate);

// Gradients of the logit at each input's representation, in input order.
std::vector<std::vector<double>> input_gradients(const TrainedClassifier& clf,
                                                 const std::vector<Utterance>& inputs);

void attach_stats(ScoreDistribution& dist);

}  // namespace cavkit

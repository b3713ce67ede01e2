#include "tcav.hpp"

#include <cmath>

#include "error.hpp"
#include "rng.hpp"

namespace cavkit {

CavSet build_cavs(const TrainedClassifier& clf, const ConceptSet& concept_set, std::size_t p_count,
                  std::size_t n_v, std::uint64_t seed) {
    if (p_count < 1) throw ConfigError("P must be at least 1");
    if (n_v < 1) throw ConfigError("N_v must be at least 1");
    if (n_v > concept_set.count())
        throw DataError("concept `" + concept_set.name + "` has " +
                        std::to_string(concept_set.count()) + " examples but N_v=" +
                        std::to_string(n_v) + " was requested");

    const std::uint32_t m = clf.dim();
    std::vector<Representation> reps;
    reps.reserve(concept_set.count());
    for (const auto& u : concept_set.examples) reps.push_back(clf.represent(u));

    Rng rng = Rng::for_stream(seed, "cav." + concept_set.name);
    CavSet set;
    set.concept_name = concept_set.name;
    set.seed = seed;
    set.cavs.reserve(p_count);
    for (std::size_t p = 0; p < p_count; ++p) {
        std::vector<std::size_t> members = rng.sample_indices(concept_set.count(), n_v);
        Cav cav;
        cav.vector.assign(m, 0.0);
        cav.member_ids.reserve(n_v);
        for (std::size_t idx : members) {
            const Representation& r = reps[idx];
            for (std::uint32_t j = 0; j < m; ++j) cav.vector[j] += double(r[j]);
            cav.member_ids.push_back(concept_set.examples[idx].id);
        }
        for (double& v : cav.vector) v /= double(n_v);
        set.cavs.push_back(std::move(cav));
    }
    return set;
}

double sensitivity(const TrainedClassifier& clf, const Utterance& x, const Cav& cav,
                   SensitivityMode mode, double eps) {
    const Representation r = clf.represent(x);
    if (cav.vector.size() != r.size()) throw NumericError("CAV dimension mismatch");
    if (mode == SensitivityMode::analytic) {
        const std::vector<double> g = clf.head_gradient(r);
        double s = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) s += g[j] * cav.vector[j];
        if (!std::isfinite(s)) throw NumericError("non-finite sensitivity");
        return s;
    }
    if (!(eps > 0.0)) throw ConfigError("finite-difference step must be positive");
    std::vector<double> base(r.begin(), r.end());
    std::vector<double> shifted(base);
    for (std::size_t j = 0; j < shifted.size(); ++j) shifted[j] += eps * cav.vector[j];
    const double s = (clf.head().value_d(shifted) - clf.head().value_d(base)) / eps;
    if (!std::isfinite(s)) throw NumericError("non-finite sensitivity");
    return s;
}

std::vector<std::vector<double>> input_gradients(const TrainedClassifier& clf,
                                                 const std::vector<Utterance>& inputs) {
    std::vector<std::vector<double>> grads;
    grads.reserve(inputs.size());
    for (const auto& x : inputs) grads.push_back(clf.head_gradient(clf.represent(x)));
    return grads;
}

void attach_stats(ScoreDistribution& dist) {
    const std::size_t p = dist.scores.size();
    double mean = 0.0;
    for (double s : dist.scores) mean += s;
    mean /= double(p);
    double ss = 0.0;
    for (double s : dist.scores) ss += (s - mean) * (s - mean);
    dist.mean = mean;
    dist.stdev = p > 1 ? std::sqrt(ss / double(p - 1)) : 0.0;
}

ScoreDistribution tcav_scores_from_gradients(const std::vector<std::vector<double>>& gradients,
                                             const CavSet& cavs) {
    if (gradients.empty()) throw DataError("tcav needs at least one input example");
    ScoreDistribution dist;
    dist.concept_name = cavs.concept_name;
    dist.n_inputs = gradients.size();
    dist.scores.reserve(cavs.cavs.size());
    for (const Cav& cav : cavs.cavs) {
        std::size_t increasing = 0;
        for (const auto& g : gradients) {
            double s = 0.0;
            for (std::size_t j = 0; j < g.size(); ++j) s += g[j] * cav.vector[j];
            if (s > 0.0) ++increasing;
        }
        dist.scores.push_back(double(increasing) / double(gradients.size()));
    }
    attach_stats(dist);
    return dist;
}

ScoreDistribution tcav_scores(const TrainedClassifier& clf, const CavSet& cavs,
                              const std::vector<Utterance>& inputs) {
    return tcav_scores_from_gradients(input_gradients(clf, inputs), cavs);
}

ScoreDistribution tcav_scores_finite_diff(const TrainedClassifier& clf, const CavSet& cavs,
                                          const std::vector<Utterance>& inputs, double eps) {
    if (inputs.empty()) throw DataError("tcav needs at least one input example");
    if (!(eps > 0.0)) throw ConfigError("finite-difference step must be positive");

    std::vector<std::vector<double>> reps;
    std::vector<double> base;
    reps.reserve(inputs.size());
    base.reserve(inputs.size());
    for (const auto& x : inputs) {
        const Representation r = clf.represent(x);
        reps.emplace_back(r.begin(), r.end());
        base.push_back(clf.head().value_d(reps.back()));
    }

    ScoreDistribution dist;
    dist.concept_name = cavs.concept_name;
    dist.n_inputs = inputs.size();
    dist.scores.reserve(cavs.cavs.size());
    std::vector<double> shifted;
    for (const Cav& cav : cavs.cavs) {
        std::size_t increasing = 0;
        for (std::size_t x = 0; x < reps.size(); ++x) {
            shifted = reps[x];
            for (std::size_t j = 0; j < shifted.size(); ++j)
                shifted[j] += eps * cav.vector[j];
            const double s = (clf.head().value_d(shifted) - base[x]) / eps;
            if (s > 0.0) ++increasing;
        }
        dist.scores.push_back(double(increasing) / double(inputs.size()));
    }
    attach_stats(dist);
    return dist;
}

TTestResult concept_significance(const ScoreDistribution& target,
                                 const ScoreDistribution& random_baseline, double alpha) {
    if (target.n_inputs != random_baseline.n_inputs)
        throw DataError("score distributions were computed on different input sets");
    return welch_t_test(target.scores, random_baseline.scores, alpha);
}

void require_sensitivity_capable(const TrainedClassifier& clf, bool allow_degenerate) {
    if (clf.head().is_linear() && !allow_degenerate)
        throw ConfigError(
            "the head is linear, so every conceptual sensitivity is constant across inputs and "
            "TCAV scores degenerate to 0 or 1; pass tcav.allow_degenerate=true to proceed");
}

}  // namespace cavkit

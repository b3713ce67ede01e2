#include "doe.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "rng.hpp"

namespace cavkit {

DoeScorer::DoeScorer(const TrainedClassifier& clf, ConceptSet explicit_concept,
                     const std::vector<Utterance>& inputs, DoeParams params)
    : clf_(clf), concept_(std::move(explicit_concept)), params_(params) {
    if (params_.p_count < 1) throw ConfigError("DoE P must be at least 1");
    if (params_.n_v < 1) throw ConfigError("DoE N_v must be at least 1");
    if (concept_.count() + 1 < params_.n_v)
        throw DataError("concept `" + concept_.name + "` has " +
                        std::to_string(concept_.count()) + " examples but N_v-1=" +
                        std::to_string(params_.n_v - 1) + " members must be sampled");
    if (inputs.empty()) throw DataError("DoE needs a non-empty input set");

    gradients_ = input_gradients(clf_, inputs);
    std::vector<Representation> reps;
    reps.reserve(concept_.count());
    for (const auto& u : concept_.examples) reps.push_back(clf_.represent(u));

    concept_dot_.assign(gradients_.size(), std::vector<double>(concept_.count(), 0.0));
    for (std::size_t x = 0; x < gradients_.size(); ++x) {
        const std::vector<double>& g = gradients_[x];
        for (std::size_t j = 0; j < reps.size(); ++j) {
            double dot = 0.0;
            for (std::size_t k = 0; k < g.size(); ++k) dot += g[k] * double(reps[j][k]);
            concept_dot_[x][j] = dot;
        }
    }
}

DoeScore DoeScorer::score(const Utterance& x_new) const {
    if (concept_.contains_text(x_new.text))
        throw DataError("utterance `" + x_new.id + "` is a concept example of `" +
                        concept_.name + "`; concept members never score themselves");

    const Representation r_new = clf_.represent(x_new);
    const std::size_t n_inputs = gradients_.size();
    std::vector<double> new_dot(n_inputs, 0.0);
    for (std::size_t x = 0; x < n_inputs; ++x) {
        const std::vector<double>& g = gradients_[x];
        double dot = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) dot += g[k] * double(r_new[k]);
        new_dot[x] = dot;
    }

    // The CAV is (sum of n_v-1 member reps + r_new) / n_v. Dividing by n_v
    // never changes the sign, so the score test runs on the sums.
    Rng rng = Rng::for_stream(params_.seed, "doe." + x_new.id);
    const std::size_t draw = params_.n_v - 1;
    double total = 0.0;
    for (std::size_t p = 0; p < params_.p_count; ++p) {
        const std::vector<std::size_t> members = rng.sample_indices(concept_.count(), draw);
        std::size_t increasing = 0;
        for (std::size_t x = 0; x < n_inputs; ++x) {
            double s = new_dot[x];
            for (std::size_t j : members) s += concept_dot_[x][j];
            if (s > 0.0) ++increasing;
        }
        total += double(increasing) / double(n_inputs);
    }

    DoeScore out;
    out.utterance_id = x_new.id;
    out.concept_name = concept_.name;
    out.score = total / double(params_.p_count);
    out.p_used = params_.p_count;
    return out;
}

DoeScore doe_score(const TrainedClassifier& clf, const ConceptSet& explicit_concept,
                   const Utterance& x_new, const std::vector<Utterance>& inputs,
                   const DoeParams& params) {
    return DoeScorer(clf, explicit_concept, inputs, params).score(x_new);
}

std::vector<std::pair<Utterance, DoeScore>> doe_rank(const TrainedClassifier& clf,
                                                     const ConceptSet& explicit_concept,
                                                     const std::vector<Utterance>& pool,
                                                     const std::vector<Utterance>& inputs,
                                                     const DoeParams& params) {
    if (pool.empty()) throw DataError("DoE ranking needs a non-empty pool");
    DoeScorer scorer(clf, explicit_concept, inputs, params);
    std::vector<std::pair<Utterance, DoeScore>> scored;
    scored.reserve(pool.size());
    for (const auto& u : pool) scored.emplace_back(u, scorer.score(u));
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.second.score != b.second.score) return a.second.score < b.second.score;
        return a.first.id < b.first.id;
    });
    return scored;
}

BinReport bin_analysis(const TrainedClassifier& clf,
                       const std::vector<std::pair<Utterance, DoeScore>>& scored,
                       std::size_t bin_size) {
    if (bin_size < 1) throw ConfigError("bin size must be at least 1");
    if (scored.empty()) throw DataError("bin analysis on empty input");
    for (const auto& [u, s] : scored)
        if (!u.label) throw DataError("unlabeled utterance in bin analysis: " + u.id);

    BinReport report;
    report.bin_size = bin_size;
    for (const bool positive : {false, true}) {
        std::vector<const std::pair<Utterance, DoeScore>*> cls;
        for (const auto& entry : scored)
            if (entry.first.is_positive() == positive) cls.push_back(&entry);
        std::stable_sort(cls.begin(), cls.end(), [](const auto* a, const auto* b) {
            if (a->second.score != b->second.score) return a->second.score < b->second.score;
            return a->first.id < b->first.id;
        });
        for (std::size_t start = 0, bin = 0; start < cls.size(); start += bin_size, ++bin) {
            const std::size_t stop = std::min(cls.size(), start + bin_size);
            BinRow row;
            row.positive_class = positive;
            row.bin_index = bin;
            row.doe_min = cls[start]->second.score;
            row.doe_max = cls[stop - 1]->second.score;
            row.count = stop - start;
            std::size_t correct = 0;
            for (std::size_t i = start; i < stop; ++i) {
                if (clf.predict(cls[i]->first).predicted_positive == positive) ++correct;
            }
            row.recall = double(correct) / double(row.count);
            report.rows.push_back(row);
        }
    }
    return report;
}

}  // namespace cavkit

#include "augment.hpp"

#include <algorithm>
#include <unordered_set>

#include "error.hpp"
#include "rng.hpp"

namespace cavkit {

TrainedClassifier ModelRecipe::fit(const Dataset& train_set, const Dataset& dev_set) const {
    EncoderModel encoder(featurizer, dim, normalize, init_scale, encoder_seed);
    HeadModel head = HeadModel::init(dim, hidden_dim, activation, train.seed);
    return TrainedClassifier::train(train_set, dev_set, std::move(encoder), std::move(head),
                                    train);
}

Strategy strategy_from_string(const std::string& s) {
    if (s == "doe") return Strategy::doe;
    if (s == "confidence") return Strategy::confidence;
    if (s == "random") return Strategy::random_pick;
    throw ConfigError("unknown augmentation strategy: " + s);
}

const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::doe: return "doe";
        case Strategy::confidence: return "confidence";
        default: return "random";
    }
}

void AugmentationPlan::validate() const {
    if (!base_train || !base_dev || !pool) throw ConfigError("augmentation plan is missing datasets");
    if (strategies.empty()) throw ConfigError("augmentation plan needs at least one strategy");
    if (eval_sets.empty()) throw ConfigError("augmentation plan needs at least one eval set");
    if (n_values.empty()) throw ConfigError("augmentation plan needs N values");
    for (std::size_t i = 1; i < n_values.size(); ++i)
        if (n_values[i] <= n_values[i - 1])
            throw ConfigError("N values must be strictly increasing");
    if (n_values.back() > pool->size())
        throw DataError("largest N (" + std::to_string(n_values.back()) +
                        ") exceeds the pool size (" + std::to_string(pool->size()) + ")");
    for (const auto& [name, ds] : eval_sets)
        if (ds->labeled_count() != ds->size())
            throw DataError("eval set `" + name + "` contains unlabeled utterances");
    for (const auto& s : strategies)
        if (s == Strategy::doe && (!explicit_concept || !inputs))
            throw ConfigError("doe strategy needs an explicit concept and an input set");
}

namespace {

// Full pool ranking for one strategy; selections are its prefixes.
std::vector<std::string> rank_pool(Strategy strategy, const TrainedClassifier& base_clf,
                                   const Dataset& pool, const AugmentationPlan& plan) {
    const auto& items = pool.items();
    std::vector<std::string> ranked;
    ranked.reserve(items.size());
    switch (strategy) {
        case Strategy::doe: {
            std::vector<Utterance> hidden;
            hidden.reserve(items.size());
            for (const auto& u : items) {
                Utterance h = u;
                h.label.reset();
                h.explicitness = Explicitness::unknown;
                hidden.push_back(std::move(h));
            }
            const auto scored =
                doe_rank(base_clf, *plan.explicit_concept, hidden, *plan.inputs, plan.doe);
            for (const auto& [u, s] : scored) ranked.push_back(u.id);
            break;
        }
        case Strategy::confidence: {
            std::vector<std::pair<double, const std::string*>> conf;
            conf.reserve(items.size());
            for (const auto& u : items)
                conf.emplace_back(base_clf.predict_text(u.text).confidence, &u.id);
            std::stable_sort(conf.begin(), conf.end(), [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first < b.first;
                return *a.second < *b.second;
            });
            for (const auto& [c, id] : conf) ranked.push_back(*id);
            break;
        }
        case Strategy::random_pick: {
            Rng rng = Rng::for_stream(plan.selection_seed, "augment.random");
            std::vector<std::size_t> idx = rng.sample_indices(items.size(), items.size());
            for (std::size_t i : idx) ranked.push_back(items[i].id);
            break;
        }
    }
    return ranked;
}

// Augmented training sets keep base_train unchanged and append the selected
// pool items in pool order, so N = |pool| coincides with the merge-all
// reference for every strategy.
Dataset augmented_train(const Dataset& base, const Dataset& pool,
                        const std::vector<std::string>& selected_ids) {
    std::unordered_set<std::string_view> chosen;
    for (const auto& id : selected_ids) chosen.insert(id);
    std::vector<Utterance> items(base.items());
    for (const auto& u : pool.items())
        if (chosen.contains(u.id)) items.push_back(u);
    return Dataset(base.name() + "+aug", Split::train, std::move(items));
}

std::map<std::string, MetricReport> evaluate_all(const TrainedClassifier& clf,
                                                 const AugmentationPlan& plan) {
    std::map<std::string, MetricReport> out;
    for (const auto& [name, ds] : plan.eval_sets) {
        std::vector<double> probs;
        std::vector<bool> actual;
        probs.reserve(ds->size());
        for (const auto& u : ds->items()) {
            probs.push_back(clf.predict_text(u.text).probability);
            actual.push_back(u.is_positive());
        }
        out[name] = evaluate(probs, actual, clf.threshold());
    }
    return out;
}

}  // namespace

std::vector<Utterance> select(Strategy strategy, const TrainedClassifier& base_clf,
                              const Dataset& pool, std::size_t n,
                              const AugmentationPlan& plan) {
    if (n > pool.size())
        throw DataError("selection of " + std::to_string(n) + " from a pool of " +
                        std::to_string(pool.size()));
    std::vector<std::string> ranked = rank_pool(strategy, base_clf, pool, plan);
    ranked.resize(n);
    std::unordered_set<std::string_view> chosen(ranked.begin(), ranked.end());
    std::vector<Utterance> out;
    out.reserve(n);
    for (const auto& u : pool.items())
        if (chosen.contains(u.id)) out.push_back(u);
    return out;
}

SweepResult run_sweep(const AugmentationPlan& plan) {
    plan.validate();
    SweepResult result;

    const TrainedClassifier base_clf = plan.recipe.fit(*plan.base_train, *plan.base_dev);
    {
        SweepCell cell;
        cell.strategy = "baseline";
        cell.n = 0;
        cell.eval = evaluate_all(base_clf, plan);
        result.cells.push_back(std::move(cell));
    }
    const SweepCell& baseline = result.cells.front();

    {
        SweepCell cell;
        cell.strategy = "merge_all";
        cell.n = plan.pool->size();
        for (const auto& u : plan.pool->items()) cell.selected_ids.push_back(u.id);
        try {
            const Dataset merged =
                augmented_train(*plan.base_train, *plan.pool, cell.selected_ids);
            cell.eval = evaluate_all(plan.recipe.fit(merged, *plan.base_dev), plan);
        } catch (const Error& e) {
            cell.failed = true;
            cell.error = e.what();
        }
        result.cells.push_back(std::move(cell));
    }

    for (const Strategy strategy : plan.strategies) {
        const std::vector<std::string> ranked = rank_pool(strategy, base_clf, *plan.pool, plan);
        for (const std::size_t n : plan.n_values) {
            SweepCell cell;
            cell.strategy = to_string(strategy);
            cell.n = n;
            cell.selected_ids.assign(ranked.begin(),
                                     ranked.begin() + static_cast<std::ptrdiff_t>(n));
            if (n == 0) {
                cell.eval = baseline.eval;
                result.cells.push_back(std::move(cell));
                continue;
            }
            try {
                const Dataset augmented =
                    augmented_train(*plan.base_train, *plan.pool, cell.selected_ids);
                cell.eval = evaluate_all(plan.recipe.fit(augmented, *plan.base_dev), plan);
            } catch (const Error& e) {
                cell.failed = true;
                cell.error = e.what();
            }
            result.cells.push_back(std::move(cell));
        }
    }
    return result;
}

}  // namespace cavkit

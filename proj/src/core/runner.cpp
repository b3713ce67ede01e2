#include "runner.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include <json.hpp>

#include "augment.hpp"
#include "classifier.hpp"
#include "csv.hpp"
#include "data.hpp"
#include "doe.hpp"
#include "error.hpp"
#include "metrics.hpp"
#include "rng.hpp"
#include "svg.hpp"
#include "synthcorpus.hpp"
#include "tcav.hpp"
#include "text.hpp"
#include "vocab.hpp"

namespace cavkit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string hex16(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string make_run_dir(const RunConfig& cfg, const char* command) {
    const fs::path dir = fs::path(cfg.get("out.dir")) / (std::string(command) + "-" +
                                                         hex16(cfg.hash()).substr(0, 12));
    fs::create_directories(dir);
    cfg.write_file((dir / "resolved.cfg").string());
    return dir.string();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open for writing: " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw DataError("write failed: " + path);
}

LabelMap labelmap_from(const RunConfig& cfg) {
    return cfg.has("data.labelmap") ? LabelMap::load(cfg.get("data.labelmap"))
                                    : LabelMap::identity();
}

Dataset load_ds(const RunConfig& cfg, const std::string& key, Split split) {
    const std::string path = cfg.require(key);
    return load_dataset(path, labelmap_from(cfg), split);
}

ModelRecipe recipe_from(const RunConfig& cfg) {
    ModelRecipe r;
    r.featurizer.ngram_min = static_cast<std::uint32_t>(cfg.get_u64("encoder.ngram_min"));
    r.featurizer.ngram_max = static_cast<std::uint32_t>(cfg.get_u64("encoder.ngram_max"));
    r.featurizer.buckets = static_cast<std::uint32_t>(cfg.get_u64("encoder.buckets"));
    r.dim = static_cast<std::uint32_t>(cfg.get_u64("encoder.dim"));
    r.normalize = cfg.get_bool("encoder.normalize");
    r.init_scale = static_cast<float>(cfg.get_double("encoder.init_scale"));
    r.encoder_seed = cfg.get_u64("encoder.seed");
    r.hidden_dim = static_cast<std::uint32_t>(cfg.get_u64("head.hidden"));
    r.activation = activation_from_string(cfg.get("head.activation"));
    r.train.epochs = static_cast<std::uint32_t>(cfg.get_u64("train.epochs"));
    r.train.batch_size = static_cast<std::uint32_t>(cfg.get_u64("train.batch"));
    r.train.learning_rate = cfg.get_double("train.lr");
    r.train.seed = cfg.get_u64("train.seed");
    r.train.weighted = cfg.get_bool("train.weighted");
    r.train.threshold = cfg.get_double("train.threshold");
    return r;
}

std::shared_ptr<const EmbeddingStore> store_from(const RunConfig& cfg) {
    if (cfg.get("encoder.source") != "store") return nullptr;
    return std::make_shared<const EmbeddingStore>(
        EmbeddingStore::import_file(cfg.require("encoder.embeddings")));
}

TrainedClassifier load_model(const RunConfig& cfg) {
    return TrainedClassifier::load(cfg.require("model.path"), store_from(cfg));
}

// The TCAV/DoE input set X: an unlabeled pool, optionally subsampled.
std::vector<Utterance> load_inputs(const RunConfig& cfg) {
    const Dataset ds =
        load_dataset(cfg.require("tcav.inputs"), labelmap_from(cfg), Split::pool);
    const std::size_t want = cfg.get_u64("tcav.input_n");
    if (want > 0 && want < ds.size())
        return sample_pool(ds, want, cfg.get_u64("tcav.input_seed"));
    return ds.items();
}

DoeParams doe_params_from(const RunConfig& cfg) {
    DoeParams p;
    p.p_count = cfg.get_u64("doe.p");
    p.n_v = cfg.get_u64("doe.nv");
    p.seed = cfg.get_u64("doe.seed");
    return p;
}

ConceptSet doe_concept_from(const RunConfig& cfg) {
    const std::size_t n_v = cfg.get_u64("doe.nv");
    return load_concept(cfg.require("doe.concept"), cfg.get("doe.concept_name"),
                        n_v > 1 ? n_v - 1 : 1);
}

std::string sanitize(const std::string& name) {
    std::string out = name;
    for (char& c : out)
        if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
    return out;
}

MetricReport evaluate_set(const TrainedClassifier& clf, const std::vector<const Utterance*>& us) {
    std::vector<double> probs;
    std::vector<bool> actual;
    probs.reserve(us.size());
    for (const Utterance* u : us) {
        probs.push_back(clf.predict(*u).probability);
        actual.push_back(u->is_positive());
    }
    return evaluate(probs, actual, clf.threshold());
}

}  // namespace

std::string cmd_gen(const RunConfig& cfg) {
    const std::string dir = make_run_dir(cfg, "gen");
    CorpusSpec spec;
    spec.seed = cfg.get_u64("gen.seed");
    spec.gamma = cfg.get_double("gen.gamma");
    spec.label_noise = cfg.get_double("gen.noise");
    spec.negative_tinge = cfg.get_double("gen.tinge");
    spec.random_positive_ratio = cfg.get_double("gen.random_positive_ratio");
    spec.neg_topic_dropout = cfg.get_double("gen.neg_topic_dropout");
    spec.tinge_tokens = cfg.get_u64("gen.tinge_tokens");
    spec.polite_tokens = cfg.get_u64("gen.polite_tokens");
    spec.positive_ratio_base = cfg.get_double("gen.pos_ratio_base");
    spec.positive_ratio_new = cfg.get_double("gen.pos_ratio_new");
    spec.explicit_frac_base = cfg.get_double("gen.explicit_frac_base");
    spec.explicit_frac_new = cfg.get_double("gen.explicit_frac_new");
    spec.base_train = cfg.get_u64("gen.base_train");
    spec.base_dev = cfg.get_u64("gen.base_dev");
    spec.base_test = cfg.get_u64("gen.base_test");
    spec.new_pool = cfg.get_u64("gen.new_pool");
    spec.new_test = cfg.get_u64("gen.new_test");
    spec.input_pool = cfg.get_u64("gen.input_pool");
    spec.concept_size = cfg.get_u64("gen.concept_size");
    spec.concept_background_tokens = cfg.get_u64("gen.concept_bg_tokens");
    spec.concept_topic_tokens = cfg.get_u64("gen.concept_topic_tokens");
    spec.background_words = cfg.get_u64("gen.background_words");
    spec.topic_words_per_flavor = cfg.get_u64("gen.topic_words");
    spec.marker_words = cfg.get_u64("gen.marker_words");

    const std::string corpus_dir =
        cfg.has("gen.out") ? cfg.get("gen.out") : (fs::path(dir) / "corpus").string();
    const GeneratedCorpus corpus = generate_corpus(spec, corpus_dir);

    // A starter config wired to the generated files, with the model profile
    // tuned for the synthetic corpus (unigram features, modest training).
    std::string starter;
    starter += "encoder.ngram_max = 1\n";
    starter += "encoder.buckets = 32768\n";
    starter += "encoder.init_scale = 0.02\n";
    starter += "train.epochs = 5\n";
    starter += "train.lr = 0.25\n";
    starter += "data.train = " + corpus.base_train + "\n";
    starter += "data.dev = " + corpus.base_dev + "\n";
    starter += "data.pool = " + corpus.new_pool + "\n";
    starter += "data.labelmap = " + corpus.labelmap + "\n";
    starter += "eval.set.base = " + corpus.base_test + "\n";
    starter += "eval.set.new = " + corpus.new_test + "\n";
    starter += "tcav.inputs = " + corpus.inputs + "\n";
    starter += "tcav.concepts = explicit=" + corpus.concepts.at("explicit") +
               ",implicit=" + corpus.concepts.at("implicit") +
               ",topic=" + corpus.concepts.at("topic") +
               ",random=" + corpus.concepts.at("random") + "\n";
    starter += "tcav.baseline = random\n";
    starter += "doe.concept = " + corpus.concepts.at("explicit") + "\n";
    starter += "doe.pool = " + corpus.new_test + "\n";
    starter += "augment.base_eval = base\n";
    write_text_file((fs::path(corpus.dir) / "starter.cfg").string(), starter);

    std::cout << "corpus: " << corpus.dir << "\n";
    return dir;
}

std::string cmd_train(const RunConfig& cfg) {
    const std::string dir = make_run_dir(cfg, "train");
    const Dataset train_set = load_ds(cfg, "data.train", Split::train);
    const Dataset dev_set = load_ds(cfg, "data.dev", Split::dev);

    TrainedClassifier clf = [&] {
        if (cfg.get("encoder.source") == "store") {
            auto store = store_from(cfg);
            const ModelRecipe r = recipe_from(cfg);
            HeadModel head =
                HeadModel::init(store->dim(), r.hidden_dim, r.activation, r.train.seed);
            return TrainedClassifier::train_on_store(train_set, dev_set, std::move(store),
                                                     std::move(head), r.train);
        }
        return recipe_from(cfg).fit(train_set, dev_set);
    }();

    const std::string model_path = (fs::path(dir) / "model.clf").string();
    clf.save(model_path);
    if (cfg.has("train.model_out")) clf.save(cfg.get("train.model_out"));

    CsvWriter csv(MetricReport::csv_header());
    csv.add_row(clf.dev_metrics().csv_row("dev"));
    csv.write_file((fs::path(dir) / "dev_metrics.csv").string());
    write_text_file((fs::path(dir) / "metrics.json").string(),
                    clf.dev_metrics().to_json() + "\n");
    std::cout << "model: " << model_path << "\n"
              << "dev f1: " << csv_num(clf.dev_metrics().f1) << " auc: "
              << csv_num(clf.dev_metrics().auc) << "\n";
    return dir;
}

std::string cmd_eval(const RunConfig& cfg) {
    const std::string dir = make_run_dir(cfg, "eval");
    const TrainedClassifier clf = load_model(cfg);
    const auto sets = cfg.family("eval.set.");
    if (sets.empty()) throw ConfigError("eval needs at least one eval.set.<name> key");
    const bool by_exp = cfg.get_bool("eval.by_explicitness");

    CsvWriter csv(MetricReport::csv_header());
    json all;
    for (const auto& [name, path] : sets) {
        const Dataset ds = load_dataset(path, labelmap_from(cfg), Split::test, name);
        std::vector<const Utterance*> full, explicit_subset, implicit_subset;
        bool has_tags = false;
        for (const auto& u : ds.items()) {
            full.push_back(&u);
            if (u.explicitness != Explicitness::unknown) has_tags = true;
        }
        const MetricReport report = evaluate_set(clf, full);
        csv.add_row(report.csv_row(name));
        all[name] = json::parse(report.to_json());

        if (by_exp && has_tags) {
            for (const auto& u : ds.items()) {
                if (!u.is_positive()) {
                    explicit_subset.push_back(&u);
                    implicit_subset.push_back(&u);
                } else if (u.explicitness == Explicitness::explicit_abuse) {
                    explicit_subset.push_back(&u);
                } else if (u.explicitness == Explicitness::implicit_abuse) {
                    implicit_subset.push_back(&u);
                }
            }
            const MetricReport exp_report = evaluate_set(clf, explicit_subset);
            const MetricReport imp_report = evaluate_set(clf, implicit_subset);
            csv.add_row(exp_report.csv_row(name + "#explicit"));
            csv.add_row(imp_report.csv_row(name + "#implicit"));
            all[name + "#explicit"] = json::parse(exp_report.to_json());
            all[name + "#implicit"] = json::parse(imp_report.to_json());
        }
    }
    csv.write_file((fs::path(dir) / "eval_metrics.csv").string());
    write_text_file((fs::path(dir) / "metrics.json").string(), all.dump(2) + "\n");
    std::cout << "eval sets: " << sets.size() << "\n";
    return dir;
}

std::string cmd_tcav(const RunConfig& cfg) {
    const std::string dir = make_run_dir(cfg, "tcav");
    const TrainedClassifier clf = load_model(cfg);
    require_sensitivity_capable(clf, cfg.get_bool("tcav.allow_degenerate"));

    const auto concept_list = cfg.get_pairs("tcav.concepts");
    if (concept_list.size() < 2)
        throw ConfigError("tcav needs at least two concepts (one is the random baseline)");
    const std::string baseline_name = cfg.require("tcav.baseline");
    bool baseline_present = false;
    for (const auto& [name, path] : concept_list)
        if (name == baseline_name) baseline_present = true;
    if (!baseline_present)
        throw ConfigError("no baseline concept flagged: `" + baseline_name +
                          "` is not in tcav.concepts");

    const std::size_t p_count = cfg.get_u64("tcav.p");
    const std::size_t n_v = cfg.get_u64("tcav.nv");
    const std::uint64_t seed = cfg.get_u64("tcav.seed");
    const double alpha = cfg.get_double("tcav.alpha");
    const bool finite_diff = cfg.get("tcav.mode") == "finite_diff";
    if (!finite_diff && cfg.get("tcav.mode") != "analytic")
        throw ConfigError("tcav.mode must be analytic or finite_diff");
    const std::vector<Utterance> inputs = load_inputs(cfg);

    std::vector<ScoreDistribution> dists;
    for (const auto& [name, path] : concept_list) {
        const ConceptSet cs = load_concept(path, name, n_v);
        const CavSet cavs = build_cavs(clf, cs, p_count, n_v, seed);
        dists.push_back(finite_diff
                            ? tcav_scores_finite_diff(clf, cavs, inputs,
                                                      cfg.get_double("tcav.eps"))
                            : tcav_scores(clf, cavs, inputs));
    }
    const ScoreDistribution* baseline = nullptr;
    for (const auto& d : dists)
        if (d.concept_name == baseline_name) baseline = &d;

    CsvWriter csv({"concept", "mean", "std", "p_value", "significant"});
    CsvWriter raw({"concept", "cav_index", "score"});
    for (const auto& d : dists) {
        const TTestResult tt = concept_significance(d, *baseline, alpha);
        csv.add_row({d.concept_name, csv_num(d.mean), csv_num(d.stdev), csv_num(tt.p_value),
                     tt.significant ? "true" : "false"});
        for (std::size_t p = 0; p < d.scores.size(); ++p)
            raw.add_row({d.concept_name, csv_int(static_cast<long long>(p)),
                         csv_num(d.scores[p])});
        std::cout << d.concept_name << ": mean " << csv_num(d.mean) << " std "
                  << csv_num(d.stdev) << "\n";
    }
    csv.write_file((fs::path(dir) / "tcav_scores.csv").string());
    raw.write_file((fs::path(dir) / "tcav_distributions.csv").string());
    return dir;
}

namespace {

const char* group_of(const Utterance& u) {
    if (!u.label) return "unlabeled";
    if (!u.is_positive()) return "negative";
    if (u.explicitness == Explicitness::explicit_abuse) return "explicit";
    if (u.explicitness == Explicitness::implicit_abuse) return "implicit";
    return "positive";
}

}  // namespace

std::string cmd_doe(const RunConfig& cfg) {
    const std::string dir = make_run_dir(cfg, "doe");
    const TrainedClassifier clf = load_model(cfg);
    require_sensitivity_capable(clf, cfg.get_bool("tcav.allow_degenerate"));

    const ConceptSet cs = doe_concept_from(cfg);
    const DoeParams params = doe_params_from(cfg);
    const Dataset pool = load_dataset(cfg.require("doe.pool"), labelmap_from(cfg), Split::pool);
    const std::vector<Utterance> inputs = load_inputs(cfg);

    const auto scored = doe_rank(clf, cs, pool.items(), inputs, params);

    CsvWriter csv({"id", "text_hash", "label", "explicitness", "doe", "confidence"});
    std::map<std::string, std::vector<double>> doe_by_group, conf_by_group;
    std::vector<std::pair<const Utterance*, const DoeScore*>> with_conf;
    for (const auto& [u, s] : scored) {
        const Prediction pred = clf.predict(u);
        const std::string group = group_of(u);
        doe_by_group[group].push_back(s.score);
        conf_by_group[group].push_back(pred.confidence);
        csv.add_row({u.id, hex16(fnv1a64(u.text)),
                     u.label ? (u.is_positive() ? "positive" : "negative") : "",
                     u.explicitness == Explicitness::unknown ? "" : to_string(u.explicitness),
                     csv_num(s.score), csv_num(pred.confidence)});
    }
    csv.write_file((fs::path(dir) / "doe_scores.csv").string());

    // Histogram data over [0,1] for both metrics, per group.
    const std::size_t n_bins = std::max<std::size_t>(1, cfg.get_u64("doe.hist_bins"));
    CsvWriter hist({"metric", "group", "bin_lo", "bin_hi", "count"});
    auto emit_hist = [&](const char* metric,
                         const std::map<std::string, std::vector<double>>& by_group) {
        for (const auto& [group, values] : by_group) {
            std::vector<std::size_t> counts(n_bins, 0);
            for (double v : values) {
                std::size_t b = static_cast<std::size_t>(
                    std::min<double>(double(n_bins) - 1.0,
                                     std::max(0.0, v * double(n_bins))));
                ++counts[b];
            }
            for (std::size_t b = 0; b < n_bins; ++b)
                hist.add_row({metric, group, csv_num(double(b) / double(n_bins)),
                              csv_num(double(b + 1) / double(n_bins)),
                              csv_int(static_cast<long long>(counts[b]))});
        }
    };
    emit_hist("doe", doe_by_group);
    emit_hist("confidence", conf_by_group);
    hist.write_file((fs::path(dir) / "doe_hist.csv").string());

    // Explicit-vs-implicit separation for both metrics (two-sided Welch).
    if (doe_by_group.contains("explicit") && doe_by_group.contains("implicit") &&
        doe_by_group["explicit"].size() >= 2 && doe_by_group["implicit"].size() >= 2) {
        CsvWriter sep({"metric", "n_explicit", "n_implicit", "mean_explicit", "mean_implicit",
                       "t", "p_value"});
        auto add = [&](const char* metric, const std::vector<double>& e,
                       const std::vector<double>& i) {
            const TTestResult tt = welch_t_test(e, i, 0.01);
            double me = 0.0, mi = 0.0;
            for (double v : e) me += v;
            for (double v : i) mi += v;
            sep.add_row({metric, csv_int(static_cast<long long>(e.size())),
                         csv_int(static_cast<long long>(i.size())),
                         csv_num(me / double(e.size())), csv_num(mi / double(i.size())),
                         csv_num(tt.t_statistic), csv_num(tt.p_value)});
        };
        add("doe", doe_by_group["explicit"], doe_by_group["implicit"]);
        add("confidence", conf_by_group["explicit"], conf_by_group["implicit"]);
        sep.write_file((fs::path(dir) / "doe_separation.csv").string());
    }

    if (cfg.get_u64("doe.bins") > 0) {
        const BinReport bins = bin_analysis(clf, scored, cfg.get_u64("doe.bins"));
        CsvWriter bcsv({"class", "bin_index", "doe_min", "doe_max", "count", "recall"});
        for (const auto& row : bins.rows)
            bcsv.add_row({row.positive_class ? "positive" : "negative",
                          csv_int(static_cast<long long>(row.bin_index)),
                          csv_num(row.doe_min), csv_num(row.doe_max),
                          csv_int(static_cast<long long>(row.count)), csv_num(row.recall)});
        bcsv.write_file((fs::path(dir) / "doe_bins.csv").string());
    }
    std::cout << "scored " << scored.size() << " utterances\n";
    return dir;
}

std::string cmd_augment(const RunConfig& cfg) {
    const std::string dir = make_run_dir(cfg, "augment");
    const Dataset base_train = load_ds(cfg, "data.train", Split::train);
    const Dataset base_dev = load_ds(cfg, "data.dev", Split::dev);
    const Dataset pool = load_ds(cfg, "data.pool", Split::pool);

    const auto set_list = cfg.family("eval.set.");
    if (set_list.empty()) throw ConfigError("augment needs at least one eval.set.<name> key");
    std::vector<Dataset> eval_storage;
    eval_storage.reserve(set_list.size());
    for (const auto& [name, path] : set_list)
        eval_storage.push_back(load_dataset(path, labelmap_from(cfg), Split::test, name));

    AugmentationPlan plan;
    {
        // comma list of strategy names
        const std::string& raw = cfg.get("augment.strategies");
        std::size_t start = 0;
        while (start <= raw.size()) {
            std::size_t comma = raw.find(',', start);
            if (comma == std::string::npos) comma = raw.size();
            const std::string item(trim(std::string_view(raw).substr(start, comma - start)));
            if (!item.empty()) plan.strategies.push_back(strategy_from_string(item));
            start = comma + 1;
        }
    }
    plan.n_values = cfg.get_size_list("augment.n_values");
    plan.base_train = &base_train;
    plan.base_dev = &base_dev;
    plan.pool = &pool;
    for (std::size_t i = 0; i < set_list.size(); ++i)
        plan.eval_sets.emplace_back(set_list[i].first, &eval_storage[i]);
    plan.recipe = recipe_from(cfg);
    plan.selection_seed = cfg.get_u64("augment.seed");
    plan.doe = doe_params_from(cfg);

    ConceptSet cs;
    std::vector<Utterance> inputs;
    const bool wants_doe =
        std::find(plan.strategies.begin(), plan.strategies.end(), Strategy::doe) !=
        plan.strategies.end();
    if (wants_doe) {
        cs = doe_concept_from(cfg);
        inputs = load_inputs(cfg);
        plan.explicit_concept = &cs;
        plan.inputs = &inputs;
    }

    const SweepResult result = run_sweep(plan);

    const std::string base_eval = cfg.get("augment.base_eval");
    double baseline_base_f1 = 0.0;
    for (const auto& cell : result.cells)
        if (cell.strategy == "baseline" && cell.eval.contains(base_eval))
            baseline_base_f1 = cell.eval.at(base_eval).f1;

    CsvWriter csv({"strategy", "N", "eval_set", "auc", "f1", "precision", "recall",
                   "average_precision", "base_f1_drop_gt2"});
    for (const auto& cell : result.cells) {
        if (cell.failed) continue;
        for (const auto& [set_name, report] : cell.eval) {
            std::string drop_flag;
            if (set_name == base_eval && !base_eval.empty())
                drop_flag = (baseline_base_f1 - report.f1 > 0.02) ? "true" : "false";
            csv.add_row({cell.strategy, csv_int(static_cast<long long>(cell.n)), set_name,
                         csv_num(report.auc), csv_num(report.f1), csv_num(report.precision),
                         csv_num(report.recall), csv_num(report.average_precision), drop_flag});
        }
    }
    csv.write_file((fs::path(dir) / "sweep.csv").string());

    json manifest = json::array();
    for (const auto& cell : result.cells) {
        json c;
        c["strategy"] = cell.strategy;
        c["n"] = cell.n;
        c["failed"] = cell.failed;
        if (cell.failed) c["error"] = cell.error;
        c["selected_ids"] = cell.selected_ids;
        manifest.push_back(std::move(c));
    }
    write_text_file((fs::path(dir) / "selected.json").string(), manifest.dump(2) + "\n");
    std::cout << "sweep cells: " << result.cells.size() << "\n";
    return dir;
}

std::string cmd_vocab(const RunConfig& cfg) {
    const std::string dir = make_run_dir(cfg, "vocab");
    const auto set_list = cfg.get_pairs("vocab.sets");
    if (set_list.empty()) throw ConfigError("vocab needs vocab.sets = name=path,...");
    const std::size_t k = cfg.get_u64("vocab.k");
    const bool mask = cfg.get_bool("vocab.mask");
    const std::set<std::string> stopwords = cfg.has("vocab.stopwords")
                                                ? load_word_set(cfg.get("vocab.stopwords"))
                                                : builtin_stopwords();

    // Lexicon order: hateful first, then topic, then any extras.
    std::vector<std::pair<std::string, std::set<std::string>>> lexicons;
    {
        const auto family = cfg.family("vocab.lexicon.");
        auto add_named = [&](const std::string& want) {
            for (const auto& [name, path] : family)
                if (name == want) lexicons.emplace_back(name, load_word_set(path));
        };
        add_named("hateful");
        add_named("topic");
        for (const auto& [name, path] : family)
            if (name != "hateful" && name != "topic")
                lexicons.emplace_back(name, load_word_set(path));
    }

    std::vector<FrequencyProfile> profiles;
    CsvWriter pcsv({"dataset", "rank", "word", "count"});
    for (const auto& [name, path] : set_list) {
        const Dataset ds = load_dataset(path, labelmap_from(cfg), Split::test, name);
        profiles.push_back(frequency_profile(ds, k, stopwords));
        const auto& profile = profiles.back();
        for (std::size_t i = 0; i < profile.words.size(); ++i)
            pcsv.add_row({name, csv_int(static_cast<long long>(i + 1)),
                          mask ? mask_word(profile.words[i].first) : profile.words[i].first,
                          csv_int(static_cast<long long>(profile.words[i].second))});
    }
    pcsv.write_file((fs::path(dir) / "vocab_profiles.csv").string());

    CsvWriter ocsv({"dataset_a", "dataset_b", "shared_count", "category", "percentage",
                    "words"});
    std::string md = "| Datasets | Count | Shared Words |\n|---|---|---|\n";
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        for (std::size_t j = i + 1; j < profiles.size(); ++j) {
            const OverlapReport rep = overlap(profiles[i], profiles[j], lexicons);
            std::string cell;
            for (const auto& cat : rep.categories) {
                std::string words;
                for (std::size_t w = 0; w < cat.words.size(); ++w) {
                    if (w > 0) words += ";";
                    words += mask ? mask_word(cat.words[w]) : cat.words[w];
                }
                ocsv.add_row({rep.dataset_a, rep.dataset_b,
                              csv_int(static_cast<long long>(rep.shared.size())), cat.name,
                              csv_num(cat.percentage, 4), words});
                std::string spaced = words;
                std::replace(spaced.begin(), spaced.end(), ';', ' ');
                cell += "**" + cat.name + " (" + csv_num(cat.percentage, 3) + "%):** " +
                        spaced + "<br>";
            }
            md += "| " + rep.dataset_a + " - " + rep.dataset_b + " | " +
                  std::to_string(rep.shared.size()) + " | " + cell + " |\n";
        }
    }
    ocsv.write_file((fs::path(dir) / "vocab_overlap.csv").string());
    write_text_file((fs::path(dir) / "vocab_overlap.md").string(), md);
    std::cout << "profiled " << profiles.size() << " datasets\n";
    return dir;
}

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

// Column index by header name; -1 when absent.
int col_of(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

void render_sweep_figures(const std::string& source, const std::string& dir) {
    const auto rows = csv_parse(slurp(source));
    if (rows.size() < 2) return;
    const auto& header = rows[0];
    const int c_strategy = col_of(header, "strategy");
    const int c_n = col_of(header, "N");
    const int c_set = col_of(header, "eval_set");
    if (c_strategy < 0 || c_n < 0 || c_set < 0) return;

    for (const char* metric : {"f1", "precision", "recall"}) {
        const int c_metric = col_of(header, metric);
        if (c_metric < 0) continue;
        // eval_set -> strategy -> points
        std::map<std::string, std::map<std::string, PlotSeries>> grouped;
        std::map<std::string, double> baseline_value;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const auto& row = rows[i];
            const std::string& strategy = row[c_strategy];
            const double value = std::stod(row[c_metric]);
            if (strategy == "baseline") {
                baseline_value[row[c_set]] = value;
                continue;
            }
            auto& series = grouped[row[c_set]][strategy];
            series.label = strategy;
            series.points.emplace_back(std::stod(row[c_n]), value);
        }
        for (auto& [set_name, by_strategy] : grouped) {
            std::vector<PlotSeries> series;
            double max_n = 0.0;
            for (auto& [strategy, s] : by_strategy) {
                std::sort(s.points.begin(), s.points.end());
                for (const auto& [x, y] : s.points) max_n = std::max(max_n, x);
                series.push_back(s);
            }
            if (baseline_value.contains(set_name)) {
                PlotSeries base;
                base.label = "baseline";
                base.points = {{0.0, baseline_value[set_name]},
                               {max_n, baseline_value[set_name]}};
                series.push_back(base);
            }
            write_text_file((fs::path(dir) /
                             ("fig_" + std::string(metric) + "_" + sanitize(set_name) + ".svg"))
                                .string(),
                            render_line_chart(std::string(metric) + " on " + set_name +
                                                  " vs augmentation size",
                                              "N added examples", metric, series));
        }
    }
}

void render_hist_figures(const std::string& source, const std::string& dir) {
    const auto rows = csv_parse(slurp(source));
    if (rows.size() < 2) return;
    const auto& header = rows[0];
    const int c_metric = col_of(header, "metric");
    const int c_group = col_of(header, "group");
    const int c_lo = col_of(header, "bin_lo");
    const int c_hi = col_of(header, "bin_hi");
    const int c_count = col_of(header, "count");
    if (c_metric < 0 || c_group < 0 || c_lo < 0 || c_hi < 0 || c_count < 0) return;

    for (const char* metric : {"doe", "confidence"}) {
        std::map<std::string, HistogramSeries> by_group;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const auto& row = rows[i];
            if (row[c_metric] != metric) continue;
            if (row[c_group] != "explicit" && row[c_group] != "implicit") continue;
            auto& s = by_group[row[c_group]];
            s.label = row[c_group];
            if (s.edges.empty()) s.edges.push_back(std::stod(row[c_lo]));
            s.edges.push_back(std::stod(row[c_hi]));
            s.counts.push_back(std::stod(row[c_count]));
        }
        if (by_group.empty()) continue;
        std::vector<HistogramSeries> series;
        for (auto& [g, s] : by_group) series.push_back(s);
        write_text_file(
            (fs::path(dir) / ("fig_" + std::string(metric) + "_hist.svg")).string(),
            render_histogram(std::string(metric) + " by explicitness", metric, series));
    }
}

void render_bin_figure(const std::string& source, const std::string& dir) {
    const auto rows = csv_parse(slurp(source));
    if (rows.size() < 2) return;
    const auto& header = rows[0];
    const int c_class = col_of(header, "class");
    const int c_bin = col_of(header, "bin_index");
    const int c_recall = col_of(header, "recall");
    if (c_class < 0 || c_bin < 0 || c_recall < 0) return;
    std::map<std::string, PlotSeries> by_class;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        auto& s = by_class[row[c_class]];
        s.label = row[c_class];
        s.points.emplace_back(std::stod(row[c_bin]), std::stod(row[c_recall]));
    }
    std::vector<PlotSeries> series;
    for (auto& [c, s] : by_class) {
        std::sort(s.points.begin(), s.points.end());
        series.push_back(s);
    }
    write_text_file((fs::path(dir) / "fig_bin_recall.svg").string(),
                    render_line_chart("recall per DoE-sorted bin", "bin (DoE ascending)",
                                      "recall", series));
}

}  // namespace

std::string cmd_report(const RunConfig& cfg) {
    const std::string dir = make_run_dir(cfg, "report");
    const fs::path source(cfg.require("report.source"));
    if (!fs::exists(source)) throw DataError("report source not found: " + source.string());

    int rendered = 0;
    if (fs::exists(source / "sweep.csv")) {
        render_sweep_figures((source / "sweep.csv").string(), dir);
        ++rendered;
    }
    if (fs::exists(source / "doe_hist.csv")) {
        render_hist_figures((source / "doe_hist.csv").string(), dir);
        ++rendered;
    }
    if (fs::exists(source / "doe_bins.csv")) {
        render_bin_figure((source / "doe_bins.csv").string(), dir);
        ++rendered;
    }
    if (rendered == 0)
        throw DataError("no renderable CSVs (sweep.csv, doe_hist.csv, doe_bins.csv) under " +
                        source.string());
    std::cout << "figures written to " << dir << "\n";
    return dir;
}

std::string run_command(const std::string& name, const RunConfig& cfg) {
    if (name == "gen") return cmd_gen(cfg);
    if (name == "train") return cmd_train(cfg);
    if (name == "eval" || name == "evaluate") return cmd_eval(cfg);
    if (name == "tcav") return cmd_tcav(cfg);
    if (name == "doe") return cmd_doe(cfg);
    if (name == "augment") return cmd_augment(cfg);
    if (name == "vocab") return cmd_vocab(cfg);
    if (name == "report") return cmd_report(cfg);
    throw ConfigError("unknown command: " + name);
}

}  // namespace cavkit

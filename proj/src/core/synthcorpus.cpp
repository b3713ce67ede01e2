#include "synthcorpus.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "error.hpp"
#include "rng.hpp"

namespace cavkit {

namespace fs = std::filesystem;

void CorpusSpec::validate() const {
    if (!(gamma > 0.0) || gamma > 1.0) throw ConfigError("gamma must be in (0,1]");
    if (label_noise < 0.0 || label_noise > 0.3)
        throw ConfigError("label noise rate must be in [0, 0.3]");
    if (negative_tinge < 0.0 || negative_tinge > 1.0)
        throw ConfigError("negative tinge must be in [0,1]");
    if (random_positive_ratio < 0.0 || random_positive_ratio > 0.5)
        throw ConfigError("random stream positive ratio must be in [0, 0.5]");
    if (neg_topic_dropout < 0.0 || neg_topic_dropout > 1.0)
        throw ConfigError("negative topic dropout must be in [0,1]");
    if (background_words < 10 || topic_words_per_flavor < 2 || marker_words < 1)
        throw ConfigError("corpus vocabulary sizes too small");
    if (positive_ratio_base <= 0.0 || positive_ratio_base >= 1.0 ||
        positive_ratio_new <= 0.0 || positive_ratio_new >= 1.0)
        throw ConfigError("positive ratios must be in (0,1)");
    if (explicit_frac_base < 0.0 || explicit_frac_base > 1.0 || explicit_frac_new < 0.0 ||
        explicit_frac_new > 1.0)
        throw ConfigError("explicit fractions must be in [0,1]");
    if (background_tokens_min < 1 || background_tokens_max < background_tokens_min ||
        topic_tokens_min < 1 || topic_tokens_max < topic_tokens_min)
        throw ConfigError("token count ranges are inconsistent");
    if (base_train < 10 || new_pool < 10) throw ConfigError("split sizes too small");
}

namespace {

enum class Domain { base, emerging };
enum class Kind { negative, implicit_pos, explicit_pos };

struct Vocab {
    std::vector<std::string> background;
    std::vector<std::string> base_hostile, base_neutral;
    std::vector<std::string> new_hostile, new_neutral;
    std::vector<std::string> markers;
    std::vector<std::string> mild;  // casual rudeness, weak positive evidence
};

// Mild-word exposure rates. Rude-sounding words appear in most abusive texts
// and in a slice of ordinary negatives, which keeps their trained weight
// softly positive: enough to move a DoE ranking, not enough to flip a
// prediction.
constexpr double kMildInExplicit = 0.7;
constexpr double kMildInBaseImplicit = 0.5;
constexpr double kMildCasual = 0.15;  // negatives outside the curated emerging set

// Emerging-domain implicit abuse reads polite: it borrows ordinary neutral
// discussion vocabulary on top of its shifted topic distribution.
constexpr double kPoliteInNewImplicit = 0.8;

std::string word(const char* prefix, std::size_t i) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%s%03zu", prefix, i);
    return buf;
}

Vocab make_vocab(const CorpusSpec& spec) {
    Vocab v;
    for (std::size_t i = 0; i < spec.background_words; ++i) v.background.push_back(word("w", i));
    for (std::size_t i = 0; i < spec.topic_words_per_flavor; ++i) {
        v.base_hostile.push_back(word("bh", i));
        v.base_neutral.push_back(word("bn", i));
        v.new_hostile.push_back(word("nh", i));
        v.new_neutral.push_back(word("nn", i));
    }
    for (std::size_t i = 0; i < spec.marker_words; ++i) v.markers.push_back(word("xm", i));
    for (std::size_t i = 0; i < 10; ++i) v.mild.push_back(word("mr", i));
    return v;
}

const std::string& pick(const std::vector<std::string>& words, Rng& rng) {
    return words[rng.next_below(words.size())];
}

std::size_t pick_count(std::size_t lo, std::size_t hi, Rng& rng) {
    return lo + static_cast<std::size_t>(rng.next_below(hi - lo + 1));
}

// Fixed token counts for curated concept files; <0 leaves the natural draw.
struct TextShape {
    int background = -1;
    int topic = -1;
    int mild = -1;      // 0/1 forces absence/presence
    int neutral_base = 0;  // extra base-neutral discussion words
};

std::string make_text(const CorpusSpec& spec, const Vocab& v, Domain domain, Kind kind,
                      double hostile_p, bool dataset_flavor, Rng& rng,
                      const TextShape& shape = {}) {
    std::vector<std::string> tokens;
    const std::size_t n_bg =
        shape.background >= 0
            ? std::size_t(shape.background)
            : pick_count(spec.background_tokens_min, spec.background_tokens_max, rng);
    for (std::size_t i = 0; i < n_bg; ++i) tokens.push_back(pick(v.background, rng));

    const auto& hostile = domain == Domain::base ? v.base_hostile : v.new_hostile;
    const auto& neutral = domain == Domain::base ? v.base_neutral : v.new_neutral;
    std::size_t n_topic = shape.topic >= 0
                              ? std::size_t(shape.topic)
                              : pick_count(spec.topic_tokens_min, spec.topic_tokens_max, rng);
    // A slice of base-domain negatives is plain chatter without topic words.
    if (shape.topic < 0 && domain == Domain::base && kind == Kind::negative &&
        rng.next_bernoulli(spec.neg_topic_dropout))
        n_topic = 0;
    for (std::size_t i = 0; i < n_topic; ++i)
        tokens.push_back(pick(rng.next_bernoulli(hostile_p) ? hostile : neutral, rng));

    if (kind == Kind::explicit_pos) tokens.push_back(pick(v.markers, rng));

    double mild_p = shape.mild == 0 ? 0.0 : shape.mild == 1 ? 1.0 : -1.0;
    if (mild_p >= 0.0) {
        // forced by shape
    } else if (kind == Kind::explicit_pos) {
        mild_p = kMildInExplicit;
    } else if (kind == Kind::implicit_pos) {
        // Emerging-domain implicit abuse reads polite; base-domain implicit
        // abuse carries some casual rudeness.
        mild_p = domain == Domain::base ? kMildInBaseImplicit : 0.0;
    } else {
        // Most negatives in the curated emerging dataset are rude without
        // being hateful; elsewhere rudeness is casual.
        const bool curated_emerging = dataset_flavor && domain == Domain::emerging;
        mild_p = curated_emerging ? spec.negative_tinge : kMildCasual;
    }
    if (rng.next_bernoulli(mild_p)) {
        const bool curated_emerging_neg =
            dataset_flavor && domain == Domain::emerging && kind == Kind::negative;
        const int n_mild = curated_emerging_neg ? int(spec.tinge_tokens) : 1;
        for (int i = 0; i < n_mild; ++i) tokens.push_back(pick(v.mild, rng));
    }
    for (int i = 0; i < shape.neutral_base; ++i) tokens.push_back(pick(v.base_neutral, rng));
    if (kind == Kind::implicit_pos && domain == Domain::emerging &&
        rng.next_bernoulli(kPoliteInNewImplicit))
        for (std::size_t i = 0; i < spec.polite_tokens; ++i)
            tokens.push_back(pick(v.base_neutral, rng));

    rng.shuffle(tokens);
    std::string text;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) text.push_back(' ');
        text.append(tokens[i]);
    }
    return text;
}

// Explicit abuse is recognizable from the marker alone; its topic backdrop
// is neutral. Implicit abuse carries the whole signal in the hostile-topic
// distribution shift.
double hostile_p_for(const CorpusSpec& spec, Kind kind) {
    switch (kind) {
        case Kind::negative: return (1.0 - spec.gamma) / 2.0;
        case Kind::implicit_pos: return (1.0 + spec.gamma) / 2.0;
        default: return 0.5;
    }
}

Kind draw_kind(const CorpusSpec& spec, Domain domain, Rng& rng) {
    const double pos_ratio =
        domain == Domain::base ? spec.positive_ratio_base : spec.positive_ratio_new;
    if (!rng.next_bernoulli(pos_ratio)) return Kind::negative;
    const double exp_frac =
        domain == Domain::base ? spec.explicit_frac_base : spec.explicit_frac_new;
    return rng.next_bernoulli(exp_frac) ? Kind::explicit_pos : Kind::implicit_pos;
}

Utterance make_utterance(const CorpusSpec& spec, const Vocab& v, Domain domain,
                         const std::string& id, bool training_side, Rng& rng) {
    const Kind kind = draw_kind(spec, domain, rng);
    Utterance u;
    u.id = id;
    u.text = make_text(spec, v, domain, kind, hostile_p_for(spec, kind), true, rng);

    bool positive = kind != Kind::negative;
    const bool has_marker = kind == Kind::explicit_pos;
    // Label noise simulates annotation errors on training-side splits;
    // marker-bearing docs are exempt so the marker rule stays exact.
    if (training_side && !has_marker && rng.next_bernoulli(spec.label_noise))
        positive = !positive;
    u.label = positive ? Label::positive : Label::negative;
    if (positive)
        u.explicitness = has_marker ? Explicitness::explicit_abuse : Explicitness::implicit_abuse;
    return u;
}

Dataset make_split(const CorpusSpec& spec, const Vocab& v, Domain domain, Split split,
                   const std::string& name, const std::string& id_prefix, std::size_t size,
                   bool training_side) {
    Rng rng = Rng::for_stream(spec.seed, "corpus." + name);
    std::vector<Utterance> items;
    items.reserve(size);
    for (std::size_t i = 0; i < size; ++i)
        items.push_back(make_utterance(spec, v, domain, id_prefix + std::to_string(i),
                                       training_side, rng));
    return Dataset(name, split, std::move(items));
}

// One doc from the raw random-text stream: both domains blended evenly,
// positives at random_positive_ratio, no dataset-only tinge.
std::string random_stream_text(const CorpusSpec& spec, const Vocab& v, Rng& rng) {
    const Domain domain = rng.next_bernoulli(0.5) ? Domain::base : Domain::emerging;
    Kind kind = Kind::negative;
    if (rng.next_bernoulli(spec.random_positive_ratio)) {
        const double exp_frac =
            domain == Domain::base ? spec.explicit_frac_base : spec.explicit_frac_new;
        kind = rng.next_bernoulli(exp_frac) ? Kind::explicit_pos : Kind::implicit_pos;
    }
    return make_text(spec, v, domain, kind, hostile_p_for(spec, kind), false, rng);
}

Dataset make_input_pool(const CorpusSpec& spec, const Vocab& v) {
    Rng rng = Rng::for_stream(spec.seed, "corpus.inputs");
    std::vector<Utterance> items;
    items.reserve(spec.input_pool);
    for (std::size_t i = 0; i < spec.input_pool; ++i) {
        Utterance u;
        u.id = "xi" + std::to_string(i);
        u.text = random_stream_text(spec, v, rng);
        items.push_back(std::move(u));
    }
    return Dataset("inputs", Split::pool, std::move(items));
}

void write_concept_file(const std::string& path, const std::vector<std::string>& lines,
                        const std::string& title) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open for writing: " + path);
    f << "# " << title << "\n";
    for (const auto& line : lines) f << line << "\n";
    if (!f) throw DataError("write failed: " + path);
}

// Concept examples come from dedicated streams so they never collide with
// pool or test draws.
std::vector<std::string> concept_texts(const CorpusSpec& spec, const Vocab& v,
                                       const std::string& stream, Domain domain, Kind kind) {
    Rng rng = Rng::for_stream(spec.seed, "corpus.concept." + stream);
    // Curated concept sets are compositionally uniform, which keeps CAV
    // sampling noise low.
    TextShape shape;
    shape.background = 0;
    shape.neutral_base = int(spec.concept_background_tokens);
    shape.topic = int(spec.concept_topic_tokens);
    shape.mild = kind == Kind::explicit_pos ? 1 : 0;
    std::vector<std::string> lines;
    lines.reserve(spec.concept_size);
    for (std::size_t i = 0; i < spec.concept_size; ++i)
        lines.push_back(
            make_text(spec, v, domain, kind, hostile_p_for(spec, kind), false, rng, shape));
    return lines;
}

std::vector<std::string> random_concept_texts(const CorpusSpec& spec, const Vocab& v) {
    Rng rng = Rng::for_stream(spec.seed, "corpus.concept.random");
    std::vector<std::string> lines;
    lines.reserve(spec.concept_size);
    for (std::size_t i = 0; i < spec.concept_size; ++i)
        lines.push_back(random_stream_text(spec, v, rng));
    return lines;
}

}  // namespace

GeneratedCorpus generate_corpus(const CorpusSpec& spec, const std::string& out_dir) {
    spec.validate();
    const Vocab v = make_vocab(spec);
    fs::create_directories(out_dir);
    fs::create_directories(fs::path(out_dir) / "concepts");

    GeneratedCorpus out;
    out.dir = out_dir;
    auto path = [&](const char* name) { return (fs::path(out_dir) / name).string(); };

    const Dataset base_train =
        make_split(spec, v, Domain::base, Split::train, "base_train", "bt", spec.base_train, true);
    const Dataset base_dev =
        make_split(spec, v, Domain::base, Split::dev, "base_dev", "bd", spec.base_dev, false);
    const Dataset base_test =
        make_split(spec, v, Domain::base, Split::test, "base_test", "bx", spec.base_test, false);
    // Pool labels are revealed by fresh annotation after selection, so the
    // emerging pool carries no label noise; only the legacy base training
    // split does.
    const Dataset new_pool = make_split(spec, v, Domain::emerging, Split::pool, "new_pool", "np",
                                        spec.new_pool, false);
    const Dataset new_test = make_split(spec, v, Domain::emerging, Split::test, "new_test", "nx",
                                        spec.new_test, false);
    const Dataset inputs = make_input_pool(spec, v);

    out.base_train = path("base_train.jsonl");
    out.base_dev = path("base_dev.jsonl");
    out.base_test = path("base_test.jsonl");
    out.new_pool = path("new_pool.jsonl");
    out.new_test = path("new_test.jsonl");
    out.inputs = path("inputs.jsonl");
    save_dataset(base_train, out.base_train);
    save_dataset(base_dev, out.base_dev);
    save_dataset(base_test, out.base_test);
    save_dataset(new_pool, out.new_pool);
    save_dataset(new_test, out.new_test);
    save_dataset(inputs, out.inputs);

    const std::string cdir = (fs::path(out_dir) / "concepts").string() + "/";
    out.concepts["explicit"] = cdir + "concept_explicit.txt";
    out.concepts["implicit"] = cdir + "concept_implicit.txt";
    out.concepts["topic"] = cdir + "concept_topic.txt";
    out.concepts["random"] = cdir + "concept_random.txt";
    write_concept_file(out.concepts["explicit"],
                       concept_texts(spec, v, "explicit", Domain::emerging, Kind::explicit_pos),
                       "emerging-domain explicit abuse concept examples");
    write_concept_file(out.concepts["implicit"],
                       concept_texts(spec, v, "implicit", Domain::emerging, Kind::implicit_pos),
                       "emerging-domain implicit abuse concept examples");
    write_concept_file(out.concepts["topic"],
                       concept_texts(spec, v, "topic", Domain::emerging, Kind::negative),
                       "emerging-domain neutral topic concept examples");
    write_concept_file(out.concepts["random"], random_concept_texts(spec, v),
                       "non-coherent concept examples (random texts)");

    out.labelmap = path("labelmap.cfg");
    {
        std::ofstream f(out.labelmap, std::ios::binary);
        if (!f) throw DataError("cannot open for writing: " + out.labelmap);
        f << "positive = positive\nnegative = negative\n";
    }

    nlohmann::json manifest;
    manifest["files"] = {{"base_train", "base_train.jsonl"}, {"base_dev", "base_dev.jsonl"},
                         {"base_test", "base_test.jsonl"},   {"new_pool", "new_pool.jsonl"},
                         {"new_test", "new_test.jsonl"},     {"inputs", "inputs.jsonl"},
                         {"labelmap", "labelmap.cfg"}};
    manifest["concepts"] = {{"explicit", "concepts/concept_explicit.txt"},
                            {"implicit", "concepts/concept_implicit.txt"},
                            {"topic", "concepts/concept_topic.txt"},
                            {"random", "concepts/concept_random.txt"}};
    manifest["spec"] = {{"seed", spec.seed},
                        {"gamma", spec.gamma},
                        {"label_noise", spec.label_noise},
                        {"negative_tinge", spec.negative_tinge},
                        {"random_positive_ratio", spec.random_positive_ratio},
                        {"neg_topic_dropout", spec.neg_topic_dropout},
                        {"positive_ratio_base", spec.positive_ratio_base},
                        {"positive_ratio_new", spec.positive_ratio_new},
                        {"explicit_frac_base", spec.explicit_frac_base},
                        {"explicit_frac_new", spec.explicit_frac_new},
                        {"sizes",
                         {{"base_train", spec.base_train},
                          {"base_dev", spec.base_dev},
                          {"base_test", spec.base_test},
                          {"new_pool", spec.new_pool},
                          {"new_test", spec.new_test},
                          {"input_pool", spec.input_pool},
                          {"concept_size", spec.concept_size}}}};
    std::ofstream mf(path("manifest.json"), std::ios::binary);
    if (!mf) throw DataError("cannot write manifest.json");
    mf << manifest.dump(2) << "\n";

    return out;
}

}  // namespace cavkit

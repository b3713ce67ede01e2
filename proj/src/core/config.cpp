#include "config.hpp"

#include <charconv>
#include <fstream>

#include "error.hpp"
#include "rng.hpp"
#include "text.hpp"

namespace cavkit {

namespace {

struct KeyDefault {
    const char* key;
    const char* value;
};

// Every fixed configuration key and its default.
const KeyDefault kDefaults[] = {
    {"out.dir", "runs"},

    {"data.name", ""},
    {"data.train", ""},
    {"data.dev", ""},
    {"data.test", ""},
    {"data.pool", ""},
    {"data.labelmap", ""},

    {"model.path", ""},

    {"encoder.source", "builtin"},
    {"encoder.embeddings", ""},
    {"encoder.ngram_min", "1"},
    {"encoder.ngram_max", "2"},
    {"encoder.buckets", "262144"},
    {"encoder.dim", "64"},
    {"encoder.normalize", "true"},
    {"encoder.init_scale", "0.05"},
    {"encoder.seed", "7"},

    {"head.hidden", "32"},
    {"head.activation", "tanh"},

    {"train.epochs", "8"},
    {"train.batch", "32"},
    {"train.lr", "0.5"},
    {"train.seed", "1"},
    {"train.weighted", "false"},
    {"train.threshold", "0.5"},
    {"train.model_out", ""},

    {"eval.by_explicitness", "true"},

    {"tcav.concepts", ""},
    {"tcav.baseline", ""},
    {"tcav.p", "1000"},
    {"tcav.nv", "5"},
    {"tcav.seed", "11"},
    {"tcav.alpha", "0.001"},
    {"tcav.inputs", ""},
    {"tcav.input_n", "2000"},
    {"tcav.input_seed", "13"},
    {"tcav.allow_degenerate", "false"},
    {"tcav.mode", "analytic"},
    {"tcav.eps", "0.001"},

    {"doe.concept", ""},
    {"doe.concept_name", "explicit"},
    {"doe.pool", ""},
    {"doe.p", "100"},
    {"doe.nv", "3"},
    {"doe.seed", "17"},
    {"doe.bins", "100"},
    {"doe.hist_bins", "20"},

    {"augment.strategies", "doe,confidence,random"},
    {"augment.n_values", "50,100,150,200,250,300,350,400,450,500,550,600"},
    {"augment.seed", "19"},
    {"augment.base_eval", ""},

    {"vocab.sets", ""},
    {"vocab.k", "100"},
    {"vocab.stopwords", ""},
    {"vocab.mask", "false"},

    {"gen.out", ""},
    {"gen.seed", "2024"},
    {"gen.gamma", "0.9"},
    {"gen.noise", "0.05"},
    {"gen.random_positive_ratio", "0.01"},
    {"gen.neg_topic_dropout", "0.5"},
    {"gen.tinge", "0.95"},
    {"gen.tinge_tokens", "2"},
    {"gen.polite_tokens", "2"},
    {"gen.pos_ratio_base", "0.3"},
    {"gen.pos_ratio_new", "0.25"},
    {"gen.explicit_frac_base", "0.3"},
    {"gen.explicit_frac_new", "0.5"},
    {"gen.base_train", "4000"},
    {"gen.base_dev", "800"},
    {"gen.base_test", "1000"},
    {"gen.new_pool", "2000"},
    {"gen.new_test", "1000"},
    {"gen.input_pool", "2000"},
    {"gen.concept_size", "100"},
    {"gen.concept_bg_tokens", "7"},
    {"gen.concept_topic_tokens", "6"},
    {"gen.background_words", "400"},
    {"gen.topic_words", "25"},
    {"gen.marker_words", "5"},

    {"report.source", ""},
};

// Families with caller-chosen suffixes.
const char* const kDynamicPrefixes[] = {"eval.set.", "vocab.lexicon."};

bool known_key(const std::string& key) {
    for (const auto& d : kDefaults)
        if (key == d.key) return true;
    for (const char* prefix : kDynamicPrefixes)
        if (key.rfind(prefix, 0) == 0 && key.size() > std::string(prefix).size()) return true;
    return false;
}

}  // namespace

RunConfig::RunConfig() {
    for (const auto& d : kDefaults) values_[d.key] = d.value;
}

void RunConfig::load_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        const std::size_t eq = sv.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(path + " line " + std::to_string(line_no) +
                              ": expected `key = value`");
        set(std::string(trim(sv.substr(0, eq))), std::string(trim(sv.substr(eq + 1))));
    }
}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (!known_key(key)) throw ConfigError("unknown config key: " + key);
    values_[key] = value;
}

bool RunConfig::has(const std::string& key) const {
    auto it = values_.find(key);
    return it != values_.end() && !it->second.empty();
}

const std::string& RunConfig::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown config key: " + key);
    return it->second;
}

std::string RunConfig::require(const std::string& key) const {
    const std::string& v = get(key);
    if (v.empty()) throw ConfigError("config key `" + key + "` is required");
    return v;
}

std::uint64_t RunConfig::get_u64(const std::string& key) const {
    const std::string& v = get(key);
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ConfigError("config key `" + key + "` expects an unsigned integer, got `" + v +
                          "`");
    return out;
}

double RunConfig::get_double(const std::string& key) const {
    const std::string& v = get(key);
    try {
        std::size_t used = 0;
        const double out = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError("config key `" + key + "` expects a number, got `" + v + "`");
    }
}

bool RunConfig::get_bool(const std::string& key) const {
    const std::string& v = get(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config key `" + key + "` expects true/false, got `" + v + "`");
}

std::vector<std::size_t> RunConfig::get_size_list(const std::string& key) const {
    const std::string& v = get(key);
    std::vector<std::size_t> out;
    std::size_t start = 0;
    while (start <= v.size()) {
        std::size_t comma = v.find(',', start);
        if (comma == std::string::npos) comma = v.size();
        const std::string item(trim(std::string_view(v).substr(start, comma - start)));
        if (!item.empty()) {
            std::size_t n = 0;
            auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), n);
            if (ec != std::errc{} || ptr != item.data() + item.size())
                throw ConfigError("config key `" + key + "`: `" + item +
                                  "` is not an unsigned integer");
            out.push_back(n);
        }
        start = comma + 1;
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> RunConfig::get_pairs(
    const std::string& key) const {
    const std::string& v = get(key);
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t start = 0;
    while (start <= v.size()) {
        std::size_t comma = v.find(',', start);
        if (comma == std::string::npos) comma = v.size();
        const std::string item(trim(std::string_view(v).substr(start, comma - start)));
        if (!item.empty()) {
            const std::size_t eq = item.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config key `" + key + "`: `" + item +
                                  "` is not a name=value pair");
            out.emplace_back(std::string(trim(std::string_view(item).substr(0, eq))),
                             std::string(trim(std::string_view(item).substr(eq + 1))));
        }
        start = comma + 1;
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> RunConfig::family(
    const std::string& prefix) const {
    std::vector<std::pair<std::string, std::string>> out;
    for (auto it = values_.lower_bound(prefix); it != values_.end(); ++it) {
        if (it->first.rfind(prefix, 0) != 0) break;
        if (!it->second.empty()) out.emplace_back(it->first.substr(prefix.size()), it->second);
    }
    return out;
}

std::string RunConfig::canonical() const {
    std::string out;
    for (const auto& [k, v] : values_) {
        out.append(k);
        out.push_back('=');
        out.append(v);
        out.push_back('\n');
    }
    return out;
}

std::uint64_t RunConfig::hash() const { return fnv1a64(canonical()); }

void RunConfig::write_file(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open for writing: " + path);
    const std::string body = canonical();
    f.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!f) throw DataError("write failed: " + path);
}

}  // namespace cavkit

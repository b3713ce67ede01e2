#include "data.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "error.hpp"
#include "rng.hpp"
#include "text.hpp"

namespace cavkit {

using nlohmann::json;

const char* to_string(Explicitness e) {
    switch (e) {
        case Explicitness::explicit_abuse: return "explicit";
        case Explicitness::implicit_abuse: return "implicit";
        default: return "unknown";
    }
}

const char* to_string(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::dev: return "dev";
        case Split::test: return "test";
        default: return "pool";
    }
}

Split split_from_string(const std::string& s) {
    if (s == "train") return Split::train;
    if (s == "dev") return Split::dev;
    if (s == "test") return Split::test;
    if (s == "pool") return Split::pool;
    throw ConfigError("unknown split tag: " + s);
}

Dataset::Dataset(std::string name, Split split, std::vector<Utterance> items)
    : name_(std::move(name)), split_(split), items_(std::move(items)) {
    for (const auto& u : items_) {
        if (u.label) {
            ++labeled_;
            if (*u.label == Label::positive) ++positives_;
        }
    }
}

double Dataset::class_ratio() const {
    return labeled_ == 0 ? 0.0 : static_cast<double>(positives_) / static_cast<double>(labeled_);
}

bool Dataset::operator==(const Dataset& other) const {
    if (items_.size() != other.items_.size()) return false;
    for (std::size_t i = 0; i < items_.size(); ++i) {
        const Utterance& a = items_[i];
        const Utterance& b = other.items_[i];
        if (a.id != b.id || a.text != b.text || a.label != b.label ||
            a.explicitness != b.explicitness)
            return false;
    }
    return true;
}

LabelMap LabelMap::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot open label map: " + path);
    LabelMap map;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        std::size_t eq = sv.find('=');
        if (eq == std::string_view::npos)
            throw DataError("label map " + path + " line " + std::to_string(line_no) +
                            ": expected `raw = positive|negative|drop`");
        std::string raw(trim(sv.substr(0, eq)));
        std::string target(trim(sv.substr(eq + 1)));
        Target t;
        if (target == "positive") t = Target::positive;
        else if (target == "negative") t = Target::negative;
        else if (target == "drop") t = Target::drop;
        else
            throw DataError("label map " + path + " line " + std::to_string(line_no) +
                            ": unknown target `" + target + "`");
        if (raw.empty())
            throw DataError("label map " + path + " line " + std::to_string(line_no) +
                            ": empty raw label");
        map.entries_[raw] = t;
    }
    map.validate();
    return map;
}

LabelMap LabelMap::from_entries(const std::map<std::string, Target>& entries) {
    LabelMap map;
    map.entries_ = entries;
    map.validate();
    return map;
}

LabelMap LabelMap::identity() {
    return from_entries({{"positive", Target::positive}, {"negative", Target::negative}});
}

void LabelMap::validate() const {
    bool has_pos = false, has_neg = false;
    for (const auto& [raw, t] : entries_) {
        if (t == Target::positive) has_pos = true;
        if (t == Target::negative) has_neg = true;
    }
    if (entries_.empty()) throw DataError("label map is empty");
    if (!has_pos) throw DataError("label map has no positive class");
    if (!has_neg) throw DataError("label map has no negative class");
}

std::optional<LabelMap::Target> LabelMap::lookup(const std::string& raw) const {
    auto it = entries_.find(raw);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

bool ConceptSet::contains_text(const std::string& text) const {
    for (const auto& u : examples)
        if (u.text == text) return true;
    return false;
}

Dataset load_dataset(const std::string& path, const LabelMap& map, Split split,
                     const std::string& name) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open dataset: " + path);

    std::vector<Utterance> items;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        json rec = json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object())
            throw DataError(path + " line " + std::to_string(line_no) + ": malformed JSON record");

        if (!rec.contains("id") || !rec["id"].is_string())
            throw DataError(path + " line " + std::to_string(line_no) + ": missing string `id`");
        if (!rec.contains("text") || !rec["text"].is_string())
            throw DataError(path + " line " + std::to_string(line_no) + ": missing string `text`");

        Utterance u;
        u.id = rec["id"].get<std::string>();
        u.text = rec["text"].get<std::string>();
        if (trim(u.text).empty())
            throw DataError(path + " line " + std::to_string(line_no) + ": empty text");

        if (rec.contains("label") && !rec["label"].is_null()) {
            if (!rec["label"].is_string())
                throw DataError(path + " line " + std::to_string(line_no) +
                                ": `label` must be a string");
            std::string raw = rec["label"].get<std::string>();
            auto target = map.lookup(raw);
            if (!target)
                throw DataError(path + " line " + std::to_string(line_no) +
                                ": raw label `" + raw + "` not covered by the label map");
            if (*target == LabelMap::Target::drop) continue;
            u.label = (*target == LabelMap::Target::positive) ? Label::positive : Label::negative;
        }

        if (rec.contains("explicitness") && !rec["explicitness"].is_null()) {
            std::string e = rec["explicitness"].get<std::string>();
            if (e == "explicit") u.explicitness = Explicitness::explicit_abuse;
            else if (e == "implicit") u.explicitness = Explicitness::implicit_abuse;
            else if (e != "unknown")
                throw DataError(path + " line " + std::to_string(line_no) +
                                ": unknown explicitness `" + e + "`");
            if (u.explicitness != Explicitness::unknown && !u.is_positive())
                throw DataError(path + " line " + std::to_string(line_no) +
                                ": explicitness tag on a non-positive utterance");
        }

        if (!seen_ids.insert(u.id).second)
            throw DataError(path + " line " + std::to_string(line_no) + ": duplicate id `" +
                            u.id + "`");
        items.push_back(std::move(u));
    }
    if (items.empty()) throw DataError(path + ": no records survived loading");
    return Dataset(name.empty() ? path : name, split, std::move(items));
}

void save_dataset(const Dataset& ds, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open for writing: " + path);
    for (const auto& u : ds.items()) {
        json rec;
        rec["id"] = u.id;
        rec["text"] = u.text;
        if (u.label) rec["label"] = (*u.label == Label::positive) ? "positive" : "negative";
        if (u.explicitness != Explicitness::unknown)
            rec["explicitness"] = to_string(u.explicitness);
        f << rec.dump() << "\n";
    }
    if (!f) throw DataError("write failed: " + path);
}

ConceptSet load_concept(const std::string& path, const std::string& name,
                        std::size_t min_unique) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open concept file: " + path);
    ConceptSet cs;
    cs.name = name;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        std::string text(sv);
        if (!seen.insert(text).second) continue;
        Utterance u;
        u.id = name + ":" + std::to_string(line_no);
        u.text = std::move(text);
        cs.examples.push_back(std::move(u));
    }
    if (cs.count() < min_unique)
        throw DataError("concept `" + name + "` has " + std::to_string(cs.count()) +
                        " unique examples; at least " + std::to_string(min_unique) +
                        " are required");
    return cs;
}

std::vector<Utterance> sample_pool(const Dataset& ds, std::size_t n, std::uint64_t seed) {
    if (n > ds.size())
        throw DataError("sample of " + std::to_string(n) + " requested from a dataset of " +
                        std::to_string(ds.size()));
    Rng rng(seed);
    std::vector<std::size_t> idx = rng.sample_indices(ds.size(), n);
    std::vector<Utterance> out;
    out.reserve(n);
    for (std::size_t i : idx) out.push_back(ds[i]);
    return out;
}

}  // namespace cavkit

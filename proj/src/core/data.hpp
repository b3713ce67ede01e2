#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cavkit {

enum class Label : std::uint8_t { negative = 0, positive = 1 };
enum class Explicitness : std::uint8_t { unknown = 0, explicit_abuse = 1, implicit_abuse = 2 };
enum class Split : std::uint8_t { train, dev, test, pool };

const char* to_string(Explicitness e);
const char* to_string(Split s);
Split split_from_string(const std::string& s);

struct Utterance {
    std::string id;
    std::string text;
    std::optional<Label> label;
    Explicitness explicitness = Explicitness::unknown;

    bool is_positive() const { return label && *label == Label::positive; }
};

// Immutable after load; the split tag is fixed at construction.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::string name, Split split, std::vector<Utterance> items);

    const std::string& name() const { return name_; }
    Split split() const { return split_; }
    const std::vector<Utterance>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }
    const Utterance& operator[](std::size_t i) const { return items_[i]; }

    std::size_t labeled_count() const { return labeled_; }
    std::size_t positive_count() const { return positives_; }
    // #positive / #labeled; 0 for a fully unlabeled set.
    double class_ratio() const;

    bool operator==(const Dataset& other) const;

private:
    std::string name_;
    Split split_ = Split::train;
    std::vector<Utterance> items_;
    std::size_t labeled_ = 0;
    std::size_t positives_ = 0;
};

// Maps raw corpus labels onto {positive, negative, drop}. Total over the
// file being loaded: an unmapped raw label is a hard error, never a skip.
class LabelMap {
public:
    enum class Target : std::uint8_t { positive, negative, drop };

    // `raw_label = positive|negative|drop` lines; '#' comments allowed.
    static LabelMap load(const std::string& path);
    static LabelMap from_entries(const std::map<std::string, Target>& entries);
    // Accepts exactly "positive" and "negative" raw labels.
    static LabelMap identity();

    std::optional<Target> lookup(const std::string& raw) const;

private:
    void validate() const;
    std::map<std::string, Target> entries_;
};

struct ConceptSet {
    std::string name;
    std::vector<Utterance> examples;  // deduplicated by text, file order

    std::size_t count() const { return examples.size(); }
    bool contains_text(const std::string& text) const;
};

// JSONL corpus: {"id": ..., "text": ..., "label": raw, "explicitness": ...}.
// Records whose raw label maps to drop vanish; a missing label field yields
// an unlabeled utterance (pools). Errors carry the offending line number.
Dataset load_dataset(const std::string& path, const LabelMap& map, Split split,
                     const std::string& name = "");

// Writes the canonical JSONL form ("positive"/"negative" labels); reloading
// with LabelMap::identity() round-trips.
void save_dataset(const Dataset& ds, const std::string& path);

// Plain UTF-8, one example per line, '#' comments ignored, deduplicated by
// text. min_unique guards the downstream CAV sampling requirement.
ConceptSet load_concept(const std::string& path, const std::string& name,
                        std::size_t min_unique = 1);

// First n entries of a seeded permutation; n == size gives a permutation.
std::vector<Utterance> sample_pool(const Dataset& ds, std::size_t n, std::uint64_t seed);

}  // namespace cavkit

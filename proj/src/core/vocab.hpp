#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "data.hpp"

namespace cavkit {

// Top-k most frequent positive-class words after stopword removal.
// Tokenization: lowercased alphanumeric runs of length >= 2; counts are
// descending with alphabetical tie-breaks.
struct FrequencyProfile {
    std::string dataset_name;
    std::vector<std::pair<std::string, std::size_t>> words;
    std::size_t k = 0;
    std::uint64_t stopword_fingerprint = 0;
};

struct OverlapCategory {
    std::string name;  // lexicon name, or "other"
    std::vector<std::string> words;
    double percentage = 0.0;
};

struct OverlapReport {
    std::string dataset_a;
    std::string dataset_b;
    std::vector<std::string> shared;  // sorted
    std::vector<OverlapCategory> categories;
};

// The word set the fixed built-in stopword list contains; versioned in-repo,
// overridable by file.
const std::set<std::string>& builtin_stopwords();
std::uint64_t word_set_fingerprint(const std::set<std::string>& words);

// One word per line, '#' comments ignored, lowercased.
std::set<std::string> load_word_set(const std::string& path);

FrequencyProfile frequency_profile(const Dataset& ds, std::size_t k,
                                   const std::set<std::string>& stopwords);

// Shared words between two equal-k profiles, each assigned to the first
// matching lexicon in order, else "other". Percentages sum to 100 over a
// non-empty intersection.
OverlapReport overlap(const FrequencyProfile& a, const FrequencyProfile& b,
                      const std::vector<std::pair<std::string, std::set<std::string>>>& lexicons);

// Presentation-only profanity masking: vowels become '*'.
std::string mask_word(const std::string& word);

}  // namespace cavkit

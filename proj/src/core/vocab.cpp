#include "vocab.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "error.hpp"
#include "rng.hpp"
#include "text.hpp"

namespace cavkit {

std::uint64_t word_set_fingerprint(const std::set<std::string>& words) {
    std::string joined;
    for (const auto& w : words) {
        joined.append(w);
        joined.push_back('\n');
    }
    return fnv1a64(joined);
}

std::set<std::string> load_word_set(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open word set: " + path);
    std::set<std::string> words;
    std::string line;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        words.insert(to_lower(sv));
    }
    return words;
}

FrequencyProfile frequency_profile(const Dataset& ds, std::size_t k,
                                   const std::set<std::string>& stopwords) {
    if (ds.positive_count() == 0)
        throw DataError("dataset `" + ds.name() + "` has no positive class");
    std::map<std::string, std::size_t> counts;
    for (const auto& u : ds.items()) {
        if (!u.is_positive()) continue;
        for (const auto& tok : tokenize(u.text, 2))
            if (!stopwords.contains(tok)) ++counts[tok];
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > k) ranked.resize(k);

    FrequencyProfile p;
    p.dataset_name = ds.name();
    p.words = std::move(ranked);
    p.k = k;
    p.stopword_fingerprint = word_set_fingerprint(stopwords);
    return p;
}

OverlapReport overlap(const FrequencyProfile& a, const FrequencyProfile& b,
                      const std::vector<std::pair<std::string, std::set<std::string>>>& lexicons) {
    if (a.k != b.k)
        throw ConfigError("profiles were built with different k (" + std::to_string(a.k) +
                          " vs " + std::to_string(b.k) + ")");
    if (a.stopword_fingerprint != b.stopword_fingerprint)
        throw ConfigError("profiles were built with different stopword lists");

    std::set<std::string> wa, wb;
    for (const auto& [w, c] : a.words) wa.insert(w);
    for (const auto& [w, c] : b.words) wb.insert(w);

    OverlapReport report;
    report.dataset_a = a.dataset_name;
    report.dataset_b = b.dataset_name;
    std::set_intersection(wa.begin(), wa.end(), wb.begin(), wb.end(),
                          std::back_inserter(report.shared));

    report.categories.reserve(lexicons.size() + 1);
    for (const auto& [name, words] : lexicons) report.categories.push_back({name, {}, 0.0});
    report.categories.push_back({"other", {}, 0.0});

    for (const auto& w : report.shared) {
        std::size_t slot = lexicons.size();  // other
        for (std::size_t i = 0; i < lexicons.size(); ++i) {
            if (lexicons[i].second.contains(w)) {
                slot = i;
                break;
            }
        }
        report.categories[slot].words.push_back(w);
    }
    if (!report.shared.empty()) {
        for (auto& cat : report.categories)
            cat.percentage = 100.0 * double(cat.words.size()) / double(report.shared.size());
    }
    return report;
}

std::string mask_word(const std::string& word) {
    std::string out = word;
    for (char& c : out)
        if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') c = '*';
    return out;
}

}  // namespace cavkit

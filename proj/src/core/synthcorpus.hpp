#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "data.hpp"

namespace cavkit {

// Two-domain planted corpus: a base domain and an emerging domain, each with
// explicit positives (carry a marker token), implicit positives (marker-free,
// topic distribution shifted by gamma) and negatives. Marker tokens are
// shared across domains, so a base-domain classifier recognizes emerging
// explicit abuse but not the implicit kind; emerging-domain negatives carry
// an occasional mildly-hostile base word (rude-but-not-hateful texts).
struct CorpusSpec {
    std::uint64_t seed = 2024;

    // vocabulary sizes; tokens are synthetic ("w017", "bh03", "nh12", "xm0")
    std::size_t background_words = 400;
    std::size_t topic_words_per_flavor = 25;  // hostile and neutral, per domain
    std::size_t marker_words = 5;

    double gamma = 0.9;          // implicit signal strength in (0,1]
    double label_noise = 0.05;   // flip rate, training-side non-marker docs only
    double negative_tinge = 0.95; // P(emerging negative carries mild-rude words)
    std::size_t tinge_tokens = 2;  // mild words per rude emerging negative
    std::size_t polite_tokens = 2; // neutral words per emerging implicit positive
    // P(base-domain negative is plain background chatter with no topic words);
    // grounds the background direction as negative evidence.
    double neg_topic_dropout = 0.5;
    // Positive prevalence of the raw random-text stream feeding the input
    // pool X and the non-coherent concept; random streams are not boosted
    // the way labeled datasets are.
    double random_positive_ratio = 0.01;

    double positive_ratio_base = 0.3;
    double positive_ratio_new = 0.25;
    double explicit_frac_base = 0.3;  // explicit share of positives
    double explicit_frac_new = 0.5;

    std::size_t base_train = 4000;
    std::size_t base_dev = 800;
    std::size_t base_test = 1000;
    std::size_t new_pool = 2000;
    std::size_t new_test = 1000;
    std::size_t input_pool = 2000;   // unlabeled inputs X for concept scoring
    std::size_t concept_size = 100;  // examples per emitted concept file

    std::size_t background_tokens_min = 5, background_tokens_max = 7;
    std::size_t topic_tokens_min = 5, topic_tokens_max = 7;
    // Curated concept examples are uniform and punchier than corpus docs;
    // the backdrop length sets where DoE perturbations start flipping signs.
    std::size_t concept_background_tokens = 7;
    std::size_t concept_topic_tokens = 6;

    void validate() const;
};

struct GeneratedCorpus {
    std::string dir;
    std::string base_train, base_dev, base_test;
    std::string new_pool, new_test;
    std::string inputs;
    std::string labelmap;
    // concept name -> file path: explicit, implicit, topic, random
    std::map<std::string, std::string> concepts;
};

// Writes the corpus under out_dir; byte-identical for identical (spec, seed).
GeneratedCorpus generate_corpus(const CorpusSpec& spec, const std::string& out_dir);

}  // namespace cavkit

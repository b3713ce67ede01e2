#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "data.hpp"

namespace cavkit {

// Hashed word n-gram spec. N-grams are the tokens of tokenize(text) joined
// by a single 0x20 byte; the bucket is fnv1a64(bytes) % buckets. This is a
// file-format-level contract (models are only portable if it never changes).
struct FeaturizerSpec {
    std::uint32_t ngram_min = 1;
    std::uint32_t ngram_max = 2;
    std::uint32_t buckets = 1u << 18;

    void validate() const;
};

struct SparseFeature {
    std::uint32_t bucket;
    float count;
};

// Sorted by bucket, duplicates merged; empty text gives an empty vector.
std::vector<SparseFeature> featurize(const std::string& text, const FeaturizerSpec& spec);

// m-dimensional representation of one utterance.
using Representation = std::vector<float>;

// Linear projection over hashed n-gram counts followed by L2 normalization.
// Desk-scale stand-in for a frozen transformer encoder; trained jointly with
// the classification head.
class EncoderModel {
public:
    EncoderModel() = default;
    EncoderModel(FeaturizerSpec spec, std::uint32_t dim, bool normalize, float init_scale,
                 std::uint64_t seed);

    const FeaturizerSpec& spec() const { return spec_; }
    std::uint32_t dim() const { return dim_; }
    bool normalized() const { return normalize_; }

    Representation encode(const std::string& text) const;
    Representation encode_features(const std::vector<SparseFeature>& features) const;

    // Raw parameter access for the trainer and the model file writer.
    float* row(std::uint32_t bucket) { return projection_.data() + std::size_t(bucket) * dim_; }
    const float* row(std::uint32_t bucket) const {
        return projection_.data() + std::size_t(bucket) * dim_;
    }
    std::vector<float>& parameters() { return projection_; }
    const std::vector<float>& parameters() const { return projection_; }

private:
    FeaturizerSpec spec_;
    std::uint32_t dim_ = 0;
    bool normalize_ = true;
    std::vector<float> projection_;  // buckets x dim, row-major
};

// id -> representation map loaded from an EMB v1 file; frozen inputs for
// head-only training and concept scoring.
class EmbeddingStore {
public:
    EmbeddingStore() = default;
    EmbeddingStore(std::uint32_t dim, std::vector<std::string> ids,
                   std::vector<float> vectors);

    std::uint32_t dim() const { return dim_; }
    std::size_t size() const { return ids_.size(); }
    const std::vector<std::string>& ids() const { return ids_; }
    const Representation& lookup(const std::string& id) const;

    // EMB v1: ASCII header `EMB v1 <count> <dim>\n`, then count rows of dim
    // little-endian float32; ids sit in `<path>.ids`, one per line.
    static EmbeddingStore import_file(const std::string& path);
    void export_file(const std::string& path) const;

private:
    std::uint32_t dim_ = 0;
    std::vector<std::string> ids_;
    std::vector<Representation> rows_;
    std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace cavkit

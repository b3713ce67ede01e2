#include "encoder.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "error.hpp"
#include "rng.hpp"
#include "text.hpp"

namespace cavkit {

void FeaturizerSpec::validate() const {
    if (ngram_min < 1 || ngram_max < ngram_min)
        throw ConfigError("featurizer n-gram range must satisfy 1 <= min <= max");
    if (buckets < (1u << 10)) throw ConfigError("featurizer needs at least 2^10 buckets");
}

std::vector<SparseFeature> featurize(const std::string& text, const FeaturizerSpec& spec) {
    std::vector<std::string> tokens = tokenize(text);
    std::vector<std::uint32_t> buckets;
    std::string gram;
    for (std::uint32_t n = spec.ngram_min; n <= spec.ngram_max; ++n) {
        if (tokens.size() < n) break;
        for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
            gram.clear();
            for (std::uint32_t k = 0; k < n; ++k) {
                if (k > 0) gram.push_back(' ');
                gram.append(tokens[i + k]);
            }
            buckets.push_back(static_cast<std::uint32_t>(fnv1a64(gram) % spec.buckets));
        }
    }
    std::sort(buckets.begin(), buckets.end());
    std::vector<SparseFeature> out;
    for (std::size_t i = 0; i < buckets.size();) {
        std::size_t j = i;
        while (j < buckets.size() && buckets[j] == buckets[i]) ++j;
        out.push_back({buckets[i], static_cast<float>(j - i)});
        i = j;
    }
    return out;
}

EncoderModel::EncoderModel(FeaturizerSpec spec, std::uint32_t dim, bool normalize,
                           float init_scale, std::uint64_t seed)
    : spec_(spec), dim_(dim), normalize_(normalize) {
    spec_.validate();
    if (dim_ < 8) throw ConfigError("representation dimension must be at least 8");
    projection_.resize(std::size_t(spec_.buckets) * dim_);
    Rng rng(seed);
    for (float& w : projection_)
        w = static_cast<float>(rng.next_symmetric(static_cast<double>(init_scale)));
}

Representation EncoderModel::encode(const std::string& text) const {
    return encode_features(featurize(text, spec_));
}

Representation EncoderModel::encode_features(const std::vector<SparseFeature>& features) const {
    std::vector<double> acc(dim_, 0.0);
    for (const SparseFeature& f : features) {
        const float* w = row(f.bucket);
        for (std::uint32_t j = 0; j < dim_; ++j) acc[j] += double(f.count) * double(w[j]);
    }
    double norm_sq = 0.0;
    for (double v : acc) norm_sq += v * v;
    Representation r(dim_);
    if (normalize_ && norm_sq > 0.0) {
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (std::uint32_t j = 0; j < dim_; ++j) r[j] = static_cast<float>(acc[j] * inv);
    } else {
        for (std::uint32_t j = 0; j < dim_; ++j) r[j] = static_cast<float>(acc[j]);
    }
    for (float v : r)
        if (!std::isfinite(v)) throw NumericError("non-finite representation");
    return r;
}

EmbeddingStore::EmbeddingStore(std::uint32_t dim, std::vector<std::string> ids,
                               std::vector<float> vectors)
    : dim_(dim), ids_(std::move(ids)) {
    if (vectors.size() != ids_.size() * std::size_t(dim_))
        throw DataError("embedding store size mismatch");
    rows_.resize(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        rows_[i].assign(vectors.begin() + static_cast<std::ptrdiff_t>(i * dim_),
                        vectors.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim_));
        if (!index_.emplace(ids_[i], i).second)
            throw DataError("duplicate id in embedding store: " + ids_[i]);
    }
}

const Representation& EmbeddingStore::lookup(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw DataError("id not present in embedding store: " + id);
    return rows_[it->second];
}

namespace {

// Parameters cross file boundaries as little-endian float32. The host is
// assumed little-endian (checked once at import).
void check_little_endian() {
    const std::uint32_t probe = 1;
    if (*reinterpret_cast<const unsigned char*>(&probe) != 1)
        throw NumericError("big-endian hosts are not supported by the binary formats");
}

}  // namespace

EmbeddingStore EmbeddingStore::import_file(const std::string& path) {
    check_little_endian();
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open embedding file: " + path);
    std::string header;
    if (!std::getline(f, header)) throw DataError(path + ": missing EMB header");
    std::istringstream hs(header);
    std::string magic, version;
    std::uint64_t count = 0;
    std::uint32_t dim = 0;
    if (!(hs >> magic >> version >> count >> dim) || magic != "EMB" || version != "v1")
        throw DataError(path + ": bad header, expected `EMB v1 <count> <dim>`");
    if (dim == 0) throw DataError(path + ": zero dimension");

    std::vector<float> values(count * std::size_t(dim));
    f.read(reinterpret_cast<char*>(values.data()),
           static_cast<std::streamsize>(values.size() * sizeof(float)));
    if (static_cast<std::size_t>(f.gcount()) != values.size() * sizeof(float))
        throw DataError(path + ": row count mismatch (header declares " + std::to_string(count) +
                        " rows)");
    char extra;
    if (f.read(&extra, 1))
        throw DataError(path + ": trailing bytes after declared rows");
    for (float v : values)
        if (!std::isfinite(v)) throw DataError(path + ": non-finite value");

    std::ifstream idf(path + ".ids", std::ios::binary);
    if (!idf) throw DataError("cannot open id sidecar: " + path + ".ids");
    std::vector<std::string> ids;
    std::string line;
    while (std::getline(idf, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) ids.push_back(line);
    }
    if (ids.size() != count)
        throw DataError(path + ".ids: " + std::to_string(ids.size()) + " ids for " +
                        std::to_string(count) + " rows");
    return EmbeddingStore(dim, std::move(ids), std::move(values));
}

void EmbeddingStore::export_file(const std::string& path) const {
    check_little_endian();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open for writing: " + path);
    f << "EMB v1 " << ids_.size() << " " << dim_ << "\n";
    for (const Representation& r : rows_)
        f.write(reinterpret_cast<const char*>(r.data()),
                static_cast<std::streamsize>(r.size() * sizeof(float)));
    if (!f) throw DataError("write failed: " + path);

    std::ofstream idf(path + ".ids", std::ios::binary);
    if (!idf) throw DataError("cannot open for writing: " + path + ".ids");
    for (const std::string& id : ids_) idf << id << "\n";
    if (!idf) throw DataError("write failed: " + path + ".ids");
}

}  // namespace cavkit

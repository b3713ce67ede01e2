#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "data.hpp"
#include "encoder.hpp"
#include "metrics.hpp"

namespace cavkit {

enum class Activation : std::uint8_t { tanh, identity };

Activation activation_from_string(const std::string& s);
const char* to_string(Activation a);

// One hidden layer mapping a representation to the positive-class logit.
// With the identity activation the logit is affine in r and the gradient is
// constant; concept scoring degenerates, which the tcav layer guards.
struct HeadModel {
    std::uint32_t input_dim = 0;
    std::uint32_t hidden_dim = 0;
    Activation activation = Activation::tanh;
    std::vector<float> w1;  // hidden_dim x input_dim, row-major
    std::vector<float> b1;  // hidden_dim
    std::vector<float> w2;  // hidden_dim
    float b2 = 0.0f;

    static HeadModel init(std::uint32_t input_dim, std::uint32_t hidden_dim,
                          Activation activation, std::uint64_t seed);

    double value(const Representation& r) const;
    // Double-precision input path; the finite-difference validator perturbs
    // representations below float resolution.
    double value_d(const std::vector<double>& r) const;
    // Analytic gradient of the logit w.r.t. the representation.
    std::vector<double> gradient(const Representation& r) const;
    bool is_linear() const { return activation == Activation::identity; }
};

struct TrainConfig {
    std::uint32_t epochs = 8;
    std::uint32_t batch_size = 32;
    double learning_rate = 0.5;
    std::uint64_t seed = 1;
    bool weighted = false;       // inverse-frequency example weighting
    double threshold = 0.5;      // decision threshold on the probability
};

struct Prediction {
    double logit = 0.0;
    double probability = 0.5;       // sigmoid(logit), clamped inside (0,1)
    bool predicted_positive = false;
    double confidence = 0.5;        // probability of the predicted class
};

// Encoder + head pair. The encoder is either the built-in trainable one or a
// frozen imported embedding store (head-only training, lookup by id).
class TrainedClassifier {
public:
    static TrainedClassifier train(const Dataset& train_set, const Dataset& dev_set,
                                   EncoderModel encoder, HeadModel head, TrainConfig config);
    static TrainedClassifier train_on_store(const Dataset& train_set, const Dataset& dev_set,
                                            std::shared_ptr<const EmbeddingStore> store,
                                            HeadModel head, TrainConfig config);

    bool store_backed() const { return store_ != nullptr; }
    std::uint32_t dim() const { return head_.input_dim; }
    const HeadModel& head() const { return head_; }
    const EncoderModel& encoder() const;
    const TrainConfig& config() const { return config_; }
    const MetricReport& dev_metrics() const { return dev_metrics_; }
    double threshold() const { return config_.threshold; }

    Representation represent(const Utterance& u) const;
    Representation represent_text(const std::string& text) const;

    Prediction predict_text(const std::string& text) const;
    Prediction predict(const Utterance& u) const;
    Prediction predict_representation(const Representation& r) const;

    double head_value(const Representation& r) const { return head_.value(r); }
    std::vector<double> head_gradient(const Representation& r) const { return head_.gradient(r); }

    // CLF v1 binary + `<path>.json` sidecar (training config, dev metrics).
    void save(const std::string& path) const;
    static TrainedClassifier load(const std::string& path,
                                  std::shared_ptr<const EmbeddingStore> store = nullptr);

private:
    TrainedClassifier() = default;
    static TrainedClassifier train_impl(const Dataset& train_set, const Dataset& dev_set,
                                        std::optional<EncoderModel> encoder,
                                        std::shared_ptr<const EmbeddingStore> store,
                                        HeadModel head, TrainConfig config);

    std::optional<EncoderModel> encoder_;
    std::shared_ptr<const EmbeddingStore> store_;
    HeadModel head_;
    TrainConfig config_;
    MetricReport dev_metrics_;
};

Prediction prediction_from_logit(double logit, double threshold);

}  // namespace cavkit

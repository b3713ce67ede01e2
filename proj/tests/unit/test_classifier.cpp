#include <doctest.h>

#include <cmath>
#include <cstring>

#include "core/augment.hpp"
#include "core/classifier.hpp"
#include "core/error.hpp"
#include "core/rng.hpp"
#include "test_util.hpp"

using namespace cavkit;
using testutil::TempDir;

namespace {

// Two token clusters plus shared filler; a "contains any cluster-A token"
// rule classifies perfectly, which the fixture asserts before any training.
Dataset separable_corpus(const std::string& name, Split split, std::size_t n,
                         std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Utterance> items;
    for (std::size_t i = 0; i < n; ++i) {
        const bool positive = rng.next_bernoulli(0.5);
        std::string text;
        const std::size_t k = 3 + rng.next_below(5);
        for (std::size_t t = 0; t < k; ++t) {
            const char* prefix = positive ? "posw" : "negw";
            text += prefix + std::to_string(rng.next_below(20)) + " ";
        }
        for (std::size_t t = 0; t < 4; ++t)
            text += "fill" + std::to_string(rng.next_below(50)) + " ";
        Utterance u;
        u.id = name + std::to_string(i);
        u.text = text;
        u.label = positive ? Label::positive : Label::negative;
        items.push_back(std::move(u));
    }
    return Dataset(name, split, std::move(items));
}

bool rule_positive(const Utterance& u) { return u.text.find("posw") != std::string::npos; }

ModelRecipe small_recipe() {
    ModelRecipe r;
    r.featurizer.buckets = 1u << 12;
    r.dim = 32;
    r.hidden_dim = 8;
    r.train.epochs = 6;
    r.train.batch_size = 16;
    r.train.learning_rate = 0.5;
    r.train.seed = 3;
    r.encoder_seed = 4;
    return r;
}

}  // namespace

TEST_SUITE("classifier") {

TEST_CASE("training separates the two-cluster corpus") {
    const Dataset train = separable_corpus("tr", Split::train, 400, 11);
    const Dataset dev = separable_corpus("dev", Split::dev, 200, 12);
    for (const auto& u : train.items()) CHECK(rule_positive(u) == u.is_positive());

    const TrainedClassifier clf = small_recipe().fit(train, dev);
    std::size_t correct = 0;
    for (const auto& u : dev.items())
        correct += clf.predict(u).predicted_positive == u.is_positive() ? 1 : 0;
    CHECK(double(correct) / double(dev.size()) >= 0.99);
    CHECK(clf.dev_metrics().auc >= 0.99);
}

TEST_CASE("held-out points match the generating rule") {
    const Dataset train = separable_corpus("tr", Split::train, 400, 21);
    const Dataset dev = separable_corpus("dev", Split::dev, 100, 22);
    const Dataset held = separable_corpus("held", Split::test, 100, 23);
    const TrainedClassifier clf = small_recipe().fit(train, dev);
    std::size_t agree = 0;
    for (const auto& u : held.items())
        agree += clf.predict(u).predicted_positive == rule_positive(u) ? 1 : 0;
    CHECK(agree >= 99);
}

TEST_CASE("label flips mirror the AUC") {
    Dataset train = separable_corpus("tr", Split::train, 300, 31);
    const Dataset dev = separable_corpus("dev", Split::dev, 150, 32);
    const TrainedClassifier clf = small_recipe().fit(train, dev);

    std::vector<Utterance> flipped_items;
    for (Utterance u : train.items()) {
        u.label = u.is_positive() ? Label::negative : Label::positive;
        flipped_items.push_back(std::move(u));
    }
    std::vector<Utterance> flipped_dev;
    for (Utterance u : dev.items()) {
        u.label = u.is_positive() ? Label::negative : Label::positive;
        flipped_dev.push_back(std::move(u));
    }
    const TrainedClassifier anti = small_recipe().fit(
        Dataset("anti", Split::train, std::move(flipped_items)),
        Dataset("antidev", Split::dev, std::move(flipped_dev)));
    // Evaluate both on the same (unflipped) dev labels.
    std::vector<double> p1, p2;
    std::vector<bool> y;
    for (const auto& u : dev.items()) {
        p1.push_back(clf.predict(u).probability);
        p2.push_back(anti.predict(u).probability);
        y.push_back(u.is_positive());
    }
    const double auc1 = evaluate(p1, y, 0.5).auc;
    const double auc2 = evaluate(p2, y, 0.5).auc;
    CHECK(auc1 + auc2 == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("fixed seeds reproduce identical parameters and model files") {
    const Dataset train = separable_corpus("tr", Split::train, 200, 41);
    const Dataset dev = separable_corpus("dev", Split::dev, 80, 42);
    const TrainedClassifier a = small_recipe().fit(train, dev);
    const TrainedClassifier b = small_recipe().fit(train, dev);
    REQUIRE(a.head().w1.size() == b.head().w1.size());
    CHECK(std::memcmp(a.head().w1.data(), b.head().w1.data(),
                      a.head().w1.size() * sizeof(float)) == 0);
    CHECK(std::memcmp(a.encoder().parameters().data(), b.encoder().parameters().data(),
                      a.encoder().parameters().size() * sizeof(float)) == 0);

    TempDir tmp("clf_det");
    a.save(tmp.file("a.clf"));
    b.save(tmp.file("b.clf"));
    CHECK(testutil::read_file(tmp.file("a.clf")) == testutil::read_file(tmp.file("b.clf")));
}

TEST_CASE("save/load round-trips predictions and dev metrics exactly") {
    const Dataset train = separable_corpus("tr", Split::train, 200, 51);
    const Dataset dev = separable_corpus("dev", Split::dev, 80, 52);
    const TrainedClassifier clf = small_recipe().fit(train, dev);
    TempDir tmp("clf_io");
    clf.save(tmp.file("m.clf"));
    const TrainedClassifier re = TrainedClassifier::load(tmp.file("m.clf"));
    for (const auto& u : dev.items()) {
        const Prediction p1 = clf.predict(u);
        const Prediction p2 = re.predict(u);
        CHECK(p1.logit == p2.logit);
        CHECK(p1.probability == p2.probability);
    }
    CHECK(clf.dev_metrics().auc == re.dev_metrics().auc);
    CHECK(clf.dev_metrics().f1 == re.dev_metrics().f1);
    // Re-saving writes identical bytes.
    re.save(tmp.file("m2.clf"));
    CHECK(testutil::read_file(tmp.file("m.clf")) == testutil::read_file(tmp.file("m2.clf")));
}

TEST_CASE("prediction basics") {
    const Prediction zero = prediction_from_logit(0.0, 0.5);
    CHECK(zero.probability == 0.5);
    CHECK(zero.confidence == 0.5);
    CHECK(zero.predicted_positive);

    CHECK(prediction_from_logit(2.0, 0.5).probability >
          prediction_from_logit(1.0, 0.5).probability);
    const Prediction pos = prediction_from_logit(3.0, 0.5);
    const Prediction neg = prediction_from_logit(-3.0, 0.5);
    CHECK(pos.probability == doctest::Approx(1.0 - neg.probability).epsilon(1e-12));
    CHECK(pos.confidence >= 0.5);
    CHECK(pos.confidence < 1.0);
    CHECK(prediction_from_logit(1e9, 0.5).confidence < 1.0);
}

TEST_CASE("linear heads have a constant gradient equal to the composed weights") {
    HeadModel h = HeadModel::init(8, 1, Activation::identity, 7);
    Rng rng(9);
    Representation r1(8), r2(8);
    for (int j = 0; j < 8; ++j) {
        r1[j] = float(rng.next_symmetric(1.0));
        r2[j] = float(rng.next_symmetric(1.0));
    }
    const auto g1 = h.gradient(r1);
    const auto g2 = h.gradient(r2);
    for (int j = 0; j < 8; ++j) {
        CHECK(g1[j] == g2[j]);
        CHECK(g1[j] == doctest::Approx(double(h.w2[0]) * double(h.w1[j])).epsilon(1e-12));
    }
}

TEST_CASE("tanh gradient at the origin composes the raw weights") {
    HeadModel h = HeadModel::init(6, 4, Activation::tanh, 13);
    // b1 = 0 after init, so tanh'(a)=1 at r=0 and the gradient is w1^T w2.
    const Representation zero(6, 0.0f);
    const auto g = h.gradient(zero);
    for (int j = 0; j < 6; ++j) {
        double expected = 0.0;
        for (int k = 0; k < 4; ++k) expected += double(h.w2[k]) * double(h.w1[k * 6 + j]);
        CHECK(g[j] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("analytic gradient matches forward differences") {
    const Dataset train = separable_corpus("tr", Split::train, 300, 61);
    const Dataset dev = separable_corpus("dev", Split::dev, 100, 62);
    const TrainedClassifier clf = small_recipe().fit(train, dev);
    Rng rng(99);
    const double eps = 1e-3;
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        std::vector<double> r(clf.dim());
        double norm = 0.0;
        for (auto& v : r) {
            v = rng.next_symmetric(1.0);
            norm += v * v;
        }
        norm = std::sqrt(norm);
        Representation rf(clf.dim());
        for (std::size_t j = 0; j < r.size(); ++j) rf[j] = float(r[j] / norm);

        std::vector<double> dir(clf.dim());
        double dnorm = 0.0;
        for (auto& v : dir) {
            v = rng.next_symmetric(1.0);
            dnorm += v * v;
        }
        dnorm = std::sqrt(dnorm);
        for (auto& v : dir) v /= dnorm;

        const auto g = clf.head_gradient(rf);
        double analytic = 0.0;
        std::vector<double> base(rf.begin(), rf.end()), shifted(rf.begin(), rf.end());
        for (std::size_t j = 0; j < dir.size(); ++j) {
            analytic += g[j] * dir[j];
            shifted[j] += eps * dir[j];
        }
        const double fd = (clf.head().value_d(shifted) - clf.head().value_d(base)) / eps;
        worst = std::max(worst, std::fabs(fd - analytic));
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("central differences stay within 1e-4 as well") {
    const Dataset train = separable_corpus("tr", Split::train, 300, 71);
    const Dataset dev = separable_corpus("dev", Split::dev, 100, 72);
    const TrainedClassifier clf = small_recipe().fit(train, dev);
    Rng rng(7);
    const double eps = 1e-3;
    for (int t = 0; t < 50; ++t) {
        Representation rf(clf.dim());
        for (auto& v : rf) v = float(rng.next_symmetric(0.5));
        std::vector<double> dir(clf.dim());
        double dnorm = 0.0;
        for (auto& v : dir) {
            v = rng.next_symmetric(1.0);
            dnorm += v * v;
        }
        dnorm = std::sqrt(dnorm);
        for (auto& v : dir) v /= dnorm;
        const auto g = clf.head_gradient(rf);
        double analytic = 0.0;
        std::vector<double> lo(rf.begin(), rf.end()), hi(rf.begin(), rf.end());
        for (std::size_t j = 0; j < dir.size(); ++j) {
            analytic += g[j] * dir[j];
            hi[j] += eps * dir[j];
            lo[j] -= eps * dir[j];
        }
        const double fd = (clf.head().value_d(hi) - clf.head().value_d(lo)) / (2.0 * eps);
        CHECK(std::fabs(fd - analytic) <= 1e-4);
    }
}

TEST_CASE("training rejects single-class data and bad configs") {
    std::vector<Utterance> items;
    for (int i = 0; i < 20; ++i)
        items.push_back({"p" + std::to_string(i), "tok a b", Label::positive,
                         Explicitness::unknown});
    const Dataset single("s", Split::train, std::move(items));
    const Dataset dev = separable_corpus("dev", Split::dev, 40, 82);
    CHECK_THROWS_AS((void)small_recipe().fit(single, dev), DataError);

    ModelRecipe bad = small_recipe();
    bad.train.learning_rate = 0.0;
    const Dataset train = separable_corpus("tr", Split::train, 60, 81);
    CHECK_THROWS_AS((void)bad.fit(train, dev), ConfigError);
}

TEST_CASE("divergence raises a numeric error that names the step") {
    ModelRecipe wild = small_recipe();
    wild.train.learning_rate = 1e300;
    wild.train.epochs = 3;
    const Dataset train = separable_corpus("tr", Split::train, 100, 91);
    const Dataset dev = separable_corpus("dev", Split::dev, 40, 92);
    CHECK_THROWS_WITH_AS((void)wild.fit(train, dev), doctest::Contains("step"), NumericError);
}

TEST_CASE("inverse-frequency weighting trains on imbalanced data") {
    Rng rng(123);
    std::vector<Utterance> items;
    for (int i = 0; i < 300; ++i) {
        const bool positive = i % 10 == 0;
        std::string text;
        for (int t = 0; t < 6; ++t)
            text += (positive ? "posw" : "negw") + std::to_string(rng.next_below(20)) + " ";
        items.push_back({"u" + std::to_string(i), text,
                         positive ? Label::positive : Label::negative,
                         Explicitness::unknown});
    }
    const Dataset train("imb", Split::train, std::move(items));
    const Dataset dev = separable_corpus("dev", Split::dev, 60, 93);
    ModelRecipe recipe = small_recipe();
    recipe.train.weighted = true;
    const TrainedClassifier clf = recipe.fit(train, dev);
    CHECK(std::isfinite(clf.dev_metrics().f1));
}

TEST_CASE("head-only training on an embedding store") {
    // Frozen representations: positives along +e0, negatives along -e0.
    Rng rng(5);
    std::vector<std::string> ids;
    std::vector<float> vecs;
    std::vector<Utterance> train_items, dev_items;
    const std::uint32_t dim = 8;
    for (int i = 0; i < 120; ++i) {
        const bool positive = i % 2 == 0;
        const std::string id = "s" + std::to_string(i);
        ids.push_back(id);
        for (std::uint32_t j = 0; j < dim; ++j) {
            float v = float(rng.next_symmetric(0.1));
            if (j == 0) v += positive ? 1.0f : -1.0f;
            vecs.push_back(v);
        }
        Utterance u{id, "text " + id, positive ? Label::positive : Label::negative,
                    Explicitness::unknown};
        (i < 80 ? train_items : dev_items).push_back(std::move(u));
    }
    auto store = std::make_shared<const EmbeddingStore>(dim, ids, vecs);
    const Dataset train("st", Split::train, std::move(train_items));
    const Dataset dev("sd", Split::dev, std::move(dev_items));
    TrainConfig tc;
    tc.epochs = 20;
    tc.learning_rate = 0.5;
    tc.seed = 2;
    HeadModel head = HeadModel::init(dim, 4, Activation::tanh, tc.seed);
    const TrainedClassifier clf =
        TrainedClassifier::train_on_store(train, dev, store, std::move(head), tc);
    CHECK(clf.dev_metrics().auc >= 0.99);
    CHECK(clf.store_backed());
    CHECK_THROWS_AS((void)clf.predict_text("raw text"), ConfigError);

    // Round trip: store-backed model files reload against the same store.
    TempDir tmp("store_clf");
    clf.save(tmp.file("m.clf"));
    const TrainedClassifier re = TrainedClassifier::load(tmp.file("m.clf"), store);
    CHECK(re.predict(dev[0]).logit == clf.predict(dev[0]).logit);
    CHECK_THROWS_AS((void)TrainedClassifier::load(tmp.file("m.clf")), ConfigError);
}

}  // TEST_SUITE

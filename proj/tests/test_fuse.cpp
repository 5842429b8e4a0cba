#include <doctest.h>

#include <cmath>
#include <numeric>

#include "raqsim/fuse.hpp"
#include "raqsim/rng.hpp"

using namespace raqsim;

namespace {

Feature random_feature(int m, int d, std::uint64_t seed) {
    auto rng = make_rng({seed});
    Feature f(m, d);
    for (auto& v : f.values) v = uniform_range(rng, -3.0, 3.0);
    return f;
}

Feature scalar_feature(double v) {
    Feature f(1, 1);
    f.values[0] = v;
    return f;
}

}  // namespace

TEST_CASE("fusing a single feature is the identity") {
    const Feature a = random_feature(3, 2, 4001);
    const auto fused = max_pool_fuse({a});
    REQUIRE(fused.has_value());
    CHECK(fused->values == a.values);
}

TEST_CASE("fusion takes the element-wise maximum") {
    Feature a(1, 2), b(1, 2);
    a.values = {1.0, 5.0};
    b.values = {3.0, 2.0};
    const auto fused = max_pool_fuse({a, b});
    REQUIRE(fused.has_value());
    CHECK(fused->values == std::vector<double>{3.0, 5.0});
}

TEST_CASE("fusion is commutative, associative and idempotent") {
    const Feature a = random_feature(4, 3, 4002);
    const Feature b = random_feature(4, 3, 4003);
    const Feature c = random_feature(4, 3, 4004);

    CHECK(max_pool_fuse({a, b})->values == max_pool_fuse({b, a})->values);
    CHECK(max_pool_fuse({a, a})->values == a.values);
    CHECK(max_pool_fuse({*max_pool_fuse({a, b}), c})->values ==
          max_pool_fuse({a, b, c})->values);
}

TEST_CASE("fusing nothing signals no observation") {
    CHECK(!max_pool_fuse({}).has_value());
}

TEST_CASE("fusion rejects mismatched shapes") {
    CHECK_THROWS_AS(max_pool_fuse({random_feature(2, 2, 1), random_feature(2, 3, 2)}),
                    std::invalid_argument);
}

TEST_CASE("raising any input element never lowers the fused output") {
    auto rng = make_rng({4005});
    for (int round = 0; round < 50; ++round) {
        const Feature a = random_feature(3, 3, 4100 + round);
        const Feature b = random_feature(3, 3, 4200 + round);
        Feature raised = a;
        const int idx = uniform_int(rng, static_cast<int>(raised.values.size()));
        raised.values[idx] += uniform_range(rng, 0.0, 2.0);

        const auto before = max_pool_fuse({a, b});
        const auto after = max_pool_fuse({raised, b});
        for (size_t i = 0; i < before->values.size(); ++i)
            CHECK(after->values[i] >= before->values[i]);
    }
}

TEST_CASE("adding a view can only raise fused elements") {
    const Feature a = random_feature(3, 3, 4006);
    const Feature b = random_feature(3, 3, 4007);
    const Feature c = random_feature(3, 3, 4008);
    const auto two = max_pool_fuse({a, b});
    const auto three = max_pool_fuse({a, b, c});
    for (size_t i = 0; i < two->values.size(); ++i) CHECK(three->values[i] >= two->values[i]);
}

TEST_CASE("fit_centroids averages per class and validates coverage") {
    const Feature a = scalar_feature(2.0);
    const Feature b = scalar_feature(-2.0);
    const ClassModel one_each = fit_centroids({a, b}, {0, 1}, 2, 1.0);
    CHECK(one_each.centroids[0].values[0] == 2.0);
    CHECK(one_each.centroids[1].values[0] == -2.0);

    const ClassModel dup = fit_centroids({a, b, a, b}, {0, 1, 0, 1}, 2, 1.0);
    CHECK(dup.centroids[0].values[0] == one_each.centroids[0].values[0]);
    CHECK(dup.centroids[1].values[0] == one_each.centroids[1].values[0]);

    const ClassModel sym = fit_centroids({a, b}, {0, 0}, 1, 1.0);
    CHECK(sym.centroids[0].values[0] == 0.0);

    CHECK_THROWS_WITH_AS(static_cast<void>(fit_centroids({a}, {0}, 2, 1.0)),
                         "no training example for class 1", std::invalid_argument);
}

TEST_CASE("classify puts the highest probability on the matching centroid") {
    const ClassModel model =
        fit_centroids({scalar_feature(0.0), scalar_feature(1.0), scalar_feature(4.0)}, {0, 1, 2},
                      3, 1.0);
    const Prediction pred = classify(scalar_feature(1.0), model);
    CHECK(pred.label == 1);
    for (int c = 0; c < 3; ++c)
        if (c != 1) CHECK(pred.probabilities[1] > pred.probabilities[c]);
}

TEST_CASE("classify is uniform and ties to class 0 when equidistant") {
    const ClassModel model =
        fit_centroids({scalar_feature(-1.0), scalar_feature(1.0)}, {0, 1}, 2, 1.0);
    const Prediction pred = classify(scalar_feature(0.0), model);
    CHECK(pred.label == 0);
    CHECK(pred.probabilities[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pred.probabilities[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("classify evaluates the stated softmax formula") {
    const ClassModel model =
        fit_centroids({scalar_feature(0.0), scalar_feature(1.0)}, {0, 1}, 2, 1.0);
    const Prediction pred = classify(scalar_feature(0.9), model);
    // direct evaluation: p ~ (exp(-0.81), exp(-0.01))
    const double w0 = std::exp(-0.81), w1 = std::exp(-0.01);
    CHECK(pred.label == 1);
    CHECK(pred.probabilities[0] == doctest::Approx(w0 / (w0 + w1)).epsilon(1e-12));
    CHECK(pred.probabilities[1] == doctest::Approx(w1 / (w0 + w1)).epsilon(1e-12));
}

TEST_CASE("probabilities form a simplex and follow class relabeling") {
    auto rng = make_rng({4009});
    for (int round = 0; round < 20; ++round) {
        std::vector<Feature> train;
        std::vector<int> labels;
        for (int c = 0; c < 4; ++c) {
            train.push_back(random_feature(2, 3, 4300 + round * 4 + c));
            labels.push_back(c);
        }
        const ClassModel model = fit_centroids(train, labels, 4, 0.7);
        const Feature z = random_feature(2, 3, 4400 + round);
        const Prediction pred = classify(z, model);

        const double sum =
            std::accumulate(pred.probabilities.begin(), pred.probabilities.end(), 0.0);
        CHECK(std::fabs(sum - 1.0) <= 1e-9);
        for (double p : pred.probabilities) CHECK(p >= 0.0);

        // reverse the class order; probabilities must follow the permutation
        std::vector<Feature> rev_train(train.rbegin(), train.rend());
        const ClassModel rev_model = fit_centroids(rev_train, labels, 4, 0.7);
        const Prediction rev_pred = classify(z, rev_model);
        for (int c = 0; c < 4; ++c)
            CHECK(rev_pred.probabilities[3 - c] ==
                  doctest::Approx(pred.probabilities[c]).epsilon(1e-12));
        (void)rng;
    }
}

TEST_CASE("class model text format round-trips") {
    std::vector<Feature> train;
    std::vector<int> labels;
    for (int c = 0; c < 3; ++c) {
        train.push_back(random_feature(2, 2, 4500 + c));
        labels.push_back(c);
    }
    const ClassModel model = fit_centroids(train, labels, 3, 0.35);
    const ClassModel back = class_model_from_text(class_model_to_text(model));
    CHECK(back.num_classes == model.num_classes);
    CHECK(back.temperature == model.temperature);
    for (int c = 0; c < 3; ++c) CHECK(back.centroids[c].values == model.centroids[c].values);

    CHECK_THROWS(class_model_from_text("CLASSMODEL v1 C=2 M=1 D=1 tau=1\n0\n"));
}

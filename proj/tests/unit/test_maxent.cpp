#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numeric>

#include "cframe/errors.hpp"
#include "cframe/maxent.hpp"
#include "cframe/rng.hpp"
#include "oracles.hpp"

using namespace cframe;

namespace {

// Eight verbs in 2-d, one class per angular sector.
EmbeddingTable separable_table() {
    EmbeddingTable t(2);
    t.add("n1", std::vector<double>{-2.0, 0.1});
    t.add("n2", std::vector<double>{-1.5, -0.2});
    t.add("n3", std::vector<double>{-1.8, 0.3});
    t.add("z1", std::vector<double>{0.1, 2.0});
    t.add("z2", std::vector<double>{-0.2, 1.6});
    t.add("p1", std::vector<double>{2.0, 0.0});
    t.add("p2", std::vector<double>{1.7, -0.3});
    t.add("p3", std::vector<double>{1.9, 0.2});
    return t;
}

std::vector<LabeledVerb> separable_data() {
    return {{"n1", Polarity::Negative}, {"n2", Polarity::Negative}, {"n3", Polarity::Negative},
            {"z1", Polarity::Neutral},  {"z2", Polarity::Neutral},  {"p1", Polarity::Positive},
            {"p2", Polarity::Positive}, {"p3", Polarity::Positive}};
}

double sum(const ClassProbs& p) { return p[0] + p[1] + p[2]; }

}  // namespace

TEST_CASE("featurize appends the bias") {
    EmbeddingTable t(3);
    t.add("v", std::vector<double>{0.1, 0.2, 0.3});
    t.add("z", std::vector<double>{0, 0, 0});
    CHECK(featurize("v", t) == std::vector<double>{0.1, 0.2, 0.3, 1.0});
    CHECK(featurize("z", t) == std::vector<double>{0, 0, 0, 1.0});
    CHECK(featurize("v", t).size() == t.dim() + 1);
    CHECK_THROWS_AS(featurize("missing", t), LookupError);
}

TEST_CASE("predict_probs hand values") {
    const MaxEntModel zero(AspectId::P_wt, 2);
    const std::vector<double> f = {0.4, -1.0, 1.0};
    const auto u = predict_probs(zero, f);
    for (double p : u) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    // bias weights (0, 0, ln 2) with zero features give logits (0, 0, ln 2)
    std::vector<double> w(9, 0.0);
    w[8] = std::log(2.0);
    const MaxEntModel m(AspectId::P_wt, 2, w);
    const auto p = predict_probs(m, std::vector<double>{0.0, 0.0, 1.0});
    CHECK(std::abs(p[0] - 0.25) < 1e-15);
    CHECK(std::abs(p[1] - 0.25) < 1e-15);
    CHECK(std::abs(p[2] - 0.5) < 1e-15);
}

TEST_CASE("predict_probs shift invariance and shape error") {
    Rng rng(3);
    std::vector<double> w(12);
    for (double& x : w) x = rng.uniform(-2, 2);
    std::vector<double> shifted = w;
    for (std::size_t c = 0; c < 3; ++c) shifted[c * 4 + 3] += 7.5;  // same constant on every logit
    const std::vector<double> f = {0.3, -0.7, 1.1, 1.0};
    const auto a = predict_probs(MaxEntModel(AspectId::E_t, 3, w), f);
    const auto b = predict_probs(MaxEntModel(AspectId::E_t, 3, shifted), f);
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-12);
    CHECK_THROWS_AS(predict_probs(MaxEntModel(AspectId::E_t, 3, w), std::vector<double>{1.0, 1.0}), ShapeError);
}

TEST_CASE("predict_probs is a distribution for random inputs") {
    Rng rng(5);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> w(3 * 6), f(6);
        const double scale = trial < 250 ? 1.0 : 200.0;
        for (double& x : w) x = rng.uniform(-scale, scale);
        for (double& x : f) x = rng.uniform(-3, 3);
        f.back() = 1.0;
        const auto p = predict_probs(MaxEntModel(AspectId::S_a, 5, w), f);
        for (double x : p) CHECK(x >= 0.0);
        CHECK(std::abs(sum(p) - 1.0) < 1e-9);
    }
}

TEST_CASE("argmax and tie rule") {
    CHECK(argmax_polarity({0.2, 0.3, 0.5}) == Polarity::Positive);
    CHECK(argmax_polarity({1.0 / 3, 1.0 / 3, 1.0 / 3}) == Polarity::Negative);
    CHECK(argmax_polarity({0.1, 0.45, 0.45}) == Polarity::Neutral);
}

TEST_CASE("class weights") {
    const std::vector<Polarity> labels = {Polarity::Positive, Polarity::Positive, Polarity::Positive,
                                          Polarity::Neutral};
    TrainConfig cfg;
    const auto inv = class_weights(labels, cfg);
    CHECK(inv[0] == 0.0);
    CHECK(inv[1] == doctest::Approx(4.0 / 3.0));
    CHECK(inv[2] == doctest::Approx(4.0 / 9.0));
    cfg.class_weight_mode = ClassWeightMode::Uniform;
    CHECK(class_weights(labels, cfg) == ClassProbs{1.0, 1.0, 1.0});
    cfg.class_weight_mode = ClassWeightMode::GridTuned;
    cfg.class_weight_multipliers = {2.0, 0.5, 2.0};
    const auto grid = class_weights(labels, cfg);
    CHECK(grid[1] == doctest::Approx(2.0 / 3.0));
    CHECK(grid[2] == doctest::Approx(8.0 / 9.0));
}

TEST_CASE("separable toy set is fit exactly") {
    const auto t = separable_table();
    const auto data = separable_data();
    TrainConfig cfg;
    cfg.l2_strength = 0.01;
    TrainTrace trace;
    const auto m = train_aspect(data, AspectId::P_at, t, cfg, &trace);
    CHECK(trace.converged);
    for (const auto& d : data) CHECK(predict_label(m, d.verb, t) == d.label);
    for (std::size_t i = 1; i < trace.losses.size(); ++i) CHECK(trace.losses[i] <= trace.losses[i - 1]);
}

TEST_CASE("gradient descent variant also fits the toy set") {
    const auto t = separable_table();
    TrainConfig cfg;
    cfg.l2_strength = 0.01;
    cfg.optimizer = OptimizerKind::GradientDescent;
    cfg.max_iters = 20000;
    cfg.convergence_tol = 1e-4;
    TrainTrace trace;
    const auto m = train_aspect(separable_data(), AspectId::P_at, t, cfg, &trace);
    for (const auto& d : separable_data()) CHECK(predict_label(m, d.verb, t) == d.label);
    for (std::size_t i = 1; i < trace.losses.size(); ++i) CHECK(trace.losses[i] <= trace.losses[i - 1]);
}

TEST_CASE("loss gradient matches central differences") {
    Rng rng(17);
    for (int point = 0; point < 20; ++point) {
        const std::size_t n = 12, dim = 4;
        std::vector<std::vector<double>> features(n, std::vector<double>(dim + 1, 1.0));
        std::vector<Polarity> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < dim; ++k) features[i][k] = rng.uniform(-2, 2);
            labels[i] = polarity_at(rng.below(3));
        }
        const ClassProbs weights = {rng.uniform(0.2, 3), rng.uniform(0.2, 3), rng.uniform(0.2, 3)};
        const MaxEntObjective obj(features, labels, weights, rng.uniform(0.0, 2.0));
        std::vector<double> w(obj.num_params());
        for (double& x : w) x = rng.uniform(-1.5, 1.5);
        std::vector<double> grad(w.size()), scratch(w.size());
        obj(w, grad);
        const auto numeric = oracle::numeric_gradient(
            [&](std::span<const double> x) { return obj(x, scratch); }, w, 1e-5);
        CHECK(oracle::max_relative_error(grad, numeric) < 1e-4);
    }
}

TEST_CASE("bias column is not penalized") {
    const std::vector<std::vector<double>> features = {{0.0, 1.0}};
    const MaxEntObjective obj(features, {Polarity::Positive}, {1, 1, 1}, 10.0);
    std::vector<double> g(6);
    const std::vector<double> bias_only = {0, 3, 0, 0, 0, 0};
    const std::vector<double> zero(6, 0.0);
    // With a zero feature, only the bias moves the logits; penalty must not appear.
    const double with_bias = obj(bias_only, g);
    const double expected = -std::log(std::exp(0.0) / (std::exp(3.0) + 2.0));
    CHECK(with_bias == doctest::Approx(expected).epsilon(1e-12));
    const std::vector<double> feature_only = {2, 0, 0, 0, 0, 0};
    CHECK(obj(feature_only, g) == doctest::Approx(obj(zero, g) + 0.5 * 10.0 * 4.0).epsilon(1e-12));
}

TEST_CASE("strong L2 drives predictions to uniform") {
    const auto t = separable_table();
    TrainConfig cfg;
    cfg.l2_strength = 1e9;
    const auto m = train_aspect(separable_data(), AspectId::P_at, t, cfg);
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs(m.row(polarity_at(c))[k]) < 1e-6);
    for (const auto& d : separable_data()) {
        const auto p = predict_probs(m, featurize(d.verb, t));
        for (double x : p) CHECK(std::abs(x - 1.0 / 3.0) < 1e-5);
    }
}

TEST_CASE("equal class weights reproduce unweighted training exactly") {
    // Balanced data: inverse frequency gives weight exactly 1 for each class.
    EmbeddingTable t(2);
    std::vector<LabeledVerb> data;
    Rng rng(23);
    for (int i = 0; i < 9; ++i) {
        const std::string v = "v" + std::to_string(i);
        t.add(v, std::vector<double>{rng.uniform(-1, 1), rng.uniform(-1, 1)});
        data.push_back({v, polarity_at(static_cast<std::size_t>(i % 3))});
    }
    TrainConfig uniform;
    uniform.class_weight_mode = ClassWeightMode::Uniform;
    TrainConfig inverse;
    TrainTrace a, b;
    const auto ma = train_aspect(data, AspectId::E_a, t, uniform, &a);
    const auto mb = train_aspect(data, AspectId::E_a, t, inverse, &b);
    CHECK(b.class_weights == ClassProbs{1.0, 1.0, 1.0});
    CHECK(a.losses == b.losses);
    CHECK(std::equal(ma.weights().begin(), ma.weights().end(), mb.weights().begin()));
}

TEST_CASE("absent class still has a row and can be predicted by softmax") {
    const auto t = separable_table();
    std::vector<LabeledVerb> data = {{"n1", Polarity::Negative}, {"p1", Polarity::Positive}};
    TrainTrace trace;
    const auto m = train_aspect(data, AspectId::V_t, t, {}, &trace);
    CHECK(trace.class_weights[1] == 0.0);
    CHECK(m.weights().size() == 9);
    const auto p = predict_probs(m, featurize("z1", t));
    CHECK(std::abs(sum(p) - 1.0) < 1e-12);
    CHECK(p[1] > 0.0);
}

TEST_CASE("training errors") {
    const auto t = separable_table();
    CHECK_THROWS_AS(train_aspect({}, AspectId::P_wt, t, {}), InputError);
    TrainConfig bad;
    bad.max_iters = 0;
    CHECK_THROWS_AS(train_aspect(separable_data(), AspectId::P_wt, t, bad), InputError);
    const std::vector<LabeledVerb> oov = {{"nope", Polarity::Positive}};
    CHECK_THROWS_AS(train_aspect(oov, AspectId::P_wt, t, {}), LookupError);
}

TEST_CASE("training is deterministic") {
    const auto t = separable_table();
    const auto a = train_aspect(separable_data(), AspectId::P_wt, t, {});
    const auto b = train_aspect(separable_data(), AspectId::P_wt, t, {});
    CHECK(std::equal(a.weights().begin(), a.weights().end(), b.weights().begin()));
}

TEST_CASE("grid tuning returns a grid point and is deterministic") {
    const auto t = separable_table();
    const auto data = separable_data();
    TrainConfig cfg;
    cfg.class_weight_mode = ClassWeightMode::GridTuned;
    const auto m1 = tune_class_multipliers(data, data, AspectId::P_wt, t, cfg);
    const auto m2 = tune_class_multipliers(data, data, AspectId::P_wt, t, cfg);
    CHECK(m1 == m2);
    for (double x : m1) CHECK((x == 0.5 || x == 1.0 || x == 2.0));
    // Every grid point fits this set perfectly, so the first candidate wins.
    CHECK(m1 == ClassProbs{1.0, 1.0, 1.0});
}

TEST_CASE("model JSON and file round trip") {
    Rng rng(2);
    std::vector<double> w(3 * 4);
    for (double& x : w) x = rng.uniform(-1, 1);
    const MaxEntModel m(AspectId::S_t, 3, w);
    const auto back = model_from_json(model_to_json(m));
    CHECK(back.aspect() == AspectId::S_t);
    CHECK(back.dim() == 3);
    CHECK(std::equal(w.begin(), w.end(), back.weights().begin()));

    const auto dir = std::filesystem::temp_directory_path() / "cframe_test_models";
    std::filesystem::remove_all(dir);
    AspectModels models;
    for (AspectId a : kAspects) models[index_of(a)] = MaxEntModel(a, 3, w);
    save_aspect_models(models, dir, "cframe 0.1.0 test\nflag --x 1");
    const auto loaded = load_aspect_models(dir);
    for (AspectId a : kAspects) {
        CHECK(loaded[index_of(a)].aspect() == a);
        CHECK(std::equal(w.begin(), w.end(), loaded[index_of(a)].weights().begin()));
    }
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(model_from_json("{\"aspect\": \"P_wt\"}"), FormatError);
}

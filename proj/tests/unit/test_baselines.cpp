#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cframe/baselines.hpp"
#include "cframe/errors.hpp"
#include "cframe/rng.hpp"
#include "oracles.hpp"

using namespace cframe;

namespace {

ConnotationFrame uniform_frame(std::string verb, Polarity p) {
    ConnotationFrame f;
    f.verb = std::move(verb);
    for (AspectId a : kAspects) f.labels[a] = p;
    return f;
}

struct Fixture {
    EmbeddingTable table{2};
    std::vector<ConnotationFrame> train;
};

// Five training verbs around the unit circle plus a few queries.
Fixture five_verbs() {
    Fixture fx;
    const std::tuple<const char*, double, double, Polarity, Polarity> rows[] = {
        {"t0", 1.0, 0.0, Polarity::Positive, Polarity::Negative},
        {"t1", 0.9, 0.5, Polarity::Negative, Polarity::Negative},
        {"t2", 0.2, 1.0, Polarity::Neutral, Polarity::Positive},
        {"t3", -0.7, 0.6, Polarity::Positive, Polarity::Neutral},
        {"t4", -1.0, -0.3, Polarity::Negative, Polarity::Positive},
    };
    for (const auto& [w, x, y, pat, et] : rows) {
        fx.table.add(w, std::vector<double>{x, y});
        auto f = uniform_frame(w, Polarity::Neutral);
        f.labels[AspectId::P_at] = pat;
        f.labels[AspectId::E_t] = et;
        fx.train.push_back(f);
    }
    fx.table.add("q1", std::vector<double>{1.0, 0.2});
    fx.table.add("q2", std::vector<double>{-0.5, 1.0});
    fx.table.add("q3", std::vector<double>{0.0, -1.0});
    return fx;
}

// Brute force: sort every training verb by hand-computed cosine, take 3, vote.
Polarity hand_knn(const Fixture& fx, const std::string& query, AspectId a) {
    const auto q = fx.table.at(query);
    std::vector<std::pair<double, const ConnotationFrame*>> all;
    for (const auto& f : fx.train) {
        const auto v = fx.table.at(f.verb);
        const double c = (q[0] * v[0] + q[1] * v[1]) /
                         (std::hypot(q[0], q[1]) * std::hypot(v[0], v[1]));
        all.emplace_back(c, &f);
    }
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
        return x.first != y.first ? x.first > y.first : x.second->verb < y.second->verb;
    });
    int votes[3] = {0, 0, 0};
    for (int i = 0; i < 3; ++i) ++votes[index_of(all[i].second->label(a))];
    const int top = *std::max_element(votes, votes + 3);
    const Polarity nearest = all[0].second->label(a);
    if (votes[index_of(nearest)] == top) return nearest;
    for (Polarity p : kPolarities)
        if (votes[index_of(p)] == top) return p;
    return Polarity::Neutral;
}

}  // namespace

TEST_CASE("majority follows a 90% skew") {
    std::vector<ConnotationFrame> train;
    for (int i = 0; i < 1000; ++i) {
        auto f = uniform_frame("v" + std::to_string(i), Polarity::Neutral);
        f.labels[AspectId::V_a] = i < 903 ? Polarity::Positive : (i < 950 ? Polarity::Neutral : Polarity::Negative);
        train.push_back(f);
    }
    const auto m = majority_train(train);
    CHECK(m.labels[index_of(AspectId::V_a)] == Polarity::Positive);
    CHECK(m.predict("a").label_array() == m.predict("b").label_array());
}

TEST_CASE("majority tie goes to the lowest polarity") {
    std::vector<ConnotationFrame> train;
    for (int i = 0; i < 5; ++i) train.push_back(uniform_frame("p" + std::to_string(i), Polarity::Positive));
    for (int i = 0; i < 5; ++i) train.push_back(uniform_frame("n" + std::to_string(i), Polarity::Negative));
    for (int i = 0; i < 2; ++i) train.push_back(uniform_frame("z" + std::to_string(i), Polarity::Neutral));
    const auto m = majority_train(train);
    for (AspectId a : kAspects) CHECK(m.labels[index_of(a)] == Polarity::Negative);
}

TEST_CASE("majority with one example copies it") {
    auto f = uniform_frame("only", Polarity::Neutral);
    f.labels[AspectId::S_t] = Polarity::Positive;
    const auto m = majority_train(std::vector<ConnotationFrame>{f});
    CHECK(m.predict("x").label_array() == f.label_array());
    CHECK_THROWS_AS(majority_train({}), InputError);
}

TEST_CASE("knn unanimous vote") {
    EmbeddingTable t(2);
    t.add("q", std::vector<double>{1, 0});
    std::vector<ConnotationFrame> train;
    for (int i = 0; i < 3; ++i) {
        const std::string w = "n" + std::to_string(i);
        t.add(w, std::vector<double>{1.0, 0.1 * i});
        auto f = uniform_frame(w, Polarity::Neutral);
        f.labels[AspectId::P_at] = Polarity::Positive;
        train.push_back(f);
    }
    t.add("far", std::vector<double>{-1, 0});
    train.push_back(uniform_frame("far", Polarity::Negative));
    CHECK(knn_predict("q", train, t).label(AspectId::P_at) == Polarity::Positive);
}

TEST_CASE("knn three-way tie goes to the nearest neighbor") {
    EmbeddingTable t(2);
    t.add("q", std::vector<double>{1, 0});
    t.add("a", std::vector<double>{1, 0.1});
    t.add("b", std::vector<double>{1, 0.5});
    t.add("c", std::vector<double>{1, 0.9});
    const std::vector<ConnotationFrame> train = {uniform_frame("b", Polarity::Positive),
                                                 uniform_frame("a", Polarity::Negative),
                                                 uniform_frame("c", Polarity::Neutral)};
    CHECK(knn_predict("q", train, t).label(AspectId::P_at) == Polarity::Negative);
}

TEST_CASE("knn matches brute-force neighbor enumeration") {
    const auto fx = five_verbs();
    for (const char* q : {"q1", "q2", "q3", "t0", "t3"}) {
        // Training verbs are queried too; they must not count themselves.
        std::vector<ConnotationFrame> train;
        for (const auto& f : fx.train)
            if (f.verb != q) train.push_back(f);
        Fixture reduced{fx.table, train};
        const auto pred = knn_predict(q, fx.train, fx.table);
        for (AspectId a : {AspectId::P_at, AspectId::E_t, AspectId::S_a})
            CHECK(pred.label(a) == hand_knn(reduced, q, a));
    }
}

TEST_CASE("knn is invariant to scaling all embeddings") {
    const auto fx = five_verbs();
    EmbeddingTable scaled(2);
    for (const auto& w : fx.table.words()) {
        const auto v = fx.table.at(w);
        scaled.add(w, std::vector<double>{v[0] * 37.5, v[1] * 37.5});
    }
    for (const char* q : {"q1", "q2", "q3"})
        CHECK(knn_predict(q, fx.train, fx.table).label_array() == knn_predict(q, fx.train, scaled).label_array());
}

TEST_CASE("knn errors") {
    const auto fx = five_verbs();
    CHECK_THROWS_AS(knn_predict("absent", fx.train, fx.table), LookupError);
    const std::vector<ConnotationFrame> two(fx.train.begin(), fx.train.begin() + 2);
    CHECK_THROWS_AS(knn_predict("q1", two, fx.table), InputError);
}

TEST_CASE("graph prop: seeded chain spreads the seed label") {
    const std::vector<std::string> verbs = {"a", "b", "c"};
    const std::vector<SimilarityEdge> edges = {{0, 1, 0.9}, {1, 2, 0.9}};
    GraphPropConfig cfg;
    cfg.potential_scale = 4.0;
    const std::map<std::string, Polarity> seeds = {{"a", Polarity::Positive}};
    const auto r = graph_prop(seeds, verbs, edges, cfg);
    for (const auto& v : verbs) CHECK(r.labels.at(v) == Polarity::Positive);
    CHECK(r.converged);
    CHECK(r.unreachable == 0);

    // Same chain built by hand and enumerated over 27 states.
    FactorGraph g;
    for (const auto& v : verbs) g.add_variable(v);
    g.add_factor("seed", {"a"}, {0.0, 0.0, 5.0});
    std::vector<double> agree(9, 0.0);
    for (int k = 0; k < 3; ++k) agree[k * 3 + k] = 4.0 * 0.9;
    g.add_factor("ab", {"a", "b"}, agree);
    g.add_factor("bc", {"b", "c"}, agree);
    const auto truth = oracle::brute_force_marginals(g);
    for (std::size_t v = 0; v < 3; ++v) {
        const std::size_t best = std::max_element(truth[v].begin(), truth[v].end()) - truth[v].begin();
        CHECK(r.labels.at(verbs[v]) == polarity_at(best));
    }
}

TEST_CASE("graph prop: seeds keep their labels under defaults") {
    Rng rng(13);
    EmbeddingTable t(4);
    std::vector<std::string> verbs;
    std::map<std::string, Polarity> seeds;
    for (int i = 0; i < 40; ++i) {
        const std::string w = "v" + std::to_string(i);
        std::vector<double> v(4);
        for (double& x : v) x = rng.uniform(-1, 1);
        t.add(w, v);
        verbs.push_back(w);
        if (i % 4 == 0) seeds[w] = polarity_at(rng.below(3));
    }
    const auto r = graph_prop(AspectId::E_t, seeds, verbs, t, {});
    for (const auto& [w, p] : seeds) CHECK(r.labels.at(w) == p);
    CHECK(r.labels.size() == verbs.size());
}

TEST_CASE("graph prop: isolated unseeded verb is Neutral and counted") {
    const std::vector<std::string> verbs = {"a", "b", "lonely"};
    const std::vector<SimilarityEdge> edges = {{0, 1, 0.8}};
    const std::map<std::string, Polarity> seeds = {{"a", Polarity::Negative}};
    const auto r = graph_prop(seeds, verbs, edges, {});
    CHECK(r.labels.at("lonely") == Polarity::Neutral);
    CHECK(r.unreachable == 1);
    CHECK(r.labels.at("a") == Polarity::Negative);
}

TEST_CASE("graph prop without edges: seeds keep labels, others Neutral") {
    const auto fx = five_verbs();
    GraphPropConfig cfg;
    cfg.sim_floor = 1.01;
    const std::vector<std::string> verbs = {"t0", "t1", "t2", "q1", "q2"};
    const std::map<std::string, Polarity> seeds = {{"t0", Polarity::Positive}, {"t1", Polarity::Negative}};
    CHECK(similarity_edges(verbs, fx.table, cfg).empty());
    const auto r = graph_prop(AspectId::P_wt, seeds, verbs, fx.table, cfg);
    CHECK(r.labels.at("t0") == Polarity::Positive);
    CHECK(r.labels.at("t1") == Polarity::Negative);
    for (const char* v : {"t2", "q1", "q2"}) CHECK(r.labels.at(v) == Polarity::Neutral);
    CHECK(r.unreachable == 3);
}

TEST_CASE("similarity edges: top-k per verb, deduplicated, ordered pairs") {
    const auto fx = five_verbs();
    const std::vector<std::string> verbs = {"t0", "t1", "t2", "t3", "t4"};
    GraphPropConfig cfg;
    cfg.top_k = 1;
    cfg.sim_floor = -1.0;
    const auto edges = similarity_edges(verbs, fx.table, cfg);
    for (const auto& e : edges) CHECK(e.a < e.b);
    CHECK(edges.size() <= 5);
    CHECK(edges.size() >= 3);
    CHECK_THROWS_AS(graph_prop({}, verbs, edges, cfg), InputError);
    cfg.top_k = 0;
    CHECK_THROWS_AS(similarity_edges(verbs, fx.table, cfg), InputError);
}

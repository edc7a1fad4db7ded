#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "cframe/baselines.hpp"
#include "cframe/errors.hpp"
#include "cframe/evaluation.hpp"
#include "cframe/rng.hpp"

using namespace cframe;

namespace {

constexpr Polarity N = Polarity::Negative, Z = Polarity::Neutral, P = Polarity::Positive;

std::vector<std::string> verbs(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back("v" + std::to_string(i));
    return out;
}

ConnotationFrame frame(std::string verb, Polarity p) {
    ConnotationFrame f;
    f.verb = std::move(verb);
    for (AspectId a : kAspects) f.labels[a] = p;
    return f;
}

}  // namespace

TEST_CASE("split: 900 verbs into 300/300/300, disjoint and reproducible") {
    const auto s = split(verbs(900), 7);
    CHECK(s.train.size() == 300);
    CHECK(s.dev.size() == 300);
    CHECK(s.test.size() == 300);
    std::set<std::string> all(s.train.begin(), s.train.end());
    all.insert(s.dev.begin(), s.dev.end());
    all.insert(s.test.begin(), s.test.end());
    CHECK(all.size() == 900);
    const auto again = split(verbs(900), 7);
    CHECK(again.train == s.train);
    CHECK(again.test == s.test);
    CHECK(split(verbs(900), 8).train != s.train);
}

TEST_CASE("split: small inputs use equal thirds") {
    const auto s = split(verbs(9), 1);
    CHECK(s.train.size() == 3);
    CHECK(s.dev.size() == 3);
    CHECK(s.test.size() == 3);
    const auto t = split(verbs(10), 1);
    CHECK(t.train.size() == 3);
}

TEST_CASE("split: explicit sizes") {
    const auto s = split(verbs(10), 1, SplitSizes{5, 2, 3});
    CHECK(s.train.size() == 5);
    CHECK(s.dev.size() == 2);
    CHECK(s.test.size() == 3);
    CHECK_THROWS_AS(split(verbs(10), 1, SplitSizes{5, 5, 1}), InputError);
}

TEST_CASE("accuracy hand values") {
    const std::vector<Polarity> gold = {P, P, N, Z};
    CHECK(accuracy(gold, gold) == 100.0);
    CHECK(accuracy(gold, std::vector<Polarity>{P, N, N, N}) == 50.0);
    CHECK(accuracy(gold, std::vector<Polarity>{N, Z, P, P}) == 0.0);
    CHECK_THROWS_AS(accuracy(gold, std::vector<Polarity>{P}), ShapeError);
}

TEST_CASE("macro F1 hand values") {
    CHECK(macro_f1(std::vector<Polarity>{P, N, Z}, std::vector<Polarity>{P, N, Z}) == 100.0);
    // + : P=2/3 R=1 F=0.8; - : 0; = : 1 -> 60
    CHECK(macro_f1(std::vector<Polarity>{P, P, N, Z}, std::vector<Polarity>{P, P, P, Z}) ==
          doctest::Approx(60.0).epsilon(1e-12));
    CHECK(macro_f1(std::vector<Polarity>{Z, Z, Z}, std::vector<Polarity>{Z, Z, Z}) ==
          doctest::Approx(100.0 / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS(macro_f1(std::vector<Polarity>{P}, std::vector<Polarity>{}), ShapeError);
}

TEST_CASE("macro F1 is 100 exactly when perfect with all classes present") {
    Rng rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Polarity> gold(1 + rng.below(12)), pred;
        for (auto& g : gold) g = polarity_at(rng.below(3));
        pred = gold;
        if (rng.uniform() < 0.5) pred[rng.below(pred.size())] = polarity_at(rng.below(3));
        const bool all_classes = std::set<Polarity>(gold.begin(), gold.end()).size() == 3;
        CHECK((macro_f1(gold, pred) == 100.0) == (pred == gold && all_classes));
    }
}

TEST_CASE("metrics are permutation invariant") {
    Rng rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng.below(20);
        std::vector<std::pair<Polarity, Polarity>> pairs(n);
        for (auto& [g, p] : pairs) g = polarity_at(rng.below(3)), p = polarity_at(rng.below(3));
        auto unzip = [](const auto& v, bool first) {
            std::vector<Polarity> out;
            for (const auto& [g, p] : v) out.push_back(first ? g : p);
            return out;
        };
        const double acc = accuracy(unzip(pairs, true), unzip(pairs, false));
        const double f1 = macro_f1(unzip(pairs, true), unzip(pairs, false));
        rng.shuffle(pairs);
        CHECK(accuracy(unzip(pairs, true), unzip(pairs, false)) == acc);
        CHECK(std::abs(macro_f1(unzip(pairs, true), unzip(pairs, false)) - f1) < 1e-12);
    }
}

TEST_CASE("evaluate: identical frames score 100 and rows follow canonical order") {
    std::vector<ConnotationFrame> gold = {frame("a", P), frame("b", N), frame("c", Z)};
    const auto report = evaluate(gold, gold);
    REQUIRE(report.aspects.size() == 9);
    for (std::size_t i = 0; i < 9; ++i) {
        CHECK(report.aspects[i] == kAspects[i]);
        CHECK(report.per_aspect[i].accuracy == 100.0);
        CHECK(report.per_aspect[i].macro_f1 == 100.0);
    }
    CHECK(report.verbs == 3);
    const std::vector<AspectId> subset = {AspectId::S_a, AspectId::P_wt};
    const auto sub = evaluate(gold, gold, subset);
    CHECK(sub.aspects.front() == AspectId::P_wt);
}

TEST_CASE("evaluate: overall is the unweighted per-aspect mean") {
    Rng rng(12);
    std::vector<ConnotationFrame> gold, pred;
    for (int i = 0; i < 30; ++i) {
        auto g = frame("v" + std::to_string(i), Z), p = g;
        for (AspectId a : kAspects) {
            g.labels[a] = polarity_at(rng.below(3));
            p.labels[a] = polarity_at(rng.below(3));
        }
        gold.push_back(g);
        pred.push_back(p);
    }
    std::reverse(pred.begin(), pred.end());  // matched by verb, not position
    const auto r = evaluate(gold, pred);
    double acc = 0.0, f1 = 0.0;
    for (const auto& s : r.per_aspect) acc += s.accuracy / 9.0, f1 += s.macro_f1 / 9.0;
    CHECK(std::abs(r.overall.accuracy - acc) < 1e-9);
    CHECK(std::abs(r.overall.macro_f1 - f1) < 1e-9);
}

TEST_CASE("evaluate: verb set mismatch lists the differences") {
    std::vector<ConnotationFrame> gold = {frame("a", P), frame("b", N)};
    std::vector<ConnotationFrame> pred = {frame("a", P), frame("c", N)};
    try {
        evaluate(gold, pred);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("b") != std::string::npos);
        CHECK(msg.find("c") != std::string::npos);
    }
}

TEST_CASE("majority on a skewed fixture: high accuracy, low macro F1") {
    std::vector<ConnotationFrame> train, test;
    for (int i = 0; i < 600; ++i) {
        auto f = frame("v" + std::to_string(i), Z);
        const int r = i % 100;
        f.labels[AspectId::V_a] = r < 90 ? P : (r < 96 ? Z : N);
        (i < 300 ? train : test).push_back(f);
    }
    const auto m = majority_train(train);
    std::vector<ConnotationFrame> pred;
    for (const auto& f : test) pred.push_back(m.predict(f.verb));
    const auto r = evaluate(test, pred);
    const auto& va = r.per_aspect[index_of(AspectId::V_a)];
    CHECK(va.accuracy == doctest::Approx(90.0));
    CHECK(va.macro_f1 < 50.0);
    CHECK(va.macro_f1 < va.accuracy);
}

TEST_CASE("report printing") {
    std::vector<ConnotationFrame> gold = {frame("a", P), frame("b", N)};
    const auto r = evaluate(gold, gold);
    std::ostringstream text, csv;
    print_report(text, r, "Majority");
    write_report_csv(csv, r);
    CHECK(text.str().find("Majority") != std::string::npos);
    CHECK(text.str().find("S_a") != std::string::npos);
    CHECK(csv.str().find("P_wt") != std::string::npos);
}

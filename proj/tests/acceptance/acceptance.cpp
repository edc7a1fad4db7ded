// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "cframe/annotations.hpp"
#include "cframe/baselines.hpp"
#include "cframe/corpus.hpp"
#include "cframe/evaluation.hpp"
#include "cframe/factor_graph.hpp"
#include "cframe/frame_model.hpp"
#include "cframe/maxent.hpp"
#include "cframe/rng.hpp"
#include "oracles.hpp"

using namespace cframe;
namespace fs = std::filesystem;

namespace {

// Tolerances and limits, fixed here and nowhere else.
constexpr double kBpTol = 1e-9;
constexpr double kBpSeconds = 10.0;
constexpr double kLoopyTreeTol = 1e-7;
constexpr double kLoopyCycleTol = 1e-3;
constexpr double kCycleStrength = 0.3;
constexpr double kGradTol = 1e-4;
constexpr double kGradStep = 1e-5;
constexpr double kSyntheticNoise = 0.2;
constexpr std::size_t kSyntheticN = 500;
constexpr double kSyntheticInteraction = 1.5;
constexpr double kSyntheticMargin = 0.0;
constexpr double kSyntheticSeconds = 60.0;
constexpr double kCorpusTol = 1e-12;
constexpr std::size_t kStreamLines = 1'000'000;
constexpr double kStreamSeconds = 30.0;
constexpr long kStreamCeilingKiB = 32 * 1024;
constexpr double kAlphaTol = 1e-9;
constexpr double kSkewAccuracySlack = 1.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void verdict(int id, const std::string& name, bool ok, const std::string& detail) {
    if (!ok) ++failures;
    std::cout << (ok ? "PASS " : "FAIL ") << id << ' ' << name << ": " << detail << std::endl;
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, static_cast<double>(args)...);
    return buf;
}

FrameWeights random_weights(Rng& rng, double range) {
    FrameWeights w;
    for (auto& t : w.emb)
        for (double& x : t) x = rng.uniform(-range, range);
    for (Interaction i : kInteractions)
        for (double& x : w.table(i)) x = rng.uniform(-range, range);
    return w;
}

// ------------------------------------------------------------------- 1

void criterion1() {
    const auto t0 = Clock::now();
    Rng rng(101);
    double vs_enum = 0.0, vs_brute = 0.0;
    for (int t = 0; t < 200; ++t) {
        const auto g = oracle::random_tree(rng);
        const auto bp = sum_product_tree(g);
        vs_enum = std::max(vs_enum, oracle::max_abs_diff(bp.marginals, enumerate_marginals(g).marginals));
        vs_brute = std::max(vs_brute, oracle::max_abs_diff(bp.marginals, oracle::brute_force_marginals(g)));
    }
    for (int t = 0; t < 50; ++t) {
        const auto w = random_weights(rng, 2.0);
        AspectEvidence ev;
        for (auto& l : ev.labels) l = polarity_at(rng.below(3));
        const auto g = build_frame_graph(ev, w);
        const auto bp = sum_product_tree(g);
        vs_enum = std::max(vs_enum, oracle::max_abs_diff(bp.marginals, enumerate_marginals(g).marginals));
        vs_brute = std::max(vs_brute, oracle::max_abs_diff(bp.marginals, oracle::brute_force_marginals(g)));
    }
    const double secs = seconds_since(t0);
    const double worst = std::max(vs_enum, vs_brute);
    verdict(1, "BP exactness (200 trees + 50 frame graphs)", worst < kBpTol && secs < kBpSeconds,
            fmt("max_err vs enumeration %.2e, vs brute force %.2e (tol %.0e); %.2f s (limit %.0f s)", vs_enum,
                vs_brute, kBpTol, secs, kBpSeconds));
}

// ------------------------------------------------------------------- 2

void criterion2() {
    Rng rng(202);
    LoopyOptions opt;
    opt.tol = 1e-10;
    opt.max_iters = 1000;
    double tree_err = 0.0;
    int not_converged = 0;
    for (int t = 0; t < 50; ++t) {
        const auto g = oracle::random_tree(rng);
        const auto m = loopy_sum_product(g, opt);
        if (!m.converged) ++not_converged;
        tree_err = std::max(tree_err, oracle::max_abs_diff(m.marginals, enumerate_marginals(g).marginals));
    }
    double cycle_err = 0.0;
    bool cycle_converged = true;
    for (int t = 0; t < 20; ++t) {
        const auto g = oracle::three_cycle(rng, kCycleStrength);
        const auto m = loopy_sum_product(g);
        cycle_converged = cycle_converged && m.converged;
        cycle_err = std::max(cycle_err, oracle::max_abs_diff(m.marginals, oracle::brute_force_marginals(g)));
    }
    const bool ok = not_converged == 0 && tree_err < kLoopyTreeTol && cycle_err < kLoopyCycleTol && cycle_converged;
    verdict(2, "Loopy BP sanity", ok,
            fmt("50 trees: %.0f unconverged, max_err %.2e (tol %.0e); ", not_converged, tree_err, kLoopyTreeTol) +
                fmt("weak 3-cycles: max_err %.2e vs 27-state enumeration (tol %.0e)", cycle_err, kLoopyCycleTol));
}

// ------------------------------------------------------------------- 3

void criterion3() {
    Rng rng(303);
    double maxent_err = 0.0;
    for (int point = 0; point < 20; ++point) {
        const std::size_t dim = 5, n = 25;
        std::vector<std::vector<double>> feats(n);
        std::vector<Polarity> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t d = 0; d < dim; ++d) feats[i].push_back(rng.uniform(-1, 1));
            feats[i].push_back(1.0);
            labels[i] = polarity_at(rng.below(3));
        }
        const ClassProbs cw = {rng.uniform(0.2, 3), rng.uniform(0.2, 3), rng.uniform(0.2, 3)};
        const MaxEntObjective obj(feats, labels, cw, rng.uniform(0.0, 2.0));
        std::vector<double> w(obj.num_params()), grad(w.size()), scratch(w.size());
        for (double& x : w) x = rng.uniform(-2, 2);
        obj(w, grad);
        const auto numeric =
            oracle::numeric_gradient([&](std::span<const double> x) { return obj(x, scratch); }, w, kGradStep);
        maxent_err = std::max(maxent_err, oracle::max_relative_error(grad, numeric));
    }

    double piece_err = 0.0;
    const auto data = generate_synthetic(agreement_weights(1.0, 0.0), 60, 31);
    for (EvidenceMode mode : {EvidenceMode::Hard, EvidenceMode::Soft}) {
        auto train = data;
        if (mode == EvidenceMode::Soft)
            for (auto& ex : train) {
                PerAspect<ClassProbs> probs{};
                for (auto& p : probs) {
                    double z = 0.0;
                    for (double& x : p) z += x = rng.uniform(0.05, 1.0);
                    for (double& x : p) x /= z;
                }
                ex.evidence.probs = probs;
            }
        for (const auto& piece : build_pieces(train, mode))
            for (int point = 0; point < 20; ++point) {
                std::vector<double> theta(piece.num_params), grad(theta.size()), scratch(theta.size());
                for (double& x : theta) x = rng.uniform(-2, 2);
                const double l2 = rng.uniform(0.0, 1.0);
                piece.objective(theta, grad, l2);
                const auto numeric = oracle::numeric_gradient(
                    [&](std::span<const double> x) { return piece.objective(x, scratch, l2); }, theta, kGradStep);
                piece_err = std::max(piece_err, oracle::max_relative_error(grad, numeric));
            }
    }
    verdict(3, "Gradient correctness (central differences, h = 1e-5)",
            maxent_err < kGradTol && piece_err < kGradTol,
            fmt("aspect model max rel err %.2e over 20 points; 16 pieces x 2 evidence modes x 20 points max rel err "
                "%.2e (tol %.0e)",
                maxent_err, piece_err, kGradTol));
}

// ------------------------------------------------------------------- 4

void criterion4() {
    Rng rng(404);
    const auto w = random_weights(rng, 1.0);
    std::size_t bad = 0, checked = 0;
    auto check = [&](const PerAspect<Polarity>& labels) {
        AspectEvidence ev;
        ev.labels = labels;
        const auto g = build_frame_graph(ev, w);
        ++checked;
        if (g.num_variables() != 9 || g.num_factors() != 16 || !g.is_acyclic()) ++bad;
    };
    for (std::size_t code = 0; code < 19683; ++code) {
        PerAspect<Polarity> labels{};
        std::size_t c = code;
        for (auto& l : labels) l = polarity_at(c % 3), c /= 3;
        check(labels);
    }
    for (int t = 0; t < 1000; ++t) {
        PerAspect<Polarity> labels{};
        for (auto& l : labels) l = polarity_at(rng.below(3));
        check(labels);
    }
    verdict(4, "Frame-graph structure", bad == 0,
            fmt("%.0f graphs (all 3^9 inputs + 1000 random draws), %.0f not (9 variables, 16 factors, acyclic)",
                static_cast<double>(checked), static_cast<double>(bad)));
}

// ------------------------------------------------------------------- 5

void criterion5() {
    const auto t0 = Clock::now();
    const auto truth = agreement_weights(kSyntheticInteraction, 0.0);
    SyntheticOptions opt;
    opt.noise = kSyntheticNoise;
    const auto train = generate_synthetic(truth, kSyntheticN, 5001, opt);
    const auto test = generate_synthetic(truth, kSyntheticN, 5002, opt);
    const auto learned = train_piecewise(train, {});

    std::vector<ConnotationFrame> gold, aspect_level, frame_level;
    for (const auto& ex : test) {
        gold.push_back(ex.gold);
        ConnotationFrame a;
        a.verb = ex.gold.verb;
        for (AspectId asp : kAspects) a.labels[asp] = ex.evidence.labels[index_of(asp)];
        aspect_level.push_back(a);
        frame_level.push_back(decode_frame(ex.gold.verb, ex.evidence, learned));
    }
    const double in_acc = evaluate(gold, aspect_level).overall.accuracy;
    const double out_acc = evaluate(gold, frame_level).overall.accuracy;
    const double secs = seconds_since(t0);
    verdict(5, "Synthetic end-to-end", out_acc - in_acc >= kSyntheticMargin && secs < kSyntheticSeconds,
            fmt("frame-level accuracy %.2f vs aspect-level input %.2f (margin %+.2f, need >= 0); %.2f s", out_acc,
                in_acc, out_acc - in_acc, secs));
}

// ------------------------------------------------------------------- 6

AnnotationRecord rec(std::string verb, int sentence, std::string worker, AspectId a, ResponseScale r) {
    return {std::move(verb), sentence, std::move(worker), a, r};
}

void criterion6() {
    const std::pair<double, Polarity> pins[] = {{0.25, Polarity::Neutral},   {-0.25, Polarity::Neutral},
                                                {0.26, Polarity::Positive},  {-0.26, Polarity::Negative},
                                                {1.0, Polarity::Positive},   {-1.0, Polarity::Negative}};
    int wrong = 0;
    for (const auto& [mean, want] : pins)
        if (polarity_from_score(mean) != want) ++wrong;
    // The same boundary reached through aggregation: (0.5 + 0) / 2 = 0.25.
    const std::vector<AnnotationRecord> r = {rec("v", 1, "a", AspectId::P_at, ResponseScale::PositiveOrNeutral),
                                             rec("v", 1, "b", AspectId::P_at, ResponseScale::Neutral)};
    const auto agg = aggregate(r);
    if (agg.mean_score != 0.25 || agg.label != Polarity::Neutral) ++wrong;
    verdict(6, "Aggregation cutoffs", wrong == 0,
            fmt("%.0f of 7 pinned means misbucketed (0.25, -0.25, 0.26, -0.26, 1, -1, aggregated 0.25)", wrong));
}

// ------------------------------------------------------------------- 7

void criterion7() {
    constexpr ResponseScale kAll[] = {ResponseScale::Positive, ResponseScale::PositiveOrNeutral,
                                      ResponseScale::Neutral,  ResponseScale::NegativeOrNeutral,
                                      ResponseScale::Negative};
    Rng rng(707);
    int order_violations = 0;
    for (int t = 0; t < 100; ++t) {
        std::vector<AnnotationRecord> r;
        const std::size_t verbs = 1 + rng.below(5);
        for (std::size_t v = 0; v < verbs; ++v)
            for (int s = 1; s <= 5; ++s)
                for (int w = 0; w < 3; ++w)
                    r.push_back(rec("v" + std::to_string(v), s, "w" + std::to_string(w),
                                    kAspects[rng.below(kNumAspects - 2)], kAll[rng.below(5)]));
        // Ensure at least one pair.
        r.push_back(rec("pair", 1, "x", AspectId::P_wt, kAll[rng.below(5)]));
        r.push_back(rec("pair", 1, "y", AspectId::P_wt, kAll[rng.below(5)]));
        if (strict_agreement(r) > nc_agreement(r)) ++order_violations;
    }

    std::vector<AnnotationRecord> perfect;
    for (int s = 1; s <= 5; ++s)
        for (const char* w : {"a", "b", "c"}) {
            perfect.push_back(rec("v", s, w, AspectId::P_wt, s % 2 ? ResponseScale::Positive : ResponseScale::Negative));
            perfect.push_back(rec("v", s, w, AspectId::S_t, ResponseScale::Neutral));
            perfect.push_back(rec("u", s, w, AspectId::S_t, ResponseScale::Negative));
        }
    const double alpha_perfect = krippendorff_alpha(perfect);

    // A: (+, -), B: (-, +). Coincidences o(+,-) = o(-,+) = 2, n = 4:
    // D_o = 4/4, D_e = 2 * 2 * 2 / (4 * 3), alpha = 1 - D_o / D_e.
    const std::vector<AnnotationRecord> two = {rec("v", 1, "A", AspectId::P_wt, ResponseScale::Positive),
                                               rec("v", 2, "A", AspectId::P_wt, ResponseScale::Negative),
                                               rec("v", 1, "B", AspectId::P_wt, ResponseScale::Negative),
                                               rec("v", 2, "B", AspectId::P_wt, ResponseScale::Positive)};
    const double hand = 1.0 - (4.0 / 4.0) / (8.0 / 12.0);
    const double alpha_two = krippendorff_alpha(two);
    const bool ok = order_violations == 0 && alpha_perfect == 1.0 && std::abs(alpha_two - hand) < kAlphaTol;
    verdict(7, "Agreement metrics", ok,
            fmt("strict > NC in %.0f of 100 sets; perfect alpha = %.17g; 2x2 alpha %.12f vs hand %.12f", order_violations,
                alpha_perfect, alpha_two, hand));
}

// ------------------------------------------------------------------- 8

void criterion8() {
    using P = Polarity;
    const P pos = P::Positive, neg = P::Negative, neu = P::Neutral;
    int wrong = 0;
    auto pin = [&](std::vector<P> g, std::vector<P> p, double want) {
        if (macro_f1(g, p) != want) ++wrong;
    };
    pin({pos, neg, neu}, {pos, neg, neu}, 100.0);
    // + : P 2/3, R 1, F1 0.8; - : 0; = : 1.
    pin({pos, pos, neg, neu}, {pos, pos, pos, neu}, (0.8 + 0.0 + 1.0) / 3.0 * 100.0);
    pin({neu, neu, neu}, {neu, neu, neu}, 100.0 / 3.0);
    if (accuracy(std::vector<P>{pos, pos, neg, neu}, std::vector<P>{pos, neg, neg, neg}) != 50.0) ++wrong;

    std::vector<ConnotationFrame> train, test;
    for (int i = 0; i < 600; ++i) {
        ConnotationFrame f;
        f.verb = "v" + std::to_string(i);
        for (AspectId a : kAspects) f.labels[a] = neu;
        const int r = i % 100;
        f.labels[AspectId::V_a] = r < 90 ? pos : (r < 96 ? neu : neg);
        (i % 2 ? test : train).push_back(f);
    }
    const auto m = majority_train(train);
    std::vector<ConnotationFrame> pred;
    for (const auto& f : test) pred.push_back(m.predict(f.verb));
    const auto rep = evaluate(test, pred);
    const auto va = rep.per_aspect[index_of(AspectId::V_a)];
    const bool skew_ok = std::abs(va.accuracy - 90.0) <= kSkewAccuracySlack && va.macro_f1 < 50.0 &&
                         va.macro_f1 < va.accuracy;
    verdict(8, "Metrics", wrong == 0 && skew_ok,
            fmt("%.0f hand fixtures off; majority on 90%% skew: accuracy %.2f, macro-F1 %.2f", wrong, va.accuracy,
                va.macro_f1));
}

// ------------------------------------------------------------------- 9

long status_kib(const char* key) {
    std::ifstream in("/proc/self/status");
    std::string line;
    while (std::getline(in, line))
        if (line.rfind(key, 0) == 0) return std::stol(line.substr(std::string(key).size()));
    return -1;
}

void criterion9() {
    int wrong = 0;
    const VerbScores scores = {{"help", 1.0}, {"attack", -1.0}, {"praise", 0.6}};
    const std::vector<SVOTuple> one = {{"s", "obama", "help", "x", 7}};
    const auto r1 = entity_pair_score("obama", "", one, scores);
    if (std::abs(r1.score - 1.0) > kCorpusTol || r1.support != 7) ++wrong;
    const std::vector<SVOTuple> two = {{"s", "democrats", "help", "x", 3}, {"s", "democrats", "attack", "y", 1}};
    if (std::abs(entity_pair_score("democrats", "", two, scores).score - 0.5) > kCorpusTol) ++wrong;
    const std::vector<SVOTuple> three = {{"s", "the democrats in congress", "praise", "x", 2},
                                         {"s", "democrats", "attack", "y", 3}};
    if (std::abs(entity_pair_score("democrats", "", three, scores).score - (2 * 0.6 - 3.0) / 5.0) > kCorpusTol)
        ++wrong;

    Rng rng(909);
    double split_err = 0.0;
    const char* verbs[] = {"help", "attack", "praise", "unknown"};
    for (int t = 0; t < 100; ++t) {
        std::vector<SVOTuple> base, split;
        for (int i = 0; i < 30; ++i) {
            SVOTuple x{"s", rng.uniform() < 0.6 ? "the agent" : "other", verbs[rng.below(4)], "o", 2 + rng.below(40)};
            base.push_back(x);
            const std::uint64_t c1 = 1 + rng.below(x.count - 1);
            auto a = x, b = x;
            a.count = c1;
            b.count = x.count - c1;
            split.push_back(a);
            split.push_back(b);
        }
        base.push_back({"s", "agent", "help", "o", 1});
        split.push_back({"s", "agent", "help", "o", 1});
        rng.shuffle(split);
        split_err = std::max(split_err, std::abs(entity_pair_score("agent", "", base, scores).score -
                                                 entity_pair_score("agent", "", split, scores).score));
    }

    const fs::path path = fs::temp_directory_path() / ("cframe_accept_" + std::to_string(::getpid()) + ".tsv");
    {
        std::ofstream out(path);
        const char* subjects[] = {"the democrats", "republicans", "obama", "the senate majority leader"};
        for (std::size_t i = 0; i < kStreamLines; ++i)
            out << "http://source" << i % 97 << ".example.com/page\t" << subjects[i % 4] << '\t' << verbs[i % 4]
                << "\tobject phrase " << i % 1013 << '\t' << 1 + i % 5 << '\n';
    }
    // Reset the peak-RSS watermark so only the streaming pass is measured.
    bool reset = false;
    {
        std::ofstream clear("/proc/self/clear_refs");
        if (clear) {
            clear << "5";
            clear.flush();
            reset = static_cast<bool>(clear);
        }
    }
    const long rss_before = status_kib("VmRSS:");
    const long hwm_before = status_kib("VmHWM:");
    const auto t0 = Clock::now();
    PairAccumulator acc("democrats", "");
    const auto stats = for_each_tuple(path, [&](const SVOTuple& t) { acc.add(t, scores); });
    const double secs = seconds_since(t0);
    const long hwm_after = status_kib("VmHWM:");
    fs::remove(path);
    const long growth = reset ? hwm_after - rss_before : hwm_after - hwm_before;
    const bool stream_ok = stats.accepted == kStreamLines && stats.malformed == 0 && acc.has_support() &&
                           growth >= 0 && growth < kStreamCeilingKiB && secs < kStreamSeconds;

    verdict(9, "Corpus aggregation", wrong == 0 && split_err < kCorpusTol && stream_ok,
            fmt("%.0f hand fixtures off; splitting max diff %.1e (tol %.0e); ", wrong, split_err, kCorpusTol) +
                fmt("1e6 lines in %.2f s (limit %.0f s), peak RSS growth %.0f KiB (ceiling %.0f KiB", secs,
                    kStreamSeconds, static_cast<double>(growth), static_cast<double>(kStreamCeilingKiB)) +
                (reset ? ", watermark reset)" : ", watermark delta)"));
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    std::cout << "NOTE 10 Conditional reproduction: not gated; needs the original annotations and embeddings "
                 "(see README)"
              << std::endl;
    std::cout << (failures == 0 ? "all gated criteria passed" : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}

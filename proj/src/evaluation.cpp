#include "cframe/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "cframe/errors.hpp"
#include "cframe/rng.hpp"

namespace cframe {

namespace {

void check_lengths(std::span<const Polarity> gold, std::span<const Polarity> pred) {
    if (gold.size() != pred.size())
        throw ShapeError("gold has " + std::to_string(gold.size()) + " labels, prediction has " +
                         std::to_string(pred.size()));
    if (gold.empty()) throw InputError("cannot score an empty label sequence");
}

std::string fixed(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

Split split(std::vector<std::string> items, std::uint64_t seed, std::optional<SplitSizes> sizes) {
    SplitSizes s;
    if (sizes) {
        s = *sizes;
        if (s.train + s.dev + s.test > items.size())
            throw InputError("requested split sizes " + std::to_string(s.train) + "/" + std::to_string(s.dev) +
                             "/" + std::to_string(s.test) + " exceed " + std::to_string(items.size()) + " items");
    } else if (items.size() >= 900) {
        s = {300, 300, 300};
    } else {
        const std::size_t third = items.size() / 3;
        s = {third, third, third};
    }
    Rng rng(seed);
    rng.shuffle(items);
    Split out;
    auto it = items.begin();
    auto take = [&it](std::size_t n, std::vector<std::string>& dst) {
        dst.assign(it, it + static_cast<std::ptrdiff_t>(n));
        it += static_cast<std::ptrdiff_t>(n);
    };
    take(s.train, out.train);
    take(s.dev, out.dev);
    take(s.test, out.test);
    return out;
}

double accuracy(std::span<const Polarity> gold, std::span<const Polarity> pred) {
    check_lengths(gold, pred);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) hits += gold[i] == pred[i];
    return 100.0 * static_cast<double>(hits) / static_cast<double>(gold.size());
}

double macro_f1(std::span<const Polarity> gold, std::span<const Polarity> pred) {
    check_lengths(gold, pred);
    std::array<std::size_t, kNumPolarities> tp{}, fp{}, fn{};
    for (std::size_t i = 0; i < gold.size(); ++i) {
        const auto g = index_of(gold[i]), p = index_of(pred[i]);
        if (g == p) {
            ++tp[g];
        } else {
            ++fp[p];
            ++fn[g];
        }
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < kNumPolarities; ++c) {
        const std::size_t denom = 2 * tp[c] + fp[c] + fn[c];
        if (denom > 0) sum += 2.0 * static_cast<double>(tp[c]) / static_cast<double>(denom);
    }
    return 100.0 * sum / static_cast<double>(kNumPolarities);
}

EvalReport evaluate(std::span<const ConnotationFrame> gold, std::span<const ConnotationFrame> pred,
                    std::span<const AspectId> aspects) {
    if (aspects.empty()) throw InputError("no aspects selected for evaluation");
    std::map<std::string, const ConnotationFrame*> gold_by_verb, pred_by_verb;
    for (const auto& f : gold)
        if (!gold_by_verb.emplace(f.verb, &f).second) throw InputError("duplicate gold verb '" + f.verb + "'");
    for (const auto& f : pred)
        if (!pred_by_verb.emplace(f.verb, &f).second) throw InputError("duplicate predicted verb '" + f.verb + "'");

    std::vector<std::string> only_gold, only_pred;
    for (const auto& [v, _] : gold_by_verb)
        if (!pred_by_verb.contains(v)) only_gold.push_back(v);
    for (const auto& [v, _] : pred_by_verb)
        if (!gold_by_verb.contains(v)) only_pred.push_back(v);
    if (!only_gold.empty() || !only_pred.empty()) {
        std::string msg = "gold and prediction verb sets differ;";
        auto list = [&msg](const char* what, const std::vector<std::string>& vs) {
            if (vs.empty()) return;
            msg += std::string(" ") + what + ":";
            for (std::size_t i = 0; i < vs.size() && i < 10; ++i) msg += " " + vs[i];
            if (vs.size() > 10) msg += " ... (" + std::to_string(vs.size()) + " total)";
        };
        list("missing from prediction", only_gold);
        list("not in gold", only_pred);
        throw InputError(msg);
    }

    EvalReport report;
    report.verbs = gold_by_verb.size();
    std::vector<AspectId> ordered(aspects.begin(), aspects.end());
    std::sort(ordered.begin(), ordered.end());
    ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());
    report.aspects = ordered;

    std::vector<Polarity> g, p;
    for (AspectId a : ordered) {
        g.clear();
        p.clear();
        for (const auto& [verb, gf] : gold_by_verb) {
            g.push_back(gf->label(a));
            p.push_back(pred_by_verb.at(verb)->label(a));
        }
        AspectScores s{accuracy(g, p), macro_f1(g, p)};
        report.per_aspect.push_back(s);
        report.overall.accuracy += s.accuracy;
        report.overall.macro_f1 += s.macro_f1;
    }
    report.overall.accuracy /= static_cast<double>(ordered.size());
    report.overall.macro_f1 /= static_cast<double>(ordered.size());
    return report;
}

void print_report(std::ostream& out, const EvalReport& report, std::string_view system) {
    out << "Aspect  Algorithm       Acc.    Avg F1\n";
    auto row = [&](std::string_view name, const AspectScores& s) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%-7.*s %-14.*s %6s  %6s\n", static_cast<int>(name.size()), name.data(),
                      static_cast<int>(system.size()), system.data(), fixed(s.accuracy).c_str(),
                      fixed(s.macro_f1).c_str());
        out << buf;
    };
    for (std::size_t i = 0; i < report.aspects.size(); ++i) row(aspect_name(report.aspects[i]), report.per_aspect[i]);
    row("mean", report.overall);
    out << "verbs: " << report.verbs
        << "; F1 is the mean over {-,=,+}; a class absent from gold and prediction scores 0\n";
}

void write_report_csv(std::ostream& out, const EvalReport& report) {
    out << "aspect,accuracy,macro_f1\n";
    for (std::size_t i = 0; i < report.aspects.size(); ++i)
        out << aspect_name(report.aspects[i]) << ',' << fixed(report.per_aspect[i].accuracy, 4) << ','
            << fixed(report.per_aspect[i].macro_f1, 4) << '\n';
    out << "mean," << fixed(report.overall.accuracy, 4) << ',' << fixed(report.overall.macro_f1, 4) << '\n';
}

}  // namespace cframe

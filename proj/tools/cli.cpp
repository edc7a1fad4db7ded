#include "cli.hpp"

#include <fnmatch.h>

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cframe/annotations.hpp"
#include "cframe/baselines.hpp"
#include "cframe/corpus.hpp"
#include "cframe/embeddings.hpp"
#include "cframe/errors.hpp"
#include "cframe/evaluation.hpp"
#include "cframe/factor_graph.hpp"
#include "cframe/frame_model.hpp"
#include "cframe/lexicon_io.hpp"
#include "cframe/maxent.hpp"
#include "cframe/rng.hpp"
#include "cframe/text_io.hpp"
#include "cframe/version.hpp"

namespace fs = std::filesystem;

namespace cframe::cli {
namespace {

// Bad flag combinations that CLI11 cannot express; exit code 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Context {
    const CLI::App* root = nullptr;
    const CLI::App* sub = nullptr;
    std::ostream* out = nullptr;
    std::ostream* err = nullptr;
    std::uint64_t seed = 1;
    int jobs = 1;
    bool verbose = false;
    std::string extra_header;  // appended by commands that resolve values at run time

    void log(const std::string& msg) const {
        if (verbose) *err << msg << '\n';
    }
    void warn(const std::string& msg) const { *err << "warning: " << msg << '\n'; }
    std::string header() const;
};

void append_flags(std::string& line, const CLI::App& app) {
    for (const CLI::Option* opt : app.get_options()) {
        if (opt == app.get_help_ptr() || opt == app.get_help_all_ptr() || opt == app.get_version_ptr()) continue;
        std::string value;
        if (opt->get_expected_min() == 0) {
            value = opt->count() ? "true" : "false";
        } else if (opt->count()) {
            for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
        } else {
            value = opt->get_default_str();
        }
        if (value.empty()) continue;
        line += " " + opt->get_name() + "=" + value;
    }
}

std::string Context::header() const {
    std::string flags = "flags:";
    append_flags(flags, *root);
    append_flags(flags, *sub);
    std::string h = "cframe " + std::string(kVersion) + " " + sub->get_name() + "\n" + flags;
    if (!extra_header.empty()) h += "\n" + extra_header;
    return h;
}

// Runs fn(0..n-1) on up to `jobs` threads. Each index writes only its own
// slot, so results do not depend on scheduling. The lowest-index error wins.
template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    {
        std::vector<std::jthread> threads;
        for (std::size_t t = 0; t < workers; ++t)
            threads.emplace_back([&] {
                for (std::size_t i; (i = next++) < n;) {
                    try {
                        fn(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------- loaders

Lexicon load_lexicon(const fs::path& path) {
    auto in = open_input(path);
    try {
        return read_lexicon(in);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

std::vector<ConnotationFrame> complete_frames(const Lexicon& lex, const Context& ctx, std::string_view what) {
    std::vector<ConnotationFrame> out;
    for (const auto& e : lex.entries)
        if (e.frame.complete()) out.push_back(e.frame);
    if (out.size() < lex.entries.size())
        ctx.warn(std::to_string(lex.entries.size() - out.size()) + " incomplete " + std::string(what) +
                 " frames ignored");
    return out;
}

std::vector<std::string> load_verbs(const fs::path& path) {
    auto in = open_input(path);
    return read_verb_list(in);
}

bool looks_like_lexicon(const fs::path& path) {
    auto in = open_input(path);
    std::string line;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        return t.substr(0, 5) == "verb\t" || t == "verb";
    }
    return false;
}

template <class Words>
std::vector<std::string> keep_embedded(const Words& verbs, const EmbeddingTable& table, const Context& ctx,
                                       std::string_view what) {
    std::vector<std::string> out;
    for (const auto& v : verbs)
        if (table.contains(v)) out.push_back(v);
    if (out.size() < verbs.size())
        ctx.warn(std::to_string(verbs.size() - out.size()) + " " + std::string(what) +
                 " verbs have no embedding and were skipped");
    return out;
}

std::vector<ConnotationFrame> keep_embedded_frames(const std::vector<ConnotationFrame>& frames,
                                                   const EmbeddingTable& table, const Context& ctx,
                                                   std::string_view what) {
    std::vector<ConnotationFrame> out;
    for (const auto& f : frames)
        if (table.contains(f.verb)) out.push_back(f);
    if (out.size() < frames.size())
        ctx.warn(std::to_string(frames.size() - out.size()) + " " + std::string(what) +
                 " verbs have no embedding and were skipped");
    return out;
}

// Expands '*', '?' and '[...]' in the final path component; matches are sorted.
std::vector<fs::path> expand_patterns(const std::vector<std::string>& patterns) {
    std::vector<fs::path> out;
    for (const auto& p : patterns) {
        const fs::path path(p);
        const std::string name = path.filename().string();
        if (name.find_first_of("*?[") == std::string::npos) {
            out.push_back(path);
            continue;
        }
        const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
        std::vector<fs::path> matched;
        std::error_code ec;
        for (const auto& entry : fs::directory_iterator(dir, ec))
            if (entry.is_regular_file() && fnmatch(name.c_str(), entry.path().filename().c_str(), 0) == 0)
                matched.push_back(path.has_parent_path() ? entry.path() : entry.path().filename());
        if (matched.empty()) throw InputError("no files match " + p);
        std::sort(matched.begin(), matched.end());
        out.insert(out.end(), matched.begin(), matched.end());
    }
    return out;
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

std::ofstream open_with_header(const fs::path& path, const Context& ctx) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    auto out = open_output(path);
    write_comment_header(out, ctx.header());
    return out;
}

// ------------------------------------------------------- aspect evidence

// Aspect-level predictions either read from a lexicon or computed from models.
class EvidenceSource {
public:
    EvidenceSource(const std::string& preds_path, const std::string& models_dir, const std::string& emb_path) {
        if (!preds_path.empty()) {
            preds_ = load_lexicon(preds_path);
            for (std::size_t i = 0; i < preds_->entries.size(); ++i) index_[preds_->entries[i].frame.verb] = i;
        } else if (!models_dir.empty()) {
            if (emb_path.empty()) throw UsageError("--embeddings is required with --aspect-models");
            models_ = load_aspect_models(models_dir);
            table_ = load_embeddings(emb_path);
        } else {
            throw UsageError("one of --aspect-models or --preds is required");
        }
    }

    bool has_probs() const { return !preds_ || preds_->has_probs; }

    std::optional<AspectEvidence> get(const std::string& verb) const {
        if (preds_) {
            const auto it = index_.find(verb);
            if (it == index_.end()) return std::nullopt;
            const auto& e = preds_->entries[it->second];
            if (!e.frame.complete()) return std::nullopt;
            AspectEvidence ev;
            ev.labels = e.frame.label_array();
            ev.probs = e.probs;
            return ev;
        }
        if (!table_->contains(verb)) return std::nullopt;
        return aspect_evidence(verb, *models_, *table_);
    }

private:
    std::optional<Lexicon> preds_;
    std::map<std::string, std::size_t> index_;
    std::optional<AspectModels> models_;
    std::optional<EmbeddingTable> table_;
};

EvidenceMode parse_evidence(const std::string& s) { return s == "soft" ? EvidenceMode::Soft : EvidenceMode::Hard; }

std::vector<FrameExample> frame_examples(const std::vector<ConnotationFrame>& gold, const EvidenceSource& source,
                                         const Context& ctx, std::string_view what) {
    std::vector<FrameExample> out;
    for (const auto& g : gold) {
        auto ev = source.get(g.verb);
        if (ev) out.push_back({g, std::move(*ev)});
    }
    if (out.size() < gold.size())
        ctx.warn(std::to_string(gold.size() - out.size()) + " " + std::string(what) +
                 " verbs lack aspect predictions and were skipped");
    if (out.empty()) throw InputError(std::string("no usable ") + std::string(what) + " verbs");
    return out;
}

double mean_macro_f1(const std::vector<FrameExample>& dev, const FrameWeights& w, EvidenceMode mode) {
    std::vector<ConnotationFrame> gold, pred;
    for (const auto& ex : dev) {
        gold.push_back(ex.gold);
        pred.push_back(decode_frame(ex.gold.verb, ex.evidence, w, mode));
    }
    return evaluate(gold, pred).overall.macro_f1;
}

// ---------------------------------------------------------------- commands

struct AggregateArgs {
    std::string in, out;
};

void cmd_aggregate(const AggregateArgs& a, Context& ctx) {
    auto in = open_input(a.in);
    const auto records = read_annotations(in);
    std::size_t incomplete = 0;
    const auto frames = aggregate_frames(records, &incomplete);
    if (incomplete) ctx.warn(std::to_string(incomplete) + " verbs lack some aspect and were dropped");
    auto out = open_with_header(a.out, ctx);
    write_lexicon(out, frames, "", true);
    *ctx.out << "aggregated " << records.size() << " responses into " << frames.size() << " frames\n";
}

struct AgreementArgs {
    std::string in, out, collapse = "polar";
};

void cmd_agreement(const AgreementArgs& a, Context& ctx) {
    auto in = open_input(a.in);
    const auto records = read_annotations(in);
    const auto rule = a.collapse == "neutral" ? OrNeutralCollapse::Neutral : OrNeutralCollapse::Polar;
    const auto report = agreement_report(records, rule);
    print_agreement(*ctx.out, report);
    if (!a.out.empty()) {
        auto out = open_with_header(a.out, ctx);
        print_agreement(out, report);
    }
}

struct SplitArgs {
    std::string verbs, out;
    std::vector<std::size_t> sizes;
};

void cmd_split(const SplitArgs& a, Context& ctx) {
    std::optional<SplitSizes> sizes;
    if (!a.sizes.empty()) {
        if (a.sizes.size() != 3) throw UsageError("--sizes takes exactly three counts: train,dev,test");
        sizes = SplitSizes{a.sizes[0], a.sizes[1], a.sizes[2]};
    }
    const bool lexicon = looks_like_lexicon(a.verbs);
    std::optional<Lexicon> lex;
    std::vector<std::string> verbs;
    if (lexicon) {
        lex = load_lexicon(a.verbs);
        verbs = lex->verbs();
    } else {
        verbs = load_verbs(a.verbs);
    }
    const auto s = split(verbs, ctx.seed, sizes);
    fs::create_directories(a.out);
    const std::pair<const char*, const std::vector<std::string>*> parts[] = {
        {"train", &s.train}, {"dev", &s.dev}, {"test", &s.test}};
    std::map<std::string, const LexiconEntry*> by_verb;
    if (lex)
        for (const auto& e : lex->entries) by_verb[e.frame.verb] = &e;
    for (const auto& [name, list] : parts) {
        auto out = open_with_header(fs::path(a.out) / (std::string(name) + ".tsv"), ctx);
        if (lex) {
            std::vector<LexiconEntry> entries;
            for (const auto& v : *list) entries.push_back(*by_verb.at(v));
            write_lexicon(out, entries, "", {lex->has_scores, lex->has_probs});
        } else {
            for (const auto& v : *list) out << v << '\n';
        }
        *ctx.out << name << ": " << list->size() << " verbs\n";
    }
}

struct TrainAspectArgs {
    std::string train, dev, embeddings, out, optimizer = "lbfgs", weighting = "inverse";
    double l2 = 1.0, tol = 1e-6;
    int max_iters = 500;
};

void cmd_train_aspect(const TrainAspectArgs& a, Context& ctx) {
    if (a.weighting == "grid" && a.dev.empty()) throw UsageError("--dev is required with --class-weights grid");
    TrainConfig cfg;
    cfg.l2_strength = a.l2;
    cfg.max_iters = a.max_iters;
    cfg.convergence_tol = a.tol;
    cfg.optimizer = a.optimizer == "gd" ? OptimizerKind::GradientDescent : OptimizerKind::Lbfgs;
    cfg.class_weight_mode = a.weighting == "uniform" ? ClassWeightMode::Uniform
                            : a.weighting == "grid"  ? ClassWeightMode::GridTuned
                                                     : ClassWeightMode::InverseFrequency;
    cfg.seed = ctx.seed;
    cfg.validate();

    const auto table = load_embeddings(a.embeddings);
    const auto train = keep_embedded_frames(complete_frames(load_lexicon(a.train), ctx, "training"), table, ctx,
                                            "training");
    std::vector<ConnotationFrame> dev;
    if (!a.dev.empty())
        dev = keep_embedded_frames(complete_frames(load_lexicon(a.dev), ctx, "dev"), table, ctx, "dev");

    auto labeled = [](const std::vector<ConnotationFrame>& frames, AspectId asp) {
        std::vector<LabeledVerb> out;
        for (const auto& f : frames) out.push_back({f.verb, f.label(asp)});
        return out;
    };

    AspectModels models;
    PerAspect<TrainTrace> traces{};
    PerAspect<ClassProbs> multipliers{};
    parallel_for(kNumAspects, ctx.jobs, [&](std::size_t i) {
        const AspectId asp = kAspects[i];
        auto local = cfg;
        const auto data = labeled(train, asp);
        if (local.class_weight_mode == ClassWeightMode::GridTuned)
            local.class_weight_multipliers = tune_class_multipliers(data, labeled(dev, asp), asp, table, local);
        multipliers[i] = local.class_weight_multipliers;
        models[i] = train_aspect(data, asp, table, local, &traces[i]);
    });

    if (cfg.class_weight_mode == ClassWeightMode::GridTuned) {
        std::string line = "class multipliers:";
        for (AspectId asp : kAspects) {
            const auto& m = multipliers[index_of(asp)];
            line += " " + std::string(aspect_name(asp)) + "=" + format_double(m[0]) + "/" + format_double(m[1]) +
                    "/" + format_double(m[2]);
        }
        ctx.extra_header = line;
    }
    save_aspect_models(models, a.out, ctx.header());
    for (AspectId asp : kAspects) {
        const auto& t = traces[index_of(asp)];
        *ctx.out << aspect_name(asp) << ": " << t.iterations << " iterations, loss "
                 << (t.losses.empty() ? 0.0 : t.losses.back()) << (t.converged ? "" : " (not converged)") << '\n';
    }
}

struct PredictAspectArgs {
    std::string models, verbs, embeddings, out;
};

void cmd_predict_aspect(const PredictAspectArgs& a, Context& ctx) {
    const auto models = load_aspect_models(a.models);
    const auto table = load_embeddings(a.embeddings);
    const auto verbs = keep_embedded(load_verbs(a.verbs), table, ctx, "input");
    std::vector<LexiconEntry> entries(verbs.size());
    parallel_for(verbs.size(), ctx.jobs, [&](std::size_t i) {
        const auto ev = aspect_evidence(verbs[i], models, table);
        auto& e = entries[i];
        e.frame.verb = verbs[i];
        for (AspectId asp : kAspects) e.frame.labels[asp] = ev.labels[index_of(asp)];
        e.probs = ev.probs;
    });
    auto out = open_with_header(a.out, ctx);
    write_lexicon(out, entries, "", {false, true});
    *ctx.out << "predicted " << entries.size() << " verbs\n";
}

struct TrainFrameArgs {
    std::string train, dev, aspect_models, preds, embeddings, out, evidence = "hard";
    double lr = 0.1, l2 = 0.01;
    int epochs = 50;
    bool no_shuffle = false, full_batch = false;
};

void cmd_train_frame(const TrainFrameArgs& a, Context& ctx) {
    const EvidenceSource source(a.preds, a.aspect_models, a.embeddings);
    const auto mode = parse_evidence(a.evidence);
    if (mode == EvidenceMode::Soft && !source.has_probs())
        throw UsageError("--evidence soft needs probability columns in --preds");
    const auto train = frame_examples(complete_frames(load_lexicon(a.train), ctx, "training"), source, ctx, "training");

    SgdConfig sgd;
    sgd.learning_rate = a.lr;
    sgd.epochs = a.epochs;
    sgd.l2 = a.l2;
    sgd.seed = ctx.seed;
    sgd.shuffle = !a.no_shuffle;
    sgd.full_batch = a.full_batch;
    sgd.validate();

    if (!a.dev.empty()) {
        const auto dev = frame_examples(complete_frames(load_lexicon(a.dev), ctx, "dev"), source, ctx, "dev");
        double best = -1.0;
        SgdConfig chosen = sgd;
        for (double lr : {0.01, 0.1, 0.5})
            for (double l2 : {0.001, 0.01, 0.1}) {
                auto c = sgd;
                c.learning_rate = lr;
                c.l2 = l2;
                const double f1 = mean_macro_f1(dev, train_piecewise(train, c, mode), mode);
                ctx.log("grid lr=" + format_double(lr) + " l2=" + format_double(l2) + " dev F1=" + format_double(f1));
                if (f1 > best) best = f1, chosen = c;
            }
        sgd = chosen;
        ctx.extra_header = "dev grid: learning_rate=" + format_double(sgd.learning_rate) +
                           " l2=" + format_double(sgd.l2);
        *ctx.out << "dev grid picked learning_rate " << sgd.learning_rate << ", l2 " << sgd.l2 << " (macro-F1 "
                 << best << ")\n";
    }
    const auto weights = train_piecewise(train, sgd, mode);
    save_weights(weights, a.out, ctx.header());
    *ctx.out << "trained on " << train.size() << " verbs\n";
}

struct PredictFrameArgs {
    std::string verbs, aspect_models, preds, embeddings, weights, out, dump_graph, evidence = "hard";
};

void cmd_predict_frame(const PredictFrameArgs& a, Context& ctx) {
    const EvidenceSource source(a.preds, a.aspect_models, a.embeddings);
    const auto mode = parse_evidence(a.evidence);
    if (mode == EvidenceMode::Soft && !source.has_probs())
        throw UsageError("--evidence soft needs probability columns in --preds");
    const auto weights = load_weights(a.weights);
    const auto verbs = load_verbs(a.verbs);

    std::vector<std::optional<LexiconEntry>> slots(verbs.size());
    std::vector<std::string> dumps(a.dump_graph.empty() ? 0 : verbs.size());
    parallel_for(verbs.size(), ctx.jobs, [&](std::size_t i) {
        const auto ev = source.get(verbs[i]);
        if (!ev) return;
        const auto graph = build_frame_graph(*ev, weights, mode);
        const auto marginals = sum_product_tree(graph);
        LexiconEntry e;
        e.frame = decode_frame(verbs[i], *ev, weights, mode);
        PerAspect<ClassProbs> probs{};
        for (AspectId asp : kAspects) {
            const auto& m = marginals.at(aspect_name(asp));
            probs[index_of(asp)] = {m[0], m[1], m[2]};
        }
        e.probs = probs;
        slots[i] = std::move(e);
        if (!dumps.empty()) {
            std::ostringstream s;
            s << "## " << verbs[i] << '\n';
            dump_graph(s, graph);
            dumps[i] = s.str();
        }
    });
    std::vector<LexiconEntry> entries;
    for (auto& s : slots)
        if (s) entries.push_back(std::move(*s));
    if (entries.size() < verbs.size())
        ctx.warn(std::to_string(verbs.size() - entries.size()) + " verbs lack aspect predictions and were skipped");
    auto out = open_with_header(a.out, ctx);
    write_lexicon(out, entries, "", {true, true});
    if (!dumps.empty()) {
        auto d = open_with_header(a.dump_graph, ctx);
        for (const auto& s : dumps) d << s;
    }
    *ctx.out << "predicted " << entries.size() << " frames\n";
}

struct BaselineArgs {
    std::string method, train, test, embeddings, out;
    std::size_t k = 3;
    GraphPropConfig gp;
};

void cmd_baseline(const BaselineArgs& a, Context& ctx) {
    if (a.method != "majority" && a.embeddings.empty())
        throw UsageError("--embeddings is required for --method " + a.method);
    const auto train_all = complete_frames(load_lexicon(a.train), ctx, "training");
    auto test = load_verbs(a.test);
    std::vector<ConnotationFrame> pred;

    if (a.method == "majority") {
        const auto m = majority_train(train_all);
        for (const auto& v : test) pred.push_back(m.predict(v));
    } else {
        const auto table = load_embeddings(a.embeddings);
        const auto train = keep_embedded_frames(train_all, table, ctx, "training");
        test = keep_embedded(test, table, ctx, "test");
        if (a.method == "knn") {
            pred.resize(test.size());
            parallel_for(test.size(), ctx.jobs, [&](std::size_t i) { pred[i] = knn_predict(test[i], train, table, a.k); });
        } else {
            a.gp.validate();
            std::vector<std::string> all;
            std::set<std::string> seen;
            for (const auto& f : train)
                if (seen.insert(f.verb).second) all.push_back(f.verb);
            for (const auto& v : test)
                if (seen.insert(v).second) all.push_back(v);
            const auto edges = similarity_edges(all, table, a.gp);
            PerAspect<GraphPropResult> results;
            parallel_for(kNumAspects, ctx.jobs, [&](std::size_t i) {
                std::map<std::string, Polarity> seeds;
                for (const auto& f : train) seeds[f.verb] = f.label(kAspects[i]);
                results[i] = graph_prop(seeds, all, edges, a.gp);
            });
            for (const auto& v : test) {
                ConnotationFrame f;
                f.verb = v;
                for (AspectId asp : kAspects) f.labels[asp] = results[index_of(asp)].labels.at(v);
                pred.push_back(std::move(f));
            }
            for (AspectId asp : kAspects) {
                const auto& r = results[index_of(asp)];
                if (!r.converged) ctx.warn(std::string(aspect_name(asp)) + ": propagation did not converge");
                if (r.unreachable)
                    ctx.log(std::string(aspect_name(asp)) + ": " + std::to_string(r.unreachable) +
                            " verbs unreachable from any seed");
            }
            *ctx.out << "graph: " << all.size() << " verbs, " << edges.size() << " edges\n";
        }
    }
    auto out = open_with_header(a.out, ctx);
    write_lexicon(out, pred, "", false);
    *ctx.out << a.method << ": predicted " << pred.size() << " verbs\n";
}

struct EvalArgs {
    std::string gold, pred, out, name = "system";
    std::vector<std::string> aspects;
    bool strict = false;
};

void cmd_eval(const EvalArgs& a, Context& ctx) {
    auto gold = complete_frames(load_lexicon(a.gold), ctx, "gold");
    auto pred = load_lexicon(a.pred).frames();
    std::vector<AspectId> aspects;
    for (const auto& s : a.aspects) aspects.push_back(parse_aspect(s));
    std::sort(aspects.begin(), aspects.end());
    aspects.erase(std::unique(aspects.begin(), aspects.end()), aspects.end());
    if (aspects.empty()) aspects.assign(kAspects.begin(), kAspects.end());

    if (!a.strict) {
        std::set<std::string> in_gold, in_pred;
        for (const auto& f : gold) in_gold.insert(f.verb);
        for (const auto& f : pred) in_pred.insert(f.verb);
        const auto g0 = gold.size(), p0 = pred.size();
        std::erase_if(gold, [&](const auto& f) { return !in_pred.contains(f.verb); });
        std::erase_if(pred, [&](const auto& f) { return !in_gold.contains(f.verb); });
        if (gold.size() < g0) ctx.warn(std::to_string(g0 - gold.size()) + " gold verbs have no prediction");
        if (pred.size() < p0) ctx.warn(std::to_string(p0 - pred.size()) + " predicted verbs are not in gold");
    }
    const auto report = evaluate(gold, pred, aspects);
    print_report(*ctx.out, report, a.name);
    if (!a.out.empty()) {
        auto out = open_with_header(a.out, ctx);
        write_report_csv(out, report);
    }
}

std::vector<std::pair<std::string, std::string>> read_pairs(const fs::path& path) {
    auto in = open_input(path);
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto fields = split_fields(t, ',');
        if (fields.size() != 2) throw FormatError(path.string() + ":" + std::to_string(lineno) + ": expected agent,theme");
        std::string agent(trim(fields[0])), theme(trim(fields[1]));
        if (pairs.empty() && to_lower(agent) == "agent" && to_lower(theme) == "theme") continue;
        pairs.emplace_back(std::move(agent), std::move(theme));
    }
    if (pairs.empty()) throw InputError(path.string() + ": no pairs");
    return pairs;
}

struct AnalyzeArgs {
    std::vector<std::string> tuples;
    std::string lexicon, pairs, out, aspect = "P_at";
    bool unweighted = false;
};

void cmd_analyze(const AnalyzeArgs& a, Context& ctx) {
    const auto files = expand_patterns(a.tuples);
    const auto scores = verb_scores(load_lexicon(a.lexicon).frames(), parse_aspect(a.aspect));
    const auto pairs = read_pairs(a.pairs);
    const auto weighting = a.unweighted ? Weighting::Unweighted : Weighting::Count;

    auto fresh = [&] {
        std::vector<PairAccumulator> acc;
        for (const auto& [agent, theme] : pairs) acc.emplace_back(agent, theme, weighting);
        return acc;
    };
    std::vector<std::vector<PairAccumulator>> shards(files.size());
    std::vector<TupleStats> stats(files.size());
    parallel_for(files.size(), ctx.jobs, [&](std::size_t i) {
        auto acc = fresh();
        stats[i] = for_each_tuple(files[i], [&](const SVOTuple& t) {
            for (auto& p : acc) p.add(t, scores);
        });
        shards[i] = std::move(acc);
    });
    auto total = fresh();
    std::size_t accepted = 0, malformed = 0;
    for (std::size_t i = 0; i < files.size(); ++i) {
        for (std::size_t p = 0; p < pairs.size(); ++p) total[p].merge(shards[i][p]);
        accepted += stats[i].accepted;
        malformed += stats[i].malformed;
    }
    if (malformed) ctx.warn(std::to_string(malformed) + " malformed tuple lines skipped");

    auto out = open_with_header(a.out, ctx);
    out << "agent,theme,score,support,tuples,skipped_verbs\n";
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        out << csv_field(pairs[p].first) << ',' << csv_field(pairs[p].second) << ',';
        if (total[p].has_support()) {
            const auto r = total[p].result();
            out << format_double(r.score) << ',' << r.support << ',' << r.tuples << ',' << r.skipped_verbs << '\n';
        } else {
            out << ",0,0,0\n";
            ctx.warn("no scored tuples for " + pairs[p].first + " -> " + pairs[p].second);
        }
    }
    *ctx.out << "scored " << pairs.size() << " pairs over " << accepted << " tuples in " << files.size()
             << " files\n";
}

struct ContrastArgs {
    std::vector<std::string> tuples;
    std::string verb, role, leanings, out, word_lexicon;
    std::size_t top = 10;
};

void cmd_contrast(const ContrastArgs& a, Context& ctx) {
    const auto files = expand_patterns(a.tuples);
    const Role role = parse_role(a.role);
    LeaningMap leanings;
    {
        auto in = open_input(a.leanings);
        leanings = read_leanings(in);
    }
    const Leaning sides[] = {Leaning::Left, Leaning::Right};
    std::vector<std::vector<ContrastCounter>> shards(files.size());
    parallel_for(files.size(), ctx.jobs, [&](std::size_t i) {
        std::vector<ContrastCounter> c;
        for (Leaning l : sides) c.emplace_back(a.verb, role, l, leanings);
        for_each_tuple(files[i], [&](const SVOTuple& t) {
            for (auto& x : c) x.add(t);
        });
        shards[i] = std::move(c);
    });
    std::vector<ContrastCounter> total;
    for (Leaning l : sides) total.emplace_back(a.verb, role, l, leanings);
    for (const auto& s : shards)
        for (std::size_t k = 0; k < total.size(); ++k) total[k].merge(s[k]);
    const auto left = total[0].top(a.top), right = total[1].top(a.top);

    auto& o = *ctx.out;
    o << (role == Role::Agent ? "agents" : "themes") << " of '" << a.verb << "'\n";
    const std::size_t rows = std::max(left.size(), right.size());
    std::size_t width = 4;
    for (const auto& p : left) width = std::max(width, p.phrase.size() + 2 + std::to_string(p.count).size() + 2);
    auto cell = [](const std::vector<PhraseCount>& v, std::size_t i) {
        return i < v.size() ? v[i].phrase + " (" + std::to_string(v[i].count) + ")" : std::string();
    };
    o << "rank  " << std::string("left") + std::string(width - 4, ' ') << "  right\n";
    for (std::size_t i = 0; i < rows; ++i) {
        std::string l = cell(left, i);
        l.resize(width, ' ');
        const std::string r = std::to_string(i + 1);
        o << r << std::string(6 - std::min<std::size_t>(r.size(), 5), ' ') << l << "  " << cell(right, i) << '\n';
    }
    if (rows == 0) o << "(no matching tuples)\n";

    if (!a.out.empty()) {
        auto out = open_with_header(a.out, ctx);
        out << "leaning,rank,phrase,count\n";
        for (std::size_t k = 0; k < 2; ++k) {
            const auto& list = k == 0 ? left : right;
            for (std::size_t i = 0; i < list.size(); ++i)
                out << to_string(sides[k]) << ',' << i + 1 << ',' << csv_field(list[i].phrase) << ','
                    << list[i].count << '\n';
        }
    }

    if (!a.word_lexicon.empty()) {
        WordLexicon words;
        {
            auto in = open_input(a.word_lexicon);
            words = read_word_lexicon(in);
        }
        SubjectivityCounter counter(a.verb, role, words);
        for (const auto& f : files) for_each_tuple(f, [&](const SVOTuple& t) { counter.add(t); });
        const auto r = counter.result();
        o << "head-word polarity: +" << format_double(r.percent_positive) << "% -"
          << format_double(r.percent_negative) << "% =" << format_double(r.percent_neutral) << "% over " << r.total
          << " tuples (" << r.unlisted << " unlisted)\n";
        if (r.empty_lexicon) ctx.warn("word lexicon is empty");
    }
}

struct ExportArgs {
    std::string weights, out;
    bool csv = false;
};

void cmd_export_weights(const ExportArgs& a, Context& ctx) {
    const auto w = load_weights(a.weights);
    std::ofstream file;
    std::ostream* out = ctx.out;
    if (!a.out.empty()) {
        file = open_output(a.out);
        out = &file;
    }
    write_comment_header(*out, ctx.header());
    if (a.csv)
        export_weights_csv(*out, w);
    else
        write_weights(*out, w);
}

// ------------------------------------------------------------ selfcheck

FactorGraph random_tree(Rng& rng, std::size_t n) {
    FactorGraph g;
    for (std::size_t i = 0; i < n; ++i) g.add_variable("v" + std::to_string(i));
    auto table = [&](std::size_t size) {
        std::vector<double> t(size);
        for (double& x : t) x = rng.uniform(-2.0, 2.0);
        return t;
    };
    auto id = [](std::size_t i) { return "v" + std::to_string(i); };
    std::size_t f = 0;
    for (std::size_t i = 1; i < n;) {
        const std::size_t j = rng.below(i);
        if (i + 1 < n && rng.uniform() < 0.25) {
            g.add_factor("f" + std::to_string(f++), {id(j), id(i), id(i + 1)}, table(27));
            i += 2;
        } else {
            g.add_factor("f" + std::to_string(f++), {id(j), id(i)}, table(9));
            i += 1;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (rng.uniform() < 0.5) g.add_factor("u" + std::to_string(i), {id(i)}, table(3));
    return g;
}

double max_marginal_diff(const MarginalSet& a, const MarginalSet& b) {
    double worst = 0.0;
    for (std::size_t v = 0; v < a.ids.size(); ++v) {
        const auto& m = b.at(a.ids[v]);
        for (std::size_t k = 0; k < kDomainSize; ++k) worst = std::max(worst, std::abs(a.marginals[v][k] - m[k]));
    }
    return worst;
}

// Worst |analytic - numeric| / max(|analytic|, |numeric|, 1e-3) over all coordinates.
template <class F>
double gradient_error(F&& value, std::vector<double> x, std::span<const double> analytic, double h = 1e-5) {
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double x0 = x[i];
        x[i] = x0 + h;
        const double up = value(x);
        x[i] = x0 - h;
        const double down = value(x);
        x[i] = x0;
        const double numeric = (up - down) / (2 * h);
        const double scale = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-3});
        worst = std::max(worst, std::abs(analytic[i] - numeric) / scale);
    }
    return worst;
}

struct SelfcheckArgs {
    int trials = 50;
};

void cmd_selfcheck(const SelfcheckArgs& a, Context& ctx, int& failures) {
    Rng rng(ctx.seed);
    auto& o = *ctx.out;
    auto report = [&](const std::string& name, double err, double tol) {
        const bool ok = err < tol;
        if (!ok) ++failures;
        o << (ok ? "PASS " : "FAIL ") << name << " max_err=" << err << " tol=" << tol << '\n';
    };

    double tree_err = 0.0, loopy_err = 0.0;
    LoopyOptions tight;
    tight.tol = 1e-10;
    tight.max_iters = 1000;
    for (int t = 0; t < a.trials; ++t) {
        const auto g = random_tree(rng, 1 + rng.below(kMaxEnumerationVariables));
        const auto exact = enumerate_marginals(g);
        tree_err = std::max(tree_err, max_marginal_diff(sum_product_tree(g), exact));
        const auto loopy = loopy_sum_product(g, tight);
        loopy_err = std::max(loopy_err, loopy.converged ? max_marginal_diff(loopy, exact) : INFINITY);
    }
    report("tree sum-product vs enumeration", tree_err, 1e-9);
    report("loopy sum-product on trees", loopy_err, 1e-7);

    double frame_err = 0.0;
    for (int t = 0; t < a.trials; ++t) {
        FrameWeights w;
        for (auto& t : w.emb)
            for (double& x : t) x = rng.uniform(-1.5, 1.5);
        for (Interaction i : kInteractions)
            for (double& x : w.table(i)) x = rng.uniform(-1.5, 1.5);
        std::map<AspectId, Polarity> preds;
        for (AspectId asp : kAspects) preds[asp] = polarity_at(rng.below(3));
        const auto g = build_frame_graph(preds, w);
        frame_err = std::max(frame_err, max_marginal_diff(sum_product_tree(g), enumerate_marginals(g)));
    }
    report("frame graph sum-product vs enumeration", frame_err, 1e-9);

    double maxent_err = 0.0;
    for (int t = 0; t < 20; ++t) {
        const std::size_t dim = 4, n = 15;
        std::vector<std::vector<double>> feats(n);
        std::vector<Polarity> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t d = 0; d < dim; ++d) feats[i].push_back(rng.uniform(-1, 1));
            feats[i].push_back(1.0);
            labels[i] = polarity_at(rng.below(3));
        }
        const MaxEntObjective obj(feats, labels, {rng.uniform(0.5, 2), rng.uniform(0.5, 2), rng.uniform(0.5, 2)},
                                  rng.uniform(0.0, 1.0));
        std::vector<double> w(obj.num_params()), grad(w.size()), scratch(w.size());
        for (double& x : w) x = rng.uniform(-1, 1);
        obj(w, grad);
        maxent_err = std::max(maxent_err,
                              gradient_error([&](const std::vector<double>& x) { return obj(x, scratch); }, w, grad));
    }
    report("aspect model gradient vs finite differences", maxent_err, 1e-4);

    double piece_err = 0.0;
    const auto data = generate_synthetic(agreement_weights(1.0, 1.5), 40, rng.next());
    for (EvidenceMode mode : {EvidenceMode::Hard, EvidenceMode::Soft}) {
        std::vector<FrameExample> examples = data;
        if (mode == EvidenceMode::Soft)
            for (auto& ex : examples) {
                PerAspect<ClassProbs> probs{};
                for (auto& p : probs) {
                    double z = 0.0;
                    for (double& x : p) z += x = rng.uniform(0.05, 1.0);
                    for (double& x : p) x /= z;
                }
                ex.evidence.probs = probs;
            }
        const auto pieces = build_pieces(examples, mode);
        for (int t = 0; t < 20; ++t)
            for (const auto& piece : pieces) {
                std::vector<double> theta(piece.num_params), grad(theta.size()), scratch(theta.size());
                for (double& x : theta) x = rng.uniform(-1, 1);
                piece.objective(theta, grad, 0.01);
                piece_err = std::max(piece_err, gradient_error([&](const std::vector<double>& x) {
                                         return piece.objective(x, scratch, 0.01);
                                     }, theta, grad));
            }
    }
    report("piecewise factor gradients vs finite differences", piece_err, 1e-4);

    o << (failures == 0 ? "selfcheck passed\n" : "selfcheck FAILED\n");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Connotation frame learning, inference and corpus analysis", "cframe"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.fallthrough();
    app.option_defaults()->always_capture_default();
    app.footer("Pipeline: aggregate -> split -> train-aspect -> train-frame -> predict-frame -> eval -> analyze\n"
               "Exit codes: 0 success, 1 usage error, 2 data error.");

    Context ctx;
    ctx.out = &out;
    ctx.err = &err;
    app.add_option("--seed", ctx.seed, "Seed for every random choice");
    app.add_option("--jobs", ctx.jobs, "Worker threads")->check(CLI::PositiveNumber);
    app.add_flag("-v,--verbose", ctx.verbose, "Progress messages on stderr");

    const auto lexicon_help = "Lexicon TSV";
    auto* agg = app.add_subcommand("aggregate", "Aggregate crowd annotations into a gold lexicon");
    AggregateArgs agg_a;
    agg->add_option("--in", agg_a.in, "Annotation CSV")->required();
    agg->add_option("--out", agg_a.out, "Output lexicon TSV")->required();

    auto* agr = app.add_subcommand("agreement", "Inter-annotator agreement report");
    AgreementArgs agr_a;
    agr->add_option("--in", agr_a.in, "Annotation CSV")->required();
    agr->add_option("--or-neutral", agr_a.collapse, "How 'or neutral' answers collapse for alpha")
        ->check(CLI::IsMember({"polar", "neutral"}));
    agr->add_option("--out", agr_a.out, "Also write the report here");

    auto* spl = app.add_subcommand("split", "Seeded train/dev/test split of a verb list or lexicon");
    SplitArgs spl_a;
    spl->add_option("--verbs", spl_a.verbs, "Verb list or lexicon TSV")->required();
    spl->add_option("--out", spl_a.out, "Output directory for train.tsv, dev.tsv, test.tsv")->default_val("splits");
    spl->add_option("--sizes", spl_a.sizes, "train,dev,test counts")->delimiter(',');

    auto* ta = app.add_subcommand("train-aspect", "Train the nine aspect-level classifiers");
    TrainAspectArgs ta_a;
    ta->add_option("--train", ta_a.train, lexicon_help)->required();
    ta->add_option("--dev", ta_a.dev, "Dev lexicon for class-weight tuning");
    ta->add_option("--embeddings", ta_a.embeddings, "Embedding text file")->required();
    ta->add_option("--out", ta_a.out, "Model directory")->required();
    ta->add_option("--l2", ta_a.l2, "L2 strength")->check(CLI::NonNegativeNumber);
    ta->add_option("--max-iters", ta_a.max_iters, "Optimizer iterations")->check(CLI::NonNegativeNumber);
    ta->add_option("--tol", ta_a.tol, "Gradient infinity-norm tolerance")->check(CLI::PositiveNumber);
    ta->add_option("--optimizer", ta_a.optimizer)->check(CLI::IsMember({"lbfgs", "gd"}));
    ta->add_option("--class-weights", ta_a.weighting)->check(CLI::IsMember({"uniform", "inverse", "grid"}));

    auto* pa = app.add_subcommand("predict-aspect", "Aspect-level labels and probabilities");
    PredictAspectArgs pa_a;
    pa->add_option("--models", pa_a.models, "Model directory")->required();
    pa->add_option("--verbs", pa_a.verbs, "Verb list or lexicon")->required();
    pa->add_option("--embeddings", pa_a.embeddings, "Embedding text file")->required();
    pa->add_option("--out", pa_a.out, "Output lexicon TSV")->required();

    auto* tf = app.add_subcommand("train-frame", "Train frame-level factor weights");
    TrainFrameArgs tf_a;
    tf->add_option("--train", tf_a.train, lexicon_help)->required();
    tf->add_option("--dev", tf_a.dev, "Dev lexicon; enables a learning-rate x l2 grid");
    tf->add_option("--aspect-models", tf_a.aspect_models, "Aspect model directory");
    tf->add_option("--preds", tf_a.preds, "Precomputed aspect predictions (lexicon TSV)");
    tf->add_option("--embeddings", tf_a.embeddings, "Embedding text file");
    tf->add_option("--out", tf_a.out, "Weights file")->required();
    tf->add_option("--lr", tf_a.lr, "SGD learning rate")->check(CLI::PositiveNumber);
    tf->add_option("--epochs", tf_a.epochs)->check(CLI::NonNegativeNumber);
    tf->add_option("--l2", tf_a.l2)->check(CLI::NonNegativeNumber);
    tf->add_flag("--no-shuffle", tf_a.no_shuffle);
    tf->add_flag("--full-batch", tf_a.full_batch);
    tf->add_option("--evidence", tf_a.evidence)->check(CLI::IsMember({"hard", "soft"}));

    auto* pf = app.add_subcommand("predict-frame", "Frame-level inference");
    PredictFrameArgs pf_a;
    pf->add_option("--verbs", pf_a.verbs, "Verb list or lexicon")->required();
    pf->add_option("--aspect-models", pf_a.aspect_models, "Aspect model directory");
    pf->add_option("--preds", pf_a.preds, "Precomputed aspect predictions (lexicon TSV)");
    pf->add_option("--embeddings", pf_a.embeddings, "Embedding text file");
    pf->add_option("--weights", pf_a.weights, "Frame weights file")->required();
    pf->add_option("--out", pf_a.out, "Output lexicon TSV")->required();
    pf->add_option("--dump-graph", pf_a.dump_graph, "Write every frame graph here");
    pf->add_option("--evidence", pf_a.evidence)->check(CLI::IsMember({"hard", "soft"}));

    auto* bl = app.add_subcommand("baseline", "Majority, nearest-neighbor or graph-propagation baselines");
    BaselineArgs bl_a;
    bl->add_option("--method", bl_a.method)->required()->check(CLI::IsMember({"majority", "knn", "graphprop"}));
    bl->add_option("--train", bl_a.train, lexicon_help)->required();
    bl->add_option("--test", bl_a.test, "Verb list or lexicon")->required();
    bl->add_option("--embeddings", bl_a.embeddings, "Embedding text file");
    bl->add_option("--out", bl_a.out, "Output lexicon TSV")->required();
    bl->add_option("--k", bl_a.k, "Neighbors for knn")->check(CLI::PositiveNumber);
    bl->add_option("--top-k", bl_a.gp.top_k, "Similarity edges per verb")->check(CLI::PositiveNumber);
    bl->add_option("--sim-floor", bl_a.gp.sim_floor, "Minimum cosine for an edge");
    bl->add_option("--potential-scale", bl_a.gp.potential_scale);
    bl->add_option("--seed-strength", bl_a.gp.seed_strength);

    auto* ev = app.add_subcommand("eval", "Accuracy and macro-F1 per aspect");
    EvalArgs ev_a;
    ev->add_option("--gold", ev_a.gold, lexicon_help)->required();
    ev->add_option("--pred", ev_a.pred, lexicon_help)->required();
    ev->add_option("--aspects", ev_a.aspects, "Subset, comma separated")->delimiter(',');
    ev->add_option("--out", ev_a.out, "CSV report");
    ev->add_option("--name", ev_a.name, "System name in the table");
    ev->add_flag("--strict", ev_a.strict, "Fail when gold and predicted verb sets differ");

    auto* an = app.add_subcommand("analyze", "Entity-pair sentiment over SVO tuples");
    AnalyzeArgs an_a;
    an->add_option("--tuples", an_a.tuples, "Tuple TSV files or patterns")->required();
    an->add_option("--lexicon", an_a.lexicon, lexicon_help)->required();
    an->add_option("--pairs", an_a.pairs, "CSV of agent,theme")->required();
    an->add_option("--out", an_a.out, "Output CSV")->required();
    an->add_option("--aspect", an_a.aspect, "Aspect supplying verb scores");
    an->add_flag("--unweighted", an_a.unweighted, "Each tuple counts once");

    auto* co = app.add_subcommand("contrast", "Top arguments of a verb by source leaning");
    ContrastArgs co_a;
    co->add_option("--tuples", co_a.tuples, "Tuple TSV files or patterns")->required();
    co->add_option("--verb", co_a.verb)->required();
    co->add_option("--role", co_a.role)->default_val("theme");
    co->add_option("--leanings", co_a.leanings, "source<TAB>left|right")->required();
    co->add_option("--top", co_a.top)->check(CLI::PositiveNumber);
    co->add_option("--out", co_a.out, "Output CSV");
    co->add_option("--word-lexicon", co_a.word_lexicon, "word<TAB>polarity; adds head-word composition");

    auto* ex = app.add_subcommand("export-weights", "Print frame weights as text or CSV tables");
    ExportArgs ex_a;
    ex->add_option("--weights", ex_a.weights, "Frame weights file")->required();
    ex->add_flag("--csv", ex_a.csv, "3x3 CSV tables");
    ex->add_option("--out", ex_a.out, "Output file (stdout when absent)");

    auto* sc = app.add_subcommand("selfcheck", "Inference and gradient oracles");
    SelfcheckArgs sc_a;
    sc->add_option("--trials", sc_a.trials, "Random graphs per check")->check(CLI::PositiveNumber);

    if (!args.empty() && !args.front().empty() && args.front().front() != '-') {
        const auto subs = app.get_subcommands([](const CLI::App*) { return true; });
        if (std::none_of(subs.begin(), subs.end(), [&](const CLI::App* s) { return s->get_name() == args.front(); })) {
            err << "unknown subcommand '" << args.front() << "'\n" << app.help();
            return kExitUsage;
        }
    }

    std::vector<const char*> argv = {"cframe"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    ctx.root = &app;
    ctx.sub = app.get_subcommands().front();
    try {
        const auto* s = ctx.sub;
        if (s == agg) cmd_aggregate(agg_a, ctx);
        else if (s == agr) cmd_agreement(agr_a, ctx);
        else if (s == spl) cmd_split(spl_a, ctx);
        else if (s == ta) cmd_train_aspect(ta_a, ctx);
        else if (s == pa) cmd_predict_aspect(pa_a, ctx);
        else if (s == tf) cmd_train_frame(tf_a, ctx);
        else if (s == pf) cmd_predict_frame(pf_a, ctx);
        else if (s == bl) cmd_baseline(bl_a, ctx);
        else if (s == ev) cmd_eval(ev_a, ctx);
        else if (s == an) cmd_analyze(an_a, ctx);
        else if (s == co) cmd_contrast(co_a, ctx);
        else if (s == ex) cmd_export_weights(ex_a, ctx);
        else if (s == sc) {
            int failures = 0;
            cmd_selfcheck(sc_a, ctx, failures);
            return failures == 0 ? kExitOk : kExitData;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\nRun with --help for more information.\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitOk;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args);
}

}  // namespace cframe::cli

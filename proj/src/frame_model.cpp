#include "cframe/frame_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

#include "cframe/errors.hpp"
#include "cframe/rng.hpp"
#include "cframe/text_io.hpp"

namespace cframe {

namespace {

using A = AspectId;

constexpr std::array<A, 2> kScopePV_a = {A::P_wa, A::V_a};
constexpr std::array<A, 2> kScopePV_t = {A::P_wt, A::V_t};
constexpr std::array<A, 2> kScopePE_a = {A::P_at, A::E_a};
constexpr std::array<A, 2> kScopePE_t = {A::P_at, A::E_t};
constexpr std::array<A, 2> kScopeES_a = {A::E_a, A::S_a};
constexpr std::array<A, 2> kScopeES_t = {A::E_t, A::S_t};
constexpr std::array<A, 3> kScopePT = {A::P_wt, A::P_wa, A::P_at};

std::string unary_name(AspectId a) { return "emb:" + std::string(aspect_name(a)); }

std::vector<std::string> scope_ids(Interaction i) {
    std::vector<std::string> ids;
    for (AspectId a : interaction_scope(i)) ids.emplace_back(aspect_name(a));
    return ids;
}

// Log-potential over node polarity for one aspect's evidence.
std::vector<double> unary_table(const Table3x3& theta, const AspectEvidence& ev, AspectId a, EvidenceMode mode) {
    std::vector<double> lp(kNumPolarities, 0.0);
    if (mode == EvidenceMode::Hard) {
        const std::size_t r = index_of(ev.labels[index_of(a)]);
        for (std::size_t y = 0; y < kNumPolarities; ++y) lp[y] = theta[r * 3 + y];
    } else {
        if (!ev.probs) throw InputError("soft evidence requires aspect-level probabilities");
        const ClassProbs& q = (*ev.probs)[index_of(a)];
        for (std::size_t y = 0; y < kNumPolarities; ++y)
            for (std::size_t r = 0; r < kNumPolarities; ++r) lp[y] += q[r] * theta[r * 3 + y];
    }
    return lp;
}

std::size_t gold_index(const ConnotationFrame& gold, std::span<const AspectId> scope) {
    std::size_t t = 0;
    for (AspectId a : scope) t = t * kNumPolarities + index_of(gold.label(a));
    return t;
}

LocalPiece::Design identity_design(std::size_t outcomes) {
    LocalPiece::Design d(outcomes);
    for (std::size_t y = 0; y < outcomes; ++y) d[y] = {{y, 1.0}};
    return d;
}

}  // namespace

std::string_view interaction_name(Interaction i) noexcept {
    switch (i) {
        case Interaction::PV_a: return "PV_a";
        case Interaction::PV_t: return "PV_t";
        case Interaction::PE_a: return "PE_a";
        case Interaction::PE_t: return "PE_t";
        case Interaction::ES_a: return "ES_a";
        case Interaction::ES_t: return "ES_t";
        case Interaction::PT: return "PT";
    }
    return "?";
}

std::span<const AspectId> interaction_scope(Interaction i) noexcept {
    switch (i) {
        case Interaction::PV_a: return kScopePV_a;
        case Interaction::PV_t: return kScopePV_t;
        case Interaction::PE_a: return kScopePE_a;
        case Interaction::PE_t: return kScopePE_t;
        case Interaction::ES_a: return kScopeES_a;
        case Interaction::ES_t: return kScopeES_t;
        case Interaction::PT: return kScopePT;
    }
    return {};
}

std::span<double> FrameWeights::table(Interaction i) noexcept {
    switch (i) {
        case Interaction::PV_a: return pv_a;
        case Interaction::PV_t: return pv_t;
        case Interaction::PE_a: return pe_a;
        case Interaction::PE_t: return pe_t;
        case Interaction::ES_a: return es_a;
        case Interaction::ES_t: return es_t;
        case Interaction::PT: return pt;
    }
    return {};
}

std::span<const double> FrameWeights::table(Interaction i) const noexcept {
    return const_cast<FrameWeights*>(this)->table(i);
}

bool FrameWeights::all_finite() const noexcept {
    auto finite = [](std::span<const double> t) {
        return std::all_of(t.begin(), t.end(), [](double v) { return std::isfinite(v); });
    };
    for (const auto& e : emb)
        if (!finite(e)) return false;
    for (Interaction i : kInteractions)
        if (!finite(table(i))) return false;
    return true;
}

FrameWeights agreement_weights(double interaction, double evidence) {
    FrameWeights w;
    for (auto& e : w.emb)
        for (std::size_t p = 0; p < 3; ++p) e[p * 3 + p] = evidence;
    for (Interaction i : kInteractions) {
        if (i == Interaction::PT) continue;
        auto t = w.table(i);
        for (std::size_t p = 0; p < 3; ++p) t[p * 3 + p] = interaction;
    }
    constexpr std::size_t neg = 0, pos = 2;
    for (std::size_t wa : {neg, pos})
        for (std::size_t at : {neg, pos}) {
            const std::size_t wt = wa == at ? pos : neg;
            w.pt[wt * 9 + wa * 3 + at] = interaction;
        }
    return w;
}

AspectEvidence evidence_from_labels(const std::map<AspectId, Polarity>& labels) {
    AspectEvidence ev;
    for (AspectId a : kAspects) {
        auto it = labels.find(a);
        if (it == labels.end()) throw InputError("missing aspect prediction for " + std::string(aspect_name(a)));
        ev.labels[index_of(a)] = it->second;
    }
    return ev;
}

FactorGraph build_interaction_graph(const FrameWeights& weights) {
    FactorGraph g;
    for (AspectId a : kAspects) g.add_variable(std::string(aspect_name(a)));
    for (Interaction i : kInteractions) {
        const auto t = weights.table(i);
        const auto ids = scope_ids(i);
        g.add_factor(std::string(interaction_name(i)), ids, std::vector<double>(t.begin(), t.end()));
    }
    return g;
}

FactorGraph build_frame_graph(const AspectEvidence& evidence, const FrameWeights& weights, EvidenceMode mode) {
    FactorGraph g = build_interaction_graph(weights);
    for (AspectId a : kAspects) {
        const std::string id(aspect_name(a));
        g.add_factor(unary_name(a), {id}, unary_table(weights.emb[index_of(a)], evidence, a, mode));
    }
    if (!g.is_acyclic()) throw StructureError("frame graph is not a tree");
    return g;
}

FactorGraph build_frame_graph(const std::map<AspectId, Polarity>& aspect_preds, const FrameWeights& weights) {
    return build_frame_graph(evidence_from_labels(aspect_preds), weights, EvidenceMode::Hard);
}

void SgdConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw InputError("learning_rate must be > 0");
    if (epochs < 0) throw InputError("epochs must be >= 0");
    if (!(l2 >= 0.0)) throw InputError("l2 must be >= 0");
}

double LocalPiece::objective(std::span<const double> theta, std::span<double> grad, double l2) const {
    if (theta.size() != num_params || grad.size() != num_params) throw ShapeError("piece parameter size mismatch");
    std::fill(grad.begin(), grad.end(), 0.0);
    double total = 0.0;
    std::vector<double> scores;
    for (const auto& ex : examples) {
        const Design& d = designs[ex.design];
        scores.assign(d.size(), 0.0);
        for (std::size_t y = 0; y < d.size(); ++y)
            for (const auto& [j, c] : d[y]) scores[y] += c * theta[j];
        const double m = *std::max_element(scores.begin(), scores.end());
        double z = 0.0;
        for (double s : scores) z += std::exp(s - m);
        const double lse = m + std::log(z);
        total += scores[ex.gold] - lse;
        for (const auto& [j, c] : d[ex.gold]) grad[j] += c;
        for (std::size_t y = 0; y < d.size(); ++y) {
            const double p = std::exp(scores[y] - lse);
            for (const auto& [j, c] : d[y]) grad[j] -= p * c;
        }
    }
    for (std::size_t j = 0; j < num_params; ++j) {
        total -= 0.5 * l2 * theta[j] * theta[j];
        grad[j] -= l2 * theta[j];
    }
    return total;
}

std::vector<LocalPiece> build_pieces(std::span<const FrameExample> train, EvidenceMode mode) {
    std::vector<LocalPiece> pieces;
    pieces.reserve(kNumAspects + kNumInteractions);
    for (AspectId a : kAspects) {
        LocalPiece p;
        p.name = unary_name(a);
        p.num_params = 9;
        if (mode == EvidenceMode::Hard) {
            for (std::size_t r = 0; r < 3; ++r) {
                LocalPiece::Design d(3);
                for (std::size_t y = 0; y < 3; ++y) d[y] = {{r * 3 + y, 1.0}};
                p.designs.push_back(std::move(d));
            }
        }
        for (const auto& ex : train) {
            const std::size_t gold = index_of(ex.gold.label(a));
            if (mode == EvidenceMode::Hard) {
                p.examples.push_back({index_of(ex.evidence.labels[index_of(a)]), gold});
            } else {
                if (!ex.evidence.probs) throw InputError("soft evidence requires aspect-level probabilities");
                const ClassProbs& q = (*ex.evidence.probs)[index_of(a)];
                LocalPiece::Design d(3);
                for (std::size_t y = 0; y < 3; ++y)
                    for (std::size_t r = 0; r < 3; ++r) d[y].push_back({r * 3 + y, q[r]});
                p.examples.push_back({p.designs.size(), gold});
                p.designs.push_back(std::move(d));
            }
        }
        pieces.push_back(std::move(p));
    }
    for (Interaction i : kInteractions) {
        LocalPiece p;
        p.name = std::string(interaction_name(i));
        const auto scope = interaction_scope(i);
        p.num_params = scope.size() == 3 ? 27 : 9;
        p.designs.push_back(identity_design(p.num_params));
        for (const auto& ex : train) p.examples.push_back({0, gold_index(ex.gold, scope)});
        pieces.push_back(std::move(p));
    }
    return pieces;
}

std::span<double> piece_parameters(FrameWeights& weights, std::size_t index) {
    if (index < kNumAspects) return weights.emb[index];
    if (index < kNumAspects + kNumInteractions) return weights.table(kInteractions[index - kNumAspects]);
    throw InputError("piece index out of range");
}

FrameWeights train_piecewise(std::span<const FrameExample> train, const SgdConfig& cfg, EvidenceMode mode,
                             PiecewiseTrace* trace) {
    cfg.validate();
    if (train.empty()) throw InputError("piecewise training needs at least one example");
    for (const auto& ex : train)
        if (!ex.gold.complete()) throw InputError("gold frame for '" + ex.gold.verb + "' is incomplete");

    const auto pieces = build_pieces(train, mode);
    FrameWeights weights;
    if (trace) trace->objectives.assign(pieces.size(), {});
    const double n = static_cast<double>(train.size());

    for (std::size_t k = 0; k < pieces.size(); ++k) {
        const LocalPiece& piece = pieces[k];
        std::span<double> theta = piece_parameters(weights, k);
        std::vector<double> grad(piece.num_params);
        Rng rng(cfg.seed + 0x9E3779B97F4A7C15ULL * (k + 1));
        std::vector<std::size_t> order(piece.examples.size());
        std::iota(order.begin(), order.end(), 0);

        // Single-example piece used for per-example stochastic steps.
        LocalPiece one{piece.name, piece.num_params, {}, {}};
        auto record = [&] {
            if (trace) trace->objectives[k].push_back(piece.objective(theta, grad, cfg.l2));
        };
        record();
        for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
            if (cfg.full_batch) {
                piece.objective(theta, grad, cfg.l2);
                for (std::size_t j = 0; j < theta.size(); ++j) theta[j] += cfg.learning_rate / n * grad[j];
            } else {
                if (cfg.shuffle) rng.shuffle(order);
                for (std::size_t i : order) {
                    const auto& ex = piece.examples[i];
                    one.designs.assign(1, piece.designs[ex.design]);
                    one.examples.assign(1, {0, ex.gold});
                    one.objective(theta, grad, cfg.l2 / n);
                    for (std::size_t j = 0; j < theta.size(); ++j) theta[j] += cfg.learning_rate * grad[j];
                }
            }
            record();
        }
    }
    return weights;
}

ConnotationFrame decode_frame(std::string verb, const AspectEvidence& evidence, const FrameWeights& weights,
                              EvidenceMode mode) {
    const FactorGraph g = build_frame_graph(evidence, weights, mode);
    const MarginalSet m = sum_product_tree(g);
    const auto labels = max_marginal_decode(m);
    ConnotationFrame frame;
    frame.verb = std::move(verb);
    for (AspectId a : kAspects) {
        const std::string id(aspect_name(a));
        frame.labels[a] = labels.at(id);
        const Distribution& d = m.at(id);
        frame.scores[a] = d[index_of(Polarity::Positive)] - d[index_of(Polarity::Negative)];
    }
    return frame;
}

AspectEvidence aspect_evidence(std::string_view verb, const AspectModels& models, const EmbeddingTable& table) {
    const std::vector<double> x = featurize(verb, table);
    AspectEvidence ev;
    ev.probs.emplace();
    for (AspectId a : kAspects) {
        const ClassProbs p = predict_probs(models[index_of(a)], x);
        (*ev.probs)[index_of(a)] = p;
        ev.labels[index_of(a)] = argmax_polarity(p);
    }
    return ev;
}

ConnotationFrame predict_frame(std::string_view verb, const AspectModels& models, const EmbeddingTable& table,
                               const FrameWeights& weights, EvidenceMode mode) {
    return decode_frame(std::string(verb), aspect_evidence(verb, models, table), weights, mode);
}

std::vector<FrameExample> generate_synthetic(const FrameWeights& weights, std::size_t n, std::uint64_t seed,
                                             const SyntheticOptions& options) {
    if (n == 0) throw InputError("synthetic sample size must be >= 1");
    if (!(options.noise >= 0.0 && options.noise <= 1.0)) throw InputError("noise must lie in [0, 1]");
    const FactorGraph g = build_interaction_graph(weights);
    const std::vector<double> scores = joint_log_scores(g);
    const double m = *std::max_element(scores.begin(), scores.end());
    std::vector<double> cumulative(scores.size());
    double total = 0.0;
    for (std::size_t s = 0; s < scores.size(); ++s) cumulative[s] = total += std::exp(scores[s] - m);

    Rng rng(seed);
    std::vector<FrameExample> out;
    out.reserve(n);
    const int width = static_cast<int>(std::to_string(n).size());
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform() * total;
        std::size_t state = static_cast<std::size_t>(
            std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        state = std::min(state, cumulative.size() - 1);

        FrameExample ex;
        char name[64];
        std::snprintf(name, sizeof name, "%s%0*zu", options.verb_prefix.c_str(), width, i);
        ex.gold.verb = name;
        std::size_t rest = state;
        PerAspect<Polarity> gold{};
        for (std::size_t k = kNumAspects; k-- > 0;) {
            gold[k] = kPolarities[rest % kNumPolarities];
            rest /= kNumPolarities;
        }
        for (AspectId a : kAspects) {
            const Polarity y = gold[index_of(a)];
            ex.gold.labels[a] = y;
            Polarity pred = y;
            if (rng.uniform() < options.noise) {
                const std::size_t shift = 1 + static_cast<std::size_t>(rng.below(2));
                pred = kPolarities[(index_of(y) + shift) % kNumPolarities];
            }
            ex.evidence.labels[index_of(a)] = pred;
        }
        out.push_back(std::move(ex));
    }
    return out;
}

void write_weights(std::ostream& out, const FrameWeights& weights, std::string_view header) {
    write_comment_header(out, header, "# ");
    out << "# emb:<aspect> <prediction> <node> <value>\n";
    for (AspectId a : kAspects)
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t y = 0; y < 3; ++y)
                out << unary_name(a) << ' ' << to_string(kPolarities[r]) << ' ' << to_string(kPolarities[y]) << ' '
                    << format_double(weights.emb[index_of(a)][r * 3 + y]) << '\n';
    for (Interaction i : kInteractions) {
        const auto scope = interaction_scope(i);
        out << "# " << interaction_name(i);
        for (AspectId a : scope) out << ' ' << aspect_name(a);
        out << " <value>\n";
        const auto t = weights.table(i);
        for (std::size_t idx = 0; idx < t.size(); ++idx) {
            out << interaction_name(i);
            std::size_t div = t.size() / 3;
            for (std::size_t k = 0; k < scope.size(); ++k, div /= 3)
                out << ' ' << to_string(kPolarities[(idx / div) % 3]);
            out << ' ' << format_double(t[idx]) << '\n';
        }
    }
}

FrameWeights read_weights(std::istream& in) {
    FrameWeights w;
    std::set<std::pair<std::string, std::size_t>> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        std::istringstream fields{std::string(body)};
        std::vector<std::string> tok;
        for (std::string t; fields >> t;) tok.push_back(t);
        auto fail = [&](const std::string& why) {
            return FormatError("weights line " + std::to_string(line_no) + ": " + why);
        };
        if (tok.size() < 3) throw fail("too few fields");
        std::span<double> table;
        std::size_t arity = 2;
        const std::string& name = tok.front();
        if (name.rfind("emb:", 0) == 0) {
            table = w.emb[index_of(parse_aspect(std::string_view(name).substr(4)))];
        } else {
            bool found = false;
            for (Interaction i : kInteractions)
                if (interaction_name(i) == name) {
                    table = w.table(i);
                    arity = interaction_scope(i).size();
                    found = true;
                }
            if (!found) throw fail("unknown table '" + name + "'");
        }
        if (tok.size() != arity + 2) throw fail("expected " + std::to_string(arity) + " index labels and a value");
        std::size_t idx = 0;
        try {
            for (std::size_t k = 0; k < arity; ++k) idx = idx * 3 + index_of(parse_polarity(tok[1 + k]));
        } catch (const FormatError& e) {
            throw fail(e.what());
        }
        double value = 0.0;
        try {
            std::size_t used = 0;
            value = std::stod(tok.back(), &used);
            if (used != tok.back().size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw fail("bad value '" + tok.back() + "'");
        }
        if (!std::isfinite(value)) throw fail("non-finite value");
        if (!seen.emplace(name, idx).second) throw fail("duplicate entry");
        table[idx] = value;
    }
    if (seen.size() != FrameWeights::kNumParams)
        throw FormatError("weights file has " + std::to_string(seen.size()) + " entries, expected " +
                          std::to_string(FrameWeights::kNumParams));
    return w;
}

void save_weights(const FrameWeights& weights, const std::filesystem::path& path, std::string_view header) {
    auto out = open_output(path);
    write_weights(out, weights, header);
}

FrameWeights load_weights(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_weights(in);
}

void export_weights_csv(std::ostream& out, const FrameWeights& weights) {
    out << "table,row_var,col_var,row,-,=,+\n";
    auto block = [&out](std::string_view table, std::string_view row_var, std::string_view col_var,
                        std::span<const double> t) {
        for (std::size_t r = 0; r < 3; ++r) {
            out << table << ',' << row_var << ',' << col_var << ',' << to_string(kPolarities[r]);
            for (std::size_t c = 0; c < 3; ++c) out << ',' << format_double(t[r * 3 + c]);
            out << '\n';
        }
    };
    for (AspectId a : kAspects) block(unary_name(a), "prediction", aspect_name(a), weights.emb[index_of(a)]);
    for (Interaction i : kInteractions) {
        const auto scope = interaction_scope(i);
        if (scope.size() == 2) {
            block(interaction_name(i), aspect_name(scope[0]), aspect_name(scope[1]), weights.table(i));
            continue;
        }
        for (std::size_t wt = 0; wt < 3; ++wt) {
            const std::string name = std::string(interaction_name(i)) + "[P_wt=" + std::string(to_string(kPolarities[wt])) + "]";
            block(name, aspect_name(scope[1]), aspect_name(scope[2]), std::span<const double>(weights.pt).subspan(wt * 9, 9));
        }
    }
}

}  // namespace cframe

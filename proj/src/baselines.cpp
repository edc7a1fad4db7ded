#include "cframe/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>

#include "cframe/errors.hpp"

namespace cframe {

namespace {

Polarity vote_winner(const std::array<std::size_t, kNumPolarities>& counts, std::optional<Polarity> nearest) {
    const std::size_t top = *std::max_element(counts.begin(), counts.end());
    if (nearest && counts[index_of(*nearest)] == top) return *nearest;
    for (Polarity p : kPolarities)
        if (counts[index_of(p)] == top) return p;
    return Polarity::Neutral;
}

}  // namespace

ConnotationFrame MajorityModel::predict(std::string verb) const {
    ConnotationFrame f;
    f.verb = std::move(verb);
    for (AspectId a : kAspects) f.labels[a] = labels[index_of(a)];
    return f;
}

MajorityModel majority_train(std::span<const ConnotationFrame> train) {
    if (train.empty()) throw InputError("majority baseline needs training data");
    MajorityModel m;
    for (AspectId a : kAspects) {
        std::array<std::size_t, kNumPolarities> counts{};
        for (const auto& f : train) ++counts[index_of(f.label(a))];
        m.labels[index_of(a)] = vote_winner(counts, std::nullopt);
    }
    return m;
}

ConnotationFrame knn_predict(std::string_view verb, std::span<const ConnotationFrame> train,
                             const EmbeddingTable& table, std::size_t k) {
    if (k == 0) throw InputError("k must be positive");
    if (!table.contains(verb)) throw LookupError("no embedding for '" + std::string(verb) + "'");
    std::map<std::string, const ConnotationFrame*> by_verb;
    std::vector<std::string> candidates;
    for (const auto& f : train) {
        if (f.verb == verb || !table.contains(f.verb)) continue;
        if (by_verb.emplace(f.verb, &f).second) candidates.push_back(f.verb);
    }
    if (candidates.size() < k)
        throw InputError("knn needs at least " + std::to_string(k) + " embedded training verbs, found " +
                         std::to_string(candidates.size()));
    const auto neighbors = nearest_neighbors(verb, k, candidates, table);

    ConnotationFrame out;
    out.verb = std::string(verb);
    for (AspectId a : kAspects) {
        std::array<std::size_t, kNumPolarities> counts{};
        for (const auto& n : neighbors) ++counts[index_of(by_verb.at(n.word)->label(a))];
        out.labels[a] = vote_winner(counts, by_verb.at(neighbors.front().word)->label(a));
    }
    return out;
}

void GraphPropConfig::validate() const {
    if (top_k < 1) throw InputError("top_k must be >= 1");
    if (!(potential_scale > 0.0)) throw InputError("potential_scale must be > 0");
    if (!std::isfinite(sim_floor)) throw InputError("sim_floor must be finite");
}

std::vector<SimilarityEdge> similarity_edges(std::span<const std::string> verbs, const EmbeddingTable& table,
                                             const GraphPropConfig& cfg) {
    cfg.validate();
    const std::size_t n = verbs.size();
    std::vector<std::span<const double>> vecs;
    vecs.reserve(n);
    for (const auto& v : verbs) vecs.push_back(table.at(v));

    std::map<std::pair<std::size_t, std::size_t>, double> pairs;
    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t i = 0; i < n; ++i) {
        scored.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            double c = 0.0;
            try {
                c = cosine(vecs[i], vecs[j]);
            } catch (const DomainError&) {
                continue;  // zero vector: no similarity defined
            }
            if (c >= cfg.sim_floor) scored.emplace_back(c, j);
        }
        auto better = [&verbs](const auto& x, const auto& y) {
            if (x.first != y.first) return x.first > y.first;
            return verbs[x.second] < verbs[y.second];
        };
        const std::size_t keep = std::min(cfg.top_k, scored.size());
        std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(), better);
        for (std::size_t r = 0; r < keep; ++r)
            pairs.emplace(std::minmax(i, scored[r].second), scored[r].first);
    }
    std::vector<SimilarityEdge> edges;
    edges.reserve(pairs.size());
    for (const auto& [key, c] : pairs) edges.push_back({key.first, key.second, c});
    return edges;
}

GraphPropResult graph_prop(const std::map<std::string, Polarity>& seeds, std::span<const std::string> all_verbs,
                           std::span<const SimilarityEdge> edges, const GraphPropConfig& cfg) {
    cfg.validate();
    if (seeds.empty()) throw InputError("graph propagation needs at least one seed");
    const std::size_t n = all_verbs.size();

    FactorGraph g;
    for (const auto& v : all_verbs) g.add_variable(v);
    std::vector<bool> seeded(n, false);
    for (const auto& [verb, label] : seeds) {
        const std::size_t i = g.variable_index(verb);
        seeded[i] = true;
        std::vector<double> lp(kNumPolarities, 0.0);
        lp[index_of(label)] = cfg.seed_strength;
        g.add_factor("seed:" + verb, {std::string_view(verb)}, std::move(lp));
    }

    std::vector<std::size_t> component(n);
    std::iota(component.begin(), component.end(), 0);
    auto root = [&component](std::size_t x) {
        while (component[x] != x) x = component[x] = component[component[x]];
        return x;
    };
    for (const auto& e : edges) {
        if (e.a >= n || e.b >= n) throw InputError("similarity edge refers to an unknown verb");
        std::vector<double> lp(kNumPolarities * kNumPolarities, 0.0);
        for (std::size_t p = 0; p < kNumPolarities; ++p) lp[p * kNumPolarities + p] = cfg.potential_scale * e.cosine;
        g.add_factor("sim:" + all_verbs[e.a] + "|" + all_verbs[e.b],
                     {std::string_view(all_verbs[e.a]), std::string_view(all_verbs[e.b])}, std::move(lp));
        const std::size_t ra = root(e.a), rb = root(e.b);
        if (ra != rb) component[std::max(ra, rb)] = std::min(ra, rb);
    }
    std::set<std::size_t> seeded_components;
    for (std::size_t i = 0; i < n; ++i)
        if (seeded[i]) seeded_components.insert(root(i));

    const MarginalSet m = loopy_sum_product(g, cfg.loopy);
    const auto decoded = max_marginal_decode(m);
    GraphPropResult out;
    out.converged = m.converged;
    for (std::size_t i = 0; i < n; ++i) {
        if (!seeded_components.contains(root(i))) {
            out.labels[all_verbs[i]] = Polarity::Neutral;
            ++out.unreachable;
        } else {
            out.labels[all_verbs[i]] = decoded.at(all_verbs[i]);
        }
    }
    return out;
}

GraphPropResult graph_prop([[maybe_unused]] AspectId aspect, const std::map<std::string, Polarity>& seeds,
                           std::span<const std::string> all_verbs, const EmbeddingTable& table,
                           const GraphPropConfig& cfg) {
    std::set<std::string> verbs(all_verbs.begin(), all_verbs.end());
    for (const auto& [v, _] : seeds) verbs.insert(v);
    const std::vector<std::string> ordered(verbs.begin(), verbs.end());
    const auto edges = similarity_edges(ordered, table, cfg);
    return graph_prop(seeds, ordered, edges, cfg);
}

}  // namespace cframe

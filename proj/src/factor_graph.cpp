#include "cframe/factor_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <ranges>

#include "cframe/errors.hpp"
#include "cframe/text_io.hpp"

namespace cframe {

namespace {

constexpr Distribution kUniform = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};

std::size_t pow3(std::size_t n) {
    std::size_t r = 1;
    while (n-- > 0) r *= kDomainSize;
    return r;
}

void normalize(Distribution& d) {
    const double s = d[0] + d[1] + d[2];
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("message underflow during inference");
    for (double& v : d) v /= s;
}

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent_[std::max(a, b)] = std::min(a, b);
        return true;
    }

private:
    std::vector<std::size_t> parent_;
};

// Edge-indexed message storage shared by the exact and loopy schedules.
class MessageState {
public:
    explicit MessageState(const FactorGraph& g) : graph_(g) {
        const auto& factors = g.factors();
        edge_offset_.resize(factors.size() + 1, 0);
        for (std::size_t f = 0; f < factors.size(); ++f) edge_offset_[f + 1] = edge_offset_[f] + factors[f].arity();
        const std::size_t edges = edge_offset_.back();
        edge_factor_.resize(edges);
        edge_slot_.resize(edges);
        edge_var_.resize(edges);
        var_edges_.resize(g.num_variables());
        for (std::size_t f = 0; f < factors.size(); ++f)
            for (std::size_t k = 0; k < factors[f].arity(); ++k) {
                const std::size_t e = edge_offset_[f] + k;
                edge_factor_[e] = f;
                edge_slot_[e] = k;
                edge_var_[e] = factors[f].scope[k];
                var_edges_[factors[f].scope[k]].push_back(e);
            }
        exp_potential_.resize(factors.size());
        for (std::size_t f = 0; f < factors.size(); ++f) {
            const auto& lp = factors[f].log_potential;
            const double m = *std::max_element(lp.begin(), lp.end());
            exp_potential_[f].resize(lp.size());
            for (std::size_t t = 0; t < lp.size(); ++t) exp_potential_[f][t] = std::exp(lp[t] - m);
        }
        v2f.assign(edges, kUniform);
        f2v.assign(edges, kUniform);
    }

    std::size_t num_edges() const noexcept { return edge_var_.size(); }
    std::size_t edge_factor(std::size_t e) const noexcept { return edge_factor_[e]; }
    std::size_t edge_var(std::size_t e) const noexcept { return edge_var_[e]; }
    // Edges of a factor are contiguous, in scope order.
    auto factor_edges(std::size_t f) const noexcept { return std::views::iota(edge_offset_[f], edge_offset_[f + 1]); }
    const std::vector<std::size_t>& var_edges(std::size_t v) const noexcept { return var_edges_[v]; }

    // Product of incoming factor messages at the variable, except along e itself.
    Distribution variable_to_factor(std::size_t e, const std::vector<Distribution>& incoming) const {
        Distribution out = {1.0, 1.0, 1.0};
        for (std::size_t other : var_edges_[edge_var_[e]]) {
            if (other == e) continue;
            for (std::size_t x = 0; x < kDomainSize; ++x) out[x] *= incoming[other][x];
        }
        normalize(out);
        return out;
    }

    // Sum over the factor table with the target slot's value fixed.
    Distribution factor_to_variable(std::size_t e, const std::vector<Distribution>& incoming) const {
        const std::size_t f = edge_factor_[e];
        const std::size_t slot = edge_slot_[e];
        const std::size_t arity = graph_.factors()[f].arity();
        const auto& table = exp_potential_[f];
        Distribution out = {0.0, 0.0, 0.0};
        std::array<std::size_t, kMaxArity> digit{};
        for (std::size_t t = 0; t < table.size(); ++t) {
            std::size_t rest = t;
            for (std::size_t k = arity; k-- > 0;) {
                digit[k] = rest % kDomainSize;
                rest /= kDomainSize;
            }
            double w = table[t];
            for (std::size_t k = 0; k < arity; ++k)
                if (k != slot) w *= incoming[edge_offset_[f] + k][digit[k]];
            out[digit[slot]] += w;
        }
        normalize(out);
        return out;
    }

    MarginalSet marginals() const {
        MarginalSet m;
        for (std::size_t v = 0; v < graph_.num_variables(); ++v) {
            Distribution d = {1.0, 1.0, 1.0};
            for (std::size_t e : var_edges_[v])
                for (std::size_t x = 0; x < kDomainSize; ++x) d[x] *= f2v[e][x];
            normalize(d);
            m.ids.push_back(graph_.variables()[v].id);
            m.marginals.push_back(d);
        }
        return m;
    }

    std::vector<Distribution> v2f;
    std::vector<Distribution> f2v;

private:
    const FactorGraph& graph_;
    std::vector<std::size_t> edge_offset_;
    std::vector<std::size_t> edge_factor_, edge_slot_, edge_var_;
    std::vector<std::vector<std::size_t>> var_edges_;
    std::vector<std::vector<double>> exp_potential_;
};

}  // namespace

std::size_t FactorGraph::add_variable(std::string id) {
    if (variable_ids_.contains(id)) throw StructureError("duplicate variable id '" + id + "'");
    const std::size_t index = variables_.size();
    variable_ids_.emplace(id, index);
    variables_.push_back({std::move(id)});
    adjacency_.emplace_back();
    return index;
}

std::size_t FactorGraph::add_factor(std::string id, std::span<const std::string> scope,
                                    std::vector<double> log_potential) {
    if (scope.empty() || scope.size() > kMaxArity)
        throw StructureError("factor '" + id + "' has arity " + std::to_string(scope.size()) + "; expected 1 to 3");
    if (log_potential.size() != pow3(scope.size()))
        throw ShapeError("factor '" + id + "' needs " + std::to_string(pow3(scope.size())) + " table entries, got " +
                         std::to_string(log_potential.size()));
    for (double v : log_potential)
        if (!std::isfinite(v)) throw InputError("factor '" + id + "' has a non-finite log-potential");
    Factor f{std::move(id), {}, std::move(log_potential)};
    for (const auto& var : scope) {
        const std::size_t v = variable_index(var);
        if (std::find(f.scope.begin(), f.scope.end(), v) != f.scope.end())
            throw StructureError("factor '" + f.id + "' repeats variable '" + var + "'");
        f.scope.push_back(v);
    }
    const std::size_t index = factors_.size();
    for (std::size_t v : f.scope) adjacency_[v].push_back(index);
    factors_.push_back(std::move(f));
    return index;
}

std::size_t FactorGraph::add_factor(std::string id, std::initializer_list<std::string_view> scope,
                                    std::vector<double> log_potential) {
    std::vector<std::string> ids(scope.begin(), scope.end());
    return add_factor(std::move(id), std::span<const std::string>(ids), std::move(log_potential));
}

std::size_t FactorGraph::variable_index(std::string_view id) const {
    auto it = variable_ids_.find(std::string(id));
    if (it == variable_ids_.end()) throw LookupError("no variable '" + std::string(id) + "' in factor graph");
    return it->second;
}

bool FactorGraph::is_acyclic() const {
    // Bipartite nodes: variables first, then factors.
    UnionFind uf(variables_.size() + factors_.size());
    for (std::size_t f = 0; f < factors_.size(); ++f)
        for (std::size_t v : factors_[f].scope)
            if (!uf.unite(v, variables_.size() + f)) return false;
    return true;
}

const Distribution& MarginalSet::at(std::string_view id) const {
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (ids[i] == id) return marginals[i];
    throw LookupError("no marginal for variable '" + std::string(id) + "'");
}

MarginalSet sum_product_tree(const FactorGraph& graph) {
    if (!graph.is_acyclic())
        throw StructureError("factor graph contains a cycle; use loopy_sum_product for cyclic graphs");
    MessageState state(graph);
    const std::size_t nv = graph.num_variables();

    // BFS over the bipartite graph. Node ids: variables [0, nv), factors [nv, nv + nf).
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<std::size_t> parent_edge(nv + graph.num_factors(), kNone);
    std::vector<bool> seen(nv + graph.num_factors(), false);
    std::vector<std::size_t> order;

    std::vector<std::size_t> roots(nv);
    std::iota(roots.begin(), roots.end(), 0);
    std::sort(roots.begin(), roots.end(), [&](std::size_t a, std::size_t b) {
        return graph.variables()[a].id < graph.variables()[b].id;
    });
    for (std::size_t root : roots) {
        if (seen[root]) continue;
        std::queue<std::size_t> frontier;
        frontier.push(root);
        seen[root] = true;
        while (!frontier.empty()) {
            const std::size_t node = frontier.front();
            frontier.pop();
            order.push_back(node);
            if (node < nv) {
                for (std::size_t e : state.var_edges(node)) {
                    const std::size_t next = nv + state.edge_factor(e);
                    if (seen[next]) continue;
                    seen[next] = true;
                    parent_edge[next] = e;
                    frontier.push(next);
                }
            } else {
                for (std::size_t e : state.factor_edges(node - nv)) {
                    const std::size_t next = state.edge_var(e);
                    if (seen[next]) continue;
                    seen[next] = true;
                    parent_edge[next] = e;
                    frontier.push(next);
                }
            }
        }
    }

    // Leaves to root.
    for (std::size_t i = order.size(); i-- > 0;) {
        const std::size_t node = order[i];
        const std::size_t e = parent_edge[node];
        if (e == kNone) continue;
        if (node < nv)
            state.v2f[e] = state.variable_to_factor(e, state.f2v);
        else
            state.f2v[e] = state.factor_to_variable(e, state.v2f);
    }
    // Root to leaves.
    for (std::size_t node : order) {
        if (node < nv) {
            for (std::size_t e : state.var_edges(node))
                if (e != parent_edge[node]) state.v2f[e] = state.variable_to_factor(e, state.f2v);
        } else {
            for (std::size_t e : state.factor_edges(node - nv))
                if (e != parent_edge[node]) state.f2v[e] = state.factor_to_variable(e, state.v2f);
        }
    }

    MarginalSet m = state.marginals();
    m.converged = true;
    m.iterations = 1;
    return m;
}

MarginalSet loopy_sum_product(const FactorGraph& graph, const LoopyOptions& options) {
    if (options.max_iters < 0) throw InputError("max_iters must be non-negative");
    if (!(options.damping >= 0.0 && options.damping < 1.0)) throw InputError("damping must lie in [0, 1)");
    if (!(options.tol > 0.0)) throw InputError("tol must be positive");

    MessageState state(graph);
    const std::size_t edges = state.num_edges();
    std::vector<Distribution> next_f2v(edges), next_v2f(edges);
    bool converged = false;
    int iter = 0;
    while (iter < options.max_iters) {
        double delta = 0.0;
        for (std::size_t e = 0; e < edges; ++e) {
            next_f2v[e] = state.factor_to_variable(e, state.v2f);
            next_v2f[e] = state.variable_to_factor(e, state.f2v);
        }
        auto blend = [&](Distribution& old, Distribution computed) {
            for (std::size_t x = 0; x < kDomainSize; ++x)
                computed[x] = options.damping * old[x] + (1.0 - options.damping) * computed[x];
            normalize(computed);
            for (std::size_t x = 0; x < kDomainSize; ++x) delta = std::max(delta, std::abs(computed[x] - old[x]));
            old = computed;
        };
        for (std::size_t e = 0; e < edges; ++e) {
            blend(state.f2v[e], next_f2v[e]);
            blend(state.v2f[e], next_v2f[e]);
        }
        ++iter;
        if (delta < options.tol) {
            converged = true;
            break;
        }
    }
    MarginalSet m = state.marginals();
    m.converged = converged;
    m.iterations = iter;
    return m;
}

std::vector<double> joint_log_scores(const FactorGraph& graph) {
    const std::size_t nv = graph.num_variables();
    if (nv > kMaxEnumerationVariables)
        throw InputError("enumeration over " + std::to_string(nv) + " variables exceeds the 3^" +
                         std::to_string(kMaxEnumerationVariables) + " state guard");
    const std::size_t states = pow3(nv);
    std::vector<std::size_t> stride(nv);
    for (std::size_t v = 0; v < nv; ++v) stride[v] = pow3(nv - 1 - v);

    std::vector<double> scores(states, 0.0);
    std::vector<std::size_t> digit(nv, 0);
    for (std::size_t a = 0; a < states; ++a) {
        for (std::size_t v = 0; v < nv; ++v) digit[v] = (a / stride[v]) % kDomainSize;
        double s = 0.0;
        for (const auto& f : graph.factors()) {
            std::size_t t = 0;
            for (std::size_t v : f.scope) t = t * kDomainSize + digit[v];
            s += f.log_potential[t];
        }
        scores[a] = s;
    }
    return scores;
}

MarginalSet enumerate_marginals(const FactorGraph& graph) {
    const std::vector<double> scores = joint_log_scores(graph);
    const std::size_t nv = graph.num_variables();
    const double m = *std::max_element(scores.begin(), scores.end());
    std::vector<Distribution> acc(nv, Distribution{0.0, 0.0, 0.0});
    std::vector<std::size_t> stride(nv);
    for (std::size_t v = 0; v < nv; ++v) stride[v] = pow3(nv - 1 - v);
    for (std::size_t a = 0; a < scores.size(); ++a) {
        const double w = std::exp(scores[a] - m);
        for (std::size_t v = 0; v < nv; ++v) acc[v][(a / stride[v]) % kDomainSize] += w;
    }
    MarginalSet out;
    for (std::size_t v = 0; v < nv; ++v) {
        normalize(acc[v]);
        out.ids.push_back(graph.variables()[v].id);
        out.marginals.push_back(acc[v]);
    }
    out.converged = true;
    out.iterations = 0;
    return out;
}

std::map<std::string, Polarity> max_marginal_decode(const MarginalSet& marginals) {
    std::map<std::string, Polarity> out;
    for (std::size_t i = 0; i < marginals.ids.size(); ++i) {
        const auto& d = marginals.marginals[i];
        std::size_t best = 0;
        for (std::size_t x = 1; x < kDomainSize; ++x)
            if (d[x] > d[best]) best = x;
        out[marginals.ids[i]] = kPolarities[best];
    }
    return out;
}

void dump_graph(std::ostream& out, const FactorGraph& graph) {
    out << "variables " << graph.num_variables() << '\n';
    for (const auto& v : graph.variables()) out << "  " << v.id << '\n';
    out << "factors " << graph.num_factors() << '\n';
    for (const auto& f : graph.factors()) {
        out << "  " << f.id << " (";
        for (std::size_t k = 0; k < f.arity(); ++k) out << (k ? ", " : "") << graph.variables()[f.scope[k]].id;
        out << ")\n";
        for (std::size_t t = 0; t < f.log_potential.size(); ++t) {
            out << "    ";
            std::size_t rest = t;
            std::array<std::size_t, kMaxArity> digit{};
            for (std::size_t k = f.arity(); k-- > 0;) {
                digit[k] = rest % kDomainSize;
                rest /= kDomainSize;
            }
            for (std::size_t k = 0; k < f.arity(); ++k) out << to_string(kPolarities[digit[k]]) << ' ';
            out << format_double(f.log_potential[t]) << '\n';
        }
    }
}

}  // namespace cframe

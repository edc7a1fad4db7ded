#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cframe/types.hpp"

namespace cframe {

// Every variable ranges over the three polarities.
inline constexpr std::size_t kDomainSize = 3;
inline constexpr std::size_t kMaxArity = 3;

using Distribution = std::array<double, kDomainSize>;

struct Variable {
    std::string id;
};

// Log-linear factor. The table is row-major over the scope with the first
// scope variable most significant: index = sum_k x_k * 3^(arity - 1 - k).
struct Factor {
    std::string id;
    std::vector<std::size_t> scope;  // variable indices
    std::vector<double> log_potential;

    std::size_t arity() const noexcept { return scope.size(); }
};

class FactorGraph {
public:
    // Returns the variable's index. StructureError on duplicate ids.
    std::size_t add_variable(std::string id);
    // Scope by variable id, 1 to 3 distinct variables; table must have 3^arity finite entries.
    std::size_t add_factor(std::string id, std::span<const std::string> scope, std::vector<double> log_potential);
    std::size_t add_factor(std::string id, std::initializer_list<std::string_view> scope,
                           std::vector<double> log_potential);

    std::size_t num_variables() const noexcept { return variables_.size(); }
    std::size_t num_factors() const noexcept { return factors_.size(); }
    const std::vector<Variable>& variables() const noexcept { return variables_; }
    const std::vector<Factor>& factors() const noexcept { return factors_; }
    std::size_t variable_index(std::string_view id) const;  // LookupError when absent
    // Factor indices touching each variable, in insertion order.
    const std::vector<std::size_t>& factors_of(std::size_t variable) const { return adjacency_[variable]; }

    bool is_acyclic() const;

private:
    std::vector<Variable> variables_;
    std::vector<Factor> factors_;
    std::vector<std::vector<std::size_t>> adjacency_;
    std::unordered_map<std::string, std::size_t> variable_ids_;
};

struct MarginalSet {
    std::vector<std::string> ids;          // parallel to marginals; variable order of the graph
    std::vector<Distribution> marginals;
    bool converged = false;
    int iterations = 0;

    const Distribution& at(std::string_view id) const;
};

// Exact two-pass sum-product on a forest. Each component is rooted at its
// lexicographically smallest variable id. StructureError on a cyclic graph.
MarginalSet sum_product_tree(const FactorGraph& graph);

struct LoopyOptions {
    int max_iters = 100;
    double damping = 0.1;  // new = damping * old + (1 - damping) * computed
    double tol = 1e-6;     // max abs message change
};

// Synchronous flooding sum-product; non-convergence is reported, not thrown.
MarginalSet loopy_sum_product(const FactorGraph& graph, const LoopyOptions& options = {});

// Largest variable count accepted by exhaustive enumeration (3^12 states).
inline constexpr std::size_t kMaxEnumerationVariables = 12;

// Log of the unnormalized score of every joint assignment. Assignment index
// uses variable 0 as the most significant base-3 digit.
std::vector<double> joint_log_scores(const FactorGraph& graph);

// Exact marginals by summing over all joint assignments (log-sum-exp stabilized).
MarginalSet enumerate_marginals(const FactorGraph& graph);

// Per-variable argmax, ties to the lowest polarity.
std::map<std::string, Polarity> max_marginal_decode(const MarginalSet& marginals);

// Human-readable listing of variables, factors and their tables.
void dump_graph(std::ostream& out, const FactorGraph& graph);

}  // namespace cframe

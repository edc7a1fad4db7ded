#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cframe/embeddings.hpp"
#include "cframe/factor_graph.hpp"
#include "cframe/types.hpp"

namespace cframe {

// Per-aspect most frequent training label.
struct MajorityModel {
    PerAspect<Polarity> labels{};

    ConnotationFrame predict(std::string verb) const;
};

// Ties go to the lowest polarity. InputError on empty training data.
MajorityModel majority_train(std::span<const ConnotationFrame> train);

// Per aspect, majority vote among the k training verbs closest by cosine.
// Vote ties go to the nearest neighbor's label when it is among the tied
// winners, otherwise to the lowest tied polarity. The query verb itself is
// never its own neighbor.
ConnotationFrame knn_predict(std::string_view verb, std::span<const ConnotationFrame> train,
                             const EmbeddingTable& table, std::size_t k = 3);

struct GraphPropConfig {
    std::size_t top_k = 10;        // similarity edges per verb
    double sim_floor = 0.0;        // minimum cosine for an edge
    double potential_scale = 1.0;  // agreement log-potential = scale * cosine
    double seed_strength = 5.0;    // unary log-potential on a seed's label
    LoopyOptions loopy{};

    void validate() const;
};

// Undirected verb similarity edges: each verb links to its top_k most similar
// other verbs with cosine >= sim_floor. Pairs are (lower index, higher index).
struct SimilarityEdge {
    std::size_t a = 0;
    std::size_t b = 0;
    double cosine = 0.0;
};
std::vector<SimilarityEdge> similarity_edges(std::span<const std::string> verbs, const EmbeddingTable& table,
                                             const GraphPropConfig& cfg);

struct GraphPropResult {
    std::map<std::string, Polarity> labels;
    std::size_t unreachable = 0;  // verbs with no path to any seed, labeled Neutral
    bool converged = false;
};

// Label propagation over one aspect with loopy sum-product.
GraphPropResult graph_prop(AspectId aspect, const std::map<std::string, Polarity>& seeds,
                           std::span<const std::string> all_verbs, const EmbeddingTable& table,
                           const GraphPropConfig& cfg);

// Same as graph_prop but with precomputed edges over all_verbs.
GraphPropResult graph_prop(const std::map<std::string, Polarity>& seeds, std::span<const std::string> all_verbs,
                           std::span<const SimilarityEdge> edges, const GraphPropConfig& cfg);

}  // namespace cframe

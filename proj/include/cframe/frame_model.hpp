#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cframe/embeddings.hpp"
#include "cframe/factor_graph.hpp"
#include "cframe/maxent.hpp"
#include "cframe/types.hpp"

namespace cframe {

// 3x3 weight table, index [row * 3 + col] with rows/cols in polarity order.
using Table3x3 = std::array<double, 9>;
// 3x3x3 weight table over (P_wt, P_wa, P_at), index [wt * 9 + wa * 3 + at].
using Table3x3x3 = std::array<double, 27>;

// The seven interdependency factors coupling aspects of one frame.
enum class Interaction : std::uint8_t { PV_a, PV_t, PE_a, PE_t, ES_a, ES_t, PT };
inline constexpr std::size_t kNumInteractions = 7;
inline constexpr std::array<Interaction, kNumInteractions> kInteractions = {
    Interaction::PV_a, Interaction::PV_t, Interaction::PE_a, Interaction::PE_t,
    Interaction::ES_a, Interaction::ES_t, Interaction::PT};

std::string_view interaction_name(Interaction i) noexcept;
// Aspects the factor spans, in table index order.
std::span<const AspectId> interaction_scope(Interaction i) noexcept;

struct FrameWeights {
    PerAspect<Table3x3> emb{};  // [aspect-level prediction][node polarity]
    Table3x3 pv_a{}, pv_t{};    // (P_wa, V_a), (P_wt, V_t)
    Table3x3 pe_a{}, pe_t{};    // (P_at, E_a), (P_at, E_t)
    Table3x3 es_a{}, es_t{};    // (E_a, S_a), (E_t, S_t)
    Table3x3x3 pt{};            // (P_wt, P_wa, P_at)

    static constexpr std::size_t kNumParams = 9 * 9 + 6 * 9 + 27;

    std::span<double> table(Interaction i) noexcept;
    std::span<const double> table(Interaction i) const noexcept;
    bool all_finite() const noexcept;
};

// Weights encoding the expected interdependencies as soft tendencies:
// agreement diagonals on PV, PE and ES, and on PT the non-neutral triples with
// P_wt = not(P_wa xor P_at). Unary tables get `evidence` on their diagonal.
FrameWeights agreement_weights(double interaction, double evidence);

// How the unary factor consumes the aspect-level classifier output.
enum class EvidenceMode {
    Hard,  // one-hot predicted label selects a row of the emb table
    Soft   // expected row under the predicted class probabilities
};

struct AspectEvidence {
    PerAspect<Polarity> labels{};
    std::optional<PerAspect<ClassProbs>> probs;  // required for EvidenceMode::Soft
};

AspectEvidence evidence_from_labels(const std::map<AspectId, Polarity>& labels);

// Nine aspect variables joined by the seven interdependency factors only.
FactorGraph build_interaction_graph(const FrameWeights& weights);

// Full frame graph: 9 variables, 9 unary evidence factors, 7 interdependency
// factors. The result is always a tree.
FactorGraph build_frame_graph(const AspectEvidence& evidence, const FrameWeights& weights,
                              EvidenceMode mode = EvidenceMode::Hard);
FactorGraph build_frame_graph(const std::map<AspectId, Polarity>& aspect_preds, const FrameWeights& weights);

struct FrameExample {
    ConnotationFrame gold;
    AspectEvidence evidence;
};

struct SgdConfig {
    double learning_rate = 0.1;
    int epochs = 50;
    double l2 = 0.01;
    std::uint64_t seed = 1;
    bool shuffle = true;
    bool full_batch = false;  // one averaged-gradient step per epoch

    void validate() const;
};

// One independently trained local log-linear model. Outcome y of design d
// scores sum(coef * theta[j]) over designs[d][y]; an example picks a design and
// its gold outcome.
struct LocalPiece {
    using Features = std::vector<std::pair<std::size_t, double>>;
    using Design = std::vector<Features>;
    struct Example {
        std::size_t design = 0;
        std::size_t gold = 0;
    };

    std::string name;
    std::size_t num_params = 0;
    std::vector<Design> designs;
    std::vector<Example> examples;

    // sum_i log p(gold_i) - (l2 / 2) * ||theta||^2, and its gradient (ascent direction).
    double objective(std::span<const double> theta, std::span<double> grad, double l2) const;
};

// The 16 pieces (9 unary, then the 7 interactions in kInteractions order).
std::vector<LocalPiece> build_pieces(std::span<const FrameExample> train, EvidenceMode mode = EvidenceMode::Hard);
// Parameter slice of `weights` owned by piece `index` of build_pieces.
std::span<double> piece_parameters(FrameWeights& weights, std::size_t index);

struct PiecewiseTrace {
    // objective of every piece before training and after each epoch
    std::vector<std::vector<double>> objectives;
};

// Piecewise likelihood: each factor table is fitted by SGD on its own local
// log-linear likelihood, starting from zeros.
FrameWeights train_piecewise(std::span<const FrameExample> train, const SgdConfig& cfg,
                             EvidenceMode mode = EvidenceMode::Hard, PiecewiseTrace* trace = nullptr);

// Runs exact inference on the frame graph and decodes max-marginals; scores are p(+) - p(-).
ConnotationFrame decode_frame(std::string verb, const AspectEvidence& evidence, const FrameWeights& weights,
                              EvidenceMode mode = EvidenceMode::Hard);

// Aspect-level labels and probabilities for one verb.
AspectEvidence aspect_evidence(std::string_view verb, const AspectModels& models, const EmbeddingTable& table);

ConnotationFrame predict_frame(std::string_view verb, const AspectModels& models, const EmbeddingTable& table,
                               const FrameWeights& weights, EvidenceMode mode = EvidenceMode::Hard);

struct SyntheticOptions {
    double noise = 0.2;  // probability an aspect prediction is replaced by a different label
    std::string verb_prefix = "syn";
};

// Gold frames drawn from the interaction-only distribution by exact enumeration;
// aspect predictions drawn from a symmetric noise channel around gold.
std::vector<FrameExample> generate_synthetic(const FrameWeights& weights, std::size_t n, std::uint64_t seed,
                                             const SyntheticOptions& options = {});

// Text weights format: one "<table> <index labels...> <value>" line per entry.
void write_weights(std::ostream& out, const FrameWeights& weights, std::string_view header = {});
FrameWeights read_weights(std::istream& in);
void save_weights(const FrameWeights& weights, const std::filesystem::path& path, std::string_view header = {});
FrameWeights load_weights(const std::filesystem::path& path);

// 3x3 CSV blocks; the PT table is emitted as three slices by P_wt.
void export_weights_csv(std::ostream& out, const FrameWeights& weights);

}  // namespace cframe

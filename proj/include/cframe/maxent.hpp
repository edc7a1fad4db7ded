#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cframe/embeddings.hpp"
#include "cframe/optimize.hpp"
#include "cframe/types.hpp"

namespace cframe {

using ClassProbs = std::array<double, kNumPolarities>;

// Argmax over (Negative, Neutral, Positive); the lowest polarity wins ties.
Polarity argmax_polarity(const ClassProbs& scores) noexcept;

// Multiclass log-linear classifier for one aspect. Rows follow the class order
// (Negative, Neutral, Positive); the last column multiplies the bias feature.
class MaxEntModel {
public:
    MaxEntModel() = default;
    MaxEntModel(AspectId aspect, std::size_t dim);  // zero weights
    MaxEntModel(AspectId aspect, std::size_t dim, std::vector<double> weights);

    AspectId aspect() const noexcept { return aspect_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t num_features() const noexcept { return dim_ + 1; }
    std::span<const double> weights() const noexcept { return weights_; }
    std::span<const double> row(Polarity c) const noexcept {
        return std::span<const double>(weights_).subspan(index_of(c) * num_features(), num_features());
    }

private:
    AspectId aspect_ = AspectId::P_wt;
    std::size_t dim_ = 0;
    std::vector<double> weights_;  // 3 x (dim + 1), row-major
};

using AspectModels = PerAspect<MaxEntModel>;

enum class ClassWeightMode { Uniform, InverseFrequency, GridTuned };

struct TrainConfig {
    double l2_strength = 1.0;
    OptimizerKind optimizer = OptimizerKind::Lbfgs;
    int max_iters = 500;
    double convergence_tol = 1e-6;
    ClassWeightMode class_weight_mode = ClassWeightMode::InverseFrequency;
    // Per-class multipliers on top of inverse frequency; used in GridTuned mode.
    ClassProbs class_weight_multipliers = {1.0, 1.0, 1.0};
    std::uint64_t seed = 1;

    void validate() const;
};

struct LabeledVerb {
    std::string verb;
    Polarity label = Polarity::Neutral;
};

// Embedding with a trailing constant 1.0 bias feature.
std::vector<double> featurize(std::string_view verb, const EmbeddingTable& table);

ClassProbs predict_probs(const MaxEntModel& model, std::span<const double> features);
Polarity predict_label(const MaxEntModel& model, std::string_view verb, const EmbeddingTable& table);

// Uniform: 1. InverseFrequency: N / (3 N_c). GridTuned: inverse frequency times
// the configured multiplier. Classes with no examples get weight 0.
ClassProbs class_weights(std::span<const Polarity> labels, const TrainConfig& cfg);

// Class-weighted negative log-likelihood plus (l2/2) * ||W||^2 over every column
// except the bias column. Parameters are the row-major 3 x F weight matrix.
class MaxEntObjective {
public:
    MaxEntObjective(std::vector<std::vector<double>> features, std::vector<Polarity> labels, ClassProbs weights,
                    double l2_strength);

    std::size_t num_features() const noexcept { return num_features_; }
    std::size_t num_params() const noexcept { return kNumPolarities * num_features_; }
    double operator()(std::span<const double> w, std::span<double> grad) const;

private:
    std::vector<std::vector<double>> features_;
    std::vector<Polarity> labels_;
    ClassProbs weights_;
    double l2_;
    std::size_t num_features_;
};

struct TrainTrace {
    std::vector<double> losses;
    int iterations = 0;
    bool converged = false;
    ClassProbs class_weights{};
};

// Minimizes MaxEntObjective from zero weights. Deterministic for fixed data order.
MaxEntModel train_aspect(std::span<const LabeledVerb> data, AspectId aspect, const EmbeddingTable& table,
                         const TrainConfig& cfg, TrainTrace* trace = nullptr);

// Grid search over {0.5, 1, 2}^3 class multipliers maximizing dev macro-F1.
// (1,1,1) is tried first, then the rest ascending; ties keep the earlier point.
ClassProbs tune_class_multipliers(std::span<const LabeledVerb> train, std::span<const LabeledVerb> dev,
                                  AspectId aspect, const EmbeddingTable& table, TrainConfig cfg);

// Model file: optional comment header lines ("// ...") followed by JSON with
// aspect, dim, class_order and row-major weights.
std::string model_to_json(const MaxEntModel& model);
MaxEntModel model_from_json(std::string_view text);
void save_model(const MaxEntModel& model, const std::filesystem::path& path, std::string_view header = {});
MaxEntModel load_model(const std::filesystem::path& path);

// One "<aspect>.json" file per aspect inside dir.
void save_aspect_models(const AspectModels& models, const std::filesystem::path& dir, std::string_view header = {});
AspectModels load_aspect_models(const std::filesystem::path& dir);

}  // namespace cframe

#include "cframe/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cframe/errors.hpp"
#include "cframe/evaluation.hpp"
#include "cframe/text_io.hpp"

namespace cframe {

namespace {

ClassProbs softmax(const ClassProbs& logits) {
    const double m = std::max({logits[0], logits[1], logits[2]});
    ClassProbs p{};
    double z = 0.0;
    for (std::size_t c = 0; c < kNumPolarities; ++c) z += p[c] = std::exp(logits[c] - m);
    for (double& v : p) v /= z;
    return p;
}

ClassProbs logits_of(std::span<const double> w, std::size_t nf, std::span<const double> x) {
    ClassProbs z{};
    for (std::size_t c = 0; c < kNumPolarities; ++c) {
        const double* row = w.data() + c * nf;
        double s = 0.0;
        for (std::size_t j = 0; j < nf; ++j) s += row[j] * x[j];
        z[c] = s;
    }
    return z;
}

}  // namespace

Polarity argmax_polarity(const ClassProbs& scores) noexcept {
    std::size_t best = 0;
    for (std::size_t c = 1; c < kNumPolarities; ++c)
        if (scores[c] > scores[best]) best = c;
    return kPolarities[best];
}

MaxEntModel::MaxEntModel(AspectId aspect, std::size_t dim)
    : aspect_(aspect), dim_(dim), weights_(kNumPolarities * (dim + 1), 0.0) {}

MaxEntModel::MaxEntModel(AspectId aspect, std::size_t dim, std::vector<double> weights)
    : aspect_(aspect), dim_(dim), weights_(std::move(weights)) {
    if (weights_.size() != kNumPolarities * (dim_ + 1))
        throw ShapeError("model for " + std::string(aspect_name(aspect)) + " needs " +
                         std::to_string(kNumPolarities * (dim_ + 1)) + " weights, got " +
                         std::to_string(weights_.size()));
    for (double v : weights_)
        if (!std::isfinite(v)) throw FormatError("non-finite weight in model for " + std::string(aspect_name(aspect)));
}

void TrainConfig::validate() const {
    if (!(l2_strength >= 0.0) || !std::isfinite(l2_strength)) throw InputError("l2_strength must be finite and >= 0");
    if (max_iters < 1) throw InputError("max_iters must be >= 1");
    if (!(convergence_tol > 0.0)) throw InputError("convergence_tol must be > 0");
    for (double m : class_weight_multipliers)
        if (!(m > 0.0)) throw InputError("class weight multipliers must be > 0");
}

std::vector<double> featurize(std::string_view verb, const EmbeddingTable& table) {
    const auto v = table.at(verb);
    std::vector<double> out(v.begin(), v.end());
    out.push_back(1.0);
    return out;
}

ClassProbs predict_probs(const MaxEntModel& model, std::span<const double> features) {
    if (features.size() != model.num_features())
        throw ShapeError("feature vector has length " + std::to_string(features.size()) + ", model expects " +
                         std::to_string(model.num_features()));
    return softmax(logits_of(model.weights(), model.num_features(), features));
}

Polarity predict_label(const MaxEntModel& model, std::string_view verb, const EmbeddingTable& table) {
    return argmax_polarity(predict_probs(model, featurize(verb, table)));
}

ClassProbs class_weights(std::span<const Polarity> labels, const TrainConfig& cfg) {
    ClassProbs w{1.0, 1.0, 1.0};
    if (cfg.class_weight_mode == ClassWeightMode::Uniform) return w;
    std::array<std::size_t, kNumPolarities> counts{};
    for (Polarity p : labels) ++counts[index_of(p)];
    const double n = static_cast<double>(labels.size());
    for (std::size_t c = 0; c < kNumPolarities; ++c) {
        w[c] = counts[c] == 0 ? 0.0 : n / (3.0 * static_cast<double>(counts[c]));
        if (cfg.class_weight_mode == ClassWeightMode::GridTuned) w[c] *= cfg.class_weight_multipliers[c];
    }
    return w;
}

MaxEntObjective::MaxEntObjective(std::vector<std::vector<double>> features, std::vector<Polarity> labels,
                                 ClassProbs weights, double l2_strength)
    : features_(std::move(features)), labels_(std::move(labels)), weights_(weights), l2_(l2_strength) {
    if (features_.empty()) throw InputError("no training examples");
    if (features_.size() != labels_.size()) throw ShapeError("features and labels differ in length");
    num_features_ = features_.front().size();
    for (const auto& f : features_)
        if (f.size() != num_features_) throw ShapeError("ragged feature matrix");
}

double MaxEntObjective::operator()(std::span<const double> w, std::span<double> grad) const {
    const std::size_t nf = num_features_;
    if (w.size() != num_params() || grad.size() != num_params()) throw ShapeError("parameter vector size mismatch");
    std::fill(grad.begin(), grad.end(), 0.0);
    double loss = 0.0;
    for (std::size_t i = 0; i < features_.size(); ++i) {
        const auto& x = features_[i];
        const std::size_t y = index_of(labels_[i]);
        const double wi = weights_[y];
        if (wi == 0.0) continue;
        const ClassProbs z = logits_of(w, nf, x);
        const double m = std::max({z[0], z[1], z[2]});
        const double lse = m + std::log(std::exp(z[0] - m) + std::exp(z[1] - m) + std::exp(z[2] - m));
        loss += wi * (lse - z[y]);
        for (std::size_t c = 0; c < kNumPolarities; ++c) {
            const double coef = wi * (std::exp(z[c] - lse) - (c == y ? 1.0 : 0.0));
            double* g = grad.data() + c * nf;
            for (std::size_t j = 0; j < nf; ++j) g[j] += coef * x[j];
        }
    }
    if (l2_ > 0.0) {
        for (std::size_t c = 0; c < kNumPolarities; ++c)
            for (std::size_t j = 0; j + 1 < nf; ++j) {
                const double v = w[c * nf + j];
                loss += 0.5 * l2_ * v * v;
                grad[c * nf + j] += l2_ * v;
            }
    }
    return loss;
}

MaxEntModel train_aspect(std::span<const LabeledVerb> data, AspectId aspect, const EmbeddingTable& table,
                         const TrainConfig& cfg, TrainTrace* trace) {
    cfg.validate();
    if (data.empty()) throw InputError("no training data for aspect " + std::string(aspect_name(aspect)));
    std::vector<std::vector<double>> features;
    std::vector<Polarity> labels;
    features.reserve(data.size());
    for (const auto& ex : data) {
        features.push_back(featurize(ex.verb, table));
        labels.push_back(ex.label);
    }
    const ClassProbs weights = class_weights(labels, cfg);
    MaxEntObjective objective(std::move(features), std::move(labels), weights, cfg.l2_strength);

    MinimizeOptions opts;
    opts.method = cfg.optimizer;
    opts.max_iters = cfg.max_iters;
    opts.grad_tol = cfg.convergence_tol;
    auto result = minimize([&objective](std::span<const double> w, std::span<double> g) { return objective(w, g); },
                           std::vector<double>(objective.num_params(), 0.0), opts);
    if (trace) {
        trace->losses = result.values;
        trace->iterations = result.iterations;
        trace->converged = result.converged;
        trace->class_weights = weights;
    }
    return MaxEntModel(aspect, table.dim(), std::move(result.x));
}

ClassProbs tune_class_multipliers(std::span<const LabeledVerb> train, std::span<const LabeledVerb> dev,
                                  AspectId aspect, const EmbeddingTable& table, TrainConfig cfg) {
    if (dev.empty()) throw InputError("grid tuning needs a non-empty dev set");
    cfg.class_weight_mode = ClassWeightMode::GridTuned;
    constexpr std::array<double, 3> grid = {0.5, 1.0, 2.0};
    std::vector<ClassProbs> candidates{{1.0, 1.0, 1.0}};
    for (double a : grid)
        for (double b : grid)
            for (double c : grid)
                if (!(a == 1.0 && b == 1.0 && c == 1.0)) candidates.push_back({a, b, c});

    std::vector<Polarity> gold;
    std::vector<std::vector<double>> dev_features;
    for (const auto& ex : dev) {
        gold.push_back(ex.label);
        dev_features.push_back(featurize(ex.verb, table));
    }
    ClassProbs best = candidates.front();
    double best_f1 = -1.0;
    std::vector<Polarity> pred(dev.size());
    for (const auto& m : candidates) {
        cfg.class_weight_multipliers = m;
        const MaxEntModel model = train_aspect(train, aspect, table, cfg);
        for (std::size_t i = 0; i < dev.size(); ++i) pred[i] = argmax_polarity(predict_probs(model, dev_features[i]));
        const double f1 = macro_f1(gold, pred);
        if (f1 > best_f1) {
            best_f1 = f1;
            best = m;
        }
    }
    return best;
}

std::string model_to_json(const MaxEntModel& model) {
    nlohmann::json j;
    j["aspect"] = aspect_name(model.aspect());
    j["dim"] = model.dim();
    j["class_order"] = {"-", "=", "+"};
    j["weights"] = std::vector<double>(model.weights().begin(), model.weights().end());
    return j.dump(1);
}

MaxEntModel model_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text, nullptr, true, /*ignore_comments=*/true);
        const auto order = j.at("class_order").get<std::vector<std::string>>();
        if (order != std::vector<std::string>{"-", "=", "+"}) throw FormatError("unexpected class_order in model");
        return MaxEntModel(parse_aspect(j.at("aspect").get<std::string>()), j.at("dim").get<std::size_t>(),
                           j.at("weights").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed model file: ") + e.what());
    }
}

void save_model(const MaxEntModel& model, const std::filesystem::path& path, std::string_view header) {
    auto out = open_output(path);
    write_comment_header(out, header, "// ");
    out << model_to_json(model) << '\n';
}

MaxEntModel load_model(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return model_from_json(buf.str());
}

void save_aspect_models(const AspectModels& models, const std::filesystem::path& dir, std::string_view header) {
    std::filesystem::create_directories(dir);
    for (AspectId a : kAspects) {
        if (models[index_of(a)].aspect() != a) throw InputError("aspect model slot mismatch");
        save_model(models[index_of(a)], dir / (std::string(aspect_name(a)) + ".json"), header);
    }
}

AspectModels load_aspect_models(const std::filesystem::path& dir) {
    AspectModels models;
    std::size_t dim = 0;
    for (AspectId a : kAspects) {
        MaxEntModel m = load_model(dir / (std::string(aspect_name(a)) + ".json"));
        if (m.aspect() != a) throw FormatError("model file for " + std::string(aspect_name(a)) + " names another aspect");
        if (a != AspectId::P_wt && m.dim() != dim) throw ShapeError("aspect models disagree on embedding dimension");
        dim = m.dim();
        models[index_of(a)] = std::move(m);
    }
    return models;
}

}  // namespace cframe

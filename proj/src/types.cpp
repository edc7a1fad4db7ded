#include "cframe/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "cframe/errors.hpp"

namespace cframe {

namespace {

constexpr std::array<std::string_view, kNumAspects> kAspectNames = {
    "P_wt", "P_wa", "P_at", "E_t", "E_a", "V_t", "V_a", "S_t", "S_a"};

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

Polarity polarity_at(std::size_t i) {
    if (i >= kNumPolarities) throw InputError("polarity index out of range: " + std::to_string(i));
    return kPolarities[i];
}

std::string_view to_string(Polarity p) noexcept {
    switch (p) {
        case Polarity::Negative: return "-";
        case Polarity::Neutral: return "=";
        case Polarity::Positive: return "+";
    }
    return "?";
}

Polarity parse_polarity(std::string_view text) {
    const std::string t = lowercase(text);
    if (t == "-" || t == "neg") return Polarity::Negative;
    if (t == "=" || t == "neu") return Polarity::Neutral;
    if (t == "+" || t == "pos") return Polarity::Positive;
    throw FormatError("unrecognized polarity '" + std::string(text) + "'");
}

std::string_view aspect_name(AspectId a) noexcept { return kAspectNames[index_of(a)]; }

AspectId parse_aspect(std::string_view name) {
    for (std::size_t i = 0; i < kNumAspects; ++i)
        if (kAspectNames[i] == name) return kAspects[i];
    throw FormatError("unknown aspect '" + std::string(name) + "'");
}

Polarity polarity_from_score(double mean_score) noexcept {
    if (mean_score < -kNeutralCutoff) return Polarity::Negative;
    if (mean_score > kNeutralCutoff) return Polarity::Positive;
    return Polarity::Neutral;
}

Polarity ConnotationFrame::label(AspectId a) const {
    auto it = labels.find(a);
    if (it == labels.end())
        throw LookupError("frame for '" + verb + "' has no label for " + std::string(aspect_name(a)));
    return it->second;
}

PerAspect<Polarity> ConnotationFrame::label_array() const {
    PerAspect<Polarity> out{};
    for (AspectId a : kAspects) out[index_of(a)] = label(a);
    return out;
}

std::vector<std::string> validate_frame(const ConnotationFrame& frame, ScoreConvention convention) {
    std::vector<std::string> problems;
    for (AspectId a : kAspects)
        if (!frame.labels.contains(a)) problems.push_back("missing label for " + std::string(aspect_name(a)));

    for (const auto& [aspect, score] : frame.scores) {
        const std::string name(aspect_name(aspect));
        if (!std::isfinite(score) || score < -1.0 || score > 1.0) {
            problems.push_back("score for " + name + " outside [-1, 1]");
            continue;
        }
        auto it = frame.labels.find(aspect);
        if (it == frame.labels.end()) continue;
        const Polarity label = it->second;
        bool consistent = true;
        if (convention == ScoreConvention::Aggregated) {
            consistent = polarity_from_score(score) == label;
        } else {
            consistent = !(label == Polarity::Positive && score < 0.0) &&
                         !(label == Polarity::Negative && score > 0.0);
        }
        if (!consistent)
            problems.push_back("score/label mismatch for " + name + ": label " +
                               std::string(to_string(label)) + " with score " + std::to_string(score));
    }
    return problems;
}

std::string_view to_string(ResponseScale r) noexcept {
    switch (r) {
        case ResponseScale::Positive: return "pos";
        case ResponseScale::PositiveOrNeutral: return "pos_or_neu";
        case ResponseScale::Neutral: return "neu";
        case ResponseScale::NegativeOrNeutral: return "neg_or_neu";
        case ResponseScale::Negative: return "neg";
        case ResponseScale::Yes: return "yes";
        case ResponseScale::No: return "no";
    }
    return "?";
}

ResponseScale parse_response(std::string_view text) {
    const std::string t = lowercase(text);
    if (t == "pos") return ResponseScale::Positive;
    if (t == "pos_or_neu") return ResponseScale::PositiveOrNeutral;
    if (t == "neu") return ResponseScale::Neutral;
    if (t == "neg_or_neu") return ResponseScale::NegativeOrNeutral;
    if (t == "neg") return ResponseScale::Negative;
    if (t == "yes") return ResponseScale::Yes;
    if (t == "no") return ResponseScale::No;
    throw FormatError("unrecognized response '" + std::string(text) + "'");
}

}  // namespace cframe

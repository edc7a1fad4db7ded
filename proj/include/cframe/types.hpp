#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cframe {

// Three-valued connotative polarity. The enumerator order is the total order
// used for every tie-break in the library: Negative < Neutral < Positive.
enum class Polarity : std::uint8_t { Negative = 0, Neutral = 1, Positive = 2 };

inline constexpr std::size_t kNumPolarities = 3;
inline constexpr std::array<Polarity, kNumPolarities> kPolarities = {
    Polarity::Negative, Polarity::Neutral, Polarity::Positive};

constexpr std::size_t index_of(Polarity p) noexcept { return static_cast<std::size_t>(p); }
Polarity polarity_at(std::size_t i);
constexpr Polarity opposite(Polarity p) noexcept {
    switch (p) {
        case Polarity::Negative: return Polarity::Positive;
        case Polarity::Positive: return Polarity::Negative;
        default: return Polarity::Neutral;
    }
}

// Canonical text form: "-", "=", "+".
std::string_view to_string(Polarity p) noexcept;

// Accepts "-", "=", "+", "neg", "neu", "pos" (case-insensitive).
Polarity parse_polarity(std::string_view text);

// Numeric stand-in used when only labels are available: -1, 0, +1.
constexpr double polarity_value(Polarity p) noexcept {
    return static_cast<double>(static_cast<int>(index_of(p)) - 1);
}

// The nine typed relations of a frame, in canonical serialization order:
// writer->theme, writer->agent, agent<->theme perspectives, effect on theme and
// agent, value of theme and agent, mental state of theme and agent.
enum class AspectId : std::uint8_t { P_wt = 0, P_wa, P_at, E_t, E_a, V_t, V_a, S_t, S_a };

inline constexpr std::size_t kNumAspects = 9;
inline constexpr std::array<AspectId, kNumAspects> kAspects = {
    AspectId::P_wt, AspectId::P_wa, AspectId::P_at, AspectId::E_t, AspectId::E_a,
    AspectId::V_t,  AspectId::V_a,  AspectId::S_t,  AspectId::S_a};

template <class T>
using PerAspect = std::array<T, kNumAspects>;

constexpr std::size_t index_of(AspectId a) noexcept { return static_cast<std::size_t>(a); }
std::string_view aspect_name(AspectId a) noexcept;
AspectId parse_aspect(std::string_view name);
// Value questions were asked as yes/no, which changes some agreement reporting.
constexpr bool is_value_aspect(AspectId a) noexcept {
    return a == AspectId::V_t || a == AspectId::V_a;
}

// Aggregation cutoffs on a mean score in [-1, 1]:
// [-1, -0.25) negative, [-0.25, 0.25] neutral, (0.25, 1] positive.
inline constexpr double kNeutralCutoff = 0.25;
Polarity polarity_from_score(double mean_score) noexcept;

struct ConnotationFrame {
    std::string verb;
    std::map<AspectId, Polarity> labels;
    std::map<AspectId, double> scores;  // empty when the frame carries no scores

    bool complete() const noexcept { return labels.size() == kNumAspects; }
    Polarity label(AspectId a) const;  // LookupError when absent
    PerAspect<Polarity> label_array() const;
};

// How a frame's scores relate to its labels.
//  Aggregated: the score is an annotation mean and the label must equal the cutoff bucket.
//  Marginal:   the score is p(+) - p(-) from inference; the label must not contradict its sign.
enum class ScoreConvention { Aggregated, Marginal };

// Returns one message per violated invariant; empty means valid.
std::vector<std::string> validate_frame(const ConnotationFrame& frame,
                                        ScoreConvention convention = ScoreConvention::Aggregated);

// Five-way sentiment scale plus the yes/no scale used for value questions.
enum class ResponseScale : std::uint8_t {
    Positive,
    PositiveOrNeutral,
    Neutral,
    NegativeOrNeutral,
    Negative,
    Yes,
    No
};

// CSV tokens: pos, pos_or_neu, neu, neg_or_neu, neg, yes, no.
std::string_view to_string(ResponseScale r) noexcept;
ResponseScale parse_response(std::string_view text);

}  // namespace cframe

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cframe/types.hpp"

namespace cframe {

struct SVOTuple {
    std::string source;
    std::string subject;
    std::string verb;
    std::string object;
    std::uint64_t count = 1;
};

// Streams `source<TAB>subject<TAB>verb<TAB>object<TAB>count` lines. Blank and
// '#' lines are ignored; malformed lines (wrong arity, empty verb, count not a
// positive integer) are skipped and counted.
class TupleReader {
public:
    explicit TupleReader(std::istream& in) : in_(&in) {}

    // Reuses `out`'s buffers; false at end of input.
    bool next(SVOTuple& out);

    std::size_t malformed() const noexcept { return malformed_; }
    std::size_t accepted() const noexcept { return accepted_; }

private:
    std::istream* in_;
    std::string line_;
    std::size_t malformed_ = 0;
    std::size_t accepted_ = 0;
};

struct TupleStats {
    std::size_t accepted = 0;
    std::size_t malformed = 0;
};

// Calls fn for every well-formed tuple of the file. InputError when unreadable.
TupleStats for_each_tuple(const std::filesystem::path& path, const std::function<void(const SVOTuple&)>& fn);

// Materializes a whole file; for small inputs and tests.
std::vector<SVOTuple> load_tuples(const std::filesystem::path& path, std::size_t* malformed = nullptr);

enum class Leaning { Left, Right, Unknown };

std::string_view to_string(Leaning l) noexcept;

// Source -> leaning. Lookup tries the exact source, then for URLs the host
// with "www." dropped and each parent domain; anything else is Unknown.
class LeaningMap {
public:
    void add(std::string source, Leaning leaning);
    Leaning lookup(std::string_view source) const;
    std::size_t size() const noexcept { return map_.size(); }

private:
    std::map<std::string, Leaning, std::less<>> map_;
};

// `source<TAB>{left,right}` rows.
LeaningMap read_leanings(std::istream& in);

// Lower-cased whitespace tokens.
std::vector<std::string> tokenize_phrase(std::string_view phrase);
// Whether `pattern` occurs as a contiguous token run inside `phrase`.
// An empty pattern matches everything.
bool phrase_contains(std::span<const std::string> phrase, std::span<const std::string> pattern);
bool phrase_contains(std::string_view phrase, std::string_view pattern);

// Lower-cased verb -> numeric score for one aspect; labels map to -1/0/+1
// when the frame has no score.
using VerbScores = std::map<std::string, double, std::less<>>;
VerbScores verb_scores(std::span<const ConnotationFrame> lexicon, AspectId aspect = AspectId::P_at);

struct EntitySentimentRow {
    std::string agent;
    std::string theme;
    double score = 0.0;
    std::uint64_t support = 0;        // summed count of contributing tuples
    std::uint64_t tuples = 0;         // contributing tuples
    std::uint64_t skipped_verbs = 0;  // matching tuples whose verb is not in the lexicon
};

enum class Weighting { Count, Unweighted };

// Mergeable accumulator for one (agent, theme) pair.
class PairAccumulator {
public:
    PairAccumulator(std::string_view agent, std::string_view theme, Weighting weighting = Weighting::Count);

    void add(const SVOTuple& t, const VerbScores& scores);
    // Combines partial sums from another shard of the same pair.
    void merge(const PairAccumulator& other);
    bool has_support() const noexcept { return weight_ > 0.0; }
    // InputError when nothing matched.
    EntitySentimentRow result() const;

private:
    std::string agent_text_, theme_text_;
    std::vector<std::string> agent_, theme_;
    Weighting weighting_;
    double weighted_sum_ = 0.0;
    double weight_ = 0.0;
    std::uint64_t support_ = 0;
    std::uint64_t tuples_ = 0;
    std::uint64_t skipped_ = 0;
};

EntitySentimentRow entity_pair_score(std::string_view agent, std::string_view theme, std::span<const SVOTuple> tuples,
                                     const VerbScores& scores, Weighting weighting = Weighting::Count);

enum class Role { Agent, Theme };

Role parse_role(std::string_view text);

struct PhraseCount {
    std::string phrase;
    std::uint64_t count = 0;
};

// Summed counts of the case-folded argument phrases of one verb and role
// within sources of one leaning.
class ContrastCounter {
public:
    ContrastCounter(std::string_view verb, Role role, Leaning leaning, const LeaningMap& leanings);

    void add(const SVOTuple& t);
    void merge(const ContrastCounter& other);
    // Ranked by count, ties lexicographic; all phrases when n exceeds them.
    std::vector<PhraseCount> top(std::size_t n) const;

private:
    std::string verb_;
    Role role_;
    Leaning leaning_;
    const LeaningMap* leanings_;
    std::map<std::string, std::uint64_t> counts_;
};

std::vector<PhraseCount> leaning_contrast(std::string_view verb, Role role, Leaning leaning,
                                          std::span<const SVOTuple> tuples, const LeaningMap& leanings, std::size_t n);

using WordLexicon = std::map<std::string, Polarity, std::less<>>;

// `word<TAB>{+,-,=}` rows; the Unicode minus sign is accepted for "-".
WordLexicon read_word_lexicon(std::istream& in);

struct SubjectivityResult {
    double percent_positive = 0.0;
    double percent_negative = 0.0;
    double percent_neutral = 0.0;  // includes unlisted head words
    std::uint64_t total = 0;       // summed count of argument occurrences
    std::uint64_t unlisted = 0;    // summed count whose head word is not in the lexicon
    bool empty_lexicon = false;
};

// Count-weighted polarity distribution of argument head words (last token).
class SubjectivityCounter {
public:
    SubjectivityCounter(std::string_view verb, Role role, const WordLexicon& lexicon);

    void add(const SVOTuple& t);
    SubjectivityResult result() const;

private:
    std::string verb_;
    Role role_;
    const WordLexicon* lexicon_;
    std::uint64_t pos_ = 0, neg_ = 0, neu_ = 0, unlisted_ = 0;
};

SubjectivityResult subjectivity_composition(std::string_view verb, Role role, std::span<const SVOTuple> tuples,
                                            const WordLexicon& lexicon);

}  // namespace cframe

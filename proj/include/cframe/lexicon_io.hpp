#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cframe/maxent.hpp"
#include "cframe/types.hpp"

namespace cframe {

struct LexiconEntry {
    ConnotationFrame frame;
    std::optional<PerAspect<ClassProbs>> probs;  // per-class (-, =, +) probabilities
};

struct Lexicon {
    std::vector<LexiconEntry> entries;
    bool has_scores = false;
    bool has_probs = false;

    std::vector<ConnotationFrame> frames() const;
    std::vector<std::string> verbs() const;
};

struct LexiconColumns {
    bool scores = false;  // "<aspect>_score" columns
    bool probs = false;   // "<aspect>_p-", "<aspect>_p=", "<aspect>_p+" columns
};

// Header comment lines, then "verb P_wt ... S_a" plus the requested optional
// columns, one row per entry in the given order.
void write_lexicon(std::ostream& out, std::span<const LexiconEntry> entries, std::string_view header,
                   LexiconColumns columns);
void write_lexicon(std::ostream& out, std::span<const ConnotationFrame> frames, std::string_view header,
                   bool scores);

// Columns are matched by header name; unknown columns are ignored. FormatError
// on missing aspect columns, bad labels, ragged rows and duplicate verbs.
Lexicon read_lexicon(std::istream& in);

// Verbs from either a lexicon file (first column after a "verb" header) or a
// plain one-verb-per-line list. Duplicates are dropped, first occurrence kept.
std::vector<std::string> read_verb_list(std::istream& in);

}  // namespace cframe

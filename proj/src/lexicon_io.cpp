#include "cframe/lexicon_io.hpp"

#include <charconv>
#include <map>
#include <set>

#include "cframe/errors.hpp"
#include "cframe/text_io.hpp"

namespace cframe {

namespace {

constexpr std::string_view kProbSuffix[kNumPolarities] = {"_p-", "_p=", "_p+"};

double parse_number(std::string_view text, std::size_t line_no) {
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw FormatError("lexicon line " + std::to_string(line_no) + ": bad number '" + std::string(text) + "'");
    return v;
}

}  // namespace

std::vector<ConnotationFrame> Lexicon::frames() const {
    std::vector<ConnotationFrame> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.frame);
    return out;
}

std::vector<std::string> Lexicon::verbs() const {
    std::vector<std::string> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.frame.verb);
    return out;
}

void write_lexicon(std::ostream& out, std::span<const LexiconEntry> entries, std::string_view header,
                   LexiconColumns columns) {
    write_comment_header(out, header);
    out << "verb";
    for (AspectId a : kAspects) out << '\t' << aspect_name(a);
    if (columns.scores)
        for (AspectId a : kAspects) out << '\t' << aspect_name(a) << "_score";
    if (columns.probs)
        for (AspectId a : kAspects)
            for (auto suffix : kProbSuffix) out << '\t' << aspect_name(a) << suffix;
    out << '\n';
    for (const auto& e : entries) {
        out << e.frame.verb;
        for (AspectId a : kAspects) out << '\t' << to_string(e.frame.label(a));
        if (columns.scores)
            for (AspectId a : kAspects) {
                const auto it = e.frame.scores.find(a);
                if (it == e.frame.scores.end())
                    throw InputError("verb '" + e.frame.verb + "' has no score for " + std::string(aspect_name(a)));
                out << '\t' << format_double(it->second);
            }
        if (columns.probs) {
            if (!e.probs) throw InputError("verb '" + e.frame.verb + "' has no class probabilities");
            for (AspectId a : kAspects)
                for (double p : (*e.probs)[index_of(a)]) out << '\t' << format_double(p);
        }
        out << '\n';
    }
}

void write_lexicon(std::ostream& out, std::span<const ConnotationFrame> frames, std::string_view header,
                   bool scores) {
    std::vector<LexiconEntry> entries;
    entries.reserve(frames.size());
    for (const auto& f : frames) entries.push_back({f, std::nullopt});
    write_lexicon(out, entries, header, {scores, false});
}

Lexicon read_lexicon(std::istream& in) {
    Lexicon lex;
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> names;
    std::map<std::string, std::size_t> column;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line.front() == '#') continue;
        const auto fields = split_fields(line, '\t');
        auto fail = [line_no](const std::string& why) {
            return FormatError("lexicon line " + std::to_string(line_no) + ": " + why);
        };
        if (names.empty()) {
            for (auto f : fields) names.emplace_back(trim(f));
            if (names.front() != "verb") throw fail("header must start with 'verb'");
            for (std::size_t i = 0; i < names.size(); ++i)
                if (!column.emplace(names[i], i).second) throw fail("duplicate column '" + names[i] + "'");
            for (AspectId a : kAspects)
                if (!column.contains(std::string(aspect_name(a))))
                    throw fail("missing column " + std::string(aspect_name(a)));
            std::size_t score_cols = 0, prob_cols = 0;
            for (AspectId a : kAspects) {
                const std::string base(aspect_name(a));
                score_cols += column.contains(base + "_score");
                for (auto suffix : kProbSuffix) prob_cols += column.contains(base + std::string(suffix));
            }
            if (score_cols != 0 && score_cols != kNumAspects) throw fail("score columns must cover all nine aspects");
            if (prob_cols != 0 && prob_cols != 3 * kNumAspects)
                throw fail("probability columns must cover all nine aspects");
            lex.has_scores = score_cols != 0;
            lex.has_probs = prob_cols != 0;
            continue;
        }
        if (fields.size() != names.size())
            throw fail("expected " + std::to_string(names.size()) + " fields, found " + std::to_string(fields.size()));
        LexiconEntry e;
        e.frame.verb = std::string(trim(fields[0]));
        if (e.frame.verb.empty()) throw fail("empty verb");
        if (!seen.insert(e.frame.verb).second) throw fail("duplicate verb '" + e.frame.verb + "'");
        for (AspectId a : kAspects) {
            const std::string base(aspect_name(a));
            try {
                e.frame.labels[a] = parse_polarity(trim(fields[column.at(base)]));
            } catch (const FormatError& err) {
                throw fail(err.what());
            }
            if (lex.has_scores) e.frame.scores[a] = parse_number(fields[column.at(base + "_score")], line_no);
        }
        if (lex.has_probs) {
            PerAspect<ClassProbs> probs{};
            for (AspectId a : kAspects)
                for (std::size_t k = 0; k < kNumPolarities; ++k)
                    probs[index_of(a)][k] =
                        parse_number(fields[column.at(std::string(aspect_name(a)) + std::string(kProbSuffix[k]))], line_no);
            e.probs = probs;
        }
        lex.entries.push_back(std::move(e));
    }
    if (names.empty()) throw FormatError("lexicon has no header row");
    return lex;
}

std::vector<std::string> read_verb_list(std::istream& in) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto verb = trim(split_fields(body, '\t').front());
        if (first) {
            first = false;
            if (verb == "verb") continue;
        }
        if (seen.emplace(verb).second) out.emplace_back(verb);
    }
    return out;
}

}  // namespace cframe

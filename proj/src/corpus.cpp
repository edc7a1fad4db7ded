#include "cframe/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "cframe/errors.hpp"
#include "cframe/text_io.hpp"

namespace cframe {

namespace {

bool iequals(std::string_view a, std::string_view b) noexcept {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto ca = static_cast<unsigned char>(a[i]), cb = static_cast<unsigned char>(b[i]);
        if (std::tolower(ca) != std::tolower(cb)) return false;
    }
    return true;
}

std::string_view host_of(std::string_view source) {
    const auto scheme = source.find("://");
    if (scheme == std::string_view::npos) return source;
    source.remove_prefix(scheme + 3);
    const auto end = source.find_first_of("/:?#");
    if (end != std::string_view::npos) source = source.substr(0, end);
    return source;
}

std::string_view role_phrase(const SVOTuple& t, Role role) noexcept {
    return role == Role::Agent ? std::string_view(t.subject) : std::string_view(t.object);
}

}  // namespace

bool TupleReader::next(SVOTuple& out) {
    while (std::getline(*in_, line_)) {
        if (!line_.empty() && line_.back() == '\r') line_.pop_back();
        const auto body = trim(line_);
        if (body.empty() || body.front() == '#') continue;
        const auto f = split_fields(line_, '\t');
        if (f.size() != 5) {
            ++malformed_;
            continue;
        }
        const auto verb = trim(f[2]);
        const auto count_text = trim(f[4]);
        std::uint64_t count = 0;
        const auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
        if (verb.empty() || ec != std::errc() || ptr != count_text.data() + count_text.size() || count == 0) {
            ++malformed_;
            continue;
        }
        out.source.assign(trim(f[0]));
        out.subject.assign(trim(f[1]));
        out.verb.assign(verb);
        out.object.assign(trim(f[3]));
        out.count = count;
        ++accepted_;
        return true;
    }
    if (in_->bad()) throw InputError("read error while streaming tuples");
    return false;
}

TupleStats for_each_tuple(const std::filesystem::path& path, const std::function<void(const SVOTuple&)>& fn) {
    auto in = open_input(path);
    TupleReader reader(in);
    SVOTuple t;
    while (reader.next(t)) fn(t);
    return {reader.accepted(), reader.malformed()};
}

std::vector<SVOTuple> load_tuples(const std::filesystem::path& path, std::size_t* malformed) {
    std::vector<SVOTuple> out;
    const auto stats = for_each_tuple(path, [&out](const SVOTuple& t) { out.push_back(t); });
    if (malformed) *malformed = stats.malformed;
    return out;
}

std::string_view to_string(Leaning l) noexcept {
    switch (l) {
        case Leaning::Left: return "left";
        case Leaning::Right: return "right";
        case Leaning::Unknown: return "unknown";
    }
    return "unknown";
}

void LeaningMap::add(std::string source, Leaning leaning) { map_[to_lower(source)] = leaning; }

Leaning LeaningMap::lookup(std::string_view source) const {
    const std::string key = to_lower(trim(source));
    if (auto it = map_.find(key); it != map_.end()) return it->second;
    std::string_view host = host_of(key);
    if (host.starts_with("www.")) host.remove_prefix(4);
    while (!host.empty()) {
        if (auto it = map_.find(host); it != map_.end()) return it->second;
        const auto dot = host.find('.');
        if (dot == std::string_view::npos) break;
        host.remove_prefix(dot + 1);
        if (host.find('.') == std::string_view::npos) break;  // never match a bare TLD
    }
    return Leaning::Unknown;
}

LeaningMap read_leanings(std::istream& in) {
    LeaningMap map;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto f = split_fields(body, '\t');
        if (f.size() != 2) throw FormatError("leanings line " + std::to_string(line_no) + ": expected source<TAB>leaning");
        const std::string value = to_lower(trim(f[1]));
        Leaning l;
        if (value == "left")
            l = Leaning::Left;
        else if (value == "right")
            l = Leaning::Right;
        else if (value == "unknown")
            l = Leaning::Unknown;
        else
            throw FormatError("leanings line " + std::to_string(line_no) + ": unknown leaning '" + value + "'");
        map.add(std::string(trim(f[0])), l);
    }
    return map;
}

std::vector<std::string> tokenize_phrase(std::string_view phrase) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < phrase.size()) {
        while (i < phrase.size() && std::isspace(static_cast<unsigned char>(phrase[i]))) ++i;
        std::size_t j = i;
        while (j < phrase.size() && !std::isspace(static_cast<unsigned char>(phrase[j]))) ++j;
        if (j > i) out.push_back(to_lower(phrase.substr(i, j - i)));
        i = j;
    }
    return out;
}

bool phrase_contains(std::span<const std::string> phrase, std::span<const std::string> pattern) {
    if (pattern.empty()) return true;
    return std::search(phrase.begin(), phrase.end(), pattern.begin(), pattern.end()) != phrase.end();
}

bool phrase_contains(std::string_view phrase, std::string_view pattern) {
    return phrase_contains(tokenize_phrase(phrase), tokenize_phrase(pattern));
}

VerbScores verb_scores(std::span<const ConnotationFrame> lexicon, AspectId aspect) {
    VerbScores out;
    for (const auto& f : lexicon) {
        const auto s = f.scores.find(aspect);
        const double v = s != f.scores.end() ? s->second : polarity_value(f.label(aspect));
        out[to_lower(f.verb)] = v;
    }
    return out;
}

PairAccumulator::PairAccumulator(std::string_view agent, std::string_view theme, Weighting weighting)
    : agent_text_(trim(agent)), theme_text_(trim(theme)), agent_(tokenize_phrase(agent)),
      theme_(tokenize_phrase(theme)), weighting_(weighting) {
    if (agent_.empty()) throw InputError("agent pattern must not be empty");
}

void PairAccumulator::add(const SVOTuple& t, const VerbScores& scores) {
    const auto subject = tokenize_phrase(t.subject);
    if (!phrase_contains(subject, agent_)) return;
    if (!theme_.empty() && !phrase_contains(tokenize_phrase(t.object), theme_)) return;
    const auto it = scores.find(to_lower(t.verb));
    if (it == scores.end()) {
        ++skipped_;
        return;
    }
    const double w = weighting_ == Weighting::Count ? static_cast<double>(t.count) : 1.0;
    weighted_sum_ += w * it->second;
    weight_ += w;
    support_ += t.count;
    ++tuples_;
}

void PairAccumulator::merge(const PairAccumulator& other) {
    if (other.agent_ != agent_ || other.theme_ != theme_ || other.weighting_ != weighting_)
        throw InputError("cannot merge accumulators of different pairs");
    weighted_sum_ += other.weighted_sum_;
    weight_ += other.weight_;
    support_ += other.support_;
    tuples_ += other.tuples_;
    skipped_ += other.skipped_;
}

EntitySentimentRow PairAccumulator::result() const {
    if (!has_support())
        throw InputError("no supporting tuples for agent '" + agent_text_ + "'" +
                         (theme_text_.empty() ? std::string() : " and theme '" + theme_text_ + "'"));
    EntitySentimentRow row;
    row.agent = agent_text_;
    row.theme = theme_text_;
    row.score = std::clamp(weighted_sum_ / weight_, -1.0, 1.0);
    row.support = support_;
    row.tuples = tuples_;
    row.skipped_verbs = skipped_;
    return row;
}

EntitySentimentRow entity_pair_score(std::string_view agent, std::string_view theme, std::span<const SVOTuple> tuples,
                                     const VerbScores& scores, Weighting weighting) {
    PairAccumulator acc(agent, theme, weighting);
    for (const auto& t : tuples) acc.add(t, scores);
    return acc.result();
}

Role parse_role(std::string_view text) {
    const std::string v = to_lower(trim(text));
    if (v == "agent" || v == "subject") return Role::Agent;
    if (v == "theme" || v == "object") return Role::Theme;
    throw FormatError("unknown role '" + std::string(text) + "' (expected agent or theme)");
}

ContrastCounter::ContrastCounter(std::string_view verb, Role role, Leaning leaning, const LeaningMap& leanings)
    : verb_(trim(verb)), role_(role), leaning_(leaning), leanings_(&leanings) {}

void ContrastCounter::add(const SVOTuple& t) {
    if (!iequals(t.verb, verb_)) return;
    if (leanings_->lookup(t.source) != leaning_) return;
    const auto tokens = tokenize_phrase(role_phrase(t, role_));
    if (tokens.empty()) return;
    std::string phrase = tokens.front();
    for (std::size_t i = 1; i < tokens.size(); ++i) (phrase += ' ') += tokens[i];
    counts_[phrase] += t.count;
}

void ContrastCounter::merge(const ContrastCounter& other) {
    for (const auto& [p, c] : other.counts_) counts_[p] += c;
}

std::vector<PhraseCount> ContrastCounter::top(std::size_t n) const {
    std::vector<PhraseCount> out;
    out.reserve(counts_.size());
    for (const auto& [p, c] : counts_) out.push_back({p, c});
    // counts_ is already lexicographic, so a stable sort keeps ties in order.
    std::stable_sort(out.begin(), out.end(), [](const PhraseCount& a, const PhraseCount& b) { return a.count > b.count; });
    if (out.size() > n) out.resize(n);
    return out;
}

std::vector<PhraseCount> leaning_contrast(std::string_view verb, Role role, Leaning leaning,
                                          std::span<const SVOTuple> tuples, const LeaningMap& leanings, std::size_t n) {
    ContrastCounter counter(verb, role, leaning, leanings);
    for (const auto& t : tuples) counter.add(t);
    return counter.top(n);
}

WordLexicon read_word_lexicon(std::istream& in) {
    WordLexicon lex;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto f = split_fields(body, '\t');
        if (f.size() != 2) throw FormatError("word lexicon line " + std::to_string(line_no) + ": expected word<TAB>polarity");
        auto value = trim(f[1]);
        Polarity p;
        if (value == "−") {
            p = Polarity::Negative;
        } else {
            try {
                p = parse_polarity(value);
            } catch (const FormatError& e) {
                throw FormatError("word lexicon line " + std::to_string(line_no) + ": " + e.what());
            }
        }
        lex[to_lower(trim(f[0]))] = p;
    }
    return lex;
}

SubjectivityCounter::SubjectivityCounter(std::string_view verb, Role role, const WordLexicon& lexicon)
    : verb_(trim(verb)), role_(role), lexicon_(&lexicon) {}

void SubjectivityCounter::add(const SVOTuple& t) {
    if (!iequals(t.verb, verb_)) return;
    const auto tokens = tokenize_phrase(role_phrase(t, role_));
    if (tokens.empty()) return;
    const auto it = lexicon_->find(tokens.back());
    if (it == lexicon_->end()) {
        unlisted_ += t.count;
        return;
    }
    switch (it->second) {
        case Polarity::Positive: pos_ += t.count; break;
        case Polarity::Negative: neg_ += t.count; break;
        case Polarity::Neutral: neu_ += t.count; break;
    }
}

SubjectivityResult SubjectivityCounter::result() const {
    SubjectivityResult r;
    r.empty_lexicon = lexicon_->empty();
    r.unlisted = unlisted_;
    r.total = pos_ + neg_ + neu_ + unlisted_;
    if (r.total == 0) return r;
    const double total = static_cast<double>(r.total);
    r.percent_positive = 100.0 * static_cast<double>(pos_) / total;
    r.percent_negative = 100.0 * static_cast<double>(neg_) / total;
    r.percent_neutral = 100.0 * static_cast<double>(neu_ + unlisted_) / total;
    return r;
}

SubjectivityResult subjectivity_composition(std::string_view verb, Role role, std::span<const SVOTuple> tuples,
                                            const WordLexicon& lexicon) {
    SubjectivityCounter counter(verb, role, lexicon);
    for (const auto& t : tuples) counter.add(t);
    return counter.result();
}

}  // namespace cframe

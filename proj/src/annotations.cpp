#include "cframe/annotations.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <set>
#include <tuple>

#include "cframe/errors.hpp"
#include "cframe/text_io.hpp"

namespace cframe {

namespace {

// Bit set over {-, =, +} of the classes a response is compatible with.
unsigned compatible(ResponseScale r) noexcept {
    constexpr unsigned neg = 1u << 0, neu = 1u << 1, pos = 1u << 2;
    switch (r) {
        case ResponseScale::Positive: return pos;
        case ResponseScale::PositiveOrNeutral: return pos | neu;
        case ResponseScale::Neutral: return neu;
        case ResponseScale::NegativeOrNeutral: return neg | neu;
        case ResponseScale::Negative: return neg;
        case ResponseScale::Yes: return pos;
        case ResponseScale::No: return neu;
    }
    return 0;
}

using ItemKey = std::tuple<std::string, int, AspectId>;

std::map<ItemKey, std::vector<ResponseScale>> group_items(std::span<const AnnotationRecord> records) {
    std::map<ItemKey, std::vector<ResponseScale>> items;
    for (const auto& r : records) items[{r.verb, r.sentence_id, r.aspect}].push_back(r.response);
    return items;
}

template <class Agrees>
double pairwise_percent(std::span<const AnnotationRecord> records, Agrees agrees) {
    std::size_t pairs = 0, agreeing = 0;
    for (const auto& [_, responses] : group_items(records))
        for (std::size_t i = 0; i < responses.size(); ++i)
            for (std::size_t j = i + 1; j < responses.size(); ++j) {
                ++pairs;
                agreeing += agrees(responses[i], responses[j]);
            }
    if (pairs == 0) throw InputError("agreement needs at least two workers on some item");
    return 100.0 * static_cast<double>(agreeing) / static_cast<double>(pairs);
}

std::string pct(std::optional<double> v, int digits) {
    if (!v) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, *v);
    return buf;
}

}  // namespace

double response_to_score(ResponseScale r) noexcept {
    switch (r) {
        case ResponseScale::Positive: return 1.0;
        case ResponseScale::PositiveOrNeutral: return 0.5;
        case ResponseScale::Neutral: return 0.0;
        case ResponseScale::NegativeOrNeutral: return -0.5;
        case ResponseScale::Negative: return -1.0;
        case ResponseScale::Yes: return 1.0;
        case ResponseScale::No: return 0.0;
    }
    return 0.0;
}

AggregatedLabel aggregate(std::span<const AnnotationRecord> records) {
    if (records.empty()) throw InputError("cannot aggregate zero annotations");
    AggregatedLabel out;
    out.verb = records.front().verb;
    out.aspect = records.front().aspect;
    // Sort the scores so the mean does not depend on record order.
    std::vector<double> scores;
    scores.reserve(records.size());
    for (const auto& r : records) {
        if (r.verb != out.verb || r.aspect != out.aspect)
            throw InputError("aggregate expects records of a single (verb, aspect)");
        scores.push_back(response_to_score(r.response));
    }
    std::sort(scores.begin(), scores.end());
    double sum = 0.0;
    for (double s : scores) sum += s;
    out.n = scores.size();
    out.mean_score = sum / static_cast<double>(out.n);
    out.label = polarity_from_score(out.mean_score);
    return out;
}

std::vector<AggregatedLabel> aggregate_all(std::span<const AnnotationRecord> records) {
    std::map<std::pair<std::string, AspectId>, std::vector<AnnotationRecord>> groups;
    for (const auto& r : records) groups[{r.verb, r.aspect}].push_back(r);
    std::vector<AggregatedLabel> out;
    out.reserve(groups.size());
    for (const auto& [_, group] : groups) out.push_back(aggregate(group));
    return out;
}

std::vector<ConnotationFrame> aggregate_frames(std::span<const AnnotationRecord> records, std::size_t* incomplete) {
    std::map<std::string, ConnotationFrame> frames;
    for (const auto& l : aggregate_all(records)) {
        auto& f = frames[l.verb];
        f.verb = l.verb;
        f.labels[l.aspect] = l.label;
        f.scores[l.aspect] = l.mean_score;
    }
    std::vector<ConnotationFrame> out;
    std::size_t dropped = 0;
    for (auto& [_, f] : frames) {
        if (f.complete())
            out.push_back(std::move(f));
        else
            ++dropped;
    }
    if (incomplete) *incomplete = dropped;
    return out;
}

bool strictly_agree(ResponseScale a, ResponseScale b) noexcept { return (compatible(a) & compatible(b)) != 0; }

bool conflicts(ResponseScale a, ResponseScale b) noexcept {
    constexpr unsigned neg = 1u << 0, pos = 1u << 2;
    const unsigned ca = compatible(a), cb = compatible(b);
    if (ca & cb) return false;
    return ((ca & pos) && (cb & neg)) || ((ca & neg) && (cb & pos));
}

double strict_agreement(std::span<const AnnotationRecord> records) {
    return pairwise_percent(records, strictly_agree);
}

double nc_agreement(std::span<const AnnotationRecord> records) {
    return pairwise_percent(records, [](ResponseScale a, ResponseScale b) { return !conflicts(a, b); });
}

Polarity collapse_response(ResponseScale r, OrNeutralCollapse rule) noexcept {
    switch (r) {
        case ResponseScale::Positive:
        case ResponseScale::Yes: return Polarity::Positive;
        case ResponseScale::Negative: return Polarity::Negative;
        case ResponseScale::Neutral:
        case ResponseScale::No: return Polarity::Neutral;
        case ResponseScale::PositiveOrNeutral:
            return rule == OrNeutralCollapse::Polar ? Polarity::Positive : Polarity::Neutral;
        case ResponseScale::NegativeOrNeutral:
            return rule == OrNeutralCollapse::Polar ? Polarity::Negative : Polarity::Neutral;
    }
    return Polarity::Neutral;
}

double krippendorff_alpha_nominal(const std::vector<std::vector<int>>& units) {
    // Coincidence matrix o[c][k] = sum over units of pairs (c, k) / (m_u - 1).
    std::map<int, std::map<int, double>> o;
    bool pairable = false;
    for (const auto& u : units) {
        if (u.size() < 2) continue;
        pairable = true;
        const double w = 1.0 / static_cast<double>(u.size() - 1);
        for (std::size_t i = 0; i < u.size(); ++i)
            for (std::size_t j = 0; j < u.size(); ++j)
                if (i != j) o[u[i]][u[j]] += w;
    }
    if (!pairable) throw DomainError("Krippendorff alpha undefined: no unit has two or more values");

    std::map<int, double> n_c;
    double n = 0.0, disagree = 0.0;
    for (const auto& [c, row] : o)
        for (const auto& [k, v] : row) {
            n_c[c] += v;
            n += v;
            if (c != k) disagree += v;
        }
    if (disagree == 0.0) return 1.0;
    double expected = 0.0;
    for (const auto& [c, nc] : n_c)
        for (const auto& [k, nk] : n_c)
            if (c != k) expected += nc * nk;
    return 1.0 - (n - 1.0) * disagree / expected;
}

double krippendorff_alpha(std::span<const AnnotationRecord> records, OrNeutralCollapse rule) {
    std::map<AspectId, std::map<std::pair<std::string, int>, std::vector<int>>> by_aspect;
    for (const auto& r : records)
        by_aspect[r.aspect][{r.verb, r.sentence_id}].push_back(static_cast<int>(index_of(collapse_response(r.response, rule))));
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& [aspect, units] : by_aspect) {
        std::vector<std::vector<int>> coded;
        coded.reserve(units.size());
        for (const auto& [_, values] : units) coded.push_back(values);
        try {
            sum += krippendorff_alpha_nominal(coded);
            ++count;
        } catch (const DomainError&) {
        }
    }
    if (count == 0) throw DomainError("Krippendorff alpha undefined: no co-annotated items");
    return sum / static_cast<double>(count);
}

AgreementReport agreement_report(std::span<const AnnotationRecord> records, OrNeutralCollapse rule) {
    AgreementReport report;
    report.rule = rule;
    const auto labels = aggregate_all(records);
    double alpha_sum = 0.0;
    std::size_t alpha_count = 0;
    for (AspectId a : kAspects) {
        std::vector<AnnotationRecord> subset;
        for (const auto& r : records)
            if (r.aspect == a) subset.push_back(r);
        if (subset.empty()) continue;
        AspectAgreement row;
        row.aspect = a;
        const bool yes_no = std::all_of(subset.begin(), subset.end(), [](const AnnotationRecord& r) {
            return r.response == ResponseScale::Yes || r.response == ResponseScale::No;
        });
        try {
            row.strict = strict_agreement(subset);
            if (!yes_no) row.nc = nc_agreement(subset);
        } catch (const InputError&) {
        }
        try {
            row.alpha = krippendorff_alpha(subset, rule);
            alpha_sum += *row.alpha;
            ++alpha_count;
        } catch (const DomainError&) {
        }
        std::size_t pos = 0, neg = 0;
        for (const auto& l : labels) {
            if (l.aspect != a) continue;
            ++row.verbs;
            pos += l.label == Polarity::Positive;
            neg += l.label == Polarity::Negative;
        }
        if (row.verbs > 0) {
            row.percent_positive = 100.0 * static_cast<double>(pos) / static_cast<double>(row.verbs);
            row.percent_negative = 100.0 * static_cast<double>(neg) / static_cast<double>(row.verbs);
        }
        report.rows.push_back(row);
    }
    if (alpha_count > 0) report.mean_alpha = alpha_sum / static_cast<double>(alpha_count);
    return report;
}

void print_agreement(std::ostream& out, const AgreementReport& report) {
    out << "Aspect  Strict  NC      %+      %-      alpha   verbs\n";
    for (const auto& r : report.rows) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-7s %-7s %-7s %-7s %-7s %-7s %zu\n", std::string(aspect_name(r.aspect)).c_str(),
                      pct(r.strict, 1).c_str(), pct(r.nc, 1).c_str(), pct(r.percent_positive, 1).c_str(),
                      pct(r.percent_negative, 1).c_str(), pct(r.alpha, 3).c_str(), r.verbs);
        out << buf;
    }
    out << "mean alpha: " << pct(report.mean_alpha, 3) << '\n';
    out << "conventions: or-neutral responses agree with either side (strict); NC counts only +/- conflicts;"
        << " alpha is nominal over 3 classes with or-neutral collapsed to "
        << (report.rule == OrNeutralCollapse::Polar ? "its polar class" : "neutral")
        << "; scores pos 1, pos_or_neu 0.5, neu 0, neg_or_neu -0.5, neg -1, yes 1, no 0\n";
}

std::vector<AnnotationRecord> read_annotations(std::istream& in) {
    std::vector<AnnotationRecord> out;
    std::set<std::tuple<std::string, int, std::string, AspectId>> seen;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto fields = split_fields(body, ',');
        auto fail = [&](const std::string& why) {
            return FormatError("annotations line " + std::to_string(line_no) + ": " + why);
        };
        if (!header_seen) {
            header_seen = true;
            if (trim(fields[0]) == "verb") continue;
        }
        if (fields.size() != 5) throw fail("expected 5 comma-separated fields");
        AnnotationRecord r;
        r.verb = std::string(trim(fields[0]));
        const auto sid = trim(fields[1]);
        auto [ptr, ec] = std::from_chars(sid.data(), sid.data() + sid.size(), r.sentence_id);
        if (ec != std::errc() || ptr != sid.data() + sid.size() || r.sentence_id < 1)
            throw fail("bad sentence_id '" + std::string(sid) + "'");
        r.worker_id = std::string(trim(fields[2]));
        try {
            r.aspect = parse_aspect(trim(fields[3]));
            r.response = parse_response(trim(fields[4]));
        } catch (const FormatError& e) {
            throw fail(e.what());
        }
        if (r.verb.empty() || r.worker_id.empty()) throw fail("empty verb or worker id");
        if (!seen.emplace(r.verb, r.sentence_id, r.worker_id, r.aspect).second)
            throw fail("duplicate response for (" + r.verb + ", " + std::to_string(r.sentence_id) + ", " +
                       r.worker_id + ", " + std::string(aspect_name(r.aspect)) + ")");
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace cframe

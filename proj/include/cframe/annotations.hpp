#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cframe/types.hpp"

namespace cframe {

struct AnnotationRecord {
    std::string verb;
    int sentence_id = 1;  // 1..5, one generic sentence per task
    std::string worker_id;
    AspectId aspect = AspectId::P_wt;
    ResponseScale response = ResponseScale::Neutral;
};

// pos 1, pos_or_neu 0.5, neu 0, neg_or_neu -0.5, neg -1; yes 1, no 0.
double response_to_score(ResponseScale r) noexcept;

struct AggregatedLabel {
    std::string verb;
    AspectId aspect = AspectId::P_wt;
    double mean_score = 0.0;
    Polarity label = Polarity::Neutral;
    std::size_t n = 0;
};

// Mean score over the records of one (verb, aspect), labeled by the cutoffs.
AggregatedLabel aggregate(std::span<const AnnotationRecord> records);

// One label per (verb, aspect), sorted by verb then aspect.
std::vector<AggregatedLabel> aggregate_all(std::span<const AnnotationRecord> records);

// Frames with labels and mean scores; verbs lacking any aspect are dropped and counted.
std::vector<ConnotationFrame> aggregate_frames(std::span<const AnnotationRecord> records,
                                               std::size_t* incomplete = nullptr);

// Whether two responses agree when "or neutral" answers may match either side.
bool strictly_agree(ResponseScale a, ResponseScale b) noexcept;
// Whether two responses are in direct polar conflict (+ against -).
bool conflicts(ResponseScale a, ResponseScale b) noexcept;

// Pairwise percent agreement over all worker pairs annotating the same
// (verb, sentence, aspect). InputError when no such pair exists.
double strict_agreement(std::span<const AnnotationRecord> records);
double nc_agreement(std::span<const AnnotationRecord> records);

// How "or neutral" responses collapse to three classes for alpha.
enum class OrNeutralCollapse { Polar, Neutral };

Polarity collapse_response(ResponseScale r, OrNeutralCollapse rule) noexcept;

// Nominal Krippendorff alpha over coded units; values are class indices and
// units with fewer than two values are ignored. DomainError without pairable units.
double krippendorff_alpha_nominal(const std::vector<std::vector<int>>& units);

// Alpha per aspect (units = (verb, sentence)), averaged over the aspects present.
double krippendorff_alpha(std::span<const AnnotationRecord> records,
                          OrNeutralCollapse rule = OrNeutralCollapse::Polar);

struct AspectAgreement {
    AspectId aspect = AspectId::P_wt;
    std::optional<double> strict;
    std::optional<double> nc;  // absent for yes/no questions
    std::optional<double> alpha;
    double percent_positive = 0.0;  // of aggregated labels
    double percent_negative = 0.0;
    std::size_t verbs = 0;
};

struct AgreementReport {
    std::vector<AspectAgreement> rows;
    std::optional<double> mean_alpha;
    OrNeutralCollapse rule = OrNeutralCollapse::Polar;
};

AgreementReport agreement_report(std::span<const AnnotationRecord> records,
                                 OrNeutralCollapse rule = OrNeutralCollapse::Polar);
void print_agreement(std::ostream& out, const AgreementReport& report);

// CSV with header "verb,sentence_id,worker_id,aspect,response". FormatError on
// malformed rows or on a repeated (verb, sentence, worker, aspect).
std::vector<AnnotationRecord> read_annotations(std::istream& in);

}  // namespace cframe

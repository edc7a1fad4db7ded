#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cframe/types.hpp"

namespace cframe {

struct SplitSizes {
    std::size_t train = 0;
    std::size_t dev = 0;
    std::size_t test = 0;
};

struct Split {
    std::vector<std::string> train;
    std::vector<std::string> dev;
    std::vector<std::string> test;
};

// Seeded shuffle then partition. Without explicit sizes: 300/300/300 when at
// least 900 items are given, otherwise equal thirds (remainder dropped).
Split split(std::vector<std::string> items, std::uint64_t seed,
            std::optional<SplitSizes> sizes = std::nullopt);

// Percentages in [0, 100].
double accuracy(std::span<const Polarity> gold, std::span<const Polarity> pred);

// Unweighted mean of per-class F1 over exactly {-, =, +}. A class with no gold
// and no predicted instances contributes 0.
double macro_f1(std::span<const Polarity> gold, std::span<const Polarity> pred);

struct AspectScores {
    double accuracy = 0.0;
    double macro_f1 = 0.0;
};

struct EvalReport {
    std::vector<AspectId> aspects;            // canonical order, subset allowed
    std::vector<AspectScores> per_aspect;     // parallel to aspects
    AspectScores overall;                     // unweighted mean over per_aspect
    std::size_t verbs = 0;
};

// Frames are matched by verb. InputError listing differences when the verb sets differ.
EvalReport evaluate(std::span<const ConnotationFrame> gold, std::span<const ConnotationFrame> pred,
                    std::span<const AspectId> aspects = kAspects);

void print_report(std::ostream& out, const EvalReport& report, std::string_view system = "system");
void write_report_csv(std::ostream& out, const EvalReport& report);

}  // namespace cframe

#pragma once

#include "confl/procs.hpp"

namespace confl {

struct ReportRow {
    std::string problem;
    Answer answer = Answer::Maybe;
    long millis = 0;
    std::string strategy;
};

struct RunReport {
    std::vector<ReportRow> rows;

    std::size_t yes_count() const;
    std::size_t no_count() const;
    std::size_t maybe_count() const;
    std::size_t solved() const { return yes_count() + no_count(); }
};

/// Fixed-width result table followed by yes/no/solved summary lines.
std::string format_report(const RunReport& report);

std::string report_to_jsonl(const RunReport& report);

}  // namespace confl

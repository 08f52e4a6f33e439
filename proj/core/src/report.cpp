#include "confl/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace confl {

std::size_t RunReport::yes_count() const {
    return static_cast<std::size_t>(std::count_if(
        rows.begin(), rows.end(), [](const ReportRow& r) { return r.answer == Answer::Yes; }));
}

std::size_t RunReport::no_count() const {
    return static_cast<std::size_t>(std::count_if(
        rows.begin(), rows.end(), [](const ReportRow& r) { return r.answer == Answer::No; }));
}

std::size_t RunReport::maybe_count() const {
    return rows.size() - yes_count() - no_count();
}

std::string format_report(const RunReport& report) {
    std::size_t width = 7;
    for (const ReportRow& r : report.rows) width = std::max(width, r.problem.size());
    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(width + 2)) << "problem" << std::setw(7)
        << "answer" << std::right << std::setw(8) << "millis"
        << "  strategy\n";
    for (const ReportRow& r : report.rows) {
        out << std::left << std::setw(static_cast<int>(width + 2)) << r.problem << std::setw(7)
            << to_string(r.answer) << std::right << std::setw(8) << r.millis << "  " << r.strategy
            << "\n";
    }
    out << "\n";
    out << "yes    " << report.yes_count() << "\n";
    out << "no     " << report.no_count() << "\n";
    out << "solved " << report.solved() << " / " << report.rows.size() << "\n";
    return out.str();
}

std::string report_to_jsonl(const RunReport& report) {
    std::string out;
    for (const ReportRow& r : report.rows) {
        nlohmann::json row{{"problem", r.problem},
                           {"answer", to_string(r.answer)},
                           {"millis", r.millis},
                           {"strategy", r.strategy}};
        out += row.dump();
        out += '\n';
    }
    return out;
}

}  // namespace confl

#include "bihamo/report.hpp"

#include <ostream>
#include <stdexcept>

namespace bihamo {

void Report::emit(std::ostream& out, ReportFormat fmt) const {
    if (fmt == ReportFormat::Tsv) {
        for (const auto& [name, value] : scalars_) out << name << '\t' << value << '\n';
        for (const auto& row : rows_) {
            for (size_t i = 0; i < row.size(); ++i) out << (i ? "\t" : "") << row[i];
            out << '\n';
        }
        return;
    }
    out << "bihamo-report/1\n";
    out << "command: " << command_ << '\n';
    for (const auto& [name, value] : scalars_) out << name << ": " << value << '\n';
    if (!columns_.empty()) {
        out << "columns:";
        for (const auto& c : columns_) out << '\t' << c;
        out << '\n';
    }
    for (const auto& row : rows_) {
        out << "row:";
        for (const auto& cell : row) out << '\t' << cell;
        out << '\n';
    }
    out << "end\n";
}

ReportFormat parse_report_format(const std::string& name) {
    if (name == "tsv") return ReportFormat::Tsv;
    if (name == "structured") return ReportFormat::Structured;
    throw std::invalid_argument("unknown report format: " + name);
}

}  // namespace bihamo

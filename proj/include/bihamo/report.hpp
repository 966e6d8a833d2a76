#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace bihamo {

enum class ReportFormat { Tsv, Structured };

// Command output in one of two wire formats.  TSV is bare data: one
// `name<TAB>value` line per scalar, then one line per table row with cells
// tab-separated and no header.  The structured format is versioned and
// self-describing:
//   bihamo-report/1
//   command: <name>
//   <scalar>: <value>
//   columns:<TAB>c1<TAB>c2
//   row:<TAB>v1<TAB>v2
//   end
// Scalars keep insertion order and precede the table in both formats.
class Report {
  public:
    explicit Report(std::string command) : command_(std::move(command)) {}

    void scalar(std::string name, std::string value) {
        scalars_.emplace_back(std::move(name), std::move(value));
    }
    void scalar(std::string name, bool value) {
        scalar(std::move(name), std::string(value ? "true" : "false"));
    }
    void scalar(std::string name, long long value) {
        scalar(std::move(name), std::to_string(value));
    }

    void columns(std::vector<std::string> names) { columns_ = std::move(names); }
    void add_row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

    void emit(std::ostream& out, ReportFormat fmt) const;

  private:
    std::string command_;
    std::vector<std::pair<std::string, std::string>> scalars_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

// "tsv" or "structured"
ReportFormat parse_report_format(const std::string& name);

}  // namespace bihamo

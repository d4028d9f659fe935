#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace beurlab {

enum class ReportVerdict { pass, fail, undecided, aborted };

const char* report_verdict_name(ReportVerdict v);

using Cell = std::variant<double, long long, bool, std::string>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    /// Throws BadParamError when the row width differs from the header.
    void add_row(std::vector<Cell> row);
};

struct ExperimentReport {
    std::string command;
    std::map<std::string, std::string> config;
    std::uint64_t seed = 0;
    std::vector<Table> tables;
    std::map<std::string, Cell> summary;
    ReportVerdict verdict = ReportVerdict::undecided;
    std::string error_kind;
    std::string error_message;
    double runtime_ms = 0.0;

    Table& add_table(std::string name, std::vector<std::string> columns);
    const Table* find_table(const std::string& name) const;
};

inline constexpr const char* kSchemaVersion = "1";

enum class ReportFormat { csv, json };

ReportFormat parse_report_format(const std::string& name);

struct EmitOptions {
    bool include_timing = true;
    /// CSV only: table to write; empty selects the first table.
    std::string table;
};

std::string emit_json(const ExperimentReport& report, const EmitOptions& opts = {});
/// Header row then data rows; RFC 4180 quoting, LF endings, 17 significant
/// digits.
std::string emit_csv(const ExperimentReport& report, const EmitOptions& opts = {});
std::string emit_report(const ExperimentReport& report, ReportFormat format, const EmitOptions& opts = {});
/// Throws IoError when the file cannot be written.
void write_report(const std::string& path, const std::string& body);

/// 0 pass, 1 fail, 3 aborted, 4 undecided.
int exit_code(const ExperimentReport& report);

}  // namespace beurlab

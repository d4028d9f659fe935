#include "beurlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "beurlab/errors.hpp"

namespace beurlab {

namespace {

std::string number_text(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string cell_text(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return number_text(*d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
    return std::get<std::string>(c);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

nlohmann::json cell_json(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) {
        if (std::isfinite(*d)) return *d;
        return number_text(*d);
    }
    if (const auto* i = std::get_if<long long>(&c)) return *i;
    if (const auto* b = std::get_if<bool>(&c)) return *b;
    return std::get<std::string>(c);
}

const Table* csv_table(const ExperimentReport& r, const EmitOptions& opts) {
    if (!opts.table.empty()) {
        const Table* t = r.find_table(opts.table);
        if (!t) throw BadParamError("report has no table '" + opts.table + "'");
        return t;
    }
    if (r.verdict == ReportVerdict::aborted)
        if (const Table* t = r.find_table("error")) return t;
    return r.tables.empty() ? nullptr : &r.tables.front();
}

}  // namespace

const char* report_verdict_name(ReportVerdict v) {
    switch (v) {
        case ReportVerdict::pass: return "pass";
        case ReportVerdict::fail: return "fail";
        case ReportVerdict::undecided: return "undecided";
        case ReportVerdict::aborted: return "aborted";
    }
    return "undecided";
}

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size())
        throw BadParamError("table '" + name + "' expects " + std::to_string(columns.size()) + " cells, got " +
                            std::to_string(row.size()));
    rows.push_back(std::move(row));
}

Table& ExperimentReport::add_table(std::string name, std::vector<std::string> columns) {
    tables.push_back(Table{std::move(name), std::move(columns), {}});
    return tables.back();
}

const Table* ExperimentReport::find_table(const std::string& name) const {
    for (const auto& t : tables)
        if (t.name == name) return &t;
    return nullptr;
}

ReportFormat parse_report_format(const std::string& name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "json") return ReportFormat::json;
    throw ConfigError("unknown format '" + name + "' (expected csv or json)");
}

std::string emit_json(const ExperimentReport& r, const EmitOptions& opts) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = r.command;
    j["seed"] = r.seed;
    j["config"] = r.config;
    j["verdict"] = report_verdict_name(r.verdict);
    if (r.error_kind.empty())
        j["error"] = nullptr;
    else
        j["error"] = {{"kind", r.error_kind}, {"message", r.error_message}};
    j["summary"] = nlohmann::json::object();
    for (const auto& [k, v] : r.summary) j["summary"][k] = cell_json(v);
    j["tables"] = nlohmann::json::array();
    for (const auto& t : r.tables) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : t.rows) {
            nlohmann::json jr = nlohmann::json::array();
            for (const auto& c : row) jr.push_back(cell_json(c));
            rows.push_back(std::move(jr));
        }
        j["tables"].push_back({{"name", t.name}, {"columns", t.columns}, {"rows", std::move(rows)}});
    }
    if (opts.include_timing) j["timing"] = {{"runtime_ms", r.runtime_ms}};
    return j.dump(2) + "\n";
}

std::string emit_csv(const ExperimentReport& r, const EmitOptions& opts) {
    const Table* t = csv_table(r, opts);
    std::string out;
    if (!t) return out;
    for (std::size_t i = 0; i < t->columns.size(); ++i) {
        if (i) out += ',';
        out += csv_field(t->columns[i]);
    }
    out += '\n';
    for (const auto& row : t->rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_field(cell_text(row[i]));
        }
        out += '\n';
    }
    return out;
}

std::string emit_report(const ExperimentReport& r, ReportFormat format, const EmitOptions& opts) {
    return format == ReportFormat::csv ? emit_csv(r, opts) : emit_json(r, opts);
}

void write_report(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << body;
    if (!out) throw IoError("write to '" + path + "' failed");
}

int exit_code(const ExperimentReport& r) {
    switch (r.verdict) {
        case ReportVerdict::pass: return 0;
        case ReportVerdict::fail: return 1;
        case ReportVerdict::aborted: return 3;
        case ReportVerdict::undecided: return 4;
    }
    return 4;
}

}  // namespace beurlab

#pragma once

// Report assembly and serialization: report.json carries the full structured
// record, rates.csv the plot-ready per-n table.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace sanovlab {

struct ReportRow {
    std::int64_t n = 0;
    double value = 0.0;    // the probability / quantity this row measures
    double exponent = 0.0; // its per-n log2 rate (nats for the singular-value table)
    double bound = 0.0;    // the theoretical bound it is checked against
    bool pass = false;
    nlohmann::json extra;  // named per-row fields
};

struct ExperimentReport {
    std::string schema_id = "sanovlab-report-v1";
    nlohmann::json config_echo;
    std::vector<ReportRow> rows;
    nlohmann::json checks = nlohmann::json::array(); // every inequality with its bound
    nlohmann::json summary;
    bool all_pass = true;

    void add_check(const std::string& name, std::int64_t n, double lhs, double rhs, bool pass);
};

// JSON-safe number: infinities become the strings "inf"/"-inf".
nlohmann::json json_number(double x);

nlohmann::json report_to_json(const ExperimentReport& report);
std::string rates_csv(const ExperimentReport& report);

// Writes report.json and rates.csv into out_dir (created if missing).
void write_report_files(const ExperimentReport& report, const std::string& out_dir);

} // namespace sanovlab

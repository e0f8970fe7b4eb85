#include "sanovlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace sanovlab {

namespace {

std::string format_double(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace

void ExperimentReport::add_check(const std::string& name, std::int64_t n, double lhs, double rhs,
                                 bool pass_flag) {
    checks.push_back({{"check", name},
                      {"n", n},
                      {"lhs", json_number(lhs)},
                      {"bound", json_number(rhs)},
                      {"pass", pass_flag}});
    if (!pass_flag) all_pass = false;
}

nlohmann::json json_number(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    return x;
}

nlohmann::json report_to_json(const ExperimentReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        nlohmann::json r{{"n", row.n},
                         {"value", json_number(row.value)},
                         {"exponent", json_number(row.exponent)},
                         {"bound", json_number(row.bound)},
                         {"pass", row.pass}};
        if (!row.extra.is_null()) r["extra"] = row.extra;
        rows.push_back(std::move(r));
    }
    return nlohmann::json{{"schema", report.schema_id},
                          {"config", report.config_echo},
                          {"rows", rows},
                          {"checks", report.checks},
                          {"summary", report.summary},
                          {"all_pass", report.all_pass}};
}

std::string rates_csv(const ExperimentReport& report) {
    std::string out = "n,value,exponent,bound,pass\n";
    for (const auto& row : report.rows) {
        out += std::to_string(row.n);
        out += ',';
        out += format_double(row.value);
        out += ',';
        out += format_double(row.exponent);
        out += ',';
        out += format_double(row.bound);
        out += ',';
        out += row.pass ? '1' : '0';
        out += '\n';
    }
    return out;
}

void write_report_files(const ExperimentReport& report, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream f(out_dir + "/report.json");
        if (!f) throw std::runtime_error("cannot write " + out_dir + "/report.json");
        f << report_to_json(report).dump(2) << '\n';
    }
    {
        std::ofstream f(out_dir + "/rates.csv");
        if (!f) throw std::runtime_error("cannot write " + out_dir + "/rates.csv");
        f << rates_csv(report);
    }
}

} // namespace sanovlab

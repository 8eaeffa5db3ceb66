#pragma once

#include "fbm/core/errors.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace fbm {

inline constexpr const char* code_version = "0.1.0";

// 64-bit FNV-1a, hex encoded.
inline std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4)
        out[i] = digits[h & 0xf];
    return out;
}

struct Provenance {
    std::string config_hash;
    std::string code_version = fbm::code_version;
};

//
// Result of one experiment: a metric table (first column is t), scalar
// summaries, and pass/fail verdicts computed from those numbers.
//
struct ExperimentReport {
    std::string id;
    nlohmann::json parameters = nlohmann::json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, double> scalars;
    std::map<std::string, bool> verdicts;
    std::vector<std::string> notes;
    Provenance provenance;

    void add_row(std::vector<double> row) {
        if (row.size() != columns.size())
            throw dimension_error("report: row width does not match columns");
        rows.push_back(std::move(row));
    }

    bool passed() const {
        for (const auto& [name, ok] : verdicts)
            if (!ok)
                return false;
        return true;
    }

    bool metrics_finite() const {
        for (const auto& r : rows)
            for (double v : r)
                if (!std::isfinite(v))
                    return false;
        for (const auto& [name, v] : scalars)
            if (!std::isfinite(v))
                return false;
        return true;
    }
};

inline nlohmann::json to_json(const ExperimentReport& r) {
    nlohmann::json j;
    j["experiment"] = r.id;
    j["parameters"] = r.parameters;
    j["scalars"] = r.scalars;
    j["verdicts"] = r.verdicts;
    j["passed"] = r.passed();
    j["notes"] = r.notes;
    j["provenance"] = {{"config_hash", r.provenance.config_hash}, {"code_version", r.provenance.code_version}};
    j["metrics"] = {{"columns", r.columns}, {"rows", r.rows.size()}};
    return j;
}

inline void write_metrics_csv(std::ostream& os, const ExperimentReport& r) {
    for (std::size_t c = 0; c < r.columns.size(); ++c)
        os << (c ? "," : "") << r.columns[c];
    os << '\n';
    os.precision(17);
    for (const auto& row : r.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            os << (c ? "," : "") << row[c];
        os << '\n';
    }
}

// Writes report.json and metrics.csv into `dir` (created if needed).
inline void write_report(const std::filesystem::path& dir, const ExperimentReport& r) {
    std::filesystem::create_directories(dir);
    std::ofstream js(dir / "report.json");
    js << to_json(r).dump(2) << '\n';
    std::ofstream csv(dir / "metrics.csv");
    write_metrics_csv(csv, r);
    if (!js || !csv)
        throw error("report: cannot write to " + dir.string());
}

} // namespace fbm

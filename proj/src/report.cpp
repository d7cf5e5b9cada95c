#include "fsk/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

extern "C" char* openblas_get_config(void);

namespace fsk {

namespace {

// %.12e: 13 significant digits, fixed width, locale-independent
std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

// CSV fields contain no quotes by construction; commas would break the
// fixed header contract, so reject them instead of quoting
void check_field(const std::string& s) {
    if (s.find(',') != std::string::npos || s.find('"') != std::string::npos ||
        s.find('\n') != std::string::npos)
        throw std::invalid_argument("report field must not contain ',', '\"', or newline: " + s);
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

// JSON numbers must stay finite; infinities appear in slope targets
std::string json_num(double v) {
    if (std::isnan(v)) return "\"nan\"";
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    return num(v);
}

} // namespace

void ExperimentResult::finalize() {
    pass = true;
    for (const auto& row : rows)
        if (!row.skipped() && !row.passed()) pass = false;
}

void write_rows_csv(std::ostream& os, const std::vector<VerificationRow>& rows) {
    os << "experiment,params,lhs,rhs,ratio,status\n";
    for (const auto& row : rows) {
        check_field(row.experiment);
        check_field(row.params);
        check_field(row.status);
        os << row.experiment << ',' << row.params << ',' << num(row.lhs) << ','
           << num(row.rhs) << ',' << num(row.ratio) << ',' << row.status << '\n';
    }
}

void write_summary_json(std::ostream& os, const ExperimentResult& result, std::uint64_t seed) {
    int passed = 0, failed = 0, skipped = 0;
    for (const auto& row : result.rows) {
        if (row.skipped())
            ++skipped;
        else if (row.passed())
            ++passed;
        else
            ++failed;
    }
    os << "{\n";
    os << "  \"experiment\": \"" << json_escape(result.id) << "\",\n";
    os << "  \"seed\": " << seed << ",\n";
    os << "  \"rows\": " << result.rows.size() << ",\n";
    os << "  \"passed\": " << passed << ",\n";
    os << "  \"failed\": " << failed << ",\n";
    os << "  \"skipped\": " << skipped << ",\n";
    os << "  \"pass\": " << (result.pass ? "true" : "false") << ",\n";
    os << "  \"fitted\": {";
    for (std::size_t i = 0; i < result.fitted.size(); ++i) {
        if (i) os << ',';
        os << "\n    \"" << json_escape(result.fitted[i].first)
           << "\": " << json_num(result.fitted[i].second);
    }
    os << (result.fitted.empty() ? "" : "\n  ") << "},\n";
    os << "  \"environment\": \"" << json_escape(environment_fingerprint()) << "\"\n";
    os << "}\n";
}

void emit_report(const ExperimentResult& result, const std::string& outdir, std::uint64_t seed) {
    std::filesystem::create_directories(outdir);
    const std::filesystem::path base(outdir);
    {
        std::ofstream csv(base / (result.id + ".csv"), std::ios::binary);
        if (!csv) throw std::runtime_error("cannot write report CSV under " + outdir);
        write_rows_csv(csv, result.rows);
    }
    {
        std::ofstream json(base / (result.id + "_summary.json"), std::ios::binary);
        if (!json) throw std::runtime_error("cannot write report JSON under " + outdir);
        write_summary_json(json, result, seed);
    }
}

std::string environment_fingerprint() {
    std::string out = "gcc ";
#ifdef __VERSION__
    out += __VERSION__;
#else
    out += "unknown";
#endif
    out += "; ";
    out += openblas_get_config();
    return out;
}

} // namespace fsk
